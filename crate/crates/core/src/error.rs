use thiserror::Error;

/// Errors raised by the interpreter, the checkers and the front-ends.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("substituted value is not closed: free variables {0:?}")]
    OpenValue(Vec<String>),
    #[error("invalid decomposition: {0}")]
    Decomposition(String),
    #[error("term is not reducible")]
    NotReducible,
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("out of fuel after {0} steps")]
    OutOfFuel(usize),
    #[error("stuck: {0}")]
    Stuck(String),
    #[error("no derivation: {0}")]
    NoDerivation(String),
    #[error("invalid derivation at {path:?}: {msg}")]
    InvalidDerivation { path: Vec<usize>, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("adequacy violation at step {step}: {msg}")]
    AdequacyViolation { step: usize, msg: String },
    #[error("not in normal form: {0}")]
    NotNormal(String),
    #[error("outside the basis: {0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Interpreter and realizability checker for a linear-algebraic lambda
//! calculus whose values live on the unit sphere, plus a quantum front-end
//! that compiles into it.
//!
//! The crate is organised bottom-up:
//!
//! * [`syntax`]: scalars, terms, distributions, canonical forms, substitution,
//!   parsing and printing.
//! * [`eval`]: the one-step reduction relation and normalisation.
//! * [`semantics`]: types, inner products, realizability and unitarity checks.
//! * [`typing`]: typing derivations, inference, orthogonality and semantic
//!   validation of judgments.
//! * [`lambdaq`]: a small quantum lambda calculus, its machine and its
//!   translation.
//! * [`prelude`]: named terms used by the command-line tool and the tests.

pub mod config;
pub mod error;
pub mod eval;
pub mod lambdaq;
pub mod prelude;
pub mod semantics;
pub mod syntax;
pub mod typing;

pub use error::{Error, Result};
pub use eval::{normalize, one_step, EvalOutcome};
pub use semantics::{Type, Verdict};
pub use syntax::{
    canonicalize, CanonicalDistribution, PureTerm, PureValue, RawDistribution, Scalar,
};

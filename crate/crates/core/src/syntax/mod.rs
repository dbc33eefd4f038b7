//! Terms, distributions and their canonical forms.

pub mod canonical;
pub mod lexer;
pub mod parse;
pub mod print;
pub mod scalar;
pub mod subst;
pub mod term;

pub use canonical::{canonicalize, CanonicalDistribution};
pub use parse::{church, parse_scalar, parse_term, parse_term_with, Definitions, NoDefinitions};
pub use print::{pretty, pretty_term, pretty_value, Style};
pub use scalar::{default_eps, Scalar, DEFAULT_EPS};
pub use subst::{bilinear_subst, parallel_bilinear_subst, pure_subst};
pub use term::{fresh_name, Name, PureTerm, PureValue, RawDistribution, Var};

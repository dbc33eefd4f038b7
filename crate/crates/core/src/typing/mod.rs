//! Typing judgments, derivations for the syntactic rules, and semantic
//! checks of judgments on the finite-data fragment.

pub mod context;
pub mod derivation;
pub mod infer;
pub mod judgment;
mod reconstruct;
pub mod semantic;

pub use context::{strict_domain, Context};
pub use derivation::{check_derivation, Derivation, Premise, Rule};
pub use infer::infer;
pub use judgment::{parse_judgment, parse_orthogonality, OrthogonalityJudgment, TypingJudgment};
pub use semantic::{check_orthogonality, orthogonal_outputs, shape, validate_semantically, Shape};

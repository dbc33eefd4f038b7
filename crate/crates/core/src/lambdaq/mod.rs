//! λ_Q: a first-order quantum lambda calculus with a QRAM machine and a
//! translation into distributions.

pub mod adequacy;
pub mod gates;
pub mod machine;
pub mod parse;
pub mod program;
pub mod state;
pub mod term;
pub mod translate;
pub mod typecheck;
pub mod types;

pub use adequacy::{adequacy_check, adequacy_check_with, AdequacyReport};
pub use gates::{is_unitary, GateTable, Matrix2};
pub use machine::{run, run_checked, step, StepRule};
pub use parse::parse_qterm;
pub use program::Program;
pub use state::QuantumState;
pub use term::{Polarity, QTerm};
pub use translate::{gate_term, translate_program, translate_term};
pub use typecheck::{check_type, typecheck_classical, typecheck_quantum, TypeCtx};
pub use types::{parse_qtype, translate_type, QType};

//! Types, inner products, realizability and unitarity checks.

pub mod inner;
pub mod member;
pub mod subtype;
pub mod types;
pub mod unitary;

pub use inner::{boolean_projection, comb_normalize, inner_product, norm};
pub use member::{member_value, probe_vectors, realizes};
pub use subtype::{normalize_type, subtype, type_equiv};
pub use types::{basis_of_type, is_pure_type, parse_type, Type};
pub use unitary::{check_unitary_endo, ArrowKind, UnitaryReport, UnitaryVerdict};

/// Outcome of a semantic decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unsupported,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    /// Conjunction: any `No` wins, then any `Unsupported`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Unsupported, _) | (_, Verdict::Unsupported) => Verdict::Unsupported,
            _ => Verdict::Yes,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unsupported => "unsupported",
        }
    }

    /// Process exit status: 0 yes, 1 no, 2 unsupported.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Unsupported => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

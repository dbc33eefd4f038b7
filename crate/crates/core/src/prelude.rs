//! Named terms available to the parser, the CLI and the tests.

use crate::syntax::{church, parse_term, Definitions, RawDistribution};

/// Source text of each named term. All of them are closed.
pub const ENTRIES: &[(&str, &str)] = &[
    ("H", "lam x. if x then (1/sqrt(2) * tt + 1/sqrt(2) * ff) else (1/sqrt(2) * tt - 1/sqrt(2) * ff)"),
    ("I", "lam x. x"),
    ("K_tt", "lam x. tt"),
    ("K_ff", "lam x. ff"),
    ("N", "lam x. if x then ff else tt"),
    ("F", "3/5 * (lam x. 5/6 * x) + 4/5 * (lam x. 5/8 * x)"),
    ("|+>", "1/sqrt(2) * tt + 1/sqrt(2) * ff"),
    ("|->", "1/sqrt(2) * tt - 1/sqrt(2) * ff"),
    // applies f when the control is tt
    ("ctl", "lam f. lam z. let (x, y) = z in match x { inl z1 -> (inl z1, f y) | inr z2 -> (inr z2, y) }"),
    // applies f when the control is ff
    ("ctl1", "lam f. lam z. let (x, y) = z in match x { inl z1 -> (inl z1, y) | inr z2 -> (inr z2, f y) }"),
];

/// The standard definitions, plus `church n`.
pub struct Prelude;

impl Prelude {
    pub fn names() -> impl Iterator<Item = &'static str> {
        ENTRIES.iter().map(|(n, _)| *n)
    }

    pub fn source(name: &str) -> Option<&'static str> {
        ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }
}

impl Definitions for Prelude {
    fn lookup(&self, name: &str) -> Option<RawDistribution> {
        Prelude::source(name).map(|s| parse_term(s).expect("prelude entries parse"))
    }

    fn lookup_indexed(&self, name: &str, n: usize) -> Option<RawDistribution> {
        (name == "church").then(|| church(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{pretty, Style};

    #[test]
    fn entries_round_trip() {
        for name in Prelude::names() {
            let d = Prelude.lookup(name).unwrap();
            assert!(d.is_closed(), "{name}");
            let back = parse_term(&pretty(&d, Style::Exact)).unwrap();
            assert_eq!(back, d, "{name}");
        }
    }
}

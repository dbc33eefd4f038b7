use super::print::{pretty_term, Style};
use super::scalar::Scalar;
use super::term::{PureTerm, PureValue, RawDistribution};
use std::collections::BTreeMap;
use std::fmt;

/// A distribution in canonical form: α-distinct pure terms in a fixed
/// structural order, each with its coefficient.
///
/// Zero coefficients are kept (`0·t` is not the zero vector); the empty
/// list is the zero vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CanonicalDistribution {
    terms: Vec<(Scalar, PureTerm)>,
}

/// Computes the canonical form of a raw distribution.
pub fn canonicalize(d: &RawDistribution) -> CanonicalDistribution {
    let mut acc = BTreeMap::new();
    collect(d, Scalar::ONE, &mut acc);
    CanonicalDistribution::from_map(acc)
}

pub(crate) fn collect(d: &RawDistribution, c: Scalar, acc: &mut BTreeMap<PureTerm, Scalar>) {
    match d {
        RawDistribution::Zero => {}
        RawDistribution::Single(t) => *acc.entry(t.clone()).or_insert(Scalar::ZERO) += c,
        RawDistribution::Sum(a, b) => {
            collect(a, c, acc);
            collect(b, c, acc)
        }
        RawDistribution::Scale(k, a) => collect(a, c * *k, acc),
    }
}

impl CanonicalDistribution {
    pub fn zero() -> CanonicalDistribution {
        CanonicalDistribution { terms: Vec::new() }
    }

    pub fn single(t: PureTerm) -> CanonicalDistribution {
        CanonicalDistribution { terms: vec![(Scalar::ONE, t)] }
    }

    pub fn value(v: PureValue) -> CanonicalDistribution {
        CanonicalDistribution::single(PureTerm::Val(v))
    }

    pub(crate) fn from_map(acc: BTreeMap<PureTerm, Scalar>) -> CanonicalDistribution {
        CanonicalDistribution { terms: acc.into_iter().map(|(t, c)| (c, t)).collect() }
    }

    /// Canonical form of `Σ cᵢ·tᵢ`; equal terms are merged by adding coefficients.
    pub fn from_pairs(items: impl IntoIterator<Item = (Scalar, PureTerm)>) -> CanonicalDistribution {
        let mut acc = BTreeMap::new();
        for (c, t) in items {
            *acc.entry(t).or_insert(Scalar::ZERO) += c;
        }
        CanonicalDistribution::from_map(acc)
    }

    pub fn terms(&self) -> &[(Scalar, PureTerm)] {
        &self.terms
    }

    pub(crate) fn into_map(self) -> BTreeMap<PureTerm, Scalar> {
        self.terms.into_iter().map(|(c, t)| (t, c)).collect()
    }

    pub fn into_terms(self) -> Vec<(Scalar, PureTerm)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero vector (no summands at all).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Support of the distribution, zero-coefficient summands included.
    pub fn domain(&self) -> Vec<&PureTerm> {
        self.terms.iter().map(|(_, t)| t).collect()
    }

    pub fn coefficient(&self, t: &PureTerm) -> Option<Scalar> {
        self.terms
            .binary_search_by(|(_, s)| s.cmp(t))
            .ok()
            .map(|i| self.terms[i].0)
    }

    pub fn contains(&self, t: &PureTerm) -> bool {
        self.coefficient(t).is_some()
    }

    /// Sum of the coefficients.
    pub fn weight(&self) -> Scalar {
        self.terms.iter().fold(Scalar::ZERO, |a, (c, _)| a + *c)
    }

    pub fn scale(&self, k: Scalar) -> CanonicalDistribution {
        CanonicalDistribution { terms: self.terms.iter().map(|(c, t)| (k * *c, t.clone())).collect() }
    }

    pub fn add(&self, other: &CanonicalDistribution) -> CanonicalDistribution {
        CanonicalDistribution::from_pairs(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn to_raw(&self) -> RawDistribution {
        RawDistribution::linear_combination(self.terms.iter().cloned())
    }

    pub fn is_value_distribution(&self) -> bool {
        self.terms.iter().all(|(_, t)| t.is_value())
    }

    /// Summands as values, if every summand is one.
    pub fn values(&self) -> Option<Vec<(Scalar, &PureValue)>> {
        self.terms.iter().map(|(c, t)| t.as_value().map(|v| (*c, v))).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.terms.iter().all(|(_, t)| t.is_closed())
    }

    /// Same support and coefficients within `eps`.
    pub fn approx_eq(&self, other: &CanonicalDistribution, eps: f64) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((a, s), (b, t))| s == t && a.approx_eq(*b, eps))
    }

    /// Coefficients agree within `eps` on the union of supports, missing
    /// summands counting as zero.
    pub fn approx_eq_as_vectors(&self, other: &CanonicalDistribution, eps: f64) -> bool {
        let diff = self.add(&other.scale(-Scalar::ONE));
        diff.terms.iter().all(|(c, _)| c.abs() <= eps)
    }

    /// `[{re, im, term}]` records, one per summand.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(c, t)| serde_json::json!({"re": c.re(), "im": c.im(), "term": pretty_term(t, Style::Exact)}))
                .collect(),
        )
    }

    /// Printed with 8 significant digits, e.g. `0.70710678·tt + 0.70710678·ff`.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "zero".into();
        }
        self.terms
            .iter()
            .map(|(c, t)| format!("{}·{}", c.display(), pretty_term(t, Style::Display)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for CanonicalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

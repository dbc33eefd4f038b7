use crate::error::{Error, Result};
use crate::syntax::{CanonicalDistribution, PureValue, Scalar};

fn ensure_closed(v: &CanonicalDistribution) -> Result<()> {
    let mut free: Vec<String> = v.terms().iter().flat_map(|(_, t)| t.free_vars()).collect();
    if free.is_empty() {
        Ok(())
    } else {
        free.sort();
        free.dedup();
        Err(Error::OpenValue(free))
    }
}

/// `⟨v, w⟩ = Σ conj(αᵢ)·βⱼ·δ(vᵢ, wⱼ)`, conjugate-linear on the left.
pub fn inner_product(v: &CanonicalDistribution, w: &CanonicalDistribution) -> Result<Scalar> {
    ensure_closed(v)?;
    ensure_closed(w)?;
    Ok(inner_unchecked(v, w))
}

pub(crate) fn inner_unchecked(v: &CanonicalDistribution, w: &CanonicalDistribution) -> Scalar {
    // both supports are sorted, so a merge walk finds the common terms
    let (a, b) = (v.terms(), w.terms());
    let (mut i, mut j) = (0, 0);
    let mut acc = Scalar::ZERO;
    while i < a.len() && j < b.len() {
        match a[i].1.cmp(&b[j].1) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].0.conj() * b[j].0;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// `‖v‖ = √⟨v, v⟩`.
pub fn norm(v: &CanonicalDistribution) -> Result<f64> {
    ensure_closed(v)?;
    Ok(norm_unchecked(v))
}

pub(crate) fn norm_unchecked(v: &CanonicalDistribution) -> f64 {
    v.terms().iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Coefficients of `v` over `basis`, zero where absent.
pub fn boolean_projection(v: &CanonicalDistribution, basis: &[PureValue]) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::ZERO; basis.len()];
    for (c, t) in v.terms() {
        let slot = t
            .as_value()
            .and_then(|x| basis.iter().position(|b| b == x))
            .ok_or_else(|| Error::Domain(crate::syntax::pretty_term(t, crate::syntax::Style::Display)))?;
        out[slot] = *c;
    }
    Ok(out)
}

/// Writes `u1 + α·u2` as `λ·u0` with `u0` a unit vector. When the sum
/// vanishes, `λ = 0` and `u0` is the normalised `u1 − α·u2`.
pub fn comb_normalize(
    u1: &CanonicalDistribution,
    u2: &CanonicalDistribution,
    alpha: Scalar,
    eps: f64,
) -> (f64, CanonicalDistribution) {
    let s = u1.add(&u2.scale(alpha));
    let lambda = norm_unchecked(&s);
    if lambda > eps {
        return (lambda, s.scale(Scalar::real(1.0 / lambda)));
    }
    let d = u1.add(&u2.scale(-alpha));
    let n = norm_unchecked(&d);
    (0.0, d.scale(Scalar::real(1.0 / n)))
}

use super::canonical::{canonicalize, CanonicalDistribution};
use super::scalar::Scalar;
use super::term::{PureValue, RawDistribution};
use crate::error::{Error, Result};

/// Pure substitution `t⃗[x := w]`, extended linearly over `t⃗`.
pub fn pure_subst(t: &RawDistribution, x: &str, w: &PureValue) -> RawDistribution {
    t.subst_free(x, w)
}

fn closed_values(v: &CanonicalDistribution) -> Result<Vec<(Scalar, PureValue)>> {
    let vals = v
        .values()
        .ok_or_else(|| Error::Shape("substituted distribution must consist of values".into()))?;
    let mut free: Vec<String> = Vec::new();
    for (_, w) in &vals {
        free.extend(w.free_vars());
    }
    if !free.is_empty() {
        free.sort();
        free.dedup();
        return Err(Error::OpenValue(free));
    }
    Ok(vals.into_iter().map(|(c, w)| (c, w.clone())).collect())
}

/// Bilinear substitution `t⃗⟨x := Σ βⱼ·wⱼ⟩ = Σ βⱼ·t⃗[x := wⱼ]`.
///
/// The substituted distribution must be a closed value distribution. When
/// `x` does not occur in `t⃗` the result is `weight(v)·t⃗`.
pub fn bilinear_subst(
    t: &CanonicalDistribution,
    x: &str,
    v: &CanonicalDistribution,
) -> Result<CanonicalDistribution> {
    let vals = closed_values(v)?;
    let raw = t.to_raw();
    let parts = vals
        .iter()
        .map(|(b, w)| RawDistribution::scale(*b, pure_subst(&raw, x, w)));
    Ok(canonicalize(&RawDistribution::sum_all(parts)))
}

/// Simultaneous bilinear substitution of several closed value distributions.
/// With closed values the substitutions do not interact, so they are applied
/// one after another.
pub fn parallel_bilinear_subst(
    t: &CanonicalDistribution,
    sigma: &[(String, CanonicalDistribution)],
) -> Result<CanonicalDistribution> {
    let mut acc = t.clone();
    for (x, v) in sigma {
        acc = bilinear_subst(&acc, x, v)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::term::PureTerm;
    use super::*;

    #[test]
    fn substitution_is_bilinear() {
        let t = canonicalize(&PureTerm::app(PureTerm::var("f"), PureTerm::var("x")).dist());
        let v = canonicalize(&RawDistribution::sum(
            RawDistribution::scale(0.6, PureValue::tt().dist()),
            RawDistribution::scale(0.8, PureValue::ff().dist()),
        ));
        let r = bilinear_subst(&t, "x", &v).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(
            r.coefficient(&PureTerm::app(PureTerm::var("f"), PureValue::ff().term())),
            Some(Scalar::real(0.8))
        );
    }

    #[test]
    fn absent_variable_scales_by_weight() {
        let t = canonicalize(&PureTerm::var("y").dist());
        let v = canonicalize(&RawDistribution::sum(
            RawDistribution::scale(0.5, PureValue::tt().dist()),
            RawDistribution::scale(0.25, PureValue::ff().dist()),
        ));
        let r = bilinear_subst(&t, "x", &v).unwrap();
        assert_eq!(r.coefficient(&PureTerm::var("y")), Some(Scalar::real(0.75)));
    }

    #[test]
    fn open_values_are_rejected() {
        let t = canonicalize(&PureTerm::var("x").dist());
        let v = canonicalize(&PureTerm::var("z").dist());
        assert_eq!(bilinear_subst(&t, "x", &v), Err(Error::OpenValue(vec!["z".into()])));
    }
}

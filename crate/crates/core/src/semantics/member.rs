use super::types::{basis_of_type, is_pure_type, Type};
use super::Verdict;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::{is_reducible, normalize};
use crate::syntax::{canonicalize, CanonicalDistribution, PureTerm, PureValue, RawDistribution, Scalar};
use std::collections::BTreeMap;

/// Set of unit scalars `c` such that `c·v` belongs to a type.
#[derive(Clone, Copy, Debug)]
enum Phases {
    Empty,
    All,
    One(Scalar),
    Unknown,
}

type Vals = Vec<(Scalar, PureValue)>;

/// Decides `v ∈ ⟦A⟧` for a closed normal value distribution.
pub fn member_value(v: &CanonicalDistribution, a: &Type, cfg: &Config) -> Result<Verdict> {
    if let Some((_, t)) = v.terms().iter().find(|(_, t)| is_reducible(t)) {
        return Err(Error::NotNormal(crate::syntax::pretty_term(t, crate::syntax::Style::Display)));
    }
    let mut free: Vec<String> = v.terms().iter().flat_map(|(_, t)| t.free_vars()).collect();
    if !free.is_empty() {
        free.sort();
        free.dedup();
        return Err(Error::OpenValue(free));
    }
    Ok(member_normal(v, a, cfg))
}

fn member_normal(v: &CanonicalDistribution, a: &Type, cfg: &Config) -> Verdict {
    let Some(vals) = v.values() else {
        // a stuck summand is not a value
        return Verdict::No;
    };
    let vals: Vals = vals.into_iter().map(|(c, x)| (c, x.clone())).collect();
    match phases(&vals, a, cfg) {
        Phases::All => Verdict::Yes,
        Phases::One(c) => Verdict::from_bool(c.approx_eq(Scalar::ONE, cfg.eps)),
        Phases::Empty => Verdict::No,
        Phases::Unknown => Verdict::Unsupported,
    }
}

/// `t⃗ ⊩ A`: `t⃗` normalises to a value distribution in `⟦A⟧`.
/// Open terms and exhausted fuel give `Unsupported`.
pub fn realizes(t: &CanonicalDistribution, a: &Type, cfg: &Config) -> Verdict {
    if !t.is_closed() {
        return Verdict::Unsupported;
    }
    match normalize(t, cfg.fuel).normal() {
        Some(v) => member_normal(v, a, cfg),
        None => Verdict::Unsupported,
    }
}

fn unit_norm(vals: &Vals, eps: f64) -> bool {
    let n: f64 = vals.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt();
    (n - 1.0).abs() <= eps
}

fn phases(vals: &Vals, a: &Type, cfg: &Config) -> Phases {
    if !unit_norm(vals, cfg.eps) {
        return Phases::Empty;
    }
    match a {
        Type::Unit => match vals.as_slice() {
            [(c, PureValue::Void)] => Phases::One(Scalar::ONE / *c),
            _ => Phases::Empty,
        },
        Type::Flat(x) => match vals.as_slice() {
            [(c, b)] => match flat_member(b, x, cfg) {
                Verdict::Yes => Phases::One(Scalar::ONE / *c),
                Verdict::No => Phases::Empty,
                Verdict::Unsupported => Phases::Unknown,
            },
            _ => Phases::Empty,
        },
        Type::Sharp(d) => {
            if d.is_data() {
                if vals.iter().all(|(_, b)| in_basis(b, d)) {
                    Phases::All
                } else {
                    Phases::Empty
                }
            } else {
                // ⟦D⟧ ⊆ ⟦♯D⟧, and ♯ is closed under phases
                match phases(vals, d, cfg) {
                    Phases::All | Phases::One(_) => Phases::All,
                    _ => Phases::Unknown,
                }
            }
        }
        Type::Sum(l, r) => {
            if vals.iter().all(|(_, b)| matches!(b, PureValue::Inl(_))) {
                phases(&strip(vals), l, cfg)
            } else if vals.iter().all(|(_, b)| matches!(b, PureValue::Inr(_))) {
                phases(&strip(vals), r, cfg)
            } else {
                Phases::Empty
            }
        }
        Type::Prod(l, r) => match factor(vals, cfg.eps) {
            None => Phases::Empty,
            Some((v1, v2)) => match (phases(&v1, l, cfg), phases(&v2, r, cfg)) {
                (Phases::Empty, _) | (_, Phases::Empty) => Phases::Empty,
                (Phases::Unknown, _) | (_, Phases::Unknown) => Phases::Unknown,
                (Phases::One(a), Phases::One(b)) => Phases::One(a * b),
                _ => Phases::All,
            },
        },
        Type::PureArrow(dom, cod) => match vals.as_slice() {
            [(c, PureValue::Lam(_, body))] => match arrow_member(body, dom, cod, cfg) {
                Verdict::Yes => Phases::One(Scalar::ONE / *c),
                Verdict::No => Phases::Empty,
                Verdict::Unsupported => Phases::Unknown,
            },
            _ => Phases::Empty,
        },
        Type::UnitArrow(dom, cod) => {
            let Some(body) = merged_body(vals) else { return Phases::Empty };
            match arrow_member(&body, dom, cod, cfg) {
                Verdict::Yes if cod.is_sharp_rooted() => Phases::All,
                Verdict::Yes => Phases::One(Scalar::ONE),
                Verdict::No if cod.is_sharp_rooted() => Phases::Empty,
                _ => Phases::Unknown,
            }
        }
    }
}

/// `Σ αᵢ·λx.t⃗ᵢ` merged into the body of `λx. Σ αᵢ·t⃗ᵢ`.
pub(crate) fn merged_body(vals: &[(Scalar, PureValue)]) -> Option<RawDistribution> {
    let mut parts = Vec::new();
    for (c, v) in vals {
        match v {
            PureValue::Lam(_, body) => parts.push(RawDistribution::scale(*c, (**body).clone())),
            _ => return None,
        }
    }
    Some(RawDistribution::sum_all(parts))
}

fn strip(vals: &Vals) -> Vals {
    vals.iter()
        .map(|(c, b)| match b {
            PureValue::Inl(x) | PureValue::Inr(x) => (*c, (**x).clone()),
            _ => unreachable!(),
        })
        .collect()
}

/// Splits a distribution of pairs into a product `v1 ⊗ v2` with `‖v1‖ = 1`,
/// if its support is a full grid and its coefficient matrix has rank one.
fn factor(vals: &Vals, eps: f64) -> Option<(Vals, Vals)> {
    let mut cells = BTreeMap::new();
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for (c, b) in vals {
        let PureValue::Pair(l, r) = b else { return None };
        if !lefts.contains(&**l) {
            lefts.push((**l).clone());
        }
        if !rights.contains(&**r) {
            rights.push((**r).clone());
        }
        cells.insert(((**l).clone(), (**r).clone()), *c);
    }
    if lefts.len() * rights.len() != vals.len() {
        return None;
    }
    lefts.sort();
    rights.sort();
    let m = |i: usize, j: usize| cells[&(lefts[i].clone(), rights[j].clone())];
    let (mut i0, mut j0, mut best) = (0, 0, -1.0);
    for i in 0..lefts.len() {
        for j in 0..rights.len() {
            if m(i, j).abs() > best {
                best = m(i, j).abs();
                i0 = i;
                j0 = j;
            }
        }
    }
    if best <= 0.0 {
        return None;
    }
    let pivot = m(i0, j0);
    let v1: Vec<Scalar> = (0..lefts.len()).map(|i| m(i, j0)).collect();
    let v2: Vec<Scalar> = (0..rights.len()).map(|j| m(i0, j) / pivot).collect();
    for i in 0..lefts.len() {
        for j in 0..rights.len() {
            if (m(i, j) - v1[i] * v2[j]).abs() > eps * best {
                return None;
            }
        }
    }
    let n1 = v1.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let a = lefts.into_iter().zip(v1).map(|(b, c)| (c / Scalar::real(n1), b));
    let b = rights.into_iter().zip(v2).map(|(b, c)| (c * Scalar::real(n1), b));
    Some((a.collect(), b.collect()))
}

fn in_basis(b: &PureValue, d: &Type) -> bool {
    match (d, b) {
        (Type::Unit, PureValue::Void) => true,
        (Type::Sum(l, _), PureValue::Inl(x)) => in_basis(x, l),
        (Type::Sum(_, r), PureValue::Inr(x)) => in_basis(x, r),
        (Type::Prod(l, r), PureValue::Pair(x, y)) => in_basis(x, l) && in_basis(y, r),
        (Type::Sharp(e) | Type::Flat(e), _) => in_basis(b, e),
        _ => false,
    }
}

/// `b ∈ ♭⟦X⟧`, i.e. `b` occurs in the support of some element of `⟦X⟧`.
fn flat_member(b: &PureValue, x: &Type, cfg: &Config) -> Verdict {
    match (x, b) {
        (Type::Unit, PureValue::Void) => Verdict::Yes,
        (Type::Sum(l, _), PureValue::Inl(v)) => flat_member(v, l, cfg),
        (Type::Sum(_, r), PureValue::Inr(v)) => flat_member(v, r, cfg),
        (Type::Prod(l, r), PureValue::Pair(p, q)) => flat_member(p, l, cfg).and(flat_member(q, r, cfg)),
        (Type::Sharp(e) | Type::Flat(e), _) => flat_member(b, e, cfg),
        (Type::PureArrow(dom, cod), PureValue::Lam(_, body)) => arrow_member(body, dom, cod, cfg),
        (Type::UnitArrow(dom, cod), PureValue::Lam(_, body)) => match arrow_member(body, dom, cod, cfg) {
            Verdict::Yes => Verdict::Yes,
            // it may still occur inside a larger distribution
            _ => Verdict::Unsupported,
        },
        _ => Verdict::No,
    }
}

/// `λx.body ∈ ⟦dom → cod⟧`, decided by probing when `dom` is a data type.
/// Whether membership in `a` can ever come out `Yes`; arrows between
/// shapes that the probes do not pin down are at best `Unsupported`.
pub(crate) fn may_confirm(a: &Type) -> bool {
    match a {
        Type::Unit => true,
        Type::Sum(x, y) | Type::Prod(x, y) => may_confirm(x) && may_confirm(y),
        Type::Sharp(x) | Type::Flat(x) => may_confirm(x),
        Type::PureArrow(dom, cod) | Type::UnitArrow(dom, cod) => arrow_conclusive(dom, cod),
    }
}

fn arrow_conclusive(dom: &Type, cod: &Type) -> bool {
    dom.is_data() && (is_pure_type(dom) || (dom.is_sharp_rooted() && cod.is_sharp_rooted() && cod.is_data()))
}

fn arrow_member(body: &RawDistribution, dom: &Type, cod: &Type, cfg: &Config) -> Verdict {
    if !dom.is_data() {
        return Verdict::Unsupported;
    }
    let probes = match probe_vectors(dom) {
        Ok(p) => p,
        Err(_) => return Verdict::Unsupported,
    };
    let mut verdict = Verdict::Yes;
    for p in &probes {
        let image = apply_body(body, p);
        let v = match normalize(&image, cfg.fuel).normal() {
            Some(n) => member_normal(n, cod, cfg),
            None => Verdict::Unsupported,
        };
        verdict = verdict.and(v);
        if verdict == Verdict::No {
            return Verdict::No;
        }
    }
    if verdict != Verdict::Yes {
        return verdict;
    }
    // every element of a pure data type is a basis vector, so the probes
    // cover it; for ♯D → ♯D′ the probes pin down the Gram matrix
    if arrow_conclusive(dom, cod) {
        Verdict::Yes
    } else {
        Verdict::Unsupported
    }
}

/// `body⟨x := Σ βⱼ·bⱼ⟩` for the abstraction body `body`.
pub(crate) fn apply_body(body: &RawDistribution, arg: &CanonicalDistribution) -> CanonicalDistribution {
    let parts = arg.terms().iter().map(|(c, t)| {
        let v = t.as_value().expect("probe is a value distribution");
        RawDistribution::scale(*c, body.open(std::slice::from_ref(v)))
    });
    canonicalize(&RawDistribution::sum_all(parts))
}

/// A finite family of elements of `⟦A⟧` for a data type `A`: basis vectors,
/// plus `(bᵢ+bⱼ)/√2` and `(bᵢ+i·bⱼ)/√2` under `♯`, combined through sums and
/// products. Under linearity these determine any sesquilinear quantity.
pub fn probe_vectors(a: &Type) -> Result<Vec<CanonicalDistribution>> {
    let single = |b: PureValue| CanonicalDistribution::value(b);
    Ok(match a {
        Type::Unit => vec![single(PureValue::Void)],
        Type::Flat(d) => {
            if !d.is_data() {
                return Err(Error::UnsupportedType(format!("{a}")));
            }
            basis_of_type(d)?.into_iter().map(single).collect()
        }
        Type::Sharp(d) => {
            if !d.is_data() {
                return Err(Error::UnsupportedType(format!("{a}")));
            }
            let basis = basis_of_type(d)?;
            let mut out: Vec<CanonicalDistribution> = basis.iter().cloned().map(single).collect();
            let h = Scalar::real(std::f64::consts::FRAC_1_SQRT_2);
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let (bi, bj) = (PureTerm::Val(basis[i].clone()), PureTerm::Val(basis[j].clone()));
                    out.push(CanonicalDistribution::from_pairs([(h, bi.clone()), (h, bj.clone())]));
                    out.push(CanonicalDistribution::from_pairs([(h, bi), (h * Scalar::I, bj)]));
                }
            }
            out
        }
        Type::Sum(l, r) => {
            let mut out: Vec<CanonicalDistribution> =
                probe_vectors(l)?.iter().map(|p| map_values(p, PureValue::inl)).collect();
            out.extend(probe_vectors(r)?.iter().map(|p| map_values(p, PureValue::inr)));
            out
        }
        Type::Prod(l, r) => {
            let (pl, pr) = (probe_vectors(l)?, probe_vectors(r)?);
            let mut out = Vec::new();
            for x in &pl {
                for y in &pr {
                    out.push(pair_vectors(x, y));
                }
            }
            out
        }
        Type::PureArrow(..) | Type::UnitArrow(..) => {
            return Err(Error::UnsupportedType(format!("{a} has no finite probe set")))
        }
    })
}

fn map_values(p: &CanonicalDistribution, f: fn(PureValue) -> PureValue) -> CanonicalDistribution {
    CanonicalDistribution::from_pairs(
        p.terms()
            .iter()
            .map(|(c, t)| (*c, PureTerm::Val(f(t.as_value().unwrap().clone())))),
    )
}

/// `⟨x⃗, y⃗⟩` for two value distributions.
pub(crate) fn pair_vectors(x: &CanonicalDistribution, y: &CanonicalDistribution) -> CanonicalDistribution {
    let mut items = Vec::new();
    for (a, s) in x.terms() {
        for (b, t) in y.terms() {
            items.push((
                *a * *b,
                PureTerm::Val(PureValue::pair(s.as_value().unwrap().clone(), t.as_value().unwrap().clone())),
            ));
        }
    }
    CanonicalDistribution::from_pairs(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::types::parse_type;
    use crate::syntax::parse_term;

    fn c(s: &str) -> CanonicalDistribution {
        canonicalize(&parse_term(s).unwrap())
    }

    fn mem(v: &str, a: &str) -> Verdict {
        member_value(&c(v), &parse_type(a).unwrap(), &Config::default()).unwrap()
    }

    #[test]
    fn sharp_bool() {
        assert_eq!(mem("0.6 * tt + 0.8 * ff", "#B"), Verdict::Yes);
        assert_eq!(mem("i * tt", "#B"), Verdict::Yes);
        assert_eq!(mem("1.4 * tt", "#B"), Verdict::No);
        assert_eq!(mem("tt", "!#B"), Verdict::Yes);
        assert_eq!(mem("i * tt", "B"), Verdict::No);
        assert_eq!(mem("tt + 0 * ff", "B"), Verdict::No);
        assert_eq!(mem("tt + 0 * ff", "#B"), Verdict::Yes);
    }

    #[test]
    fn products() {
        assert_eq!(mem("(tt, tt)", "B * B"), Verdict::Yes);
        assert_eq!(mem("0.6 * (tt, tt) + 0.8 * (tt, ff)", "B * #B"), Verdict::Yes);
        assert_eq!(mem("0.6 * (tt, tt) + 0.8 * (ff, ff)", "#B * #B"), Verdict::No);
        assert_eq!(mem("0.6 * (tt, tt) + 0.8 * (ff, ff)", "#(B * B)"), Verdict::Yes);
        // phase carried by the sharp factor
        assert_eq!(mem("i * ((), tt)", "U * #B"), Verdict::Yes);
        assert_eq!(mem("i * ((), tt)", "U * B"), Verdict::No);
        assert_eq!(mem("(-1) * ((), ((), ()))", "U * (#U * #U)"), Verdict::Yes);
    }

    #[test]
    fn sums() {
        assert_eq!(mem("inl (0.6 * tt + 0.8 * ff)", "#B + U"), Verdict::Yes);
        assert_eq!(mem("0.6 * inl tt + 0.8 * inr ()", "#B + U"), Verdict::No);
    }

    #[test]
    fn arrows() {
        let h = "lam x. if x then (1/sqrt(2) * tt + 1/sqrt(2) * ff) else (1/sqrt(2) * tt - 1/sqrt(2) * ff)";
        assert_eq!(mem(h, "#B -> #B"), Verdict::Yes);
        assert_eq!(mem(h, "B -> #B"), Verdict::Yes);
        assert_eq!(mem(h, "B -> B"), Verdict::No);
        assert_eq!(mem("lam x. tt", "#B -> #B"), Verdict::No);
        assert_eq!(mem("lam x. tt", "B -> B"), Verdict::Yes);
        let f = "3/5 * (lam x. 5/6 * x) + 4/5 * (lam x. 5/8 * x)";
        assert_eq!(mem(f, "#B => #B"), Verdict::Yes);
        assert_eq!(mem(f, "#B -> #B"), Verdict::No);
        assert_eq!(mem("lam f. f", "(#B -> #B) -> (#B -> #B)"), Verdict::Unsupported);
    }

    #[test]
    fn not_normal_is_an_error() {
        assert!(matches!(
            member_value(&c("(lam x. x) tt"), &Type::bool(), &Config::default()),
            Err(Error::NotNormal(_))
        ));
    }
}

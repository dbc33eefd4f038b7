//! One-step reduction of distributions and normalisation with fuel.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use crate::syntax::term::{raw_app, raw_let, raw_match, raw_seq};
use crate::syntax::canonical::collect;
use crate::syntax::{canonicalize, CanonicalDistribution, PureTerm, PureValue, RawDistribution, Scalar};

pub const DEFAULT_FUEL: usize = 10_000;

/// Atomic reduction `t ▷ t⃗′` of a pure term, or `None` when `t` is a value
/// or stuck. Arguments are reduced before heads; nothing reduces under a
/// binder or inside a continuation.
pub fn atomic_step(t: &PureTerm) -> Option<RawDistribution> {
    match t {
        PureTerm::Val(_) => None,
        PureTerm::App(s, a) => {
            if let Some(a2) = atomic_step(a) {
                return Some(raw_app(&RawDistribution::Single((**s).clone()), &a2));
            }
            let PureTerm::Val(v) = &**a else { return None };
            match &**s {
                PureTerm::Val(PureValue::Lam(_, body)) => Some(body.open(std::slice::from_ref(v))),
                PureTerm::Val(_) => None,
                _ => atomic_step(s).map(|s2| raw_app(&s2, &RawDistribution::Single((**a).clone()))),
            }
        }
        PureTerm::Seq(a, cont) => match &**a {
            PureTerm::Val(PureValue::Void) => Some((**cont).clone()),
            PureTerm::Val(_) => None,
            _ => atomic_step(a).map(|a2| raw_seq(&a2, cont)),
        },
        PureTerm::LetPair(x, y, a, body) => match &**a {
            PureTerm::Val(PureValue::Pair(v, w)) => Some(body.open(&[(**v).clone(), (**w).clone()])),
            PureTerm::Val(_) => None,
            _ => atomic_step(a).map(|a2| raw_let(&a2, x, y, body)),
        },
        PureTerm::Match(a, x1, s1, x2, s2) => match &**a {
            PureTerm::Val(PureValue::Inl(v)) => Some(s1.open(&[(**v).clone()])),
            PureTerm::Val(PureValue::Inr(v)) => Some(s2.open(&[(**v).clone()])),
            PureTerm::Val(_) => None,
            _ => atomic_step(a).map(|a2| raw_match(&a2, x1, s1, x2, s2)),
        },
    }
}

pub fn is_reducible(t: &PureTerm) -> bool {
    match t {
        PureTerm::Val(_) => false,
        PureTerm::App(s, a) => {
            is_reducible(a)
                || (a.is_value()
                    && match &**s {
                        PureTerm::Val(PureValue::Lam(..)) => true,
                        PureTerm::Val(_) => false,
                        _ => is_reducible(s),
                    })
        }
        PureTerm::Seq(a, _) => match &**a {
            PureTerm::Val(v) => *v == PureValue::Void,
            _ => is_reducible(a),
        },
        PureTerm::LetPair(_, _, a, _) => match &**a {
            PureTerm::Val(v) => matches!(v, PureValue::Pair(..)),
            _ => is_reducible(a),
        },
        PureTerm::Match(a, ..) => match &**a {
            PureTerm::Val(v) => matches!(v, PureValue::Inl(_) | PureValue::Inr(_)),
            _ => is_reducible(a),
        },
    }
}

/// Indices of the summands of `d` that can take a step.
pub fn reducible_indices(d: &CanonicalDistribution) -> Vec<usize> {
    d.terms()
        .iter()
        .enumerate()
        .filter(|(_, (_, t))| is_reducible(t))
        .map(|(i, _)| i)
        .collect()
}

/// Reduces the `i`-th summand `α·s` to `α·s⃗′`, leaving the rest unchanged.
pub fn step_summand(d: &CanonicalDistribution, i: usize) -> Option<CanonicalDistribution> {
    let (alpha, s) = d.terms().get(i)?;
    let s2 = atomic_step(s)?;
    let rest = d
        .terms()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, (c, t))| RawDistribution::scale(*c, RawDistribution::Single(t.clone())));
    let parts = std::iter::once(RawDistribution::scale(*alpha, s2)).chain(rest);
    Some(canonicalize(&RawDistribution::sum_all(parts)))
}

/// One step `d → d′`: the first reducible summand in canonical order is
/// reduced. `None` when `d` is normal.
pub fn one_step(d: &CanonicalDistribution) -> Option<CanonicalDistribution> {
    let i = d.terms().iter().position(|(_, t)| is_reducible(t))?;
    step_summand(d, i)
}

/// Steps `d ≡ α·s + r` to `α·s⃗′ + r` for a reducible `s ∈ dom(d)`.
///
/// The remainder is `d` with the coefficient of `s` lowered by `α`; when that
/// leaves exactly zero, `s` is dropped from the remainder.
pub fn step_with_decomposition(
    d: &CanonicalDistribution,
    s: &PureTerm,
    alpha: Scalar,
) -> Result<CanonicalDistribution> {
    decomposed_step(d, s, alpha, false)
}

/// Like [`step_with_decomposition`], but `s` always stays in the remainder,
/// with coefficient zero if need be.
pub fn step_with_decomposition_retaining(
    d: &CanonicalDistribution,
    s: &PureTerm,
    alpha: Scalar,
) -> Result<CanonicalDistribution> {
    decomposed_step(d, s, alpha, true)
}

fn decomposed_step(
    d: &CanonicalDistribution,
    s: &PureTerm,
    alpha: Scalar,
    retain: bool,
) -> Result<CanonicalDistribution> {
    let gamma = d
        .coefficient(s)
        .ok_or_else(|| Error::Decomposition("the redex is not in the support".into()))?;
    let s2 = atomic_step(s).ok_or(Error::NotReducible)?;
    let left = gamma - alpha;
    let mut parts = vec![RawDistribution::scale(alpha, s2)];
    for (c, t) in d.terms() {
        if t == s {
            if retain || left != Scalar::ZERO {
                parts.push(RawDistribution::scale(left, RawDistribution::Single(t.clone())));
            }
        } else {
            parts.push(RawDistribution::scale(*c, RawDistribution::Single(t.clone())));
        }
    }
    Ok(canonicalize(&RawDistribution::sum_all(parts)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalOutcome {
    Normal { result: CanonicalDistribution, steps: usize },
    OutOfFuel { partial: CanonicalDistribution, steps: usize },
}

impl EvalOutcome {
    pub fn normal(&self) -> Option<&CanonicalDistribution> {
        match self {
            EvalOutcome::Normal { result, .. } => Some(result),
            EvalOutcome::OutOfFuel { .. } => None,
        }
    }

    pub fn into_result(self) -> Result<CanonicalDistribution> {
        match self {
            EvalOutcome::Normal { result, .. } => Ok(result),
            EvalOutcome::OutOfFuel { steps, .. } => Err(Error::OutOfFuel(steps)),
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            EvalOutcome::Normal { steps, .. } | EvalOutcome::OutOfFuel { steps, .. } => *steps,
        }
    }
}

/// Iterates [`one_step`] until no summand is reducible or `fuel` runs out.
pub fn normalize(d: &CanonicalDistribution, fuel: usize) -> EvalOutcome {
    run(d, fuel, None)
}

pub fn normalize_raw(d: &RawDistribution, fuel: usize) -> EvalOutcome {
    normalize(&canonicalize(d), fuel)
}

/// Normalises and records every intermediate distribution, the input included.
pub fn normalize_traced(
    d: &CanonicalDistribution,
    fuel: usize,
) -> (EvalOutcome, Vec<CanonicalDistribution>) {
    let mut trace = vec![d.clone()];
    let out = run(d, fuel, Some(&mut trace));
    (out, trace)
}

fn run(
    d: &CanonicalDistribution,
    fuel: usize,
    mut trace: Option<&mut Vec<CanonicalDistribution>>,
) -> EvalOutcome {
    // same schedule as iterating `one_step`, without rebuilding the whole
    // canonical form at every step: reducible summands are kept apart, so the
    // next redex is the first of them
    let (mut redexes, mut normal): (BTreeMap<_, _>, BTreeMap<_, _>) =
        d.clone().into_map().into_iter().partition(|(t, _)| is_reducible(t));
    let mut steps = 0;
    let join = |r: &BTreeMap<PureTerm, Scalar>, n: &BTreeMap<PureTerm, Scalar>| {
        let mut all = n.clone();
        all.extend(r.iter().map(|(t, c)| (t.clone(), *c)));
        CanonicalDistribution::from_map(all)
    };
    loop {
        let Some((s, alpha)) = redexes.pop_first() else {
            return EvalOutcome::Normal { result: CanonicalDistribution::from_map(normal), steps };
        };
        if steps >= fuel {
            redexes.insert(s, alpha);
            return EvalOutcome::OutOfFuel { partial: join(&redexes, &normal), steps };
        }
        let mut reduct = BTreeMap::new();
        collect(&atomic_step(&s).expect("reducible"), alpha, &mut reduct);
        for (t, c) in reduct {
            let side = if is_reducible(&t) { &mut redexes } else { &mut normal };
            *side.entry(t).or_insert(Scalar::ZERO) += c;
        }
        steps += 1;
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(join(&redexes, &normal));
        }
    }
}

/// `Y_t = (λx. t + x x)(λx. t + x x)`, which reduces to `t + Y_t`.
/// `t` must be closed.
pub fn fixpoint(t: &RawDistribution) -> PureTerm {
    use crate::syntax::Name;
    use crate::syntax::Var;
    let xx = PureTerm::app(
        PureTerm::Val(PureValue::Var(Var::Bound(0))),
        PureTerm::Val(PureValue::Var(Var::Bound(0))),
    );
    let f = PureValue::Lam(
        Name::new("x"),
        Box::new(RawDistribution::sum(t.shift(1), xx.dist())),
    );
    PureTerm::app(f.clone().term(), f.term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn c(src: &str) -> CanonicalDistribution {
        canonicalize(&parse_term(src).unwrap())
    }

    #[test]
    fn beta_and_destructors() {
        let r = normalize(&c("(lam x. (x, x)) tt"), 100).into_result().unwrap();
        assert_eq!(r, c("(tt, tt)"));
        let r = normalize(&c("let (a, b) = (tt, ff) in (b, a)"), 100).into_result().unwrap();
        assert_eq!(r, c("(ff, tt)"));
        let r = normalize(&c("match inr () { inl a -> tt | inr b -> ff }"), 100).into_result().unwrap();
        assert_eq!(r, c("ff"));
        let r = normalize(&c("() ; tt"), 100).into_result().unwrap();
        assert_eq!(r, c("tt"));
    }

    #[test]
    fn argument_reduces_before_head() {
        // the head is a redex too, but the argument goes first
        let d = c("((lam y. y) (lam z. z)) ((lam w. w) tt)");
        let s = one_step(&d).unwrap();
        assert_eq!(s, c("((lam y. y) (lam z. z)) tt"));
    }

    #[test]
    fn no_reduction_under_binders() {
        let d = c("lam x. (lam y. y) x");
        assert!(one_step(&d).is_none());
        let d = c("match z { inl a -> (lam y. y) tt | inr b -> ff }");
        assert!(one_step(&d).is_none());
    }

    #[test]
    fn stuck_terms_are_normal() {
        let d = c("tt tt");
        assert_eq!(normalize(&d, 10), EvalOutcome::Normal { result: d.clone(), steps: 0 });
    }

    #[test]
    fn decomposition_can_split_a_summand() {
        let d = c("(lam x. x) y");
        let r = step_with_decomposition(&d, &d.terms()[0].1, Scalar::real(0.5)).unwrap();
        assert_eq!(r, c("0.5 * y + 0.5 * ((lam x. x) y)"));
        assert!(matches!(
            step_with_decomposition(&d, &PureTerm::var("q"), Scalar::ONE),
            Err(Error::Decomposition(_))
        ));
    }

    #[test]
    fn fixpoint_runs_out_of_fuel() {
        let y = fixpoint(&parse_term("tt").unwrap());
        let one = atomic_step(&y).unwrap();
        assert_eq!(canonicalize(&one), canonicalize(&RawDistribution::sum(parse_term("tt").unwrap(), y.clone().dist())));
        let out = normalize(&CanonicalDistribution::single(y.clone()), 50);
        assert!(matches!(out, EvalOutcome::OutOfFuel { steps: 50, .. }));
        // 0·Y_t → α·t + 0·Y_t
        let zero_y = CanonicalDistribution::from_pairs([(Scalar::ZERO, y.clone())]);
        let r = step_with_decomposition(&zero_y, &y, Scalar::real(0.3)).unwrap();
        assert_eq!(r.coefficient(&y), Some(Scalar::ZERO));
        assert!(r.coefficient(&PureValue::tt().term()).unwrap().approx_eq(Scalar::real(0.3), 1e-12));
    }
}

//! Algebraic and operational laws of distributions, evaluation and the
//! inner product, checked on random inputs.

mod common;

use common::*;
use linlam::eval::{atomic_step, normalize, one_step, reducible_indices, step_with_decomposition};
use linlam::semantics::{inner_product, norm};
use linlam::syntax::term::{raw_inl, raw_inr, raw_pair};
use linlam::syntax::{canonicalize, parse_term, pretty, CanonicalDistribution, RawDistribution, Scalar, Style};
use linlam::Type;
use proptest::prelude::*;
use rand::Rng;

const FUEL: usize = 100_000;

fn c(d: &RawDistribution) -> CanonicalDistribution {
    canonicalize(d)
}

fn nf(d: &CanonicalDistribution) -> CanonicalDistribution {
    normalize(d, FUEL).into_result().expect("generated terms terminate")
}

/// A closed, terminating distribution: a combination of simply-typed terms.
fn terminating(seed: u64) -> CanonicalDistribution {
    let mut r = rng(seed);
    let ty = data_type(&mut r, 2);
    let mut g = Simple::new(&mut r, true);
    g.elim = 0.6;
    let d = g.check(&[], &ty, 5);
    c(&d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scope: Vec<String> = if r.gen_bool(0.5) { vec!["p".into(), "q".into()] } else { Vec::new() };
        let d = untyped_dist(&mut r, 4, &scope);
        let text = pretty(&d, Style::Exact);
        let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, d, "{}", text);
    }

    #[test]
    fn normalize_iterates_one_step(seed in any::<u64>()) {
        let mut cur = terminating(seed);
        let mut steps = 0;
        while let Some(next) = one_step(&cur) {
            cur = next;
            steps += 1;
        }
        let out = normalize(&terminating(seed), FUEL);
        prop_assert_eq!(out.steps(), steps);
        prop_assert_eq!(out.normal(), Some(&cur));
    }

    #[test]
    fn scheduling_order_does_not_matter(seed in any::<u64>()) {
        let d = terminating(seed);
        let mut r = rng(seed ^ 0x5eed);
        let a = nf(&d);
        let b = normalize_randomly(&d, &mut r, FUEL).expect("terminates");
        prop_assert!(a.approx_eq(&b, 1e-9), "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn congruence_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let scope = vec!["p".to_string()];
        let a = untyped_dist(&mut r, 3, &scope);
        let b = untyped_dist(&mut r, 3, &scope);
        let d = untyped_dist(&mut r, 3, &scope);
        let (al, be) = (dyadic(&mut r), dyadic(&mut r));
        let sum = RawDistribution::sum;
        let sc = RawDistribution::scale;
        prop_assert_eq!(c(&sum(a.clone(), RawDistribution::Zero)), c(&a));
        prop_assert_eq!(c(&sum(a.clone(), b.clone())), c(&sum(b.clone(), a.clone())));
        prop_assert_eq!(
            c(&sum(sum(a.clone(), b.clone()), d.clone())),
            c(&sum(a.clone(), sum(b.clone(), d.clone())))
        );
        prop_assert_eq!(c(&sc(Scalar::ONE, a.clone())), c(&a));
        prop_assert_eq!(c(&sc(al, sc(be, a.clone()))), c(&sc(al * be, a.clone())));
        prop_assert_eq!(c(&sc(al, sum(a.clone(), b.clone()))), c(&sum(sc(al, a.clone()), sc(al, b.clone()))));
        prop_assert_eq!(c(&sc(al + be, a.clone())), c(&sum(sc(al, a.clone()), sc(be, a.clone()))));
    }

    #[test]
    fn zero_scaled_terms_stay_in_the_support(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = untyped_term(&mut r, 3, &[]);
        let z = c(&RawDistribution::scale(Scalar::ZERO, t.clone().dist()));
        prop_assert_eq!(z.domain(), vec![&t]);
        prop_assert_ne!(z, CanonicalDistribution::zero());
    }

    #[test]
    fn weight_is_linear_and_domain_is_a_union(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = c(&untyped_dist(&mut r, 3, &[]));
        let b = c(&untyped_dist(&mut r, 3, &[]));
        let s = a.add(&b);
        prop_assert_eq!(s.weight(), a.weight() + b.weight());
        let mut dom: Vec<_> = a.domain().into_iter().chain(b.domain()).cloned().collect();
        dom.sort();
        dom.dedup();
        prop_assert_eq!(s.domain().into_iter().cloned().collect::<Vec<_>>(), dom);
    }

    #[test]
    fn evaluation_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), k in any::<u64>()) {
        let (d1, d2) = (terminating(s1), terminating(s2));
        let alpha = dyadic(&mut rng(k));
        let (n1, n2) = (nf(&d1), nf(&d2));
        prop_assert!(nf(&d1.scale(alpha)).approx_eq(&n1.scale(alpha), 1e-9));
        prop_assert!(nf(&d1.add(&d2)).approx_eq(&n1.add(&n2), 1e-9));
    }

    #[test]
    fn weak_diamond(seed in any::<u64>()) {
        let d = terminating(seed);
        let idx = reducible_indices(&d);
        prop_assume!(!idx.is_empty());
        let mut r = rng(seed ^ 7);
        let pick = |r: &mut rand_chacha::ChaCha8Rng| {
            let i = idx[r.gen_range(0..idx.len())];
            let (gamma, s) = d.terms()[i].clone();
            let alpha = if r.gen_bool(0.5) { gamma } else { dyadic(r) };
            (s, alpha)
        };
        let (s1, a1) = pick(&mut r);
        let (s2, a2) = pick(&mut r);
        prop_assume!(s1 != s2 || a1 != a2);
        let r1 = step_with_decomposition(&d, &s1, a1).unwrap();
        let r2 = step_with_decomposition(&d, &s2, a2).unwrap();
        let near1 = within_two_steps(&r1);
        let near2 = within_two_steps(&r2);
        let meet = near1.iter().any(|x| near2.iter().any(|y| x.approx_eq(y, 1e-9)));
        prop_assert!(meet, "{} and {} have no common reduct", r1, r2);
    }

    #[test]
    fn stepping_commutes_with_substitution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = untyped_term(&mut r, 3, &["x".to_string()]);
        let w = untyped_value(&mut r, 2, &[]);
        if let Some(t2) = atomic_step(&t) {
            let lhs = atomic_step(&t.subst_free("x", &w)).expect("substitution keeps the redex");
            prop_assert_eq!(c(&lhs), c(&t2.subst_free("x", &w)));
        }
    }

    #[test]
    fn polarization_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, m) = (r.gen_range(1..5), r.gen_range(1..5));
        let v = value_vector(&mut r, n);
        let w = value_vector(&mut r, m);
        let sq = |x: &CanonicalDistribution| norm(x).unwrap().powi(2);
        let i = Scalar::I;
        let quarter = Scalar::real(0.25)
            * (Scalar::real(sq(&v.add(&w)))
                - Scalar::real(sq(&v.add(&w.scale(-Scalar::ONE))))
                - i * Scalar::real(sq(&v.add(&w.scale(i))))
                + i * Scalar::real(sq(&v.add(&w.scale(-i)))));
        let ip = inner_product(&v, &w).unwrap();
        prop_assert!(ip.approx_eq(quarter, 1e-7), "{} vs {}", ip.display(), quarter.display());
        prop_assert!(ip.approx_eq(reference_inner(&v, &w), 1e-12));
    }

    #[test]
    fn constructors_and_inner_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vs: Vec<CanonicalDistribution> = (0..4).map(|_| {
            let n = r.gen_range(1..4);
            value_vector(&mut r, n)
        }).collect();
        let raw = |x: &CanonicalDistribution| x.to_raw();
        let ip = |a: &RawDistribution, b: &RawDistribution| inner_product(&c(a), &c(b)).unwrap();
        let (v1, v2, w1, w2) = (raw(&vs[0]), raw(&vs[1]), raw(&vs[2]), raw(&vs[3]));
        let base = ip(&v1, &v2);
        prop_assert!(ip(&raw_inl(&v1).unwrap(), &raw_inl(&v2).unwrap()).approx_eq(base, 1e-7));
        prop_assert!(ip(&raw_inr(&v1).unwrap(), &raw_inr(&v2).unwrap()).approx_eq(base, 1e-7));
        prop_assert!(ip(&raw_inl(&v1).unwrap(), &raw_inr(&v2).unwrap()).approx_eq(Scalar::ZERO, 1e-7));
        let pairs = ip(&raw_pair(&v1, &w1).unwrap(), &raw_pair(&v2, &w2).unwrap());
        prop_assert!(pairs.approx_eq(base * ip(&w1, &w2), 1e-7));
    }
}

/// Everything reachable in at most two steps, stepping whole summands.
fn within_two_steps(d: &CanonicalDistribution) -> Vec<CanonicalDistribution> {
    let mut out = vec![d.clone()];
    let mut frontier = vec![d.clone()];
    for _ in 0..2 {
        let mut next = Vec::new();
        for x in &frontier {
            for i in reducible_indices(x) {
                let (gamma, s) = x.terms()[i].clone();
                next.push(step_with_decomposition(x, &s, gamma).unwrap());
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn canonical_one_step_is_a_decomposition() {
    // the default scheduler steps the first reducible summand in full
    for seed in 0..200 {
        let d = terminating(seed);
        let Some(i) = reducible_indices(&d).first().copied() else { continue };
        let (gamma, s) = d.terms()[i].clone();
        assert_eq!(one_step(&d).unwrap(), step_with_decomposition(&d, &s, gamma).unwrap());
    }
}

#[test]
fn simple_types_are_pure() {
    let mut r = rng(1);
    for _ in 0..200 {
        let a = simple_type(&mut r, 3);
        assert!(linlam::semantics::is_pure_type(&a), "{a}");
        assert!(!matches!(a, Type::Sharp(_)));
    }
}

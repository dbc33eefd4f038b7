use super::context::{strict_domain, Context};
use super::judgment::{OrthogonalityJudgment, TypingJudgment};
use crate::config::Config;
use crate::eval::normalize;
use crate::semantics::inner::inner_unchecked;
use crate::semantics::{basis_of_type, probe_vectors, realizes, Verdict};
use crate::syntax::{canonicalize, parallel_bilinear_subst, CanonicalDistribution, PureTerm, PureValue, RawDistribution};

type Substitution = Vec<(String, CanonicalDistribution)>;

/// Cartesian product of per-variable candidate values.
fn substitutions(ctx: &Context, probes: bool) -> Option<Vec<Substitution>> {
    let mut out: Vec<Substitution> = vec![Vec::new()];
    for (x, a) in ctx.bindings() {
        if !a.is_data() {
            return None;
        }
        let vals: Vec<CanonicalDistribution> = if probes {
            probe_vectors(a).ok()?
        } else {
            basis_of_type(a).ok()?.into_iter().map(CanonicalDistribution::value).collect()
        };
        let mut next = Vec::with_capacity(out.len() * vals.len());
        for s in &out {
            for v in &vals {
                let mut s2 = s.clone();
                s2.push((x.clone(), v.clone()));
                next.push(s2);
            }
        }
        out = next;
    }
    Some(out)
}

/// `dom♯(Γ) ⊆ FV(t⃗) ⊆ dom(Γ)`.
pub fn free_variable_condition(ctx: &Context, t: &RawDistribution) -> Result<(), String> {
    let fv = t.free_vars();
    if let Some(x) = fv.iter().find(|x| !ctx.contains(x)) {
        return Err(format!("`{x}` is free but not in the context"));
    }
    if let Some(x) = strict_domain(ctx).iter().find(|x| !fv.contains(*x)) {
        return Err(format!("`{x}` has a non-pure type but does not occur"));
    }
    Ok(())
}

/// Decides a typing judgment from its meaning: the free-variable condition,
/// then `t⃗⟨σ⟩ ⊩ A` for every probe substitution `σ` (basis vectors, and
/// their pairwise superpositions for `♯` variables). Contexts must contain
/// only data types.
pub fn validate_semantically(j: &TypingJudgment, cfg: &Config) -> Verdict {
    if free_variable_condition(&j.ctx, &j.term).is_err() {
        return Verdict::No;
    }
    let Some(sigmas) = substitutions(&j.ctx, true) else {
        return Verdict::Unsupported;
    };
    let t = canonicalize(&j.term);
    let mut verdict = Verdict::Yes;
    for sigma in sigmas {
        let Ok(ts) = parallel_bilinear_subst(&t, &sigma) else { return Verdict::Unsupported };
        verdict = verdict.and(realizes(&ts, &j.ty, cfg));
        if verdict == Verdict::No {
            break;
        }
    }
    verdict
}

/// Constructor skeleton shared by every normal form of a term, as far as it
/// is known syntactically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Bottom,
    Any,
    Void,
    Inl(Box<Shape>),
    Inr(Box<Shape>),
    Pair(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn join(self, other: Shape) -> Shape {
        match (self, other) {
            (Shape::Bottom, t) | (t, Shape::Bottom) => t,
            (Shape::Void, Shape::Void) => Shape::Void,
            (Shape::Inl(a), Shape::Inl(b)) => Shape::Inl(Box::new(a.join(*b))),
            (Shape::Inr(a), Shape::Inr(b)) => Shape::Inr(Box::new(a.join(*b))),
            (Shape::Pair(a1, a2), Shape::Pair(b1, b2)) => {
                Shape::Pair(Box::new(a1.join(*b1)), Box::new(a2.join(*b2)))
            }
            _ => Shape::Any,
        }
    }

    /// Values of disjoint shapes never share a summand, so their
    /// distributions are orthogonal.
    pub fn disjoint(&self, other: &Shape) -> bool {
        match (self, other) {
            (Shape::Any | Shape::Bottom, _) | (_, Shape::Any | Shape::Bottom) => false,
            (Shape::Void, Shape::Void) => false,
            (Shape::Inl(a), Shape::Inl(b)) | (Shape::Inr(a), Shape::Inr(b)) => a.disjoint(b),
            (Shape::Pair(a1, a2), Shape::Pair(b1, b2)) => a1.disjoint(b1) || a2.disjoint(b2),
            _ => true,
        }
    }
}

pub fn shape(t: &RawDistribution) -> Shape {
    t.leaves().into_iter().fold(Shape::Bottom, |acc, p| acc.join(term_shape(p)))
}

fn value_shape(v: &PureValue) -> Shape {
    match v {
        PureValue::Void => Shape::Void,
        PureValue::Inl(x) => Shape::Inl(Box::new(value_shape(x))),
        PureValue::Inr(x) => Shape::Inr(Box::new(value_shape(x))),
        PureValue::Pair(a, b) => Shape::Pair(Box::new(value_shape(a)), Box::new(value_shape(b))),
        PureValue::Var(_) | PureValue::Lam(..) => Shape::Any,
    }
}

fn term_shape(p: &PureTerm) -> Shape {
    match p {
        PureTerm::Val(v) => value_shape(v),
        // β-reduction substitutes values for variables, which keeps the
        // skeleton of each body leaf
        PureTerm::App(f, _) => match &**f {
            PureTerm::Val(PureValue::Lam(_, body)) => shape(body),
            _ => Shape::Any,
        },
        PureTerm::Seq(_, s) => shape(s),
        PureTerm::LetPair(_, _, _, s) => shape(s),
        PureTerm::Match(_, _, s1, _, s2) => shape(s1).join(shape(s2)),
    }
}

/// Second condition of an orthogonality judgment: normal forms under any
/// substitutions are orthogonal. Shared variables range over probe vectors
/// (the inner product is sesquilinear in them jointly); the private ones
/// over basis vectors.
pub fn orthogonal_outputs(j: &OrthogonalityJudgment, cfg: &Config) -> Verdict {
    if shape(&j.left).disjoint(&shape(&j.right)) {
        return Verdict::Yes;
    }
    let (Some(shared), Some(left), Some(right)) =
        (substitutions(&j.shared, true), substitutions(&j.left_ctx, false), substitutions(&j.right_ctx, false))
    else {
        return Verdict::Unsupported;
    };
    let (t1, t2) = (canonicalize(&j.left), canonicalize(&j.right));
    let eval = |t: &CanonicalDistribution, s1: &Substitution, s2: &Substitution| -> Option<Option<CanonicalDistribution>> {
        let mut sigma = s1.clone();
        sigma.extend(s2.iter().cloned());
        let ts = parallel_bilinear_subst(t, &sigma).ok()?;
        let nf = normalize(&ts, cfg.fuel).into_result().ok()?;
        // stuck terms have no value, so the condition holds vacuously
        Some(nf.is_value_distribution().then_some(nf))
    };
    for s in &shared {
        let mut lefts = Vec::new();
        for s1 in &left {
            match eval(&t1, s, s1) {
                None => return Verdict::Unsupported,
                Some(v) => lefts.extend(v),
            }
        }
        for s2 in &right {
            let v2 = match eval(&t2, s, s2) {
                None => return Verdict::Unsupported,
                Some(None) => continue,
                Some(Some(v)) => v,
            };
            if lefts.iter().any(|v1| inner_unchecked(v1, &v2).abs() > cfg.eps) {
                return Verdict::No;
            }
        }
    }
    Verdict::Yes
}

/// Decides an orthogonality judgment: both component judgments hold and the
/// outputs are orthogonal.
pub fn check_orthogonality(j: &OrthogonalityJudgment, cfg: &Config) -> Verdict {
    let (Ok(l), Ok(r)) = (j.left_judgment(), j.right_judgment()) else {
        return Verdict::No;
    };
    let v = validate_semantically(&l, cfg).and(validate_semantically(&r, cfg));
    if v == Verdict::No {
        return v;
    }
    v.and(orthogonal_outputs(j, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::Prelude;
    use crate::typing::judgment::{parse_judgment, parse_orthogonality};

    fn valid(s: &str) -> Verdict {
        validate_semantically(&parse_judgment(s, &Prelude).unwrap(), &Config::default())
    }

    fn orth(s: &str) -> Verdict {
        check_orthogonality(&parse_orthogonality(s, &Prelude).unwrap(), &Config::default())
    }

    #[test]
    fn semantic_validity() {
        assert_eq!(valid("x:#B |- H x : #B"), Verdict::Yes);
        assert_eq!(valid("|- tt : B"), Verdict::Yes);
        assert_eq!(valid("x:#B |- (x, x) : #B * #B"), Verdict::No);
        // the cloned state lies in the span of the product basis
        assert_eq!(valid("x:#B |- (x, x) : #B (x) #B"), Verdict::Yes);
        assert_eq!(valid("x:#B |- tt : #B"), Verdict::No);
        assert_eq!(valid("x:B |- tt : #B"), Verdict::Yes);
        assert_eq!(valid("f:#B -> #B |- f tt : #B"), Verdict::Unsupported);
    }

    #[test]
    fn orthogonality() {
        assert_eq!(orth("|- <tt _|_ ff> : B"), Verdict::Yes);
        assert_eq!(orth("|- <|+> _|_ |->> : #B"), Verdict::Yes);
        assert_eq!(orth("|- <x:#U | x; |+> _|_ y:#U | y; |->> : #B"), Verdict::Yes);
        assert_eq!(orth("|- <tt _|_ |+>> : #B"), Verdict::No);
        // a shared superposed variable breaks orthogonality
        assert_eq!(orth("y:#B |- <y _|_ N y> : #B"), Verdict::No);
        assert_eq!(orth("y:B |- <y _|_ N y> : B"), Verdict::Yes);
    }

    #[test]
    fn shapes() {
        let t = |s: &str| shape(&crate::syntax::parse_term(s).unwrap());
        assert!(t("tt").disjoint(&t("ff")));
        assert!(t("(lam z. inl z) ()").disjoint(&t("x; ff")));
        assert!(!t("|+>").disjoint(&t("ff")));
        assert!(t("(inl a, f y)").disjoint(&t("(inr b, y)")));
        assert!(!t("(inl a, f y)").disjoint(&t("(inl b, y)")));
    }
}

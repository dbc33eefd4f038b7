//! First-order unification over simple types, used by the derivation search
//! as a source of hints where a bidirectional pass has nothing to go on,
//! such as the type of an argument that a function discards.
//!
//! Hints are only guesses: modalities are erased and every arrow becomes
//! `→`. The search re-checks whatever it gets from here.

use super::context::Context;
use crate::semantics::Type;
use crate::syntax::{PureTerm, PureValue, RawDistribution, Var};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
enum Ty {
    Meta(usize),
    Unit,
    Sum(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Arrow(Box<Ty>, Box<Ty>),
}

fn erase(t: &Type) -> Ty {
    match t {
        Type::Unit => Ty::Unit,
        Type::Sum(a, b) => Ty::Sum(Box::new(erase(a)), Box::new(erase(b))),
        Type::Prod(a, b) => Ty::Prod(Box::new(erase(a)), Box::new(erase(b))),
        Type::PureArrow(a, b) | Type::UnitArrow(a, b) => Ty::Arrow(Box::new(erase(a)), Box::new(erase(b))),
        Type::Sharp(a) | Type::Flat(a) => erase(a),
    }
}

#[derive(Default)]
struct Unifier {
    metas: Vec<Option<Ty>>,
    env: HashMap<String, Ty>,
    names: usize,
}

impl Unifier {
    fn meta(&mut self) -> Ty {
        self.metas.push(None);
        Ty::Meta(self.metas.len() - 1)
    }

    fn name(&mut self) -> String {
        self.names += 1;
        format!("·{}", self.names)
    }

    fn shallow(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Meta(i) = t {
            match &self.metas[i] {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, i: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Meta(j) => i == j,
            Ty::Unit => false,
            Ty::Sum(a, b) | Ty::Prod(a, b) | Ty::Arrow(a, b) => self.occurs(i, &a) || self.occurs(i, &b),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Option<()> {
        match (self.shallow(a), self.shallow(b)) {
            (Ty::Meta(i), Ty::Meta(j)) if i == j => Some(()),
            (Ty::Meta(i), t) | (t, Ty::Meta(i)) => {
                if self.occurs(i, &t) {
                    return None;
                }
                self.metas[i] = Some(t);
                Some(())
            }
            (Ty::Unit, Ty::Unit) => Some(()),
            (Ty::Sum(a1, b1), Ty::Sum(a2, b2))
            | (Ty::Prod(a1, b1), Ty::Prod(a2, b2))
            | (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => {
                self.unify(&a1, &a2)?;
                self.unify(&b1, &b2)
            }
            _ => None,
        }
    }

    /// Unconstrained parts become `U`.
    fn resolve(&self, t: &Ty) -> Type {
        match self.shallow(t) {
            Ty::Meta(_) | Ty::Unit => Type::Unit,
            Ty::Sum(a, b) => Type::sum(self.resolve(&a), self.resolve(&b)),
            Ty::Prod(a, b) => Type::prod(self.resolve(&a), self.resolve(&b)),
            Ty::Arrow(a, b) => Type::arrow(self.resolve(&a), self.resolve(&b)),
        }
    }

    fn dist(&mut self, t: &RawDistribution) -> Option<Ty> {
        match t {
            RawDistribution::Zero => Some(self.meta()),
            RawDistribution::Single(p) => self.term(p),
            RawDistribution::Scale(_, a) => self.dist(a),
            RawDistribution::Sum(a, b) => {
                let (a, b) = (self.dist(a)?, self.dist(b)?);
                self.unify(&a, &b)?;
                Some(a)
            }
        }
    }

    fn bind(&mut self, body: &RawDistribution, tys: &[Ty]) -> Option<Ty> {
        let names: Vec<String> = tys.iter().map(|_| self.name()).collect();
        for (x, a) in names.iter().zip(tys) {
            self.env.insert(x.clone(), a.clone());
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.dist(&body.open_names(&refs))
    }

    fn value(&mut self, v: &PureValue) -> Option<Ty> {
        match v {
            PureValue::Var(Var::Free(x)) => Some(match self.env.get(x) {
                Some(a) => a.clone(),
                None => {
                    let a = self.meta();
                    self.env.insert(x.clone(), a.clone());
                    a
                }
            }),
            PureValue::Var(Var::Bound(_)) => None,
            PureValue::Void => Some(Ty::Unit),
            PureValue::Inl(x) => {
                let (a, b) = (self.value(x)?, self.meta());
                Some(Ty::Sum(Box::new(a), Box::new(b)))
            }
            PureValue::Inr(x) => {
                let (a, b) = (self.meta(), self.value(x)?);
                Some(Ty::Sum(Box::new(a), Box::new(b)))
            }
            PureValue::Pair(x, y) => Some(Ty::Prod(Box::new(self.value(x)?), Box::new(self.value(y)?))),
            PureValue::Lam(_, body) => {
                let a = self.meta();
                let b = self.bind(body, std::slice::from_ref(&a))?;
                Some(Ty::Arrow(Box::new(a), Box::new(b)))
            }
        }
    }

    fn term(&mut self, p: &PureTerm) -> Option<Ty> {
        match p {
            PureTerm::Val(v) => self.value(v),
            PureTerm::App(s, r) => {
                let (f, a, b) = (self.term(s)?, self.term(r)?, self.meta());
                self.unify(&f, &Ty::Arrow(Box::new(a), Box::new(b.clone())))?;
                Some(b)
            }
            PureTerm::Seq(a, s) => {
                let a = self.term(a)?;
                self.unify(&a, &Ty::Unit)?;
                self.dist(s)
            }
            PureTerm::LetPair(_, _, a, s) => {
                let (a, x, y) = (self.term(a)?, self.meta(), self.meta());
                self.unify(&a, &Ty::Prod(Box::new(x.clone()), Box::new(y.clone())))?;
                self.bind(s, &[x, y])
            }
            PureTerm::Match(a, _, s1, _, s2) => {
                let (a, x, y) = (self.term(a)?, self.meta(), self.meta());
                self.unify(&a, &Ty::Sum(Box::new(x.clone()), Box::new(y.clone())))?;
                let b1 = self.bind(s1, &[x])?;
                let b2 = self.bind(s2, &[y])?;
                self.unify(&b1, &b2)?;
                Some(b1)
            }
        }
    }

    fn with_context(ctx: &Context) -> Self {
        let mut u = Unifier::default();
        for (x, a) in ctx.bindings() {
            u.env.insert(x.clone(), erase(a));
        }
        u
    }
}

/// The argument type that lets `s r` be a `goal` under `ctx`.
pub(crate) fn argument(ctx: &Context, s: &RawDistribution, r: &RawDistribution, goal: &Type) -> Option<Type> {
    let mut u = Unifier::with_context(ctx);
    let (f, a) = (u.dist(s)?, u.dist(r)?);
    u.unify(&f, &Ty::Arrow(Box::new(a.clone()), Box::new(erase(goal))))?;
    Some(u.resolve(&a))
}

/// The type of `a` in `match a { inl x1 -> b1 | inr x2 -> b2 } : goal`, with
/// the branches already opened at `x1` and `x2`.
pub(crate) fn match_scrutinee(
    ctx: &Context,
    a: &RawDistribution,
    (x1, b1): (&str, &RawDistribution),
    (x2, b2): (&str, &RawDistribution),
    goal: &Type,
) -> Option<Type> {
    let mut u = Unifier::with_context(ctx);
    let (l, r) = (u.meta(), u.meta());
    let ta = u.dist(a)?;
    u.unify(&ta, &Ty::Sum(Box::new(l.clone()), Box::new(r.clone())))?;
    for (x, b, m) in [(x1, b1, l), (x2, b2, r)] {
        u.env.insert(x.to_string(), m);
        let tb = u.dist(b)?;
        u.unify(&tb, &erase(goal))?;
    }
    Some(u.resolve(&ta))
}

/// The type of `a` in `let (x, y) = a in body : goal`, with `body` opened.
pub(crate) fn pair_scrutinee(ctx: &Context, a: &RawDistribution, x: &str, y: &str, body: &RawDistribution, goal: &Type) -> Option<Type> {
    let mut u = Unifier::with_context(ctx);
    let (l, r) = (u.meta(), u.meta());
    let ta = u.dist(a)?;
    u.unify(&ta, &Ty::Prod(Box::new(l.clone()), Box::new(r.clone())))?;
    u.env.insert(x.to_string(), l);
    u.env.insert(y.to_string(), r);
    let tb = u.dist(body)?;
    u.unify(&tb, &erase(goal))?;
    Some(u.resolve(&ta))
}

use super::scalar::Scalar;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Binder name kept for printing only. All names compare equal, so two terms
/// that differ only in bound names are structurally identical.
#[derive(Clone, Debug, Default)]
pub struct Name(pub String);

impl Name {
    pub fn new(s: impl Into<String>) -> Name {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Name {}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

/// Variable occurrence. Bound variables are de Bruijn indices counted from
/// the innermost binder (a `let` pair binds two: the second component is 0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    Bound(usize),
    Free(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PureValue {
    Var(Var),
    Lam(Name, Box<RawDistribution>),
    Void,
    Pair(Box<PureValue>, Box<PureValue>),
    Inl(Box<PureValue>),
    Inr(Box<PureValue>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PureTerm {
    Val(PureValue),
    App(Box<PureTerm>, Box<PureTerm>),
    /// `t ; s`
    Seq(Box<PureTerm>, Box<RawDistribution>),
    /// `let (x, y) = t in s`
    LetPair(Name, Name, Box<PureTerm>, Box<RawDistribution>),
    /// `match t { inl x1 -> s1 | inr x2 -> s2 }`
    Match(
        Box<PureTerm>,
        Name,
        Box<RawDistribution>,
        Name,
        Box<RawDistribution>,
    ),
}

/// A distribution exactly as written; equality is structural up to bound
/// names, so the order and nesting of sums matter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RawDistribution {
    Zero,
    Single(PureTerm),
    Sum(Box<RawDistribution>, Box<RawDistribution>),
    Scale(Scalar, Box<RawDistribution>),
}

// ----- constructors -----

impl PureValue {
    pub fn var(x: &str) -> PureValue {
        PureValue::Var(Var::Free(x.to_string()))
    }

    /// `lam x. body`, where `x` occurs free in `body`.
    pub fn lam(x: &str, body: RawDistribution) -> PureValue {
        PureValue::Lam(Name::new(x), Box::new(body.close(&[x])))
    }

    pub fn pair(a: PureValue, b: PureValue) -> PureValue {
        PureValue::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(v: PureValue) -> PureValue {
        PureValue::Inl(Box::new(v))
    }

    pub fn inr(v: PureValue) -> PureValue {
        PureValue::Inr(Box::new(v))
    }

    pub fn tt() -> PureValue {
        PureValue::inl(PureValue::Void)
    }

    pub fn ff() -> PureValue {
        PureValue::inr(PureValue::Void)
    }

    pub fn term(self) -> PureTerm {
        PureTerm::Val(self)
    }

    pub fn dist(self) -> RawDistribution {
        RawDistribution::Single(PureTerm::Val(self))
    }

    pub fn is_free_var(&self) -> Option<&str> {
        match self {
            PureValue::Var(Var::Free(x)) => Some(x),
            _ => None,
        }
    }
}

impl PureTerm {
    pub fn var(x: &str) -> PureTerm {
        PureTerm::Val(PureValue::var(x))
    }

    pub fn app(s: PureTerm, t: PureTerm) -> PureTerm {
        PureTerm::App(Box::new(s), Box::new(t))
    }

    pub fn seq(t: PureTerm, s: RawDistribution) -> PureTerm {
        PureTerm::Seq(Box::new(t), Box::new(s))
    }

    /// `let (x, y) = t in s`, where `x` and `y` occur free in `s`.
    pub fn let_pair(x: &str, y: &str, t: PureTerm, s: RawDistribution) -> PureTerm {
        PureTerm::LetPair(
            Name::new(x),
            Name::new(y),
            Box::new(t),
            Box::new(s.close(&[x, y])),
        )
    }

    /// `match t { inl x1 -> s1 | inr x2 -> s2 }` with `x1`, `x2` free in the branches.
    pub fn match_(
        t: PureTerm,
        x1: &str,
        s1: RawDistribution,
        x2: &str,
        s2: RawDistribution,
    ) -> PureTerm {
        PureTerm::Match(
            Box::new(t),
            Name::new(x1),
            Box::new(s1.close(&[x1])),
            Name::new(x2),
            Box::new(s2.close(&[x2])),
        )
    }

    /// `if t then a else b`, sugar for a match whose branches discard the unit payload.
    pub fn if_(t: PureTerm, a: RawDistribution, b: RawDistribution) -> PureTerm {
        let (a, b) = (a.shift(1), b.shift(1));
        PureTerm::Match(
            Box::new(t),
            Name::new("x1"),
            Box::new(RawDistribution::Single(PureTerm::seq(
                PureTerm::Val(PureValue::Var(Var::Bound(0))),
                a,
            ))),
            Name::new("x2"),
            Box::new(RawDistribution::Single(PureTerm::seq(
                PureTerm::Val(PureValue::Var(Var::Bound(0))),
                b,
            ))),
        )
    }

    pub fn dist(self) -> RawDistribution {
        RawDistribution::Single(self)
    }

    pub fn as_value(&self) -> Option<&PureValue> {
        match self {
            PureTerm::Val(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, PureTerm::Val(_))
    }
}

impl RawDistribution {
    pub fn single(t: PureTerm) -> RawDistribution {
        RawDistribution::Single(t)
    }

    pub fn sum(a: RawDistribution, b: RawDistribution) -> RawDistribution {
        RawDistribution::Sum(Box::new(a), Box::new(b))
    }

    pub fn scale(c: impl Into<Scalar>, d: RawDistribution) -> RawDistribution {
        RawDistribution::Scale(c.into(), Box::new(d))
    }

    /// Left-nested sum of the given summands; `Zero` when empty.
    pub fn sum_all(items: impl IntoIterator<Item = RawDistribution>) -> RawDistribution {
        let mut it = items.into_iter();
        match it.next() {
            None => RawDistribution::Zero,
            Some(first) => it.fold(first, RawDistribution::sum),
        }
    }

    /// `Σ c·t` as a left-nested raw sum.
    pub fn linear_combination(
        items: impl IntoIterator<Item = (Scalar, PureTerm)>,
    ) -> RawDistribution {
        RawDistribution::sum_all(
            items
                .into_iter()
                .map(|(c, t)| RawDistribution::scale(c, RawDistribution::Single(t))),
        )
    }

    /// Pure terms at the leaves, left to right.
    pub fn leaves(&self) -> Vec<&PureTerm> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a RawDistribution, out: &mut Vec<&'a PureTerm>) {
            match d {
                RawDistribution::Zero => {}
                RawDistribution::Single(t) => out.push(t),
                RawDistribution::Sum(a, b) => {
                    go(a, out);
                    go(b, out)
                }
                RawDistribution::Scale(_, a) => go(a, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Replaces every leaf by a distribution, keeping the sum/scale skeleton.
    pub fn map_leaves(&self, f: &mut dyn FnMut(&PureTerm) -> RawDistribution) -> RawDistribution {
        match self {
            RawDistribution::Zero => RawDistribution::Zero,
            RawDistribution::Single(t) => f(t),
            RawDistribution::Sum(a, b) => {
                let a = a.map_leaves(f);
                RawDistribution::sum(a, b.map_leaves(f))
            }
            RawDistribution::Scale(c, a) => RawDistribution::Scale(*c, Box::new(a.map_leaves(f))),
        }
    }

    pub fn try_map_leaves(
        &self,
        f: &mut dyn FnMut(&PureTerm) -> Result<RawDistribution>,
    ) -> Result<RawDistribution> {
        Ok(match self {
            RawDistribution::Zero => RawDistribution::Zero,
            RawDistribution::Single(t) => f(t)?,
            RawDistribution::Sum(a, b) => {
                let a = a.try_map_leaves(f)?;
                RawDistribution::sum(a, b.try_map_leaves(f)?)
            }
            RawDistribution::Scale(c, a) => {
                RawDistribution::Scale(*c, Box::new(a.try_map_leaves(f)?))
            }
        })
    }

    pub fn is_value_distribution(&self) -> bool {
        self.leaves().iter().all(|t| t.is_value())
    }

    pub fn as_single(&self) -> Option<&PureTerm> {
        match self {
            RawDistribution::Single(t) => Some(t),
            _ => None,
        }
    }
}

// ----- lifting of constructors to distributions -----

/// Bilinear application `s⃗ t⃗`.
pub fn raw_app(s: &RawDistribution, t: &RawDistribution) -> RawDistribution {
    s.map_leaves(&mut |f| {
        t.map_leaves(&mut |a| RawDistribution::Single(PureTerm::app(f.clone(), a.clone())))
    })
}

fn value_leaf<'a>(t: &'a PureTerm, what: &str) -> Result<&'a PureValue> {
    t.as_value()
        .ok_or_else(|| Error::Shape(format!("{what} expects value distributions")))
}

/// Bilinear pair of two value distributions.
pub fn raw_pair(a: &RawDistribution, b: &RawDistribution) -> Result<RawDistribution> {
    a.try_map_leaves(&mut |x| {
        let x = value_leaf(x, "pair")?.clone();
        b.try_map_leaves(&mut |y| {
            let y = value_leaf(y, "pair")?.clone();
            Ok(PureValue::pair(x.clone(), y).dist())
        })
    })
}

pub fn raw_inl(a: &RawDistribution) -> Result<RawDistribution> {
    a.try_map_leaves(&mut |x| Ok(PureValue::inl(value_leaf(x, "inl")?.clone()).dist()))
}

pub fn raw_inr(a: &RawDistribution) -> Result<RawDistribution> {
    a.try_map_leaves(&mut |x| Ok(PureValue::inr(value_leaf(x, "inr")?.clone()).dist()))
}

/// `t⃗ ; s⃗`, linear in `t⃗` only.
pub fn raw_seq(t: &RawDistribution, s: &RawDistribution) -> RawDistribution {
    t.map_leaves(&mut |x| RawDistribution::Single(PureTerm::Seq(Box::new(x.clone()), Box::new(s.clone()))))
}

/// `let (x, y) = t⃗ in body`, where `body` is already closed over both binders.
pub fn raw_let(t: &RawDistribution, x: &Name, y: &Name, body: &RawDistribution) -> RawDistribution {
    t.map_leaves(&mut |s| {
        RawDistribution::Single(PureTerm::LetPair(
            x.clone(),
            y.clone(),
            Box::new(s.clone()),
            Box::new(body.clone()),
        ))
    })
}

/// `match t⃗ {..}`, where both branches are already closed over their binder.
pub fn raw_match(
    t: &RawDistribution,
    x1: &Name,
    s1: &RawDistribution,
    x2: &Name,
    s2: &RawDistribution,
) -> RawDistribution {
    t.map_leaves(&mut |s| {
        RawDistribution::Single(PureTerm::Match(
            Box::new(s.clone()),
            x1.clone(),
            Box::new(s1.clone()),
            x2.clone(),
            Box::new(s2.clone()),
        ))
    })
}

/// Pair of arbitrary distributions. Value distributions give a plain pair;
/// otherwise the components are evaluated through abstractions, left first:
/// `(λa. (λb. (a, b)) r) t`.
pub fn pair_or_encode(a: &RawDistribution, b: &RawDistribution) -> RawDistribution {
    if a.is_value_distribution() && b.is_value_distribution() {
        return raw_pair(a, b).expect("value distributions");
    }
    let bv = |i| PureValue::Var(Var::Bound(i));
    if a.is_value_distribution() {
        let f = a.map_leaves(&mut |v| {
            let body = PureValue::pair(v.as_value().unwrap().shift(1), bv(0)).dist();
            PureValue::Lam(Name::new("b"), Box::new(body)).dist()
        });
        return raw_app(&f, b);
    }
    let inner = PureValue::Lam(Name::new("b"), Box::new(PureValue::pair(bv(1), bv(0)).dist()));
    let outer_body = raw_app(&inner.dist(), &b.shift(1));
    raw_app(&PureValue::Lam(Name::new("a"), Box::new(outer_body)).dist(), a)
}

/// `inl t⃗` for arbitrary `t⃗`, through `(λa. inl a) t` when `t⃗` is not a value.
pub fn inl_or_encode(a: &RawDistribution) -> RawDistribution {
    match raw_inl(a) {
        Ok(d) => d,
        Err(_) => raw_app(
            &PureValue::Lam(Name::new("a"), Box::new(PureValue::inl(PureValue::Var(Var::Bound(0))).dist())).dist(),
            a,
        ),
    }
}

pub fn inr_or_encode(a: &RawDistribution) -> RawDistribution {
    match raw_inr(a) {
        Ok(d) => d,
        Err(_) => raw_app(
            &PureValue::Lam(Name::new("a"), Box::new(PureValue::inr(PureValue::Var(Var::Bound(0))).dist())).dist(),
            a,
        ),
    }
}

// ----- variable traversal -----

type VarFn<'a> = dyn Fn(&Var, usize) -> Option<PureValue> + 'a;

impl PureValue {
    fn map_vars(&self, depth: usize, f: &VarFn) -> PureValue {
        match self {
            PureValue::Var(v) => f(v, depth).unwrap_or_else(|| self.clone()),
            PureValue::Lam(n, b) => PureValue::Lam(n.clone(), Box::new(b.map_vars(depth + 1, f))),
            PureValue::Void => PureValue::Void,
            PureValue::Pair(a, b) => PureValue::pair(a.map_vars(depth, f), b.map_vars(depth, f)),
            PureValue::Inl(a) => PureValue::inl(a.map_vars(depth, f)),
            PureValue::Inr(a) => PureValue::inr(a.map_vars(depth, f)),
        }
    }

    fn visit_vars(&self, depth: usize, f: &mut dyn FnMut(&Var, usize)) {
        match self {
            PureValue::Var(v) => f(v, depth),
            PureValue::Lam(_, b) => b.visit_vars(depth + 1, f),
            PureValue::Void => {}
            PureValue::Pair(a, b) => {
                a.visit_vars(depth, f);
                b.visit_vars(depth, f)
            }
            PureValue::Inl(a) | PureValue::Inr(a) => a.visit_vars(depth, f),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(0, &mut |v, _| {
            if let Var::Free(x) = v {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Adds `k` to every bound index that escapes `self`.
    pub fn shift(&self, k: usize) -> PureValue {
        self.map_vars(0, &|v, depth| match v {
            Var::Bound(j) if *j >= depth => Some(PureValue::Var(Var::Bound(j + k))),
            _ => None,
        })
    }

    /// Replaces the free variable `x` by `w`.
    pub fn subst_free(&self, x: &str, w: &PureValue) -> PureValue {
        self.map_vars(0, &|v, _| match v {
            Var::Free(y) if y == x => Some(w.clone()),
            _ => None,
        })
    }
}

impl PureTerm {
    fn map_vars(&self, depth: usize, f: &VarFn) -> PureTerm {
        match self {
            PureTerm::Val(v) => PureTerm::Val(v.map_vars(depth, f)),
            PureTerm::App(s, t) => PureTerm::app(s.map_vars(depth, f), t.map_vars(depth, f)),
            PureTerm::Seq(t, s) => PureTerm::Seq(Box::new(t.map_vars(depth, f)), Box::new(s.map_vars(depth, f))),
            PureTerm::LetPair(x, y, t, s) => PureTerm::LetPair(
                x.clone(),
                y.clone(),
                Box::new(t.map_vars(depth, f)),
                Box::new(s.map_vars(depth + 2, f)),
            ),
            PureTerm::Match(t, x1, s1, x2, s2) => PureTerm::Match(
                Box::new(t.map_vars(depth, f)),
                x1.clone(),
                Box::new(s1.map_vars(depth + 1, f)),
                x2.clone(),
                Box::new(s2.map_vars(depth + 1, f)),
            ),
        }
    }

    fn visit_vars(&self, depth: usize, f: &mut dyn FnMut(&Var, usize)) {
        match self {
            PureTerm::Val(v) => v.visit_vars(depth, f),
            PureTerm::App(s, t) => {
                s.visit_vars(depth, f);
                t.visit_vars(depth, f)
            }
            PureTerm::Seq(t, s) => {
                t.visit_vars(depth, f);
                s.visit_vars(depth, f)
            }
            PureTerm::LetPair(_, _, t, s) => {
                t.visit_vars(depth, f);
                s.visit_vars(depth + 2, f)
            }
            PureTerm::Match(t, _, s1, _, s2) => {
                t.visit_vars(depth, f);
                s1.visit_vars(depth + 1, f);
                s2.visit_vars(depth + 1, f)
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(0, &mut |v, _| {
            if let Var::Free(x) = v {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn subst_free(&self, x: &str, w: &PureValue) -> PureTerm {
        self.map_vars(0, &|v, _| match v {
            Var::Free(y) if y == x => Some(w.clone()),
            _ => None,
        })
    }

    /// Renames the free variable `x` to `y`.
    pub fn rename_free(&self, x: &str, y: &str) -> PureTerm {
        self.subst_free(x, &PureValue::var(y))
    }
}

impl RawDistribution {
    fn map_vars(&self, depth: usize, f: &VarFn) -> RawDistribution {
        match self {
            RawDistribution::Zero => RawDistribution::Zero,
            RawDistribution::Single(t) => RawDistribution::Single(t.map_vars(depth, f)),
            RawDistribution::Sum(a, b) => RawDistribution::sum(a.map_vars(depth, f), b.map_vars(depth, f)),
            RawDistribution::Scale(c, a) => RawDistribution::Scale(*c, Box::new(a.map_vars(depth, f))),
        }
    }

    fn visit_vars(&self, depth: usize, f: &mut dyn FnMut(&Var, usize)) {
        for t in self.leaves() {
            t.visit_vars(depth, f);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(0, &mut |v, _| {
            if let Var::Free(x) = v {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Adds `k` to every bound index that escapes `self`, for moving it under
    /// `k` new binders.
    pub fn shift(&self, k: usize) -> RawDistribution {
        if k == 0 {
            return self.clone();
        }
        self.map_vars(0, &|v, depth| match v {
            Var::Bound(j) if *j >= depth => Some(PureValue::Var(Var::Bound(j + k))),
            _ => None,
        })
    }

    /// True when no bound index escapes its binder.
    pub fn is_locally_closed(&self) -> bool {
        let mut ok = true;
        self.visit_vars(0, &mut |v, depth| {
            if let Var::Bound(i) = v {
                if *i >= depth {
                    ok = false;
                }
            }
        });
        ok
    }

    /// Turns the free names into bound indices for a binder of `names.len()`
    /// variables placed directly around `self` (last name is index 0).
    pub fn close(&self, names: &[&str]) -> RawDistribution {
        let n = names.len();
        self.map_vars(0, &|v, depth| match v {
            Var::Free(x) => names
                .iter()
                .position(|y| y == x)
                .map(|i| PureValue::Var(Var::Bound(depth + n - 1 - i))),
            _ => None,
        })
    }

    /// Instantiates the binder around `self` with `vals` (last value is index 0).
    /// The values must be locally closed.
    pub fn open(&self, vals: &[PureValue]) -> RawDistribution {
        let n = vals.len();
        self.map_vars(0, &|v, depth| match v {
            Var::Bound(j) if *j >= depth && *j - depth < n => Some(vals[n - 1 - (*j - depth)].clone()),
            Var::Bound(j) if *j >= depth + n => Some(PureValue::Var(Var::Bound(*j - n))),
            _ => None,
        })
    }

    /// Opens the binder with fresh free names.
    pub fn open_names(&self, names: &[&str]) -> RawDistribution {
        let vals: Vec<PureValue> = names.iter().map(|x| PureValue::var(x)).collect();
        self.open(&vals)
    }

    /// Pure substitution `self[x := w]`, extended linearly.
    pub fn subst_free(&self, x: &str, w: &PureValue) -> RawDistribution {
        self.map_vars(0, &|v, _| match v {
            Var::Free(y) if y == x => Some(w.clone()),
            _ => None,
        })
    }

    pub fn rename_free(&self, x: &str, y: &str) -> RawDistribution {
        self.subst_free(x, &PureValue::var(y))
    }
}

/// A name not in `avoid`, based on `hint`.
pub fn fresh_name(hint: &str, avoid: &BTreeSet<String>) -> String {
    let base: String = hint.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'').to_string();
    let base = if base.is_empty() { "v".to_string() } else { base };
    if !avoid.contains(hint) && !hint.is_empty() {
        return hint.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !avoid.contains(c))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalent_abstractions_are_equal() {
        let a = PureValue::lam("x", PureTerm::var("x").dist());
        let b = PureValue::lam("y", PureTerm::var("y").dist());
        assert_eq!(a, b);
        let c = PureValue::lam("x", PureTerm::var("y").dist());
        assert_ne!(a, c);
    }

    #[test]
    fn open_after_close_round_trips() {
        let body = RawDistribution::sum(PureTerm::var("x").dist(), PureTerm::var("z").dist());
        let closed = body.close(&["x"]);
        assert_eq!(closed.free_vars().into_iter().collect::<Vec<_>>(), vec!["z".to_string()]);
        assert_eq!(closed.open_names(&["x"]), body);
    }

    #[test]
    fn substitution_does_not_capture() {
        // (λy. x y)[x := y] keeps the inner y bound
        let t = PureValue::lam("y", PureTerm::app(PureTerm::var("x"), PureTerm::var("y")).dist());
        let s = t.subst_free("x", &PureValue::var("y"));
        let PureValue::Lam(_, body) = &s else { panic!() };
        let PureTerm::App(f, a) = body.as_single().unwrap() else { panic!() };
        assert_eq!(**f, PureTerm::var("y"));
        assert_eq!(**a, PureTerm::Val(PureValue::Var(Var::Bound(0))));
    }

    #[test]
    fn pair_of_non_values_is_rejected() {
        let app = PureTerm::app(PureTerm::var("f"), PureTerm::var("x")).dist();
        assert!(matches!(raw_pair(&app, &PureValue::tt().dist()), Err(Error::Shape(_))));
        assert!(!pair_or_encode(&app, &PureValue::tt().dist()).is_value_distribution());
    }
}

use super::types::QType;
use crate::syntax::fresh_name;
use std::collections::BTreeSet;
use std::fmt;

/// Which basis state of the control qubit triggers a controlled operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires on `|0⟩ = tt`, like the `ctl` term of the prelude.
    Zero,
    /// Fires on `|1⟩ = ff`.
    One,
}

impl Polarity {
    pub fn keyword(self) -> &'static str {
        match self {
            Polarity::Zero => "ctl",
            Polarity::One => "ctl1",
        }
    }

    /// The basis bit that triggers the operation.
    pub fn bit(self) -> bool {
        self == Polarity::One
    }
}

/// Terms of the quantum lambda calculus, with named variables.
#[derive(Clone, Debug, PartialEq)]
pub enum QTerm {
    Var(String),
    Star,
    Lam(String, Option<QType>, Box<QTerm>),
    App(Box<QTerm>, Box<QTerm>),
    Pair(Box<QTerm>, Box<QTerm>),
    /// `fst` (`true`) or `snd` (`false`).
    Proj(bool, Box<QTerm>),
    Tt,
    Ff,
    If(Box<QTerm>, Box<QTerm>, Box<QTerm>),
    Tensor(Box<QTerm>, Box<QTerm>),
    LetTensor(String, String, Box<QTerm>, Box<QTerm>),
    New(Box<QTerm>),
    /// A named single-qubit gate from the gate table.
    Gate(String, Box<QTerm>),
    LamQ(String, Option<QType>, Box<QTerm>),
    At(Box<QTerm>, Box<QTerm>),
    Ctl(Polarity, Box<QTerm>),
    /// Run-time form of `ctl(v) @ (c ⊗ w)`: `body` computes `v @ w` while
    /// every gate is conditioned on the qubit `c`.
    Controlled { control: String, polarity: Polarity, input: Box<QTerm>, body: Box<QTerm> },
}

fn b(t: QTerm) -> Box<QTerm> {
    Box::new(t)
}

impl QTerm {
    pub fn var(x: &str) -> QTerm {
        QTerm::Var(x.to_string())
    }

    pub fn lam(x: &str, t: QTerm) -> QTerm {
        QTerm::Lam(x.to_string(), None, b(t))
    }

    pub fn lamq(x: &str, t: QTerm) -> QTerm {
        QTerm::LamQ(x.to_string(), None, b(t))
    }

    pub fn app(s: QTerm, t: QTerm) -> QTerm {
        QTerm::App(b(s), b(t))
    }

    pub fn at(s: QTerm, t: QTerm) -> QTerm {
        QTerm::At(b(s), b(t))
    }

    pub fn pair(s: QTerm, t: QTerm) -> QTerm {
        QTerm::Pair(b(s), b(t))
    }

    pub fn tensor(s: QTerm, t: QTerm) -> QTerm {
        QTerm::Tensor(b(s), b(t))
    }

    pub fn let_tensor(x: &str, y: &str, s: QTerm, t: QTerm) -> QTerm {
        QTerm::LetTensor(x.to_string(), y.to_string(), b(s), b(t))
    }

    pub fn if_(c: QTerm, t: QTerm, e: QTerm) -> QTerm {
        QTerm::If(b(c), b(t), b(e))
    }

    pub fn new_(t: QTerm) -> QTerm {
        QTerm::New(b(t))
    }

    pub fn gate(g: &str, t: QTerm) -> QTerm {
        QTerm::Gate(g.to_string(), b(t))
    }

    pub fn ctl(p: Polarity, t: QTerm) -> QTerm {
        QTerm::Ctl(p, b(t))
    }

    pub fn proj(first: bool, t: QTerm) -> QTerm {
        QTerm::Proj(first, b(t))
    }

    /// `x, ⋆, λx.t, λ^Q x.t, (u, v), u ⊗ v`, booleans and `ctl(v)`.
    pub fn is_value(&self) -> bool {
        match self {
            QTerm::Var(_) | QTerm::Star | QTerm::Lam(..) | QTerm::LamQ(..) | QTerm::Tt | QTerm::Ff => true,
            QTerm::Pair(u, v) | QTerm::Tensor(u, v) => u.is_value() && v.is_value(),
            QTerm::Ctl(_, v) => v.is_value(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            QTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            QTerm::Star | QTerm::Tt | QTerm::Ff => {}
            QTerm::Lam(x, _, t) | QTerm::LamQ(x, _, t) => {
                bound.push(x.clone());
                t.collect_free(bound, out);
                bound.pop();
            }
            QTerm::LetTensor(x, y, s, t) => {
                s.collect_free(bound, out);
                bound.push(x.clone());
                bound.push(y.clone());
                t.collect_free(bound, out);
                bound.truncate(bound.len() - 2);
            }
            QTerm::App(s, t) | QTerm::Pair(s, t) | QTerm::Tensor(s, t) | QTerm::At(s, t) => {
                s.collect_free(bound, out);
                t.collect_free(bound, out);
            }
            QTerm::Proj(_, t) | QTerm::New(t) | QTerm::Gate(_, t) | QTerm::Ctl(_, t) => t.collect_free(bound, out),
            QTerm::If(c, t, e) => {
                c.collect_free(bound, out);
                t.collect_free(bound, out);
                e.collect_free(bound, out);
            }
            QTerm::Controlled { control, input, body, .. } => {
                if !bound.contains(control) {
                    out.insert(control.clone());
                }
                input.collect_free(bound, out);
                body.collect_free(bound, out);
            }
        }
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = self.free_vars();
        self.visit_binders(&mut |x| {
            out.insert(x.to_string());
        });
        out
    }

    fn visit_binders(&self, f: &mut dyn FnMut(&str)) {
        match self {
            QTerm::Lam(x, _, t) | QTerm::LamQ(x, _, t) => {
                f(x);
                t.visit_binders(f);
            }
            QTerm::LetTensor(x, y, s, t) => {
                f(x);
                f(y);
                s.visit_binders(f);
                t.visit_binders(f);
            }
            QTerm::App(s, t) | QTerm::Pair(s, t) | QTerm::Tensor(s, t) | QTerm::At(s, t) => {
                s.visit_binders(f);
                t.visit_binders(f);
            }
            QTerm::Proj(_, t) | QTerm::New(t) | QTerm::Gate(_, t) | QTerm::Ctl(_, t) => t.visit_binders(f),
            QTerm::If(c, t, e) => {
                c.visit_binders(f);
                t.visit_binders(f);
                e.visit_binders(f);
            }
            QTerm::Controlled { input, body, .. } => {
                input.visit_binders(f);
                body.visit_binders(f);
            }
            QTerm::Var(_) | QTerm::Star | QTerm::Tt | QTerm::Ff => {}
        }
    }

    /// Capture-avoiding `self[x := u]`.
    pub fn subst(&self, x: &str, u: &QTerm) -> QTerm {
        let fu = u.free_vars();
        self.subst_with(x, u, &fu)
    }

    /// Simultaneous substitution of distinct variables.
    pub fn subst_many(&self, pairs: &[(String, QTerm)]) -> QTerm {
        // rename the targets apart first so the substitutions cannot interact
        let mut avoid = self.all_names();
        for (x, u) in pairs {
            avoid.insert(x.clone());
            avoid.extend(u.all_names());
        }
        let mut tmp = Vec::new();
        let mut t = self.clone();
        for (x, _) in pairs {
            let z = fresh_name(&format!("{x}_"), &avoid);
            avoid.insert(z.clone());
            t = t.subst(x, &QTerm::Var(z.clone()));
            tmp.push(z);
        }
        for (z, (_, u)) in tmp.iter().zip(pairs) {
            t = t.subst(z, u);
        }
        t
    }

    fn subst_with(&self, x: &str, u: &QTerm, fu: &BTreeSet<String>) -> QTerm {
        let go = |t: &QTerm| t.subst_with(x, u, fu);
        match self {
            QTerm::Var(y) => {
                if y == x {
                    u.clone()
                } else {
                    self.clone()
                }
            }
            QTerm::Star | QTerm::Tt | QTerm::Ff => self.clone(),
            QTerm::Lam(y, a, t) | QTerm::LamQ(y, a, t) => {
                let quantum = matches!(self, QTerm::LamQ(..));
                let rebuild = |y: String, t: QTerm| {
                    if quantum {
                        QTerm::LamQ(y, a.clone(), b(t))
                    } else {
                        QTerm::Lam(y, a.clone(), b(t))
                    }
                };
                if y == x {
                    return self.clone();
                }
                let (y2, t2) = self.avoid_capture(y, t, x, fu);
                rebuild(y2, go(&t2))
            }
            QTerm::LetTensor(y1, y2, s, t) => {
                let s2 = go(s);
                if y1 == x || y2 == x {
                    return QTerm::LetTensor(y1.clone(), y2.clone(), b(s2), t.clone());
                }
                let (n1, t1) = self.avoid_capture(y1, t, x, fu);
                let (n2, t1) = self.avoid_capture(y2, &t1, x, fu);
                QTerm::LetTensor(n1, n2, b(s2), b(go(&t1)))
            }
            QTerm::App(s, t) => QTerm::App(b(go(s)), b(go(t))),
            QTerm::Pair(s, t) => QTerm::Pair(b(go(s)), b(go(t))),
            QTerm::Tensor(s, t) => QTerm::Tensor(b(go(s)), b(go(t))),
            QTerm::At(s, t) => QTerm::At(b(go(s)), b(go(t))),
            QTerm::Proj(i, t) => QTerm::Proj(*i, b(go(t))),
            QTerm::New(t) => QTerm::New(b(go(t))),
            QTerm::Gate(g, t) => QTerm::Gate(g.clone(), b(go(t))),
            QTerm::Ctl(p, t) => QTerm::Ctl(*p, b(go(t))),
            QTerm::If(c, t, e) => QTerm::If(b(go(c)), b(go(t)), b(go(e))),
            QTerm::Controlled { control, polarity, input, body } => {
                let control = match u {
                    QTerm::Var(z) if control == x => z.clone(),
                    _ => control.clone(),
                };
                QTerm::Controlled { control, polarity: *polarity, input: b(go(input)), body: b(go(body)) }
            }
        }
    }

    /// Renames binder `y` of `body` when it would capture a free variable
    /// of the substituted term.
    fn avoid_capture(&self, y: &str, body: &QTerm, x: &str, fu: &BTreeSet<String>) -> (String, QTerm) {
        if !fu.contains(y) {
            return (y.to_string(), body.clone());
        }
        let mut avoid = body.all_names();
        avoid.extend(fu.iter().cloned());
        avoid.insert(x.to_string());
        let z = fresh_name(y, &avoid);
        let body = body.subst(y, &QTerm::Var(z.clone()));
        (z, body)
    }

    /// Variables of a tensor value, left to right.
    pub fn tensor_leaves(&self) -> Option<Vec<String>> {
        match self {
            QTerm::Var(x) => Some(vec![x.clone()]),
            QTerm::Tensor(a, c) => {
                let mut l = a.tensor_leaves()?;
                l.extend(c.tensor_leaves()?);
                Some(l)
            }
            _ => None,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            QTerm::Var(_) | QTerm::Star | QTerm::Tt | QTerm::Ff => 0,
            QTerm::Lam(_, _, t) | QTerm::LamQ(_, _, t) | QTerm::Proj(_, t) | QTerm::New(t) | QTerm::Gate(_, t) | QTerm::Ctl(_, t) => {
                t.size()
            }
            QTerm::App(s, t) | QTerm::Pair(s, t) | QTerm::Tensor(s, t) | QTerm::At(s, t) | QTerm::LetTensor(_, _, s, t) => {
                s.size() + t.size()
            }
            QTerm::If(c, t, e) => c.size() + t.size() + e.size(),
            QTerm::Controlled { input, body, .. } => input.size() + body.size(),
        }
    }
}

// Precedence levels: 0 binders, 1 tensor, 2 `@`, 3 application, 4 atoms.
fn write_term(t: &QTerm, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match t {
        QTerm::Lam(..) | QTerm::LamQ(..) | QTerm::If(..) | QTerm::LetTensor(..) => 0,
        QTerm::Tensor(..) => 1,
        QTerm::At(..) => 2,
        QTerm::App(..) => 3,
        _ => 4,
    };
    if level < prec {
        f.write_str("(")?;
    }
    match t {
        QTerm::Var(x) => f.write_str(x)?,
        QTerm::Star => f.write_str("()")?,
        QTerm::Tt => f.write_str("tt")?,
        QTerm::Ff => f.write_str("ff")?,
        QTerm::Lam(x, a, body) | QTerm::LamQ(x, a, body) => {
            let kw = if matches!(t, QTerm::Lam(..)) { "lam" } else { "lamq" };
            write!(f, "{kw} {x}")?;
            if let Some(a) = a {
                write!(f, ":{a}")?;
            }
            f.write_str(". ")?;
            write_term(body, 0, f)?;
        }
        QTerm::If(c, a, e) => {
            f.write_str("if ")?;
            write_term(c, 0, f)?;
            f.write_str(" then ")?;
            write_term(a, 0, f)?;
            f.write_str(" else ")?;
            write_term(e, 0, f)?;
        }
        QTerm::LetTensor(x, y, s, body) => {
            write!(f, "let {x} (x) {y} = ")?;
            write_term(s, 0, f)?;
            f.write_str(" in ")?;
            write_term(body, 0, f)?;
        }
        QTerm::Tensor(a, c) => {
            write_term(a, 2, f)?;
            f.write_str(" (x) ")?;
            write_term(c, 1, f)?;
        }
        QTerm::At(s, r) => {
            write_term(s, 2, f)?;
            f.write_str(" @ ")?;
            write_term(r, 3, f)?;
        }
        QTerm::App(s, r) => {
            write_term(s, 3, f)?;
            f.write_str(" ")?;
            write_term(r, 4, f)?;
        }
        QTerm::Pair(a, c) => {
            f.write_str("(")?;
            write_term(a, 0, f)?;
            f.write_str(", ")?;
            write_term(c, 0, f)?;
            f.write_str(")")?;
        }
        QTerm::Proj(first, s) => {
            f.write_str(if *first { "fst(" } else { "snd(" })?;
            write_term(s, 0, f)?;
            f.write_str(")")?;
        }
        QTerm::New(s) => {
            f.write_str("new(")?;
            write_term(s, 0, f)?;
            f.write_str(")")?;
        }
        QTerm::Gate(g, s) => {
            write!(f, "{g}(")?;
            write_term(s, 0, f)?;
            f.write_str(")")?;
        }
        QTerm::Ctl(p, s) => {
            write!(f, "{}(", p.keyword())?;
            write_term(s, 0, f)?;
            f.write_str(")")?;
        }
        QTerm::Controlled { control, polarity, input, body } => {
            write!(f, "{}_run({control}, ", polarity.keyword())?;
            write_term(input, 0, f)?;
            f.write_str(", ")?;
            write_term(body, 0, f)?;
            f.write_str(")")?;
        }
    }
    if level < prec {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for QTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_avoids_capture() {
        let t = QTerm::lam("y", QTerm::pair(QTerm::var("x"), QTerm::var("y")));
        let s = t.subst("x", &QTerm::var("y"));
        let QTerm::Lam(z, _, body) = &s else { panic!() };
        assert_ne!(z, "y");
        assert_eq!(**body, QTerm::pair(QTerm::var("y"), QTerm::var(z)));
        // shadowed occurrences are untouched
        let t = QTerm::lam("x", QTerm::var("x"));
        assert_eq!(t.subst("x", &QTerm::Tt), t);
    }

    #[test]
    fn simultaneous_substitution() {
        let t = QTerm::tensor(QTerm::var("x"), QTerm::var("y"));
        let s = t.subst_many(&[("x".into(), QTerm::var("y")), ("y".into(), QTerm::var("x"))]);
        assert_eq!(s, QTerm::tensor(QTerm::var("y"), QTerm::var("x")));
    }

    #[test]
    fn values() {
        assert!(QTerm::tensor(QTerm::var("x"), QTerm::var("y")).is_value());
        assert!(!QTerm::new_(QTerm::Tt).is_value());
        assert!(QTerm::ctl(Polarity::Zero, QTerm::lamq("y", QTerm::var("y"))).is_value());
    }
}

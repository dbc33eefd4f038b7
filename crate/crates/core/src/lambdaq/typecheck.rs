//! Classical judgments `Δ ⊢_C t : A` and quantum judgments
//! `Δ | Γ ⊢_Q t : A_Q`. Abstractions without annotations are accepted
//! where the expected domain is known from the surrounding term.

use super::term::QTerm;
use super::types::QType;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

pub type TypeCtx = BTreeMap<String, QType>;

#[derive(Clone, Debug)]
enum Hint {
    None,
    Exact(QType),
    /// Only the argument type of an expected arrow or closure is known.
    Domain(QType),
}

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Type(msg.into()))
}

fn expect(t: QType, hint: &Hint, term: &QTerm) -> Result<QType> {
    match hint {
        Hint::Exact(e) if *e != t => err(format!("`{term}` has type {t}, expected {e}")),
        _ => Ok(t),
    }
}

/// `Δ ⊢_C t : A`.
pub fn typecheck_classical(delta: &TypeCtx, t: &QTerm) -> Result<QType> {
    classical(delta, t, &Hint::None)
}

/// `Δ | Γ ⊢_Q t : A_Q`; `Δ` and `Γ` must be disjoint.
pub fn typecheck_quantum(delta: &TypeCtx, gamma: &TypeCtx, t: &QTerm) -> Result<QType> {
    if let Some(x) = delta.keys().find(|x| gamma.contains_key(*x)) {
        return err(format!("`{x}` is both classical and quantum"));
    }
    if let Some((x, a)) = gamma.iter().find(|(_, a)| !a.is_quantum()) {
        return err(format!("quantum context binds `{x}` at classical type {a}"));
    }
    quantum(delta, gamma, t, &Hint::None)
}

/// Checks `t` against `a` in either judgment form, whichever `a` calls for.
pub fn check_type(delta: &TypeCtx, gamma: &TypeCtx, t: &QTerm, a: &QType) -> Result<()> {
    let got = if a.is_quantum() {
        quantum(delta, gamma, t, &Hint::Exact(a.clone()))?
    } else {
        if !gamma.is_empty() {
            return err("a classical judgment has no quantum context");
        }
        classical(delta, t, &Hint::Exact(a.clone()))?
    };
    expect(got, &Hint::Exact(a.clone()), t).map(|_| ())
}

fn classical(delta: &TypeCtx, t: &QTerm, hint: &Hint) -> Result<QType> {
    let ty = match t {
        QTerm::Var(x) => match delta.get(x) {
            Some(a) => a.clone(),
            None => return err(format!("`{x}` is not a classical variable in scope")),
        },
        QTerm::Star => QType::Unit,
        QTerm::Tt | QTerm::Ff => QType::Bit,
        QTerm::Lam(x, ann, body) => {
            let (dom, cod) = match (ann, hint) {
                (Some(a), Hint::Exact(QType::Arrow(_, b))) => (a.clone(), Hint::Exact((**b).clone())),
                (Some(a), _) => (a.clone(), Hint::None),
                (None, Hint::Exact(QType::Arrow(a, b))) => ((**a).clone(), Hint::Exact((**b).clone())),
                (None, Hint::Domain(a)) => (a.clone(), Hint::None),
                (None, _) => return err(format!("cannot infer the type of `{x}`; annotate it as `lam {x}:A. …`")),
            };
            if !dom.is_classical() {
                return err(format!("`lam {x}` binds quantum type {dom}; use lamq"));
            }
            let mut d = delta.clone();
            d.insert(x.clone(), dom.clone());
            QType::arrow(dom, classical(&d, body, &cod)?)
        }
        QTerm::App(s, r) => {
            let f = match classical(delta, s, &Hint::None) {
                Ok(f) => f,
                Err(e) => {
                    // an unannotated function: learn its domain from the argument
                    let a = classical(delta, r, &Hint::None).map_err(|_| e)?;
                    classical(delta, s, &Hint::Domain(a))?
                }
            };
            let QType::Arrow(a, b) = f else { return err(format!("`{s}` is not a function")) };
            classical(delta, r, &Hint::Exact(*a))?;
            *b
        }
        QTerm::Pair(a, c) => {
            let (ha, hc) = match hint {
                Hint::Exact(QType::Prod(x, y)) => (Hint::Exact((**x).clone()), Hint::Exact((**y).clone())),
                _ => (Hint::None, Hint::None),
            };
            QType::prod(classical(delta, a, &ha)?, classical(delta, c, &hc)?)
        }
        QTerm::Proj(first, s) => match classical(delta, s, &Hint::None)? {
            QType::Prod(a, b) => {
                if *first {
                    *a
                } else {
                    *b
                }
            }
            other => return err(format!("`{s}` has type {other}, not a product")),
        },
        QTerm::If(c, a, e) => {
            classical(delta, c, &Hint::Exact(QType::Bit))?;
            let ta = classical(delta, a, hint)?;
            classical(delta, e, &Hint::Exact(ta.clone()))?
        }
        QTerm::LamQ(x, ann, body) => {
            let (dom, cod) = match (ann, hint) {
                (Some(a), Hint::Exact(QType::Lolli(_, b))) => (a.clone(), Hint::Exact((**b).clone())),
                (Some(a), _) => (a.clone(), Hint::None),
                (None, Hint::Exact(QType::Lolli(a, b))) => ((**a).clone(), Hint::Exact((**b).clone())),
                (None, Hint::Domain(a)) => (a.clone(), Hint::None),
                (None, _) => return err(format!("cannot infer the type of `{x}`; annotate it as `lamq {x}:A. …`")),
            };
            if !dom.is_quantum() {
                return err(format!("`lamq {x}` binds classical type {dom}"));
            }
            let mut d = delta.clone();
            d.remove(x);
            let g = TypeCtx::from([(x.clone(), dom.clone())]);
            QType::lolli(dom, quantum(&d, &g, body, &cod)?)
        }
        QTerm::Ctl(_, s) => {
            let inner = match hint {
                Hint::Exact(QType::Lolli(a, b)) => match (&**a, &**b) {
                    (QType::Tensor(q1, a), QType::Tensor(q2, b)) if **q1 == QType::Qbit && **q2 == QType::Qbit => {
                        Hint::Exact(QType::lolli((**a).clone(), (**b).clone()))
                    }
                    _ => Hint::None,
                },
                Hint::Domain(QType::Tensor(q, a)) if **q == QType::Qbit => Hint::Domain((**a).clone()),
                _ => Hint::None,
            };
            match classical(delta, s, &inner)? {
                QType::Lolli(a, b) => QType::lolli(QType::tensor(QType::Qbit, *a), QType::tensor(QType::Qbit, *b)),
                other => return err(format!("ctl expects a closure of type A -o B, got {other}")),
            }
        }
        QTerm::Tensor(..)
        | QTerm::LetTensor(..)
        | QTerm::New(_)
        | QTerm::Gate(..)
        | QTerm::At(..)
        | QTerm::Controlled { .. } => return err(format!("`{t}` is a quantum term in a classical judgment")),
    };
    expect(ty, hint, t)
}

fn restrict(gamma: &TypeCtx, names: &BTreeSet<String>) -> TypeCtx {
    gamma.iter().filter(|(x, _)| names.contains(*x)).map(|(x, a)| (x.clone(), a.clone())).collect()
}

/// Splits `Γ` between two subterms, rejecting shared quantum variables.
fn split(gamma: &TypeCtx, s: &QTerm, r: &QTerm, r_bound: &[&String]) -> Result<(TypeCtx, TypeCtx)> {
    let fs = s.free_vars();
    let mut fr = r.free_vars();
    for x in r_bound {
        fr.remove(*x);
    }
    if let Some(x) = gamma.keys().find(|x| fs.contains(*x) && fr.contains(*x)) {
        return err(format!("quantum variable `{x}` is used more than once"));
    }
    Ok((restrict(gamma, &fs), restrict(gamma, &fr)))
}

fn no_quantum(gamma: &TypeCtx, t: &QTerm) -> Result<()> {
    let fv = t.free_vars();
    match gamma.keys().find(|x| fv.contains(*x)) {
        Some(x) => err(format!("quantum variable `{x}` occurs in the classical term `{t}`")),
        None => Ok(()),
    }
}

fn quantum(delta: &TypeCtx, gamma: &TypeCtx, t: &QTerm, hint: &Hint) -> Result<QType> {
    let fv = t.free_vars();
    if let Some(x) = gamma.keys().find(|x| !fv.contains(*x)) {
        return err(format!("quantum variable `{x}` is not used in `{t}`"));
    }
    let ty = match t {
        QTerm::Var(x) => match gamma.get(x) {
            Some(a) if gamma.len() == 1 => a.clone(),
            Some(_) => return err(format!("unused quantum variables alongside `{x}`")),
            None if delta.contains_key(x) => return err(format!("classical variable `{x}` used as a quantum term")),
            None => return err(format!("unbound variable `{x}`")),
        },
        QTerm::Tensor(s, r) => {
            let (g1, g2) = split(gamma, s, r, &[])?;
            let (h1, h2) = match hint {
                Hint::Exact(QType::Tensor(a, b)) => (Hint::Exact((**a).clone()), Hint::Exact((**b).clone())),
                _ => (Hint::None, Hint::None),
            };
            QType::tensor(quantum(delta, &g1, s, &h1)?, quantum(delta, &g2, r, &h2)?)
        }
        QTerm::Gate(_, s) => {
            quantum(delta, gamma, s, &Hint::Exact(QType::Qbit))?;
            QType::Qbit
        }
        QTerm::LetTensor(x, y, s, body) => {
            if x == y {
                return err(format!("let binds `{x}` twice"));
            }
            let (g1, mut g2) = split(gamma, s, body, &[x, y])?;
            let QType::Tensor(a, b) = quantum(delta, &g1, s, &Hint::None)? else {
                return err(format!("`{s}` is not a tensor"));
            };
            g2.insert(x.clone(), *a);
            g2.insert(y.clone(), *b);
            let mut d = delta.clone();
            d.remove(x);
            d.remove(y);
            quantum(&d, &g2, body, hint)?
        }
        QTerm::New(s) => {
            if !gamma.is_empty() {
                return err(format!("new(…) uses quantum variables {:?}", gamma.keys().collect::<Vec<_>>()));
            }
            classical(delta, s, &Hint::Exact(QType::Bit))?;
            QType::Qbit
        }
        QTerm::At(s, r) => {
            no_quantum(gamma, s)?;
            let a = quantum(delta, gamma, r, &Hint::None)?;
            match classical(delta, s, &Hint::Domain(a.clone()))? {
                QType::Lolli(a2, b) if *a2 == a => *b,
                QType::Lolli(a2, _) => return err(format!("`{s}` expects {a2}, got {a}")),
                other => return err(format!("`{s}` has type {other}, not a closure A -o B")),
            }
        }
        QTerm::If(c, a, e) => {
            no_quantum(gamma, c)?;
            classical(delta, c, &Hint::Exact(QType::Bit))?;
            let ta = quantum(delta, gamma, a, hint)?;
            quantum(delta, gamma, e, &Hint::Exact(ta.clone()))?
        }
        QTerm::Controlled { control, input, body, .. } => {
            if gamma.get(control) != Some(&QType::Qbit) {
                return err(format!("control `{control}` is not a qubit of the context"));
            }
            let mut rest = gamma.clone();
            rest.remove(control);
            if input.free_vars().contains(control) || body.free_vars().contains(control) {
                return err(format!("control `{control}` is used inside the controlled computation"));
            }
            quantum(delta, &rest, input, &Hint::None)?;
            QType::tensor(QType::Qbit, quantum(delta, &rest, body, &Hint::None)?)
        }
        QTerm::Star
        | QTerm::Tt
        | QTerm::Ff
        | QTerm::Lam(..)
        | QTerm::LamQ(..)
        | QTerm::App(..)
        | QTerm::Pair(..)
        | QTerm::Proj(..)
        | QTerm::Ctl(..) => return err(format!("`{t}` is a classical term in a quantum judgment")),
    };
    expect(ty, hint, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambdaq::gates::GateTable;
    use crate::lambdaq::parse::parse_qterm;
    use crate::lambdaq::types::parse_qtype;

    fn q(src: &str, wires: &[&str]) -> Result<QType> {
        let t = parse_qterm(src, &GateTable::standard()).unwrap();
        let g = wires.iter().map(|w| (w.to_string(), QType::Qbit)).collect();
        typecheck_quantum(&TypeCtx::new(), &g, &t)
    }

    fn c(src: &str) -> Result<QType> {
        typecheck_classical(&TypeCtx::new(), &parse_qterm(src, &GateTable::standard()).unwrap())
    }

    #[test]
    fn quantum_rules() {
        assert_eq!(q("x (x) y", &["x", "y"]).unwrap(), QType::qbits(2));
        assert!(q("x (x) x", &["x"]).is_err());
        assert!(q("x", &["x", "y"]).is_err());
        assert_eq!(q("H(new(tt))", &[]).unwrap(), QType::Qbit);
        assert_eq!(q("let a (x) b = x (x) y in b (x) a", &["x", "y"]).unwrap(), QType::qbits(2));
        assert_eq!(q("(lamq z. X(z)) @ x", &["x"]).unwrap(), QType::Qbit);
        assert_eq!(q("if tt then x else H(x)", &["x"]).unwrap(), QType::Qbit);
        assert!(q("if x then x else x", &["x"]).is_err());
        assert!(q("new(x)", &["x"]).is_err());
        assert_eq!(q("ctl1(lamq y. X(y)) @ (H(new(tt)) (x) new(tt))", &[]).unwrap(), QType::qbits(2));
    }

    #[test]
    fn classical_rules() {
        assert_eq!(c("lamq x:qbit. H(x)").unwrap(), parse_qtype("qbit -o qbit").unwrap());
        assert_eq!(c("(lam b:bit. if b then ff else tt) tt").unwrap(), QType::Bit);
        assert_eq!(c("(lam f. f tt) (lam b:bit. b)").unwrap(), QType::Bit);
        assert!(c("lam f. f tt").unwrap_err().to_string().contains("annotate"));
        assert_eq!(c("snd((tt, ()))").unwrap(), QType::Unit);
        assert_eq!(
            c("ctl(lamq y:qbit. y)").unwrap(),
            parse_qtype("qbit (x) qbit -o qbit (x) qbit").unwrap()
        );
        assert!(c("new(tt)").is_err());
    }
}

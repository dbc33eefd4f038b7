//! Compilation of λ_Q terms and programs into distributions.
//!
//! Qubits become booleans (`tt` is |0⟩), a quantum function `A ⊸ B` becomes a
//! thunk `() → (⟦A⟧ ⇒ ⟦B⟧)`, and a gate becomes the unitary match on its
//! matrix columns.

use super::gates::{GateTable, Matrix2};
use super::program::Program;
use super::term::{Polarity, QTerm};
use crate::error::{Error, Result};
use crate::prelude::Prelude;
use crate::syntax::term::{pair_or_encode, raw_app, raw_let, raw_match, raw_seq};
use crate::syntax::{canonicalize, fresh_name, CanonicalDistribution, Definitions, Name, PureValue, RawDistribution};
use std::collections::BTreeSet;

fn unit() -> RawDistribution {
    PureValue::Void.dist()
}

fn var(x: &str) -> RawDistribution {
    PureValue::var(x).dist()
}

fn lam(x: &str, body: &RawDistribution) -> RawDistribution {
    PureValue::Lam(Name::new(x), Box::new(body.close(&[x]))).dist()
}

fn fresh2(a: &str, b: &str, avoid: &BTreeSet<String>) -> (String, String) {
    let x = fresh_name(a, avoid);
    let mut avoid = avoid.clone();
    avoid.insert(x.clone());
    (x.clone(), fresh_name(b, &avoid))
}

/// `λx. match x { inl x1 → m00·inl x1 + m10·inr x1 | inr x2 → m01·inl x2 + m11·inr x2 }`
pub fn gate_term(m: &Matrix2) -> RawDistribution {
    let column = |z: &str, col: usize| {
        let v = PureValue::var(z);
        RawDistribution::sum(
            RawDistribution::scale(m[0][col], PureValue::inl(v.clone()).dist()),
            RawDistribution::scale(m[1][col], PureValue::inr(v).dist()),
        )
        .close(&[z])
    };
    let body = raw_match(&var("x"), &Name::new("x1"), &column("x1", 0), &Name::new("x2"), &column("x2", 1));
    lam("x", &body)
}

/// The distribution of a single term; free variables stay free.
pub fn translate_term(t: &QTerm, gates: &GateTable) -> Result<RawDistribution> {
    let tr = |u: &QTerm| translate_term(u, gates);
    Ok(match t {
        QTerm::Var(x) => var(x),
        QTerm::Star => unit(),
        QTerm::Tt => PureValue::tt().dist(),
        QTerm::Ff => PureValue::ff().dist(),
        QTerm::Lam(x, _, body) => lam(x, &tr(body)?),
        QTerm::App(s, r) => raw_app(&tr(s)?, &tr(r)?),
        QTerm::Pair(a, b) | QTerm::Tensor(a, b) => pair_or_encode(&tr(a)?, &tr(b)?),
        QTerm::Proj(first, s) => {
            let (x1, x2) = ("x1", "x2");
            let body = if *first { var(x1) } else { var(x2) };
            raw_let(&tr(s)?, &Name::new(x1), &Name::new(x2), &body.close(&[x1, x2]))
        }
        QTerm::If(c, a, b) => {
            let (a, b) = (tr(a)?, tr(b)?);
            let mut avoid = a.free_vars();
            avoid.extend(b.free_vars());
            let (z1, z2) = fresh2("z1", "z2", &avoid);
            raw_match(
                &tr(c)?,
                &Name::new(&z1),
                &raw_seq(&var(&z1), &a).close(&[&z1]),
                &Name::new(&z2),
                &raw_seq(&var(&z2), &b).close(&[&z2]),
            )
        }
        QTerm::LetTensor(x, y, s, body) => {
            raw_let(&tr(s)?, &Name::new(x), &Name::new(y), &tr(body)?.close(&[x, y]))
        }
        QTerm::New(s) => tr(s)?,
        QTerm::Gate(g, s) => {
            let m = gates.get(g).ok_or_else(|| Error::Type(format!("unknown gate `{g}`")))?;
            raw_app(&gate_term(&m), &tr(s)?)
        }
        QTerm::LamQ(x, _, body) => {
            let inner = lam(x, &tr(body)?);
            let z = fresh_name("z", &inner.free_vars());
            lam(&z, &inner)
        }
        QTerm::At(s, r) => raw_app(&raw_app(&tr(s)?, &unit()), &tr(r)?),
        QTerm::Ctl(p, s) => {
            let op = Prelude.lookup(p.keyword()).expect("prelude defines both controls");
            let body = raw_app(&op, &raw_app(&tr(s)?, &unit()));
            let z = fresh_name("z", &body.free_vars());
            lam(&z, &body)
        }
        QTerm::Controlled { control, polarity, input, body } => {
            let (fired, idle) = (tr(body)?, tr(input)?);
            let mut avoid = fired.free_vars();
            avoid.extend(idle.free_vars());
            let (z1, z2) = fresh2("z1", "z2", &avoid);
            let (on_tt, on_ff) = match polarity {
                Polarity::Zero => (&fired, &idle),
                Polarity::One => (&idle, &fired),
            };
            let branch = |z: &str, tag: PureValue, rest: &RawDistribution| pair_or_encode(&tag.dist(), rest).close(&[z]);
            raw_match(
                &var(control),
                &Name::new(&z1),
                &branch(&z1, PureValue::inl(PureValue::var(&z1)), on_tt),
                &Name::new(&z2),
                &branch(&z2, PureValue::inr(PureValue::var(&z2)), on_ff),
            )
        }
    })
}

/// `Σ α_b · ⟦t⟧[x := b_x]` over the basis components of the state.
pub fn translate_program(p: &Program, gates: &GateTable) -> Result<CanonicalDistribution> {
    let t = translate_term(&p.term, gates)?;
    let mut parts = Vec::new();
    for (bits, alpha) in p.state.components() {
        let mut d = t.clone();
        for (x, &w) in &p.wires {
            let v = if bits[w - 1] { PureValue::ff() } else { PureValue::tt() };
            d = d.subst_free(x, &v);
        }
        parts.push(RawDistribution::scale(alpha, d));
    }
    Ok(canonicalize(&RawDistribution::sum_all(parts)))
}

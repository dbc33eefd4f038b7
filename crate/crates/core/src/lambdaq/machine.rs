//! Call-by-value reduction of programs `[Q, L, t]`.

use super::gates::GateTable;
use super::program::Program;
use super::term::QTerm;
use crate::error::{Error, Result};
use crate::syntax::fresh_name;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepRule {
    Beta,
    BetaQ,
    Proj1,
    Proj2,
    IfTrue,
    IfFalse,
    LetTensor,
    NewTrue,
    NewFalse,
    Gate,
    /// `ctl(v) @ (c ⊗ w)` starts a controlled run of `v @ w`.
    CtlEnter,
    /// A controlled run returned its value.
    CtlExit,
}

impl StepRule {
    pub const ALL: [StepRule; 12] = [
        StepRule::Beta,
        StepRule::BetaQ,
        StepRule::Proj1,
        StepRule::Proj2,
        StepRule::IfTrue,
        StepRule::IfFalse,
        StepRule::LetTensor,
        StepRule::NewTrue,
        StepRule::NewFalse,
        StepRule::Gate,
        StepRule::CtlEnter,
        StepRule::CtlExit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StepRule::Beta => "beta",
            StepRule::BetaQ => "beta-q",
            StepRule::Proj1 => "proj1",
            StepRule::Proj2 => "proj2",
            StepRule::IfTrue => "if-tt",
            StepRule::IfFalse => "if-ff",
            StepRule::LetTensor => "let-tensor",
            StepRule::NewTrue => "new-tt",
            StepRule::NewFalse => "new-ff",
            StepRule::Gate => "gate",
            StepRule::CtlEnter => "ctl-enter",
            StepRule::CtlExit => "ctl-exit",
        }
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Machine<'a> {
    p: Program,
    gates: &'a GateTable,
    /// `(wire, bit)` conditions of the enclosing controlled runs.
    controls: Vec<(usize, bool)>,
}

fn stuck<T>(t: &QTerm, why: &str) -> Result<T> {
    Err(Error::Stuck(format!("{why}: `{t}`")))
}

fn b(t: QTerm) -> Box<QTerm> {
    Box::new(t)
}

impl Machine<'_> {
    fn reduce(&mut self, t: &QTerm) -> Result<(QTerm, StepRule)> {
        match t {
            QTerm::App(s, r) => {
                if !r.is_value() {
                    let (r2, k) = self.reduce(r)?;
                    return Ok((QTerm::App(s.clone(), b(r2)), k));
                }
                if !s.is_value() {
                    let (s2, k) = self.reduce(s)?;
                    return Ok((QTerm::App(b(s2), r.clone()), k));
                }
                match &**s {
                    QTerm::Lam(x, _, body) => Ok((body.subst(x, r), StepRule::Beta)),
                    _ => stuck(t, "application of a non-function"),
                }
            }
            QTerm::At(s, r) => {
                if !r.is_value() {
                    let (r2, k) = self.reduce(r)?;
                    return Ok((QTerm::At(s.clone(), b(r2)), k));
                }
                if !s.is_value() {
                    let (s2, k) = self.reduce(s)?;
                    return Ok((QTerm::At(b(s2), r.clone()), k));
                }
                match &**s {
                    QTerm::LamQ(x, _, body) => Ok((body.subst(x, r), StepRule::BetaQ)),
                    QTerm::Ctl(polarity, v) => match &**r {
                        QTerm::Tensor(c, w) => match &**c {
                            QTerm::Var(control) => Ok((
                                QTerm::Controlled {
                                    control: control.clone(),
                                    polarity: *polarity,
                                    input: w.clone(),
                                    body: b(QTerm::At(v.clone(), w.clone())),
                                },
                                StepRule::CtlEnter,
                            )),
                            _ => stuck(t, "control is not a qubit"),
                        },
                        _ => stuck(t, "ctl applied to a non-tensor"),
                    },
                    _ => stuck(t, "@ of a non-closure"),
                }
            }
            QTerm::Pair(a, c) => {
                if !a.is_value() {
                    let (a2, k) = self.reduce(a)?;
                    return Ok((QTerm::Pair(b(a2), c.clone()), k));
                }
                let (c2, k) = self.reduce(c)?;
                Ok((QTerm::Pair(a.clone(), b(c2)), k))
            }
            QTerm::Tensor(a, c) => {
                if !a.is_value() {
                    let (a2, k) = self.reduce(a)?;
                    return Ok((QTerm::Tensor(b(a2), c.clone()), k));
                }
                let (c2, k) = self.reduce(c)?;
                Ok((QTerm::Tensor(a.clone(), b(c2)), k))
            }
            QTerm::Proj(first, s) => {
                if !s.is_value() {
                    let (s2, k) = self.reduce(s)?;
                    return Ok((QTerm::Proj(*first, b(s2)), k));
                }
                match &**s {
                    QTerm::Pair(u, _) if *first => Ok(((**u).clone(), StepRule::Proj1)),
                    QTerm::Pair(_, v) => Ok(((**v).clone(), StepRule::Proj2)),
                    _ => stuck(t, "projection of a non-pair"),
                }
            }
            QTerm::If(c, x, y) => {
                if !c.is_value() {
                    let (c2, k) = self.reduce(c)?;
                    return Ok((QTerm::If(b(c2), x.clone(), y.clone()), k));
                }
                match &**c {
                    QTerm::Tt => Ok(((**x).clone(), StepRule::IfTrue)),
                    QTerm::Ff => Ok(((**y).clone(), StepRule::IfFalse)),
                    _ => stuck(t, "test of a non-boolean"),
                }
            }
            QTerm::LetTensor(x, y, s, body) => {
                if !s.is_value() {
                    let (s2, k) = self.reduce(s)?;
                    return Ok((QTerm::LetTensor(x.clone(), y.clone(), b(s2), body.clone()), k));
                }
                match &**s {
                    QTerm::Tensor(u, v) => Ok((
                        body.subst_many(&[(x.clone(), (**u).clone()), (y.clone(), (**v).clone())]),
                        StepRule::LetTensor,
                    )),
                    _ => stuck(t, "let-tensor of a non-tensor"),
                }
            }
            QTerm::New(s) => {
                if !s.is_value() {
                    let (s2, k) = self.reduce(s)?;
                    return Ok((QTerm::New(b(s2)), k));
                }
                let (bit, rule) = match &**s {
                    QTerm::Tt => (false, StepRule::NewTrue),
                    QTerm::Ff => (true, StepRule::NewFalse),
                    _ => return stuck(t, "new of a non-boolean"),
                };
                if !self.controls.is_empty() {
                    return stuck(t, "qubit allocation inside a controlled run");
                }
                let n = self.p.state.qubits() + 1;
                let mut avoid = self.p.term.all_names();
                avoid.extend(self.p.wires.keys().cloned());
                let x = fresh_name(&format!("q{n}"), &avoid);
                self.p.state.push(bit);
                self.p.wires.insert(x.clone(), n);
                Ok((QTerm::Var(x), rule))
            }
            QTerm::Gate(g, s) => {
                if !s.is_value() {
                    let (s2, k) = self.reduce(s)?;
                    return Ok((QTerm::Gate(g.clone(), b(s2)), k));
                }
                let QTerm::Var(x) = &**s else { return stuck(t, "gate applied to a non-qubit") };
                let m = self.gates.get(g).ok_or_else(|| Error::Stuck(format!("unknown gate `{g}`")))?;
                let w = self.p.wire(x)?;
                self.p.state.apply(&m, w, &self.controls);
                Ok(((**s).clone(), StepRule::Gate))
            }
            QTerm::Ctl(p, s) => {
                let (s2, k) = self.reduce(s)?;
                Ok((QTerm::Ctl(*p, b(s2)), k))
            }
            QTerm::Controlled { control, polarity, input, body } => {
                let cw = self.p.wire(control)?;
                if !body.is_value() {
                    self.controls.push((cw, polarity.bit()));
                    let r = self.reduce(body);
                    self.controls.pop();
                    let (body2, k) = r?;
                    return Ok((
                        QTerm::Controlled {
                            control: control.clone(),
                            polarity: *polarity,
                            input: input.clone(),
                            body: b(body2),
                        },
                        k,
                    ));
                }
                let (Some(ins), Some(outs)) = (input.tensor_leaves(), body.tensor_leaves()) else {
                    return stuck(t, "controlled run did not return qubits");
                };
                let mut sorted_in = ins.clone();
                let mut sorted_out = outs.clone();
                sorted_in.sort();
                sorted_out.sort();
                if sorted_in != sorted_out {
                    return stuck(t, "controlled run changed its qubits");
                }
                if ins != outs {
                    // where the control did not fire, the qubits must come out in input order
                    let from = ins.iter().map(|x| self.p.wire(x)).collect::<Result<Vec<_>>>()?;
                    let to = outs.iter().map(|x| self.p.wire(x)).collect::<Result<Vec<_>>>()?;
                    let mut ctl = self.controls.clone();
                    ctl.push((cw, !polarity.bit()));
                    self.p.state.permute(&from, &to, &ctl);
                }
                Ok((QTerm::tensor(QTerm::Var(control.clone()), (**body).clone()), StepRule::CtlExit))
            }
            QTerm::Var(_) | QTerm::Star | QTerm::Tt | QTerm::Ff | QTerm::Lam(..) | QTerm::LamQ(..) => {
                stuck(t, "no redex in a value")
            }
        }
    }
}

/// One reduction step, or `None` when the term is a value.
pub fn step(p: &Program, gates: &GateTable) -> Result<Option<(Program, StepRule)>> {
    if p.term.is_value() {
        return Ok(None);
    }
    let mut m = Machine { p: p.clone(), gates, controls: Vec::new() };
    let (t, k) = m.reduce(&p.term)?;
    m.p.term = t;
    Ok(Some((m.p, k)))
}

/// Reduces to a value, recording the rule of every step.
pub fn run(p: &Program, gates: &GateTable, fuel: usize) -> Result<(Program, Vec<StepRule>)> {
    let mut cur = p.clone();
    let mut rules = Vec::new();
    while let Some((next, k)) = step(&cur, gates)? {
        if rules.len() == fuel {
            return Err(Error::OutOfFuel(fuel));
        }
        rules.push(k);
        cur = next;
    }
    Ok((cur, rules))
}

/// Like [`run`], but re-typechecks after every step and fails if the type
/// changes or a well-typed non-value is stuck.
pub fn run_checked(p: &Program, gates: &GateTable, fuel: usize) -> Result<(Program, Vec<StepRule>)> {
    let ty = p.typecheck()?;
    let mut cur = p.clone();
    let mut rules = Vec::new();
    loop {
        let next = step(&cur, gates).map_err(|e| Error::Stuck(format!("progress fails on {cur}: {e}")))?;
        let Some((next, k)) = next else { return Ok((cur, rules)) };
        if rules.len() == fuel {
            return Err(Error::OutOfFuel(fuel));
        }
        let ty2 = next.typecheck().map_err(|e| Error::Type(format!("preservation fails after {k} on {next}: {e}")))?;
        if ty2 != ty {
            return Err(Error::Type(format!("preservation fails after {k}: {ty} became {ty2}")));
        }
        rules.push(k);
        cur = next;
    }
}

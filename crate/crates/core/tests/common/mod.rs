//! Random generators and reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use linlam::config::Config;
use linlam::eval::{atomic_step, reducible_indices, step_summand};
use linlam::lambdaq::{translate_term, translate_type, GateTable, Polarity, Program, QTerm, QType, QuantumState};
use linlam::prelude::Prelude;
use linlam::typing::{Context, Derivation, Premise, TypingJudgment};
use linlam::semantics::Type;
use linlam::syntax::term::{inl_or_encode, inr_or_encode, pair_or_encode, raw_app, raw_let, raw_match, raw_seq};
use linlam::syntax::{canonicalize, parse_term_with, CanonicalDistribution, Name, PureTerm, PureValue, RawDistribution, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A scalar with real and imaginary parts in `{-2, -1.75, …, 2}`. Sums and
/// small products of such numbers are exact in binary floating point.
pub fn dyadic(r: &mut impl Rng) -> Scalar {
    let q = |r: &mut dyn rand::RngCore| f64::from(r.gen_range(-8i32..=8)) / 4.0;
    let re = q(r);
    let im = if r.gen_bool(0.3) { q(r) } else { 0.0 };
    Scalar::new(re, im)
}

pub fn gaussian_scalar(r: &mut impl Rng) -> Scalar {
    Scalar::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

fn name(r: &mut impl Rng) -> String {
    ["x", "y", "z", "f", "a"].choose(r).unwrap().to_string()
}

// ----- untyped syntax -----

pub fn untyped_value(r: &mut impl Rng, depth: usize, scope: &[String]) -> PureValue {
    let choice = if depth == 0 { r.gen_range(0..2) } else { r.gen_range(0..6) };
    match choice {
        0 if !scope.is_empty() => PureValue::var(scope.choose(r).unwrap()),
        0 | 1 => PureValue::Void,
        2 => {
            let x = name(r);
            let mut inner = scope.to_vec();
            inner.push(x.clone());
            PureValue::lam(&x, untyped_dist(r, depth - 1, &inner))
        }
        3 => PureValue::pair(untyped_value(r, depth - 1, scope), untyped_value(r, depth - 1, scope)),
        4 => PureValue::inl(untyped_value(r, depth - 1, scope)),
        _ => PureValue::inr(untyped_value(r, depth - 1, scope)),
    }
}

pub fn untyped_term(r: &mut impl Rng, depth: usize, scope: &[String]) -> PureTerm {
    if depth == 0 {
        return untyped_value(r, 0, scope).term();
    }
    let with = |extra: &[&String]| {
        let mut s = scope.to_vec();
        s.extend(extra.iter().map(|x| (*x).clone()));
        s
    };
    match r.gen_range(0..6) {
        0 | 1 => untyped_value(r, depth, scope).term(),
        2 => PureTerm::app(untyped_term(r, depth - 1, scope), untyped_term(r, depth - 1, scope)),
        3 => PureTerm::seq(untyped_term(r, depth - 1, scope), untyped_dist(r, depth - 1, scope)),
        4 => {
            let (x, y) = (name(r), name(r));
            let body = untyped_dist(r, depth - 1, &with(&[&x, &y]));
            PureTerm::let_pair(&x, &y, untyped_term(r, depth - 1, scope), body)
        }
        _ => {
            let (x1, x2) = (name(r), name(r));
            let s1 = untyped_dist(r, depth - 1, &with(&[&x1]));
            let s2 = untyped_dist(r, depth - 1, &with(&[&x2]));
            PureTerm::match_(untyped_term(r, depth - 1, scope), &x1, s1, &x2, s2)
        }
    }
}

pub fn untyped_dist(r: &mut impl Rng, depth: usize, scope: &[String]) -> RawDistribution {
    match r.gen_range(0..8) {
        0 if depth > 0 => RawDistribution::sum(untyped_dist(r, depth - 1, scope), untyped_dist(r, depth - 1, scope)),
        1 if depth > 0 => RawDistribution::scale(dyadic(r), untyped_dist(r, depth - 1, scope)),
        2 if r.gen_bool(0.2) => RawDistribution::Zero,
        _ => untyped_term(r, depth, scope).dist(),
    }
}

/// A random closed value distribution over data values.
pub fn data_value(r: &mut impl Rng, depth: usize) -> PureValue {
    match if depth == 0 { 0 } else { r.gen_range(0..4) } {
        0 => PureValue::Void,
        1 => PureValue::pair(data_value(r, depth - 1), data_value(r, depth - 1)),
        2 => PureValue::inl(data_value(r, depth - 1)),
        _ => PureValue::inr(data_value(r, depth - 1)),
    }
}

pub fn value_vector(r: &mut impl Rng, len: usize) -> CanonicalDistribution {
    let parts = (0..len).map(|_| RawDistribution::scale(gaussian_scalar(r), data_value(r, 3).dist()));
    canonicalize(&RawDistribution::sum_all(parts))
}

// ----- simply-typed terms -----

pub fn simple_type(r: &mut impl Rng, depth: usize) -> Type {
    match if depth == 0 { r.gen_range(0..2) } else { r.gen_range(0..5) } {
        0 => Type::Unit,
        1 => Type::bool(),
        2 => Type::prod(simple_type(r, depth - 1), simple_type(r, depth - 1)),
        3 => Type::sum(simple_type(r, depth - 1), simple_type(r, depth - 1)),
        _ => Type::arrow(simple_type(r, depth - 1), simple_type(r, depth - 1)),
    }
}

pub fn data_type(r: &mut impl Rng, depth: usize) -> Type {
    match if depth == 0 { r.gen_range(0..2) } else { r.gen_range(0..4) } {
        0 => Type::Unit,
        1 => Type::bool(),
        2 => Type::prod(data_type(r, depth - 1), data_type(r, depth - 1)),
        _ => Type::sum(data_type(r, depth - 1), data_type(r, depth - 1)),
    }
}

/// Generator of simply-typed terms. Every β-redex and every destructed term
/// has a head whose type follows from its syntax, since the calculus has
/// no annotations to recover the type of an abstraction passed around.
pub struct Simple<'a, R: Rng> {
    pub r: &'a mut R,
    /// Adds scalar combinations of terms of the same type.
    pub superpose: bool,
    /// Probability of an elimination form where one is allowed.
    pub elim: f64,
    counter: usize,
}

impl<'a, R: Rng> Simple<'a, R> {
    pub fn new(r: &'a mut R, superpose: bool) -> Self {
        Simple { r, superpose, elim: 0.4, counter: 0 }
    }

    fn fresh(&mut self, hint: &str) -> String {
        self.counter += 1;
        format!("{hint}{}", self.counter)
    }

    /// A term of type `ty` in the context `ctx`.
    pub fn check(&mut self, ctx: &[(String, Type)], ty: &Type, depth: usize) -> RawDistribution {
        if self.superpose && depth > 0 && self.r.gen_bool(0.15) {
            let a = self.check(ctx, ty, depth - 1);
            let b = self.check(ctx, ty, depth - 1);
            return RawDistribution::sum(
                RawDistribution::scale(dyadic(self.r), a),
                RawDistribution::scale(dyadic(self.r), b),
            );
        }
        let vars: Vec<&String> = ctx.iter().filter(|(_, a)| a == ty).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.r.gen_bool(if depth == 0 { 0.8 } else { 0.3 }) {
            return PureValue::var(vars.choose(self.r).unwrap()).dist();
        }
        if depth > 0 && self.r.gen_bool(self.elim) {
            return self.eliminate(ctx, ty, depth);
        }
        self.introduce(ctx, ty, depth)
    }

    fn introduce(&mut self, ctx: &[(String, Type)], ty: &Type, depth: usize) -> RawDistribution {
        let d = depth.saturating_sub(1);
        match ty {
            Type::Unit => PureValue::Void.dist(),
            Type::Sum(a, b) => {
                if self.r.gen_bool(0.5) {
                    inl_or_encode(&self.check(ctx, a, d))
                } else {
                    inr_or_encode(&self.check(ctx, b, d))
                }
            }
            Type::Prod(a, b) => pair_or_encode(&self.check(ctx, a, d), &self.check(ctx, b, d)),
            Type::PureArrow(a, b) => {
                let x = self.fresh("x");
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), (**a).clone()));
                PureValue::lam(&x, self.check(&inner, b, d)).dist()
            }
            other => panic!("not a simple type: {other}"),
        }
    }

    fn eliminate(&mut self, ctx: &[(String, Type)], ty: &Type, depth: usize) -> RawDistribution {
        let d = depth - 1;
        match self.r.gen_range(0..5) {
            0 => {
                // a variable or a synthesised head applied to a checked argument
                let a = data_type(self.r, 1);
                let f = self.head(ctx, &Type::arrow(a.clone(), ty.clone()), d);
                raw_app(&f, &self.check(ctx, &a, d))
            }
            1 => {
                let (a, b) = (data_type(self.r, 1), data_type(self.r, 1));
                let s = self.head(ctx, &Type::sum(a.clone(), b.clone()), d);
                let (x1, x2) = (self.fresh("l"), self.fresh("r"));
                let mut c1 = ctx.to_vec();
                c1.push((x1.clone(), a));
                let mut c2 = ctx.to_vec();
                c2.push((x2.clone(), b));
                let s1 = self.check(&c1, ty, d).close(&[&x1]);
                let s2 = self.check(&c2, ty, d).close(&[&x2]);
                raw_match(&s, &Name::new(&x1), &s1, &Name::new(&x2), &s2)
            }
            2 => {
                let (a, b) = (data_type(self.r, 1), data_type(self.r, 1));
                let s = self.head(ctx, &Type::prod(a.clone(), b.clone()), d);
                let (x, y) = (self.fresh("p"), self.fresh("q"));
                let mut c = ctx.to_vec();
                c.push((x.clone(), a));
                c.push((y.clone(), b));
                let body = self.check(&c, ty, d).close(&[&x, &y]);
                raw_let(&s, &Name::new(&x), &Name::new(&y), &body)
            }
            3 => {
                let s = self.head(ctx, &Type::Unit, d);
                raw_seq(&s, &self.check(ctx, ty, d))
            }
            _ => {
                // β-redex with a synthesisable argument
                let a = data_type(self.r, 1);
                let arg = self.head(ctx, &a, d);
                let x = self.fresh("b");
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), a));
                let f = PureValue::lam(&x, self.check(&inner, ty, d)).dist();
                raw_app(&f, &arg)
            }
        }
    }

    /// A term whose type can be read off: a variable, a closed data value,
    /// or an application whose head is one of these.
    fn head(&mut self, ctx: &[(String, Type)], ty: &Type, depth: usize) -> RawDistribution {
        let vars: Vec<&String> = ctx.iter().filter(|(_, a)| a == ty).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.r.gen_bool(0.6) {
            return PureValue::var(vars.choose(self.r).unwrap()).dist();
        }
        let fs: Vec<(String, Type)> = ctx
            .iter()
            .filter(|(_, a)| matches!(a, Type::PureArrow(_, b) if **b == *ty))
            .cloned()
            .collect();
        if !fs.is_empty() && depth > 0 && self.r.gen_bool(0.5) {
            let (f, fty) = fs.choose(self.r).unwrap().clone();
            let Type::PureArrow(a, _) = fty else { unreachable!() };
            return raw_app(&PureValue::var(&f).dist(), &self.head(ctx, &a, depth - 1));
        }
        if ty.is_data() {
            return closed_data(self.r, ty).dist();
        }
        // fall back on a fresh function variable in scope
        self.introduce(ctx, ty, depth)
    }
}

/// A random basis value of a data type.
pub fn closed_data(r: &mut impl Rng, ty: &Type) -> PureValue {
    match ty {
        Type::Unit => PureValue::Void,
        Type::Sum(a, b) => {
            if r.gen_bool(0.5) {
                PureValue::inl(closed_data(r, a))
            } else {
                PureValue::inr(closed_data(r, b))
            }
        }
        Type::Prod(a, b) => PureValue::pair(closed_data(r, a), closed_data(r, b)),
        other => panic!("not a data type: {other}"),
    }
}

// ----- reference scheduler -----

/// Normalises by reducing a uniformly random reducible summand each time.
pub fn normalize_randomly(d: &CanonicalDistribution, r: &mut impl Rng, fuel: usize) -> Option<CanonicalDistribution> {
    let mut cur = d.clone();
    for _ in 0..fuel {
        let idx = reducible_indices(&cur);
        let Some(&i) = idx.choose(r) else { return Some(cur) };
        cur = step_summand(&cur, i)?;
    }
    None
}

/// Reference inner product on closed value distributions: a quadratic
/// double loop over both supports.
pub fn reference_inner(v: &CanonicalDistribution, w: &CanonicalDistribution) -> Scalar {
    let mut acc = Scalar::ZERO;
    for (a, s) in v.terms() {
        for (b, t) in w.terms() {
            if s == t {
                acc = acc + a.conj() * *b;
            }
        }
    }
    acc
}

pub fn is_reducible(t: &PureTerm) -> bool {
    atomic_step(t).is_some()
}

// ----- λ_Q programs -----

const GATES: &[&str] = &["H", "X", "Y", "Z", "S", "T", "phase{0.3}"];

/// Random well-typed λ_Q programs whose result is a tensor of qubits.
pub struct Circuits<'a, R: Rng> {
    r: &'a mut R,
    counter: usize,
    pub max_qubits: usize,
}

impl<'a, R: Rng> Circuits<'a, R> {
    pub fn new(r: &'a mut R) -> Self {
        Circuits { r, counter: 0, max_qubits: 4 }
    }

    fn fresh(&mut self, hint: &str) -> String {
        self.counter += 1;
        format!("{hint}{}", self.counter)
    }

    /// A classical boolean.
    fn boolean(&mut self, depth: usize) -> QTerm {
        let d = depth.saturating_sub(1);
        match if depth == 0 { self.r.gen_range(0..2) } else { self.r.gen_range(0..6) } {
            0 => QTerm::Tt,
            1 => QTerm::Ff,
            2 => QTerm::proj(true, QTerm::pair(self.boolean(d), self.boolean(d))),
            3 => QTerm::proj(false, QTerm::pair(QTerm::Star, self.boolean(d))),
            4 => {
                let b = self.fresh("b");
                QTerm::app(QTerm::Lam(b.clone(), Some(QType::Bit), Box::new(QTerm::var(&b))), self.boolean(d))
            }
            _ => QTerm::if_(self.boolean(d), self.boolean(d), self.boolean(d)),
        }
    }

    /// A closed classical value of type `qbit ⊸ qbit`, free of `new`.
    pub fn unary(&mut self, depth: usize) -> QTerm {
        let z = self.fresh("z");
        let body = self.on_qubit(&z, depth);
        let f = QTerm::LamQ(z, Some(QType::Qbit), Box::new(body));
        if depth > 0 && self.r.gen_bool(0.2) {
            let g = self.fresh("g");
            let ty = QType::lolli(QType::Qbit, QType::Qbit);
            return QTerm::app(QTerm::Lam(g.clone(), Some(ty), Box::new(QTerm::var(&g))), f);
        }
        if depth > 0 && self.r.gen_bool(0.15) {
            return QTerm::proj(true, QTerm::pair(f, QTerm::Star));
        }
        f
    }

    /// A term of type `qbit` that uses exactly the qubit `x`, without `new`.
    pub fn on_qubit(&mut self, x: &str, depth: usize) -> QTerm {
        if depth == 0 {
            return if self.r.gen_bool(0.3) { QTerm::var(x) } else { QTerm::gate(GATES.choose(self.r).unwrap(), QTerm::var(x)) };
        }
        let d = depth - 1;
        match self.r.gen_range(0..6) {
            0 => QTerm::var(x),
            1 | 2 => QTerm::gate(GATES.choose(self.r).unwrap(), self.on_qubit(x, d)),
            3 => {
                let inner = self.on_qubit(x, d);
                QTerm::at(self.unary(d), inner)
            }
            4 => QTerm::if_(self.boolean(1), self.on_qubit(x, d), self.on_qubit(x, d)),
            _ => {
                let inner = self.on_qubit(x, d);
                QTerm::gate(GATES.choose(self.r).unwrap(), inner)
            }
        }
    }

    /// A closed value of type `(qbit ⊗ qbit) ⊸ (qbit ⊗ qbit)`, free of `new`.
    fn binary(&mut self, depth: usize) -> QTerm {
        let p = self.fresh("p");
        let (u, v) = (self.fresh("u"), self.fresh("v"));
        let body = match self.r.gen_range(0..3) {
            0 => QTerm::tensor(QTerm::var(&v), QTerm::var(&u)),
            1 => QTerm::tensor(self.on_qubit(&u, depth), self.on_qubit(&v, depth)),
            _ => {
                let pol = if self.r.gen_bool(0.5) { Polarity::Zero } else { Polarity::One };
                QTerm::at(QTerm::ctl(pol, self.unary(depth)), QTerm::tensor(QTerm::var(&u), QTerm::var(&v)))
            }
        };
        let ty = QType::tensor(QType::Qbit, QType::Qbit);
        QTerm::LamQ(p.clone(), Some(ty), Box::new(QTerm::let_tensor(&u, &v, QTerm::var(&p), body)))
    }

    fn polarity(&mut self) -> Polarity {
        if self.r.gen_bool(0.5) {
            Polarity::Zero
        } else {
            Polarity::One
        }
    }

    fn new_qubit(&mut self) -> QTerm {
        QTerm::new_(if self.r.gen_bool(0.5) { QTerm::Tt } else { QTerm::Ff })
    }

    /// `let a ⊗ b = s in k(a, b)`.
    fn bind2(&mut self, s: QTerm, vars: &mut Vec<String>, ops: usize) -> QTerm {
        let (a, b) = (self.fresh("a"), self.fresh("b"));
        vars.push(a.clone());
        vars.push(b.clone());
        let rest = self.circuit(vars, ops);
        QTerm::let_tensor(&a, &b, s, rest)
    }

    fn take(&mut self, vars: &mut Vec<String>) -> String {
        let i = self.r.gen_range(0..vars.len());
        vars.remove(i)
    }

    /// Applies `ops` random operations to the qubits `vars` and returns
    /// them all, in a random order.
    fn circuit(&mut self, vars: &mut Vec<String>, ops: usize) -> QTerm {
        if ops == 0 {
            vars.shuffle(self.r);
            let mut t = QTerm::var(vars.last().unwrap());
            for x in vars.iter().rev().skip(1) {
                t = QTerm::tensor(QTerm::var(x), t);
            }
            return t;
        }
        let ops = ops - 1;
        let n = vars.len();
        if n < 2 || (n < self.max_qubits && self.r.gen_bool(0.15)) {
            let s = if n == 0 {
                QTerm::tensor(self.new_qubit(), self.new_qubit())
            } else {
                let x = self.take(vars);
                QTerm::tensor(self.new_qubit(), QTerm::var(&x))
            };
            return self.bind2(s, vars, ops);
        }
        let choice = if n >= 3 { self.r.gen_range(0..5) } else { self.r.gen_range(0..4) };
        match choice {
            0 => {
                let (x, y) = (self.take(vars), self.take(vars));
                let s = QTerm::tensor(self.on_qubit(&x, 2), QTerm::var(&y));
                self.bind2(s, vars, ops)
            }
            1 => {
                let (x, y) = (self.take(vars), self.take(vars));
                let pol = self.polarity();
                let f = self.unary(2);
                let s = QTerm::at(QTerm::ctl(pol, f), QTerm::tensor(QTerm::var(&x), self.on_qubit(&y, 1)));
                self.bind2(s, vars, ops)
            }
            2 => {
                let (x, y) = (self.take(vars), self.take(vars));
                let f = self.binary(1);
                let s = QTerm::at(f, QTerm::tensor(QTerm::var(&x), QTerm::var(&y)));
                self.bind2(s, vars, ops)
            }
            3 => {
                // a classical test choosing between two uses of the same qubits
                let (x, y) = (self.take(vars), self.take(vars));
                let l = QTerm::tensor(self.on_qubit(&x, 1), QTerm::var(&y));
                let r = QTerm::tensor(QTerm::var(&x), self.on_qubit(&y, 1));
                let s = QTerm::if_(self.boolean(2), l, r);
                self.bind2(s, vars, ops)
            }
            _ => {
                // a two-qubit operation under a control
                let (c, x, y) = (self.take(vars), self.take(vars), self.take(vars));
                let pol = self.polarity();
                let f = self.binary(1);
                let s = QTerm::at(QTerm::ctl(pol, f), QTerm::tensor(QTerm::var(&c), QTerm::tensor(QTerm::var(&x), QTerm::var(&y))));
                let (a, p) = (self.fresh("a"), self.fresh("p"));
                let (b, e) = (self.fresh("b"), self.fresh("e"));
                vars.extend([a.clone(), b.clone(), e.clone()]);
                let rest = self.circuit(vars, ops);
                QTerm::let_tensor(&a, &p, s, QTerm::let_tensor(&b, &e, QTerm::var(&p), rest))
            }
        }
    }

    /// A random normalised state on `k` wires `w1..wk` and a term over them.
    pub fn program(&mut self) -> Program {
        let k = self.r.gen_range(0..=2usize);
        let state = if k == 0 {
            QuantumState::empty()
        } else {
            let amps: Vec<Scalar> = (0..1 << k).map(|_| gaussian_scalar(self.r)).collect();
            let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            QuantumState::new(amps.into_iter().map(|a| a / Scalar::real(n)).collect(), 1e-9).unwrap()
        };
        let mut vars: Vec<String> = (1..=k).map(|i| format!("w{i}")).collect();
        let wires: BTreeMap<String, usize> = vars.iter().cloned().zip(1..).collect();
        let ops = self.r.gen_range(1..=5);
        let term = self.circuit(&mut vars, ops);
        Program::new(state, wires, term).expect("generated programs are closed over their wires")
    }
}

// ----- small λ_Q terms for substitution tests -----

/// Any λ_Q term over a few names, typed or not.
pub fn any_qterm(r: &mut impl Rng, depth: usize) -> QTerm {
    let names = ["x", "y", "u"];
    let nm = |r: &mut dyn rand::RngCore| names[r.gen_range(0..names.len())].to_string();
    if depth == 0 {
        return match r.gen_range(0..5) {
            0 | 1 => QTerm::var(&nm(r)),
            2 => QTerm::Star,
            3 => QTerm::Tt,
            _ => QTerm::Ff,
        };
    }
    let d = depth - 1;
    let sub = |r: &mut dyn rand::RngCore| any_qterm(&mut RngWrap(r), d);
    match r.gen_range(0..15) {
        0 => QTerm::Lam(nm(r), None, Box::new(sub(r))),
        1 => QTerm::app(sub(r), sub(r)),
        2 => QTerm::pair(sub(r), sub(r)),
        3 => QTerm::proj(r.gen_bool(0.5), sub(r)),
        4 => QTerm::if_(sub(r), sub(r), sub(r)),
        5 => QTerm::tensor(sub(r), sub(r)),
        6 => QTerm::let_tensor(&nm(r), &nm(r), sub(r), sub(r)),
        7 => QTerm::new_(sub(r)),
        8 => QTerm::gate(GATES[r.gen_range(0..GATES.len())], sub(r)),
        9 => QTerm::LamQ(nm(r), None, Box::new(sub(r))),
        10 => QTerm::at(sub(r), sub(r)),
        11 => QTerm::ctl(if r.gen_bool(0.5) { Polarity::Zero } else { Polarity::One }, sub(r)),
        _ => any_qterm(&mut RngWrap(r), 0),
    }
}

/// A λ_Q value, possibly open.
pub fn any_qvalue(r: &mut impl Rng, depth: usize) -> QTerm {
    let pick = if depth == 0 { r.gen_range(0..4) } else { r.gen_range(0..9) };
    let d = depth.saturating_sub(1);
    match pick {
        0 => QTerm::var(["y", "u", "w"][r.gen_range(0..3)]),
        1 => QTerm::Star,
        2 => QTerm::Tt,
        3 => QTerm::Ff,
        4 => QTerm::Lam("y".into(), None, Box::new(any_qterm(r, d))),
        5 => QTerm::LamQ("u".into(), None, Box::new(any_qterm(r, d))),
        6 => QTerm::pair(any_qvalue(r, d), any_qvalue(r, d)),
        7 => QTerm::tensor(any_qvalue(r, d), any_qvalue(r, d)),
        _ => QTerm::ctl(Polarity::One, any_qvalue(r, d)),
    }
}

struct RngWrap<'a>(&'a mut dyn rand::RngCore);

impl rand::RngCore for RngWrap<'_> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

pub fn standard_gates() -> GateTable {
    GateTable::standard()
}

pub fn cfg() -> Config {
    Config::default()
}

// ----- typing corpus -----

/// Every typing judgment in `d`, including the components of orthogonality
/// premises.
pub fn judgments(d: &Derivation, out: &mut Vec<TypingJudgment>) {
    out.push(d.conclusion.clone());
    for p in &d.premises {
        match p {
            Premise::Typing(q) => judgments(q, out),
            Premise::Orthogonality { left, right, .. } => {
                judgments(left, out);
                judgments(right, out);
            }
        }
    }
}

/// A corpus of judgments with finite-data contexts: simply-typed terms over
/// data, chains of one-qubit gates, and translations of λ_Q circuits.
pub fn corpus() -> Vec<(&'static str, Context, RawDistribution, Type)> {
    let mut out = Vec::new();
    for seed in 0..120u64 {
        let mut r = rng(seed);
        let n = r.gen_range(0..3);
        let ctx: Vec<(String, Type)> = (0..n).map(|i| (format!("v{i}"), data_type(&mut r, 1))).collect();
        let ty = data_type(&mut r, 2);
        let t = Simple::new(&mut r, false).check(&ctx, &ty, 4);
        out.push(("simply typed", Context::from_bindings(ctx).unwrap(), t, ty));
    }
    for seed in 0..60u64 {
        let mut r = rng(1000 + seed);
        let len = r.gen_range(1..5);
        let mut src = "x".to_string();
        for _ in 0..len {
            src = format!("{} ({src})", ["H", "N", "I"].choose(&mut r).unwrap());
        }
        let (ctx, ty) = match r.gen_range(0..3) {
            0 => (vec![("x".to_string(), Type::sharp(Type::bool()))], Type::sharp(Type::bool())),
            1 => {
                src = format!("({src}, y)");
                let ctx = vec![("x".to_string(), Type::sharp(Type::bool())), ("y".to_string(), Type::bool())];
                (ctx, Type::prod(Type::sharp(Type::bool()), Type::bool()))
            }
            _ => {
                src = src.replace('x', "tt");
                (vec![], Type::sharp(Type::bool()))
            }
        };
        let t = parse_term_with(&src, &Prelude).unwrap();
        out.push(("gate chain", Context::from_bindings(ctx).unwrap(), t, ty));
    }
    let gates = standard_gates();
    for seed in 0..60u64 {
        let mut r = rng(2000 + seed);
        let p = Circuits::new(&mut r).program();
        let a = p.typecheck().unwrap();
        let ctx: Vec<(String, Type)> = p.wires.keys().map(|w| (w.clone(), Type::sharp(Type::bool()))).collect();
        let t = translate_term(&p.term, &gates).unwrap();
        out.push(("circuit", Context::from_bindings(ctx).unwrap(), t, translate_type(&a)));
    }
    out
}

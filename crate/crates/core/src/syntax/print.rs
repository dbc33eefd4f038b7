use super::scalar::{sig8, Scalar};
use super::term::{fresh_name, PureTerm, PureValue, RawDistribution, Var};
use std::collections::BTreeSet;

/// `Exact` re-parses to the same term; `Display` rounds scalars to 8
/// significant digits and uses `·` for scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Exact,
    Display,
}

pub const RESERVED: &[&str] = &[
    "lam", "let", "in", "match", "inl", "inr", "tt", "ff", "if", "then", "else", "i", "sqrt",
    "zero", "church",
];

// precedence levels
const EXPR: u8 = 0;
const SUM: u8 = 1;
const PROD: u8 = 2;
const APP: u8 = 3;
const ATOM: u8 = 4;

struct Printer {
    style: Style,
    /// bound names, innermost last
    env: Vec<String>,
    avoid: BTreeSet<String>,
}

pub fn pretty(d: &RawDistribution, style: Style) -> String {
    let mut p = Printer::new(style, d.free_vars());
    p.dist(d, EXPR)
}

pub fn pretty_term(t: &PureTerm, style: Style) -> String {
    let mut p = Printer::new(style, t.free_vars());
    p.term(t, EXPR)
}

pub fn pretty_value(v: &PureValue, style: Style) -> String {
    let mut p = Printer::new(style, v.free_vars());
    p.value(v, EXPR)
}

/// Exact textual form of a scalar that the term parser reads back unchanged.
pub fn scalar_exact(c: Scalar) -> String {
    let (re, im) = (c.re(), c.im());
    let re = if re == 0.0 { 0.0 } else { re };
    if im == 0.0 && re >= 0.0 {
        format!("{re:?}")
    } else if im == 0.0 {
        format!("(-{:?})", -re)
    } else {
        let r = if re < 0.0 { format!("-{:?}", -re) } else { format!("{re:?}") };
        let m = if im < 0.0 { format!("-{:?}", -im) } else { format!("{im:?}") };
        format!("({r} + {m} * i)")
    }
}

fn paren(s: String, need: bool) -> String {
    if need {
        format!("({s})")
    } else {
        s
    }
}

impl Printer {
    fn new(style: Style, free: BTreeSet<String>) -> Printer {
        let mut avoid = free;
        avoid.extend(RESERVED.iter().map(|s| s.to_string()));
        Printer { style, env: Vec::new(), avoid }
    }

    fn bind(&mut self, hint: &str) -> String {
        let mut avoid = self.avoid.clone();
        avoid.extend(self.env.iter().cloned());
        let hint = if hint.is_empty() || hint.starts_with(|c: char| !c.is_alphabetic()) {
            "x"
        } else {
            hint
        };
        let name = fresh_name(hint, &avoid);
        self.env.push(name.clone());
        name
    }

    fn unbind(&mut self, n: usize) {
        for _ in 0..n {
            self.env.pop();
        }
    }

    fn scalar(&self, c: Scalar) -> String {
        match self.style {
            Style::Exact => scalar_exact(c),
            Style::Display => {
                if c.im() == 0.0 && c.re() >= 0.0 {
                    sig8(c.re())
                } else if c.im() == 0.0 {
                    format!("({})", sig8(c.re()))
                } else {
                    let s = c.display();
                    if s.starts_with('(') {
                        s
                    } else {
                        format!("({s})")
                    }
                }
            }
        }
    }

    fn var(&self, v: &Var) -> String {
        match v {
            Var::Free(x) => x.clone(),
            Var::Bound(i) => {
                if *i < self.env.len() {
                    self.env[self.env.len() - 1 - i].clone()
                } else {
                    format!("#{i}")
                }
            }
        }
    }

    fn dist(&mut self, d: &RawDistribution, prec: u8) -> String {
        match d {
            RawDistribution::Zero => "zero".into(),
            RawDistribution::Single(t) => self.term(t, prec),
            RawDistribution::Sum(a, b) => {
                let l = self.dist(a, SUM);
                let r = self.dist(b, PROD);
                paren(format!("{l} + {r}"), prec > SUM)
            }
            RawDistribution::Scale(c, a) => {
                let c = self.scalar(*c);
                let r = self.dist(a, APP);
                let s = match self.style {
                    Style::Exact => format!("{c} * {r}"),
                    Style::Display => format!("{c}·{r}"),
                };
                paren(s, prec > PROD)
            }
        }
    }

    fn value(&mut self, v: &PureValue, prec: u8) -> String {
        match v {
            PureValue::Var(x) => self.var(x),
            PureValue::Void => "()".into(),
            PureValue::Inl(a) if **a == PureValue::Void => "tt".into(),
            PureValue::Inr(a) if **a == PureValue::Void => "ff".into(),
            PureValue::Inl(a) => {
                let s = self.value(a, ATOM);
                paren(format!("inl {s}"), prec > APP)
            }
            PureValue::Inr(a) => {
                let s = self.value(a, ATOM);
                paren(format!("inr {s}"), prec > APP)
            }
            PureValue::Pair(a, b) => {
                let a = self.value(a, EXPR);
                let b = self.value(b, EXPR);
                format!("({a}, {b})")
            }
            PureValue::Lam(n, body) => {
                let x = self.bind(n.as_str());
                let b = self.dist(body, EXPR);
                self.unbind(1);
                paren(format!("lam {x}. {b}"), prec > EXPR)
            }
        }
    }

    fn term(&mut self, t: &PureTerm, prec: u8) -> String {
        match t {
            PureTerm::Val(v) => self.value(v, prec),
            PureTerm::App(f, a) => {
                let f = self.term(f, APP);
                let a = self.term(a, ATOM);
                paren(format!("{f} {a}"), prec > APP)
            }
            PureTerm::Seq(a, s) => {
                let a = self.term(a, SUM);
                let s = self.dist(s, EXPR);
                paren(format!("{a} ; {s}"), prec > EXPR)
            }
            PureTerm::LetPair(x, y, a, s) => {
                let a = self.term(a, EXPR);
                let xn = self.bind(x.as_str());
                let yn = self.bind(y.as_str());
                let s = self.dist(s, EXPR);
                self.unbind(2);
                paren(format!("let ({xn}, {yn}) = {a} in {s}"), prec > EXPR)
            }
            PureTerm::Match(a, x1, s1, x2, s2) => {
                if let (Some(b1), Some(b2)) = (if_branch(s1), if_branch(s2)) {
                    let c = self.term(a, EXPR);
                    self.env.push(String::new());
                    let b1 = self.dist(b1, EXPR);
                    let b2 = self.dist(b2, EXPR);
                    self.unbind(1);
                    return paren(format!("if {c} then {b1} else {b2}"), prec > EXPR);
                }
                let a = self.term(a, EXPR);
                let n1 = self.bind(x1.as_str());
                let s1 = self.dist(s1, EXPR);
                self.unbind(1);
                let n2 = self.bind(x2.as_str());
                let s2 = self.dist(s2, EXPR);
                self.unbind(1);
                format!("match {a} {{ inl {n1} -> {s1} | inr {n2} -> {s2} }}")
            }
        }
    }
}

/// Recognises a branch `x ; s` that discards its bound variable, as
/// produced by `if`. The continuation must not mention the variable.
fn if_branch(d: &RawDistribution) -> Option<&RawDistribution> {
    match d {
        RawDistribution::Single(PureTerm::Seq(t, s))
            if **t == PureTerm::Val(PureValue::Var(Var::Bound(0))) && !mentions_index0(s) =>
        {
            Some(s)
        }
        _ => None,
    }
}

fn mentions_index0(s: &RawDistribution) -> bool {
    // opening with a sentinel free name shows whether index 0 occurs
    let sentinel = "\u{0}probe";
    s.open_names(&[sentinel]).free_vars().contains(sentinel)
}

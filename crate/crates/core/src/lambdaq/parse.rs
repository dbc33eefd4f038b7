use super::gates::GateTable;
use super::term::{Polarity, QTerm};
use super::types::{qtype_expr, QType};
use crate::error::{Error, Result};
use crate::syntax::lexer::{lex, Cursor, Tok};

const RESERVED: &[&str] = &[
    "lam", "lamq", "if", "then", "else", "let", "in", "new", "fst", "snd", "ctl", "ctl1", "ctl_run", "ctl1_run", "tt",
    "ff",
];

/// Parses a term; identifiers of the gate table followed by `(` are gate
/// applications.
pub fn parse_qterm(src: &str, gates: &GateTable) -> Result<QTerm> {
    let mut p = Parser { cur: Cursor::new(lex(src, true)?, src.len()), gates };
    let t = p.expr()?;
    p.cur.expect_end()?;
    Ok(t)
}

struct Parser<'a> {
    cur: Cursor,
    gates: &'a GateTable,
}

impl Parser<'_> {
    fn binder(&mut self) -> Result<String> {
        let pos = self.cur.pos();
        let x = self.cur.expect_ident()?;
        if RESERVED.contains(&x.as_str()) || self.gates.contains(&x) {
            return Err(Error::Parse { pos, msg: format!("`{x}` cannot be a variable") });
        }
        Ok(x)
    }

    fn annotated_binder(&mut self) -> Result<(String, Option<QType>)> {
        let x = self.binder()?;
        let a = if self.cur.eat_sym(":") { Some(qtype_expr(&mut self.cur)?) } else { None };
        self.cur.expect_sym(".")?;
        Ok((x, a))
    }

    fn expr(&mut self) -> Result<QTerm> {
        if self.cur.eat_kw("lam") {
            let (x, a) = self.annotated_binder()?;
            return Ok(QTerm::Lam(x, a, Box::new(self.expr()?)));
        }
        if self.cur.eat_kw("lamq") {
            let (x, a) = self.annotated_binder()?;
            return Ok(QTerm::LamQ(x, a, Box::new(self.expr()?)));
        }
        if self.cur.eat_kw("if") {
            let c = self.expr()?;
            self.cur.expect_kw("then")?;
            let t = self.expr()?;
            self.cur.expect_kw("else")?;
            let e = self.expr()?;
            return Ok(QTerm::if_(c, t, e));
        }
        if self.cur.eat_kw("let") {
            let x = self.binder()?;
            self.cur.expect_sym("(x)")?;
            let y = self.binder()?;
            self.cur.expect_sym("=")?;
            let s = self.expr()?;
            self.cur.expect_kw("in")?;
            let t = self.expr()?;
            return Ok(QTerm::let_tensor(&x, &y, s, t));
        }
        self.tensor()
    }

    fn tensor(&mut self) -> Result<QTerm> {
        let a = self.at()?;
        if self.cur.eat_sym("(x)") {
            return Ok(QTerm::tensor(a, self.tensor()?));
        }
        Ok(a)
    }

    fn at(&mut self) -> Result<QTerm> {
        let mut s = self.app()?;
        while self.cur.eat_sym("@") {
            s = QTerm::at(s, self.app()?);
        }
        Ok(s)
    }

    fn app(&mut self) -> Result<QTerm> {
        let mut s = match self.atom()? {
            Some(s) => s,
            None => return self.cur.err(format!("expected a term, found {}", self.cur.describe())),
        };
        while let Some(r) = self.atom()? {
            s = QTerm::app(s, r);
        }
        Ok(s)
    }

    fn parenthesized(&mut self) -> Result<QTerm> {
        self.cur.expect_sym("(")?;
        let t = self.expr()?;
        self.cur.expect_sym(")")?;
        Ok(t)
    }

    fn atom(&mut self) -> Result<Option<QTerm>> {
        if self.cur.is_sym("(") {
            self.cur.next();
            if self.cur.eat_sym(")") {
                return Ok(Some(QTerm::Star));
            }
            let a = self.expr()?;
            if self.cur.eat_sym(",") {
                let c = self.expr()?;
                self.cur.expect_sym(")")?;
                return Ok(Some(QTerm::pair(a, c)));
            }
            self.cur.expect_sym(")")?;
            return Ok(Some(a));
        }
        let Some(Tok::Ident(name)) = self.cur.peek().cloned() else { return Ok(None) };
        let pos = self.cur.pos();
        let t = match name.as_str() {
            "tt" => {
                self.cur.next();
                QTerm::Tt
            }
            "ff" => {
                self.cur.next();
                QTerm::Ff
            }
            "new" | "fst" | "snd" | "ctl" | "ctl1" => {
                self.cur.next();
                let t = self.parenthesized()?;
                match name.as_str() {
                    "new" => QTerm::new_(t),
                    "fst" => QTerm::proj(true, t),
                    "snd" => QTerm::proj(false, t),
                    "ctl" => QTerm::ctl(Polarity::Zero, t),
                    _ => QTerm::ctl(Polarity::One, t),
                }
            }
            "ctl_run" | "ctl1_run" => {
                self.cur.next();
                self.cur.expect_sym("(")?;
                let control = self.binder()?;
                self.cur.expect_sym(",")?;
                let input = self.expr()?;
                self.cur.expect_sym(",")?;
                let body = self.expr()?;
                self.cur.expect_sym(")")?;
                let polarity = if name == "ctl_run" { Polarity::Zero } else { Polarity::One };
                QTerm::Controlled { control, polarity, input: Box::new(input), body: Box::new(body) }
            }
            _ if RESERVED.contains(&name.as_str()) => return Ok(None),
            _ if self.gates.contains(&name) => {
                self.cur.next();
                let mut g = name.clone();
                if self.cur.eat_sym("{") {
                    let neg = self.cur.eat_sym("-");
                    let Some(Tok::Num(n)) = self.cur.next() else {
                        return Err(Error::Parse { pos, msg: format!("`{name}` expects a numeric parameter") });
                    };
                    self.cur.expect_sym("}")?;
                    g = format!("{name}{{{}{n}}}", if neg { "-" } else { "" });
                }
                if self.gates.get(&g).is_none() {
                    return Err(Error::Parse { pos, msg: format!("unknown gate `{g}`") });
                }
                QTerm::Gate(g, Box::new(self.parenthesized()?))
            }
            _ => {
                self.cur.next();
                QTerm::Var(name)
            }
        };
        Ok(Some(t))
    }
}

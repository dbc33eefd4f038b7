use super::lexer::{lex, Cursor, Tok};
use super::print::RESERVED;
use super::scalar::Scalar;
use super::term::{
    inl_or_encode, inr_or_encode, pair_or_encode, raw_app, raw_match, raw_seq, Name, PureTerm,
    PureValue, RawDistribution, Var,
};
use crate::error::{Error, Result};

/// Named definitions available to the parser, such as the prelude.
pub trait Definitions {
    fn lookup(&self, name: &str) -> Option<RawDistribution>;
    /// Indexed families such as `church 3`.
    fn lookup_indexed(&self, _name: &str, _n: usize) -> Option<RawDistribution> {
        None
    }
}

/// No definitions: every unbound identifier is a free variable.
pub struct NoDefinitions;

impl Definitions for NoDefinitions {
    fn lookup(&self, _: &str) -> Option<RawDistribution> {
        None
    }
}

/// Parses a term of the surface syntax into a raw distribution.
pub fn parse_term(src: &str) -> Result<RawDistribution> {
    parse_term_with(src, &NoDefinitions)
}

pub fn parse_term_with(src: &str, defs: &dyn Definitions) -> Result<RawDistribution> {
    let mut p = TermParser::new(src, defs)?;
    let d = p.dist()?;
    p.cur.expect_end()?;
    Ok(d)
}

/// Parses a scalar expression such as `1/sqrt(2)` or `(0.5 + 0.5 * i)`.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let mut p = TermParser::new(src, &NoDefinitions)?;
    let v = p.expr()?;
    p.cur.expect_end()?;
    match v {
        Item::Scalar(c) => Ok(c),
        Item::Dist(_) => Err(Error::Parse { pos: 0, msg: "expected a scalar".into() }),
    }
}

enum Item {
    Scalar(Scalar),
    Dist(RawDistribution),
}

pub struct TermParser<'a> {
    pub cur: Cursor,
    env: Vec<String>,
    defs: &'a dyn Definitions,
}

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

impl<'a> TermParser<'a> {
    pub fn new(src: &str, defs: &'a dyn Definitions) -> Result<TermParser<'a>> {
        Ok(TermParser { cur: Cursor::new(lex(src, false)?, src.len()), env: Vec::new(), defs })
    }

    /// Continues parsing from an existing token stream.
    pub fn from_cursor(cur: Cursor, defs: &'a dyn Definitions) -> TermParser<'a> {
        TermParser { cur, env: Vec::new(), defs }
    }

    /// Parses a full term at the current position.
    pub fn dist(&mut self) -> Result<RawDistribution> {
        let pos = self.cur.pos();
        match self.expr()? {
            Item::Dist(d) => Ok(d),
            Item::Scalar(_) => Err(Error::Parse { pos, msg: "expected a term, found a scalar".into() }),
        }
    }

    fn as_dist(&self, it: Item, pos: usize) -> Result<RawDistribution> {
        match it {
            Item::Dist(d) => Ok(d),
            Item::Scalar(_) => Err(Error::Parse { pos, msg: "expected a term, found a scalar".into() }),
        }
    }

    fn binder(&mut self) -> Result<String> {
        let pos = self.cur.pos();
        let x = self.cur.expect_ident()?;
        if is_reserved(&x) {
            return Err(Error::Parse { pos, msg: format!("`{x}` is reserved") });
        }
        Ok(x)
    }

    fn expr(&mut self) -> Result<Item> {
        if self.cur.eat_kw("lam") {
            let x = self.binder()?;
            self.cur.expect_sym(".")?;
            self.env.push(x.clone());
            let body = self.dist();
            self.env.pop();
            return Ok(Item::Dist(PureValue::Lam(Name::new(x), Box::new(body?)).dist()));
        }
        if self.cur.eat_kw("let") {
            self.cur.expect_sym("(")?;
            let x = self.binder()?;
            self.cur.expect_sym(",")?;
            let y = self.binder()?;
            self.cur.expect_sym(")")?;
            self.cur.expect_sym("=")?;
            let t = self.dist()?;
            self.cur.expect_kw("in")?;
            self.env.push(x.clone());
            self.env.push(y.clone());
            let body = self.dist();
            self.env.truncate(self.env.len() - 2);
            let body = body?;
            let (xn, yn) = (Name::new(x), Name::new(y));
            return Ok(Item::Dist(t.map_leaves(&mut |s| {
                PureTerm::LetPair(xn.clone(), yn.clone(), Box::new(s.clone()), Box::new(body.clone())).dist()
            })));
        }
        if self.cur.eat_kw("if") {
            let t = self.dist()?;
            self.cur.expect_kw("then")?;
            let a = self.dist()?;
            self.cur.expect_kw("else")?;
            let b = self.dist()?;
            return Ok(Item::Dist(t.map_leaves(&mut |s| PureTerm::if_(s.clone(), a.clone(), b.clone()).dist())));
        }
        self.seq()
    }

    fn seq(&mut self) -> Result<Item> {
        let pos = self.cur.pos();
        let a = self.sum()?;
        if self.cur.eat_sym(";") {
            let a = self.as_dist(a, pos)?;
            let s = self.dist()?;
            return Ok(Item::Dist(raw_seq(&a, &s)));
        }
        Ok(a)
    }

    fn sum(&mut self) -> Result<Item> {
        let pos = self.cur.pos();
        let mut acc = self.prod()?;
        loop {
            let neg = if self.cur.eat_sym("+") {
                false
            } else if self.cur.eat_sym("-") {
                true
            } else {
                break;
            };
            let rhs = self.prod()?;
            acc = match (acc, rhs) {
                (Item::Scalar(a), Item::Scalar(b)) => Item::Scalar(if neg { a - b } else { a + b }),
                (Item::Dist(a), Item::Dist(b)) => {
                    let b = if neg { RawDistribution::scale(-Scalar::ONE, b) } else { b };
                    Item::Dist(RawDistribution::sum(a, b))
                }
                _ => return Err(Error::Parse { pos, msg: "cannot add a scalar and a term".into() }),
            };
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<Item> {
        let pos = self.cur.pos();
        let mut acc = self.unary()?;
        loop {
            let div = if self.cur.eat_sym("*") {
                false
            } else if self.cur.eat_sym("/") {
                true
            } else {
                break;
            };
            let rhs = self.unary()?;
            acc = match (acc, rhs, div) {
                (Item::Scalar(a), Item::Scalar(b), false) => Item::Scalar(a * b),
                (Item::Scalar(a), Item::Scalar(b), true) => Item::Scalar(a / b),
                (Item::Scalar(a), Item::Dist(d), false) => Item::Dist(RawDistribution::scale(a, d)),
                (Item::Dist(d), Item::Scalar(a), false) => Item::Dist(RawDistribution::scale(a, d)),
                (Item::Dist(d), Item::Scalar(a), true) => {
                    Item::Dist(RawDistribution::scale(Scalar::ONE / a, d))
                }
                _ => return Err(Error::Parse { pos, msg: "invalid product".into() }),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Item> {
        if self.cur.eat_sym("-") {
            return Ok(match self.unary()? {
                Item::Scalar(c) => Item::Scalar(-c),
                Item::Dist(d) => Item::Dist(RawDistribution::scale(-Scalar::ONE, d)),
            });
        }
        self.app()
    }

    fn app(&mut self) -> Result<Item> {
        let pos = self.cur.pos();
        let mut head = if self.cur.eat_kw("inl") {
            let p = self.cur.pos();
            let a = self.atom_required()?;
            Item::Dist(inl_or_encode(&self.as_dist(a, p)?))
        } else if self.cur.eat_kw("inr") {
            let p = self.cur.pos();
            let a = self.atom_required()?;
            Item::Dist(inr_or_encode(&self.as_dist(a, p)?))
        } else {
            self.atom_required()?
        };
        while let Some(arg) = self.atom()? {
            let f = match head {
                Item::Dist(d) => d,
                Item::Scalar(_) => {
                    return Err(Error::Parse { pos, msg: "a scalar cannot be applied".into() })
                }
            };
            let a = self.as_dist(arg, pos)?;
            head = Item::Dist(raw_app(&f, &a));
        }
        Ok(head)
    }

    fn atom_required(&mut self) -> Result<Item> {
        match self.atom()? {
            Some(it) => Ok(it),
            None => self.cur.err(format!("expected a term, found {}", self.cur.describe())),
        }
    }

    fn atom(&mut self) -> Result<Option<Item>> {
        let pos = self.cur.pos();
        let tok = match self.cur.peek() {
            Some(t) => t.clone(),
            None => return Ok(None),
        };
        match tok {
            Tok::Num(s) => {
                self.cur.next();
                let x: f64 = s.parse().map_err(|_| Error::Parse { pos, msg: format!("bad number {s}") })?;
                Ok(Some(Item::Scalar(Scalar::real(x))))
            }
            Tok::Sym("(") => {
                self.cur.next();
                if self.cur.eat_sym(")") {
                    return Ok(Some(Item::Dist(PureValue::Void.dist())));
                }
                let a = self.expr()?;
                if self.cur.eat_sym(",") {
                    let a = self.as_dist(a, pos)?;
                    let b = self.dist()?;
                    self.cur.expect_sym(")")?;
                    return Ok(Some(Item::Dist(pair_or_encode(&a, &b))));
                }
                self.cur.expect_sym(")")?;
                Ok(Some(a))
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => {
                    self.cur.next();
                    Ok(Some(Item::Scalar(Scalar::I)))
                }
                "tt" => {
                    self.cur.next();
                    Ok(Some(Item::Dist(PureValue::tt().dist())))
                }
                "ff" => {
                    self.cur.next();
                    Ok(Some(Item::Dist(PureValue::ff().dist())))
                }
                "zero" => {
                    self.cur.next();
                    Ok(Some(Item::Dist(RawDistribution::Zero)))
                }
                "sqrt" => {
                    self.cur.next();
                    self.cur.expect_sym("(")?;
                    let p = self.cur.pos();
                    let a = self.expr()?;
                    self.cur.expect_sym(")")?;
                    match a {
                        Item::Scalar(c) => Ok(Some(Item::Scalar(Scalar(c.0.sqrt())))),
                        Item::Dist(_) => Err(Error::Parse { pos: p, msg: "sqrt expects a scalar".into() }),
                    }
                }
                "match" => {
                    self.cur.next();
                    let t = self.dist()?;
                    self.cur.expect_sym("{")?;
                    self.cur.eat_sym("|");
                    self.cur.expect_kw("inl")?;
                    let x1 = self.binder()?;
                    self.cur.expect_sym("->")?;
                    self.env.push(x1.clone());
                    let s1 = self.dist();
                    self.env.pop();
                    let s1 = s1?;
                    self.cur.expect_sym("|")?;
                    self.cur.expect_kw("inr")?;
                    let x2 = self.binder()?;
                    self.cur.expect_sym("->")?;
                    self.env.push(x2.clone());
                    let s2 = self.dist();
                    self.env.pop();
                    let s2 = s2?;
                    self.cur.expect_sym("}")?;
                    Ok(Some(Item::Dist(raw_match(&t, &Name::new(x1), &s1, &Name::new(x2), &s2))))
                }
                "church" => {
                    self.cur.next();
                    let n = match self.cur.next() {
                        Some(Tok::Num(s)) => s.parse::<usize>().map_err(|_| Error::Parse {
                            pos,
                            msg: "church expects a natural number".into(),
                        })?,
                        _ => return Err(Error::Parse { pos, msg: "church expects a natural number".into() }),
                    };
                    match self.defs.lookup_indexed("church", n) {
                        Some(d) => Ok(Some(Item::Dist(d))),
                        None => Ok(Some(Item::Dist(church(n)))),
                    }
                }
                _ if is_reserved(&name) => Ok(None),
                _ => {
                    self.cur.next();
                    if let Some(i) = self.env.iter().rev().position(|y| *y == name) {
                        return Ok(Some(Item::Dist(PureValue::Var(Var::Bound(i)).dist())));
                    }
                    if let Some(d) = self.defs.lookup(&name) {
                        return Ok(Some(Item::Dist(d)));
                    }
                    Ok(Some(Item::Dist(PureValue::var(&name).dist())))
                }
            },
            _ => Ok(None),
        }
    }
}

/// Church numeral `λf. λx. f (f (… x))` with `n` applications.
pub fn church(n: usize) -> RawDistribution {
    let mut body = PureTerm::var("x");
    for _ in 0..n {
        body = PureTerm::app(PureTerm::var("f"), body);
    }
    PureValue::lam("f", PureValue::lam("x", body.dist()).dist()).dist()
}

#[cfg(test)]
mod tests {
    use super::super::print::{pretty, Style};
    use super::*;

    fn rt(src: &str) {
        let d = parse_term(src).unwrap();
        let printed = pretty(&d, Style::Exact);
        let back = parse_term(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(back, d, "{src} -> {printed}");
    }

    #[test]
    fn round_trips() {
        for s in [
            "lam x. x",
            "(lam x. x) tt",
            "0.5 * tt + (-0.5) * ff",
            "lam x. if x then tt else ff",
            "match y { inl a -> a ; tt | inr b -> b ; ff }",
            "let (a, b) = p in (b, a)",
            "lam f. lam x. f (f x)",
            "(0.5 + 0.25 * i) * tt",
            "1/sqrt(2) * tt + 1/sqrt(2) * ff",
            "lam x. x ; (lam y. y)",
            "zero + 0 * tt",
            "lam f. lam y. (inl (), f y)",
            "2 * (3 * x)",
            "inl x y",
        ] {
            rt(s);
        }
    }

    #[test]
    fn scalars_are_evaluated() {
        let c = parse_scalar("1/sqrt(2)").unwrap();
        assert!((c.re() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let c = parse_scalar("(1 - 2 * i) * i").unwrap();
        assert_eq!(c, Scalar::new(2.0, 1.0));
    }

    #[test]
    fn application_lifts_over_sums() {
        let d = parse_term("f (a + b)").unwrap();
        assert_eq!(d.leaves().len(), 2);
        assert!(matches!(d, RawDistribution::Sum(_, _)));
    }

    #[test]
    fn errors_have_positions() {
        match parse_term("lam . x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_term("(tt").is_err());
        assert!(parse_term("0.5").is_err());
    }
}

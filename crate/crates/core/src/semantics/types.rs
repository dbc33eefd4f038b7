use crate::error::{Error, Result};
use crate::syntax::lexer::{lex, Cursor, Tok};
use crate::syntax::PureValue;
use std::fmt;

/// Types of the calculus. `B` is sugar for `U + U`, `A ⊕ B` for `♯(A + B)`
/// and `A ⊗ B` for `♯(A × B)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Unit,
    Sum(Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
    /// `A → B`, pure functions.
    PureArrow(Box<Type>, Box<Type>),
    /// `A ⇒ B`, unitary distributions of functions.
    UnitArrow(Box<Type>, Box<Type>),
    Sharp(Box<Type>),
    Flat(Box<Type>),
}

impl Type {
    pub fn bool() -> Type {
        Type::sum(Type::Unit, Type::Unit)
    }

    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::PureArrow(Box::new(a), Box::new(b))
    }

    pub fn unit_arrow(a: Type, b: Type) -> Type {
        Type::UnitArrow(Box::new(a), Box::new(b))
    }

    pub fn sharp(a: Type) -> Type {
        Type::Sharp(Box::new(a))
    }

    pub fn flat(a: Type) -> Type {
        Type::Flat(Box::new(a))
    }

    /// `A ⊕ B = ♯(A + B)`
    pub fn oplus(a: Type, b: Type) -> Type {
        Type::sharp(Type::sum(a, b))
    }

    /// `A ⊗ B = ♯(A × B)`
    pub fn otimes(a: Type, b: Type) -> Type {
        Type::sharp(Type::prod(a, b))
    }

    /// `♯B`
    pub fn qbit() -> Type {
        Type::sharp(Type::bool())
    }

    pub fn is_bool(&self) -> bool {
        *self == Type::bool()
    }

    /// Built from `U`, `+`, `×`, `♯` and `♭` only.
    pub fn is_data(&self) -> bool {
        match self {
            Type::Unit => true,
            Type::Sum(a, b) | Type::Prod(a, b) => a.is_data() && b.is_data(),
            Type::Sharp(a) | Type::Flat(a) => a.is_data(),
            Type::PureArrow(..) | Type::UnitArrow(..) => false,
        }
    }

    /// Strips leading `♯`s.
    pub fn unsharp(&self) -> &Type {
        match self {
            Type::Sharp(a) => a.unsharp(),
            _ => self,
        }
    }

    pub fn is_sharp_rooted(&self) -> bool {
        matches!(self, Type::Sharp(_))
    }
}

/// `U`, `♭A` and `A → B` are pure; sums and products are pure when their
/// components are; `♯A` and `A ⇒ B` are never pure.
pub fn is_pure_type(a: &Type) -> bool {
    match a {
        Type::Unit | Type::Flat(_) | Type::PureArrow(..) => true,
        Type::Sum(a, b) | Type::Prod(a, b) => is_pure_type(a) && is_pure_type(b),
        Type::Sharp(_) | Type::UnitArrow(..) => false,
    }
}

/// Orthonormal basis of a finite data type, in a fixed order.
pub fn basis_of_type(a: &Type) -> Result<Vec<PureValue>> {
    Ok(match a {
        Type::Unit => vec![PureValue::Void],
        Type::Sum(l, r) => {
            let mut out: Vec<PureValue> = basis_of_type(l)?.into_iter().map(PureValue::inl).collect();
            out.extend(basis_of_type(r)?.into_iter().map(PureValue::inr));
            out
        }
        Type::Prod(l, r) => {
            let (bl, br) = (basis_of_type(l)?, basis_of_type(r)?);
            let mut out = Vec::with_capacity(bl.len() * br.len());
            for x in &bl {
                for y in &br {
                    out.push(PureValue::pair(x.clone(), y.clone()));
                }
            }
            out
        }
        Type::Sharp(b) | Type::Flat(b) => basis_of_type(b)?,
        Type::PureArrow(..) | Type::UnitArrow(..) => {
            return Err(Error::UnsupportedType(format!("{a} has no finite basis")))
        }
    })
}

// ----- printing -----

const P_ARROW: u8 = 0;
const P_SUM: u8 = 1;
const P_PROD: u8 = 2;
const P_PREFIX: u8 = 3;

fn show(a: &Type, prec: u8) -> String {
    let (s, p) = match a {
        Type::Unit => ("U".to_string(), P_PREFIX),
        t if t.is_bool() => ("B".to_string(), P_PREFIX),
        Type::Sum(l, r) => (format!("{} + {}", show(l, P_SUM), show(r, P_PROD)), P_SUM),
        Type::Prod(l, r) => (format!("{} * {}", show(l, P_PROD), show(r, P_PREFIX)), P_PROD),
        Type::PureArrow(l, r) => (format!("{} -> {}", show(l, P_SUM), show(r, P_ARROW)), P_ARROW),
        Type::UnitArrow(l, r) => (format!("{} => {}", show(l, P_SUM), show(r, P_ARROW)), P_ARROW),
        Type::Sharp(b) => (format!("#{}", show(b, P_PREFIX)), P_PREFIX),
        Type::Flat(b) => (format!("!{}", show(b, P_PREFIX)), P_PREFIX),
    };
    if p < prec {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show(self, P_ARROW))
    }
}

// ----- parsing -----

pub fn parse_type(src: &str) -> Result<Type> {
    let mut cur = Cursor::new(lex(src, true)?, src.len());
    let t = type_expr(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

/// Parses a type at the cursor (used by the judgment parser as well).
pub fn type_expr(cur: &mut Cursor) -> Result<Type> {
    let l = type_sum(cur)?;
    if cur.eat_sym("->") {
        return Ok(Type::arrow(l, type_expr(cur)?));
    }
    if cur.eat_sym("=>") {
        return Ok(Type::unit_arrow(l, type_expr(cur)?));
    }
    Ok(l)
}

fn type_sum(cur: &mut Cursor) -> Result<Type> {
    let mut acc = type_prod(cur)?;
    loop {
        if cur.eat_sym("+") {
            acc = Type::sum(acc, type_prod(cur)?);
        } else if cur.eat_sym("(+)") {
            acc = Type::oplus(acc, type_prod(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn type_prod(cur: &mut Cursor) -> Result<Type> {
    let mut acc = type_prefix(cur)?;
    loop {
        if cur.eat_sym("*") {
            acc = Type::prod(acc, type_prefix(cur)?);
        } else if cur.eat_sym("(x)") {
            acc = Type::otimes(acc, type_prefix(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn type_prefix(cur: &mut Cursor) -> Result<Type> {
    if cur.eat_sym("#") || cur.eat_kw("sharp") {
        return Ok(Type::sharp(type_prefix(cur)?));
    }
    if cur.eat_sym("!") || cur.eat_kw("flat") {
        return Ok(Type::flat(type_prefix(cur)?));
    }
    match cur.peek() {
        Some(Tok::Ident(s)) if s == "U" => {
            cur.next();
            Ok(Type::Unit)
        }
        Some(Tok::Ident(s)) if s == "B" => {
            cur.next();
            Ok(Type::bool())
        }
        Some(Tok::Sym("(")) => {
            cur.next();
            let t = type_expr(cur)?;
            cur.expect_sym(")")?;
            Ok(t)
        }
        _ => cur.err(format!("expected a type, found {}", cur.describe())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["#B -> #B", "(#B => #B) => #B => #B", "B * B + U", "!(#B * U)", "#(B * B) => #(B * B)"] {
            let t = parse_type(s).unwrap();
            assert_eq!(parse_type(&t.to_string()).unwrap(), t, "{s}");
        }
        assert_eq!(parse_type("B (x) B").unwrap(), Type::otimes(Type::bool(), Type::bool()));
        assert_eq!(parse_type("U (+) U").unwrap(), Type::qbit());
        assert_eq!(parse_type("sharp flat B").unwrap(), Type::sharp(Type::flat(Type::bool())));
    }

    #[test]
    fn purity() {
        assert!(is_pure_type(&Type::bool()));
        assert!(!is_pure_type(&Type::qbit()));
        assert!(is_pure_type(&Type::arrow(Type::qbit(), Type::qbit())));
        assert!(!is_pure_type(&Type::unit_arrow(Type::qbit(), Type::qbit())));
    }

    #[test]
    fn bases() {
        assert_eq!(basis_of_type(&Type::bool()).unwrap(), vec![PureValue::tt(), PureValue::ff()]);
        let b = basis_of_type(&Type::otimes(Type::qbit(), Type::qbit())).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b[1], PureValue::pair(PureValue::tt(), PureValue::ff()));
        assert_eq!(basis_of_type(&Type::Unit).unwrap(), vec![PureValue::Void]);
        assert!(basis_of_type(&Type::arrow(Type::Unit, Type::Unit)).is_err());
    }
}

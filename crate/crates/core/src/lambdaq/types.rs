use crate::error::Result;
use crate::semantics::Type;
use crate::syntax::lexer::{lex, Cursor, Tok};
use std::fmt;

/// Types of the quantum lambda calculus. `Qbit` and `Tensor` are the
/// quantum types; everything else is classical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QType {
    Unit,
    Bit,
    Arrow(Box<QType>, Box<QType>),
    Prod(Box<QType>, Box<QType>),
    /// Closure of a quantum computation; classical, so duplicable.
    Lolli(Box<QType>, Box<QType>),
    Qbit,
    Tensor(Box<QType>, Box<QType>),
}

impl QType {
    pub fn arrow(a: QType, b: QType) -> QType {
        QType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn prod(a: QType, b: QType) -> QType {
        QType::Prod(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: QType, b: QType) -> QType {
        QType::Lolli(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: QType, b: QType) -> QType {
        QType::Tensor(Box::new(a), Box::new(b))
    }

    /// `qbit ⊗ … ⊗ qbit` with `n ≥ 1` factors, nested to the right.
    pub fn qbits(n: usize) -> QType {
        assert!(n >= 1);
        (1..n).fold(QType::Qbit, |acc, _| QType::tensor(QType::Qbit, acc))
    }

    pub fn is_quantum(&self) -> bool {
        match self {
            QType::Qbit => true,
            QType::Tensor(a, b) => a.is_quantum() && b.is_quantum(),
            _ => false,
        }
    }

    pub fn is_classical(&self) -> bool {
        match self {
            QType::Unit | QType::Bit => true,
            QType::Arrow(a, b) | QType::Prod(a, b) => a.is_classical() && b.is_classical(),
            QType::Lolli(a, b) => a.is_quantum() && b.is_quantum(),
            QType::Qbit | QType::Tensor(..) => false,
        }
    }

    /// Number of qubits in a quantum type.
    pub fn width(&self) -> usize {
        match self {
            QType::Tensor(a, b) => a.width() + b.width(),
            _ => 1,
        }
    }
}

/// Type translation into the unitary type system.
pub fn translate_type(a: &QType) -> Type {
    match a {
        QType::Unit => Type::Unit,
        QType::Bit => Type::bool(),
        QType::Arrow(a, b) => Type::arrow(translate_type(a), translate_type(b)),
        QType::Prod(a, b) => Type::prod(translate_type(a), translate_type(b)),
        QType::Lolli(a, b) => Type::arrow(Type::Unit, Type::unit_arrow(translate_type(a), translate_type(b))),
        QType::Qbit => Type::sharp(Type::bool()),
        QType::Tensor(a, b) => Type::otimes(translate_type(a), translate_type(b)),
    }
}

impl fmt::Display for QType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &QType, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let (p, s): (u8, Box<dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result + '_>) = match t {
                QType::Unit => (3, Box::new(|f| f.write_str("unit"))),
                QType::Bit => (3, Box::new(|f| f.write_str("bit"))),
                QType::Qbit => (3, Box::new(|f| f.write_str("qbit"))),
                QType::Arrow(a, b) | QType::Lolli(a, b) => {
                    let op = if matches!(t, QType::Arrow(..)) { "->" } else { "-o" };
                    (0, Box::new(move |f| {
                        go(a, 1, f)?;
                        write!(f, " {op} ")?;
                        go(b, 0, f)
                    }))
                }
                QType::Prod(a, b) | QType::Tensor(a, b) => {
                    let op = if matches!(t, QType::Prod(..)) { "*" } else { "(x)" };
                    (1, Box::new(move |f| {
                        go(a, 2, f)?;
                        write!(f, " {op} ")?;
                        go(b, 1, f)
                    }))
                }
            };
            if p < prec {
                f.write_str("(")?;
                s(f)?;
                f.write_str(")")
            } else {
                s(f)
            }
        }
        go(self, 0, f)
    }
}

/// Parses `unit`, `bit`, `qbit`, `A * B`, `A (x) B`, `A -> B` and
/// `A -o B`. Binary operators associate to the right; arrows bind loosest.
pub fn parse_qtype(src: &str) -> Result<QType> {
    let mut cur = Cursor::new(lex(src, true)?, src.len());
    let t = qtype_expr(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

fn is_lolli(cur: &Cursor) -> bool {
    cur.is_sym("-o") || (cur.is_sym("-") && matches!(cur.peek_at(1), Some(Tok::Ident(s)) if s == "o"))
}

pub(crate) fn qtype_expr(cur: &mut Cursor) -> Result<QType> {
    let a = qtype_factor(cur)?;
    if cur.eat_sym("->") {
        return Ok(QType::arrow(a, qtype_expr(cur)?));
    }
    if is_lolli(cur) {
        if !cur.eat_sym("-o") {
            cur.next();
            cur.next();
        }
        return Ok(QType::lolli(a, qtype_expr(cur)?));
    }
    Ok(a)
}

fn qtype_factor(cur: &mut Cursor) -> Result<QType> {
    let a = qtype_atom(cur)?;
    if cur.eat_sym("*") {
        return Ok(QType::prod(a, qtype_factor(cur)?));
    }
    if cur.eat_sym("(x)") {
        return Ok(QType::tensor(a, qtype_factor(cur)?));
    }
    Ok(a)
}

fn qtype_atom(cur: &mut Cursor) -> Result<QType> {
    if cur.eat_sym("(") {
        let t = qtype_expr(cur)?;
        cur.expect_sym(")")?;
        return Ok(t);
    }
    match cur.peek() {
        Some(Tok::Ident(s)) => {
            let t = match s.as_str() {
                "unit" | "U" => QType::Unit,
                "bit" => QType::Bit,
                "qbit" => QType::Qbit,
                _ => return cur.err(format!("unknown type `{s}`")),
            };
            cur.next();
            Ok(t)
        }
        _ => cur.err(format!("expected a type, found {}", cur.describe())),
    }
}

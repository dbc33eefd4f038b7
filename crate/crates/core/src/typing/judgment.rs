use super::context::Context;
use crate::error::{Error, Result};
use crate::semantics::types::type_expr;
use crate::semantics::Type;
use crate::syntax::lexer::{lex, Cursor, Tok};
use crate::syntax::parse::TermParser;
use crate::syntax::{pretty, Definitions, RawDistribution, Style};
use std::fmt;

/// `Γ ⊢ t⃗ : A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypingJudgment {
    pub ctx: Context,
    pub term: RawDistribution,
    pub ty: Type,
}

/// `Γ ⊢ ⟨Δ1 | t⃗1 ⊥ Δ2 | t⃗2⟩ : A`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityJudgment {
    pub shared: Context,
    pub left_ctx: Context,
    pub left: RawDistribution,
    pub right_ctx: Context,
    pub right: RawDistribution,
    pub ty: Type,
}

impl TypingJudgment {
    pub fn new(ctx: Context, term: RawDistribution, ty: Type) -> TypingJudgment {
        TypingJudgment { ctx, term, ty }
    }
}

impl OrthogonalityJudgment {
    /// `Γ, Δ1 ⊢ t⃗1 : A`.
    pub fn left_judgment(&self) -> Result<TypingJudgment> {
        let ctx = self.shared.concat(&self.left_ctx).ok_or_else(|| Error::Type("contexts overlap".into()))?;
        Ok(TypingJudgment::new(ctx, self.left.clone(), self.ty.clone()))
    }

    pub fn right_judgment(&self) -> Result<TypingJudgment> {
        let ctx = self.shared.concat(&self.right_ctx).ok_or_else(|| Error::Type("contexts overlap".into()))?;
        Ok(TypingJudgment::new(ctx, self.right.clone(), self.ty.clone()))
    }

    pub fn swapped(&self) -> OrthogonalityJudgment {
        OrthogonalityJudgment {
            shared: self.shared.clone(),
            left_ctx: self.right_ctx.clone(),
            left: self.right.clone(),
            right_ctx: self.left_ctx.clone(),
            right: self.left.clone(),
            ty: self.ty.clone(),
        }
    }
}

impl fmt::Display for TypingJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.ctx.is_empty() {
            write!(f, "{} ", self.ctx)?;
        }
        write!(f, "⊢ {} : {}", pretty(&self.term, Style::Display), self.ty)
    }
}

impl fmt::Display for OrthogonalityJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.shared.is_empty() {
            write!(f, "{} ", self.shared)?;
        }
        let side = |c: &Context, t: &RawDistribution| {
            if c.is_empty() {
                pretty(t, Style::Display)
            } else {
                format!("{c} | {}", pretty(t, Style::Display))
            }
        };
        write!(f, "⊢ ⟨{} ⊥ {}⟩ : {}", side(&self.left_ctx, &self.left), side(&self.right_ctx, &self.right), self.ty)
    }
}

fn context(cur: &mut Cursor, stop: &[&str]) -> Result<Context> {
    let mut items = Vec::new();
    if stop.iter().any(|s| cur.is_sym(s)) {
        return Ok(Context::new());
    }
    loop {
        let x = cur.expect_ident()?;
        cur.expect_sym(":")?;
        let a = type_expr(cur)?;
        items.push((x, a));
        if !cur.eat_sym(",") {
            break;
        }
    }
    Context::from_bindings(items).map_err(|msg| Error::Parse { pos: cur.pos(), msg })
}

/// Parses `x:#B, y:B |- e : #B`.
pub fn parse_judgment(src: &str, defs: &dyn Definitions) -> Result<TypingJudgment> {
    let mut cur = Cursor::new(lex(src, true)?, src.len());
    let ctx = context(&mut cur, &["|-"])?;
    cur.expect_sym("|-")?;
    let mut p = TermParser::from_cursor(cur, defs);
    let term = p.dist()?;
    let mut cur = p.cur;
    cur.expect_sym(":")?;
    let ty = type_expr(&mut cur)?;
    cur.expect_end()?;
    Ok(TypingJudgment::new(ctx, term, ty))
}

/// Parses `G |- <D1 | e1 _|_ D2 | e2> : A`; a side with an empty context
/// may be written without the bar.
pub fn parse_orthogonality(src: &str, defs: &dyn Definitions) -> Result<OrthogonalityJudgment> {
    let mut cur = Cursor::new(lex(src, true)?, src.len());
    let shared = context(&mut cur, &["|-"])?;
    cur.expect_sym("|-")?;
    cur.expect_sym("<")?;
    let (left_ctx, left, cur) = side(cur, defs, "_|_")?;
    let (right_ctx, right, mut cur) = side(cur, defs, ">")?;
    cur.expect_sym(":")?;
    let ty = type_expr(&mut cur)?;
    cur.expect_end()?;
    Ok(OrthogonalityJudgment { shared, left_ctx, left, right_ctx, right, ty })
}

fn side(mut cur: Cursor, defs: &dyn Definitions, end: &str) -> Result<(Context, RawDistribution, Cursor)> {
    // `x : A, ... |` is recognised by an identifier followed by a colon,
    // or by a leading bar for an explicitly empty context
    let ctx = if cur.eat_sym("|") {
        Context::new()
    } else if matches!(cur.peek(), Some(Tok::Ident(_))) && cur.peek_at(1) == Some(&Tok::Sym(":")) {
        let c = context(&mut cur, &["|"])?;
        cur.expect_sym("|")?;
        c
    } else {
        Context::new()
    };
    let mut p = TermParser::from_cursor(cur, defs);
    let t = p.dist()?;
    let mut cur = p.cur;
    cur.expect_sym(end)?;
    Ok((ctx, t, cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::parse_type;
    use crate::syntax::NoDefinitions;

    #[test]
    fn judgments() {
        let j = parse_judgment("x:#B, y:B |- (x, y) : #B (x) B", &NoDefinitions).unwrap();
        assert_eq!(j.ctx.len(), 2);
        assert_eq!(j.ty, parse_type("#B (x) B").unwrap());
        let j = parse_judgment("|- lam x. x : #B -> #B", &NoDefinitions).unwrap();
        assert!(j.ctx.is_empty());
        assert!(parse_judgment("x:B, x:B |- x : B", &NoDefinitions).is_err());
    }

    #[test]
    fn orthogonality() {
        let j = parse_orthogonality("|- <x:#U | x; tt _|_ y:#U | y; ff> : #B", &NoDefinitions).unwrap();
        assert_eq!(j.left_ctx.len(), 1);
        assert_eq!(j.right_ctx.len(), 1);
        let j = parse_orthogonality("|- <tt _|_ ff> : B", &NoDefinitions).unwrap();
        assert!(j.left_ctx.is_empty() && j.shared.is_empty());
        let j = parse_orthogonality("z:B |- <| z _|_ | z> : B", &NoDefinitions).unwrap();
        assert_eq!(j.shared.len(), 1);
    }
}

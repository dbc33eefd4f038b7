use super::context::Context;
use super::judgment::{OrthogonalityJudgment, TypingJudgment};
use super::semantic::{free_variable_condition, orthogonal_outputs};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::semantics::subtype::{normalize_type, subtype, type_equiv};
use crate::semantics::{is_pure_type, realizes, Type, Verdict};
use crate::syntax::term::{raw_app, raw_inl, raw_inr, raw_let, raw_match, raw_pair, raw_seq};
use crate::syntax::{canonicalize, Name, PureTerm, PureValue, RawDistribution};
use serde_json::json;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Axiom,
    Sub,
    PureLam,
    UnitLam,
    App,
    Void,
    Seq,
    SeqSharp,
    Pair,
    LetPair,
    LetTens,
    InL,
    InR,
    PureMatch,
    Weak,
    Contr,
    UnitaryMatch,
    /// `⊢ t⃗ : A` for a closed `t⃗` with `t⃗ ⊩ A`, decided by evaluation.
    Closed,
    /// Replaces context types by equivalent ones.
    CtxConv,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "Axiom",
            Rule::Sub => "Sub",
            Rule::PureLam => "PureLam",
            Rule::UnitLam => "UnitLam",
            Rule::App => "App",
            Rule::Void => "Void",
            Rule::Seq => "Seq",
            Rule::SeqSharp => "SeqSharp",
            Rule::Pair => "Pair",
            Rule::LetPair => "LetPair",
            Rule::LetTens => "LetTens",
            Rule::InL => "InL",
            Rule::InR => "InR",
            Rule::PureMatch => "PureMatch",
            Rule::Weak => "Weak",
            Rule::Contr => "Contr",
            Rule::UnitaryMatch => "UnitaryMatch",
            Rule::Closed => "Closed",
            Rule::CtxConv => "CtxConv",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Premise {
    Typing(Derivation),
    /// An orthogonality judgment together with derivations of its two
    /// component typing judgments.
    Orthogonality { judgment: OrthogonalityJudgment, left: Box<Derivation>, right: Box<Derivation> },
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: TypingJudgment,
    pub premises: Vec<Premise>,
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: TypingJudgment, premises: Vec<Premise>) -> Derivation {
        Derivation { rule, conclusion, premises }
    }

    pub fn leaf(rule: Rule, conclusion: TypingJudgment) -> Derivation {
        Derivation::new(rule, conclusion, Vec::new())
    }

    pub fn from_premises(rule: Rule, conclusion: TypingJudgment, premises: Vec<Derivation>) -> Derivation {
        Derivation::new(rule, conclusion, premises.into_iter().map(Premise::Typing).collect())
    }

    pub fn ty(&self) -> &Type {
        &self.conclusion.ty
    }

    /// Every rule used, in prefix order.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            match p {
                Premise::Typing(d) => out.extend(d.rules()),
                Premise::Orthogonality { left, right, .. } => {
                    out.extend(left.rules());
                    out.extend(right.rules());
                }
            }
        }
        out
    }

    pub fn uses(&self, rule: Rule) -> bool {
        self.rules().contains(&rule)
    }

    pub fn size(&self) -> usize {
        self.rules().len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let premises: Vec<serde_json::Value> = self
            .premises
            .iter()
            .map(|p| match p {
                Premise::Typing(d) => d.to_json(),
                Premise::Orthogonality { judgment, left, right } => json!({
                    "orthogonality": judgment.to_string(),
                    "left": left.to_json(),
                    "right": right.to_json(),
                }),
            })
            .collect();
        json!({
            "rule": self.rule.name(),
            "judgment": self.conclusion.to_string(),
            "premises": premises,
        })
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{}: {}", "", self.rule.name(), self.conclusion, indent = indent)?;
        for p in &self.premises {
            match p {
                Premise::Typing(d) => d.write_tree(f, indent + 2)?,
                Premise::Orthogonality { judgment, left, right } => {
                    writeln!(f, "{:indent$}Orth: {}", "", judgment, indent = indent + 2)?;
                    left.write_tree(f, indent + 4)?;
                    right.write_tree(f, indent + 4)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

/// Validates every node of a derivation against its rule schema, and the
/// condition `dom♯(Γ) ⊆ FV(t⃗) ⊆ dom(Γ)` at every conclusion.
pub fn check_derivation(d: &Derivation, cfg: &Config) -> Result<()> {
    let mut path = Vec::new();
    check_node(d, cfg, &mut path)
}

fn fail<T>(path: &[usize], msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidDerivation { path: path.to_vec(), msg: msg.into() })
}

fn same_top(a: &RawDistribution, b: &RawDistribution) -> bool {
    a == b || canonicalize(a) == canonicalize(b)
}

fn typing_premises<'a>(d: &'a Derivation, n: usize, path: &[usize]) -> Result<Vec<&'a Derivation>> {
    let ps: Vec<&Derivation> = d
        .premises
        .iter()
        .filter_map(|p| match p {
            Premise::Typing(t) => Some(t),
            _ => None,
        })
        .collect();
    if ps.len() != n || d.premises.len() != n + usize::from(d.rule == Rule::UnitaryMatch) {
        return fail(path, format!("{} expects {} typing premise(s), found {}", d.rule.name(), n, ps.len()));
    }
    Ok(ps)
}

/// `Γ` is the disjoint union of the given contexts.
fn is_split(whole: &Context, parts: &[&Context]) -> bool {
    let mut acc = Context::new();
    for p in parts {
        match acc.concat(p) {
            Some(c) => acc = c,
            None => return false,
        }
    }
    acc.same_as(whole)
}

/// The bindings of `premise` beyond `base`, in order.
fn extra_bindings(premise: &Context, base: &Context) -> Vec<(String, Type)> {
    premise.bindings().iter().filter(|(x, _)| !base.contains(x)).cloned().collect()
}

fn shape_of(t: &Type) -> Type {
    normalize_type(t)
}

fn check_node(d: &Derivation, cfg: &Config, path: &mut Vec<usize>) -> Result<()> {
    let c = &d.conclusion;
    if let Err(msg) = free_variable_condition(&c.ctx, &c.term) {
        return fail(path, format!("{}: {msg}", d.rule.name()));
    }
    match d.rule {
        Rule::Axiom => {
            typing_premises(d, 0, path)?;
            let [(x, a)] = c.ctx.bindings() else { return fail(path, "Axiom needs a single binding") };
            if c.term != PureTerm::var(x).dist() {
                return fail(path, format!("Axiom: term is not `{x}`"));
            }
            if !type_equiv(a, &c.ty) {
                return fail(path, "Axiom: type differs from the context");
            }
        }
        Rule::Void => {
            typing_premises(d, 0, path)?;
            if !c.ctx.is_empty() || c.term != PureValue::Void.dist() || !type_equiv(&c.ty, &Type::Unit) {
                return fail(path, "Void: expected ⊢ () : U");
            }
        }
        Rule::Closed => {
            typing_premises(d, 0, path)?;
            if !c.ctx.is_empty() || !c.term.is_closed() {
                return fail(path, "Closed: term must be closed in the empty context");
            }
            if realizes(&canonicalize(&c.term), &c.ty, cfg) != Verdict::Yes {
                return fail(path, "Closed: term does not realise the type");
            }
        }
        Rule::Sub => {
            let [p] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            let pc = &p.conclusion;
            if !pc.ctx.same_as(&c.ctx) || !same_top(&pc.term, &c.term) {
                return fail(path, "Sub: premise judgment differs");
            }
            if !subtype(&pc.ty, &c.ty) {
                return fail(path, format!("Sub: {} is not a subtype of {}", pc.ty, c.ty));
            }
        }
        Rule::CtxConv => {
            let [p] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            let pc = &p.conclusion;
            if !pc.ctx.same_as(&c.ctx) || !same_top(&pc.term, &c.term) || !type_equiv(&pc.ty, &c.ty) {
                return fail(path, "CtxConv: contexts or judgments are not equivalent");
            }
        }
        Rule::PureLam | Rule::UnitLam => {
            let [p] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            let pc = &p.conclusion;
            let (a, b) = match (d.rule, shape_of(&c.ty)) {
                (Rule::PureLam, Type::PureArrow(a, b)) | (Rule::UnitLam, Type::UnitArrow(a, b)) => (a, b),
                _ => return fail(path, format!("{}: type {} has the wrong arrow", d.rule.name(), c.ty)),
            };
            if d.rule == Rule::PureLam && !c.ctx.all_pure() {
                return fail(path, "PureLam: context is not pure");
            }
            let Some(PureTerm::Val(PureValue::Lam(_, body))) = c.term.as_single() else {
                return fail(path, format!("{}: term is not an abstraction", d.rule.name()));
            };
            let extra = extra_bindings(&pc.ctx, &c.ctx);
            let [(x, ax)] = &extra[..] else { return fail(path, "premise must bind exactly one new variable") };
            if pc.ctx.len() != c.ctx.len() + 1 || !pc.ctx.without(x).same_as(&c.ctx) {
                return fail(path, "premise context is not Γ, x:A");
            }
            if !type_equiv(ax, &a) || !type_equiv(&pc.ty, &b) {
                return fail(path, "premise types do not match the arrow");
            }
            if pc.term != body.open_names(&[x]) {
                return fail(path, "premise term is not the abstraction body");
            }
        }
        Rule::App => {
            let [s, t] = typing_premises(d, 2, path)?[..] else { unreachable!() };
            if !is_split(&c.ctx, &[&s.conclusion.ctx, &t.conclusion.ctx]) {
                return fail(path, "App: contexts are not a disjoint split");
            }
            let Type::UnitArrow(a, b) = shape_of(&s.conclusion.ty) else {
                return fail(path, "App: function premise is not typed A ⇒ B");
            };
            if !type_equiv(&t.conclusion.ty, &a) || !type_equiv(&c.ty, &b) {
                return fail(path, "App: argument or result type mismatch");
            }
            if !same_top(&c.term, &raw_app(&s.conclusion.term, &t.conclusion.term)) {
                return fail(path, "App: term is not the application of the premises");
            }
        }
        Rule::Seq | Rule::SeqSharp => {
            let [t, s] = typing_premises(d, 2, path)?[..] else { unreachable!() };
            if !is_split(&c.ctx, &[&t.conclusion.ctx, &s.conclusion.ctx]) {
                return fail(path, "Seq: contexts are not a disjoint split");
            }
            let unit = if d.rule == Rule::Seq { Type::Unit } else { Type::sharp(Type::Unit) };
            if !type_equiv(&t.conclusion.ty, &unit) || !type_equiv(&s.conclusion.ty, &c.ty) {
                return fail(path, format!("{}: type mismatch", d.rule.name()));
            }
            if d.rule == Rule::SeqSharp && !matches!(shape_of(&c.ty), Type::Sharp(_)) {
                return fail(path, "SeqSharp: conclusion type is not ♯A");
            }
            if !same_top(&c.term, &raw_seq(&t.conclusion.term, &s.conclusion.term)) {
                return fail(path, "Seq: term mismatch");
            }
        }
        Rule::Pair => {
            let [v, w] = typing_premises(d, 2, path)?[..] else { unreachable!() };
            if !is_split(&c.ctx, &[&v.conclusion.ctx, &w.conclusion.ctx]) {
                return fail(path, "Pair: contexts are not a disjoint split");
            }
            let Type::Prod(a, b) = shape_of(&c.ty) else { return fail(path, "Pair: type is not A × B") };
            if !type_equiv(&v.conclusion.ty, &a) || !type_equiv(&w.conclusion.ty, &b) {
                return fail(path, "Pair: component type mismatch");
            }
            match raw_pair(&v.conclusion.term, &w.conclusion.term) {
                Ok(p) if same_top(&c.term, &p) => {}
                _ => return fail(path, "Pair: term mismatch"),
            }
        }
        Rule::InL | Rule::InR => {
            let [v] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            if !v.conclusion.ctx.same_as(&c.ctx) {
                return fail(path, "injection: context mismatch");
            }
            let Type::Sum(a, b) = shape_of(&c.ty) else { return fail(path, "injection: type is not A + B") };
            let (side, lifted) = if d.rule == Rule::InL {
                (a, raw_inl(&v.conclusion.term))
            } else {
                (b, raw_inr(&v.conclusion.term))
            };
            if !type_equiv(&v.conclusion.ty, &side) {
                return fail(path, "injection: component type mismatch");
            }
            match lifted {
                Ok(t) if same_top(&c.term, &t) => {}
                _ => return fail(path, "injection: term mismatch"),
            }
        }
        Rule::LetPair | Rule::LetTens => {
            let [t, s] = typing_premises(d, 2, path)?[..] else { unreachable!() };
            let extra = extra_bindings(&s.conclusion.ctx, &c.ctx);
            let [e0, e1] = &extra[..] else { return fail(path, "let: body must bind two new variables") };
            // context order is irrelevant; the term decides which binder is
            // which, and when neither occurs in the body either order will do
            let lifted_with = |x: &str, y: &str| {
                let body = s.conclusion.term.close(&[x, y]);
                raw_let(&t.conclusion.term, &Name::new(x), &Name::new(y), &body)
            };
            let orders: Vec<_> =
                [(e0, e1), (e1, e0)].into_iter().filter(|(x, y)| same_top(&c.term, &lifted_with(&x.0, &y.0))).collect();
            let Some(((x, _), (y, _))) = orders.first() else { return fail(path, "let: term mismatch") };
            let delta = s.conclusion.ctx.without(x).without(y);
            if !is_split(&c.ctx, &[&t.conclusion.ctx, &delta]) {
                return fail(path, "let: contexts are not a disjoint split");
            }
            let sc = shape_of(&t.conclusion.ty);
            let (a, b) = match (d.rule, &sc) {
                (Rule::LetPair, Type::Prod(a, b)) => ((**a).clone(), (**b).clone()),
                (Rule::LetTens, Type::Sharp(p)) => match &**p {
                    Type::Prod(a, b) => (Type::sharp((**a).clone()), Type::sharp((**b).clone())),
                    _ => return fail(path, "LetTens: scrutinee is not A ⊗ B"),
                },
                _ => return fail(path, format!("{}: scrutinee type {} does not fit", d.rule.name(), sc)),
            };
            let fits = |((_, ax), (_, by)): &(&(String, Type), &(String, Type))| type_equiv(ax, &a) && type_equiv(by, &b);
            if !orders.iter().any(fits) || !type_equiv(&s.conclusion.ty, &c.ty) {
                return fail(path, "let: type mismatch");
            }
            if d.rule == Rule::LetTens && !matches!(shape_of(&c.ty), Type::Sharp(_)) {
                return fail(path, "LetTens: conclusion type is not ♯C");
            }
        }
        Rule::PureMatch => {
            let [t, s1, s2] = typing_premises(d, 3, path)?[..] else { unreachable!() };
            let Type::Sum(a, b) = shape_of(&t.conclusion.ty) else {
                return fail(path, "PureMatch: scrutinee is not A + B");
            };
            check_branches(c, t, &s1.conclusion, &s2.conclusion, &a, &b, path)?;
        }
        Rule::UnitaryMatch => {
            let [t] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            let Some((j, l, r)) = d.premises.iter().find_map(|p| match p {
                Premise::Orthogonality { judgment, left, right } => Some((judgment, left, right)),
                _ => None,
            }) else {
                return fail(path, "UnitaryMatch: missing orthogonality premise");
            };
            let Type::Sharp(inner) = shape_of(&t.conclusion.ty) else {
                return fail(path, "UnitaryMatch: scrutinee is not A1 ⊕ A2");
            };
            let Type::Sum(a1, a2) = &*inner else { return fail(path, "UnitaryMatch: scrutinee is not A1 ⊕ A2") };
            if !matches!(shape_of(&c.ty), Type::Sharp(_)) || !type_equiv(&j.ty, &c.ty) {
                return fail(path, "UnitaryMatch: conclusion type is not the ♯C of the premise");
            }
            let ([(x1, b1)], [(x2, b2)]) = (j.left_ctx.bindings(), j.right_ctx.bindings()) else {
                return fail(path, "UnitaryMatch: each side binds exactly one variable");
            };
            if !type_equiv(b1, &Type::sharp((**a1).clone())) || !type_equiv(b2, &Type::sharp((**a2).clone())) {
                return fail(path, "UnitaryMatch: branch variables must be ♯A1 and ♯A2");
            }
            let lj = TypingJudgment::new(j.shared.with(x1, b1.clone()), j.left.clone(), j.ty.clone());
            let rj = TypingJudgment::new(j.shared.with(x2, b2.clone()), j.right.clone(), j.ty.clone());
            check_branches(c, t, &lj, &rj, &Type::sharp((**a1).clone()), &Type::sharp((**a2).clone()), path)?;
            for (k, (sub, want)) in [(l, &lj), (r, &rj)].into_iter().enumerate() {
                let got = &sub.conclusion;
                if !got.ctx.same_as(&want.ctx) || got.term != want.term || !type_equiv(&got.ty, &want.ty) {
                    return fail(path, "UnitaryMatch: component derivation does not match the judgment");
                }
                path.push(1 + k);
                check_node(sub, cfg, path)?;
                path.pop();
            }
            match orthogonal_outputs(j, cfg) {
                Verdict::Yes => {}
                Verdict::No => return fail(path, "UnitaryMatch: branches are not orthogonal"),
                Verdict::Unsupported => return fail(path, "UnitaryMatch: orthogonality could not be established"),
            }
        }
        Rule::Weak => {
            let [p] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            let extra = extra_bindings(&c.ctx, &p.conclusion.ctx);
            let [(_, a)] = &extra[..] else { return fail(path, "Weak: conclusion must add one variable") };
            if !is_pure_type(a) {
                return fail(path, format!("Weak: {a} is not pure"));
            }
            if c.ctx.len() != p.conclusion.ctx.len() + 1
                || !same_top(&c.term, &p.conclusion.term)
                || !type_equiv(&c.ty, &p.conclusion.ty)
            {
                return fail(path, "Weak: premise judgment differs");
            }
        }
        Rule::Contr => {
            let [p] = typing_premises(d, 1, path)?[..] else { unreachable!() };
            let pc = &p.conclusion;
            let extra = extra_bindings(&pc.ctx, &c.ctx);
            let [(y, a)] = &extra[..] else { return fail(path, "Contr: premise must have one extra variable") };
            if !is_pure_type(a) {
                return fail(path, format!("Contr: {a} is not pure"));
            }
            if !pc.ctx.without(y).same_as(&c.ctx) || !type_equiv(&pc.ty, &c.ty) {
                return fail(path, "Contr: contexts differ");
            }
            let ok = c.ctx.bindings().iter().any(|(x, b)| {
                type_equiv(a, b) && same_top(&pc.term.rename_free(y, x), &c.term)
            });
            if !ok {
                return fail(path, format!("Contr: term is not the premise with `{y}` merged"));
            }
        }
    }
    for (i, p) in d.premises.iter().enumerate() {
        if let Premise::Typing(sub) = p {
            path.push(i);
            check_node(sub, cfg, path)?;
            path.pop();
        }
    }
    Ok(())
}

/// Shared premise structure of both match rules.
fn check_branches(
    c: &TypingJudgment,
    t: &Derivation,
    s1: &TypingJudgment,
    s2: &TypingJudgment,
    a: &Type,
    b: &Type,
    path: &[usize],
) -> Result<()> {
    let e1 = extra_bindings(&s1.ctx, &c.ctx);
    let e2 = extra_bindings(&s2.ctx, &c.ctx);
    let ([(x1, a1)], [(x2, b2)]) = (&e1[..], &e2[..]) else {
        return fail(path, "match: each branch binds exactly one new variable");
    };
    let (d1, d2) = (s1.ctx.without(x1), s2.ctx.without(x2));
    if !d1.same_as(&d2) || !is_split(&c.ctx, &[&t.conclusion.ctx, &d1]) {
        return fail(path, "match: contexts are not Γ, Δ with Δ shared by the branches");
    }
    if !type_equiv(a1, a) || !type_equiv(b2, b) {
        return fail(path, "match: branch variable types do not match the scrutinee");
    }
    if !type_equiv(&s1.ty, &c.ty) || !type_equiv(&s2.ty, &c.ty) {
        return fail(path, "match: branch types differ from the conclusion");
    }
    let lifted = raw_match(
        &t.conclusion.term,
        &Name::new(x1.as_str()),
        &s1.term.close(&[x1]),
        &Name::new(x2.as_str()),
        &s2.term.close(&[x2]),
    );
    if !same_top(&c.term, &lifted) {
        return fail(path, "match: term mismatch");
    }
    Ok(())
}

use super::context::Context;
use super::derivation::{Derivation, Premise, Rule};
use super::judgment::{OrthogonalityJudgment, TypingJudgment};
use super::reconstruct;
use super::semantic::orthogonal_outputs;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::normalize;
use crate::semantics::subtype::{normalize_type, subtype};
use crate::semantics::member::may_confirm;
use crate::semantics::{is_pure_type, realizes, Type, Verdict};
use crate::syntax::term::{raw_app, raw_inl, raw_inr, raw_let, raw_match, raw_pair, raw_seq};
use crate::syntax::{
    canonicalize, fresh_name, pretty, CanonicalDistribution, Name, PureTerm, PureValue, RawDistribution, Style,
    Var,
};
use std::collections::{BTreeSet, HashMap};

type R = std::result::Result<Derivation, String>;

/// Builds a derivation of `Γ ⊢ t⃗ : A` by a syntax-directed search.
///
/// Non-pure variables go to the unique subterm that uses them; pure ones are
/// shared through `Contr` and dropped through `Weak`. At destructors the pure
/// rule is tried before the sharp one. Closed subterms that no syntactic rule
/// covers are typed by evaluation (`Closed`).
pub fn infer(ctx: &Context, t: &RawDistribution, goal: &Type, cfg: &Config) -> Result<Derivation> {
    let mut used: BTreeSet<String> = ctx.names();
    used.extend(t.free_vars());
    let mut search = Search { cfg, used, memo: HashMap::new() };
    search.check(ctx, t, goal).map_err(Error::NoDerivation)
}

struct Search<'a> {
    cfg: &'a Config,
    used: BTreeSet<String>,
    memo: HashMap<String, R>,
}

/// Result of splitting a context between two subterms. Pure variables
/// used by both are renamed in the second one and later merged by `Contr`.
struct Split {
    first: Context,
    second: Context,
    renames: Vec<(String, String)>,
}

impl Split {
    fn rename(&self, t: &RawDistribution) -> RawDistribution {
        self.renames.iter().fold(t.clone(), |acc, (x, x2)| acc.rename_free(x, x2))
    }

    fn whole(&self) -> Context {
        self.first.concat(&self.second).expect("split parts are disjoint")
    }
}

fn show(t: &RawDistribution) -> String {
    pretty(t, Style::Display)
}

fn candidates(g: &Type) -> Vec<Type> {
    let mut out = vec![g.clone()];
    match g {
        Type::Sharp(x) => {
            out.extend(candidates(x));
            match &**x {
                Type::Sum(a, b) => out.push(normalize_type(&Type::sum(Type::sharp((**a).clone()), Type::sharp((**b).clone())))),
                Type::Prod(a, b) => {
                    out.push(normalize_type(&Type::prod(Type::sharp((**a).clone()), Type::sharp((**b).clone()))))
                }
                _ => {}
            }
        }
        Type::Flat(x) => {
            if let Type::UnitArrow(a, b) = &**x {
                out.push(Type::arrow((**a).clone(), (**b).clone()));
            }
        }
        _ => {}
    }
    let mut seen = Vec::new();
    out.retain(|t| {
        if seen.contains(t) {
            false
        } else {
            seen.push(t.clone());
            true
        }
    });
    out
}

fn value_type(v: &PureValue) -> Option<Type> {
    match v {
        PureValue::Void => Some(Type::Unit),
        PureValue::Inl(x) | PureValue::Inr(x) => {
            let a = value_type(x)?;
            Some(Type::sum(a.clone(), a))
        }
        PureValue::Pair(a, b) => Some(Type::prod(value_type(a)?, value_type(b)?)),
        PureValue::Var(_) | PureValue::Lam(..) => None,
    }
}

/// A data type suggested by the normal form of a closed term.
fn guess_type(nf: &CanonicalDistribution) -> Option<Type> {
    let vals = nf.values()?;
    let mut ty: Option<Type> = None;
    for (_, v) in &vals {
        let t = value_type(v)?;
        match &ty {
            None => ty = Some(t),
            Some(u) if *u == t => {}
            Some(_) => return None,
        }
    }
    let ty = ty?;
    match vals.as_slice() {
        [(c, _)] if *c == crate::syntax::Scalar::ONE => Some(ty),
        _ => Some(Type::sharp(ty)),
    }
}

fn judgment(ctx: &Context, t: &RawDistribution, ty: &Type) -> TypingJudgment {
    TypingJudgment::new(ctx.clone(), t.clone(), ty.clone())
}

impl Search<'_> {
    fn fresh(&mut self, hint: &str) -> String {
        let x = fresh_name(hint, &self.used);
        self.used.insert(x.clone());
        x
    }

    fn sub(&self, d: Derivation, goal: &Type) -> R {
        if d.ty() == goal {
            return Ok(d);
        }
        if subtype(d.ty(), goal) {
            let c = TypingJudgment::new(d.conclusion.ctx.clone(), d.conclusion.term.clone(), goal.clone());
            return Ok(Derivation::from_premises(Rule::Sub, c, vec![d]));
        }
        Err(format!("{} : {} is not a subtype of {}", show(&d.conclusion.term), d.ty(), goal))
    }

    fn split(&mut self, ctx: &Context, first: &BTreeSet<String>, second: &BTreeSet<String>) -> std::result::Result<Split, String> {
        let mut renames = Vec::new();
        let mut bindings = Vec::new();
        for (x, a) in ctx.restrict(second).bindings() {
            if first.contains(x) {
                if !is_pure_type(a) {
                    return Err(format!("`{x} : {a}` is used twice but its type is not pure"));
                }
                let x2 = self.fresh(x);
                renames.push((x.clone(), x2.clone()));
                bindings.push((x2, a.clone()));
            } else {
                bindings.push((x.clone(), a.clone()));
            }
        }
        Ok(Split {
            first: ctx.restrict(first),
            second: Context::from_bindings(bindings).expect("fresh names"),
            renames,
        })
    }

    /// Merges the renamed copies back with `Contr`.
    fn contract(&self, mut d: Derivation, split: &Split) -> Derivation {
        for (x, x2) in split.renames.iter().rev() {
            let c = TypingJudgment::new(
                d.conclusion.ctx.without(x2),
                d.conclusion.term.rename_free(x2, x),
                d.conclusion.ty.clone(),
            );
            d = Derivation::from_premises(Rule::Contr, c, vec![d]);
        }
        d
    }

    fn check(&mut self, ctx: &Context, t: &RawDistribution, goal: &Type) -> R {
        let fv = t.free_vars();
        if let Some(x) = fv.iter().find(|x| !ctx.contains(x)) {
            return Err(format!("`{x}` is not in the context"));
        }
        let unused: Vec<(String, Type)> =
            ctx.bindings().iter().filter(|(x, _)| !fv.contains(x)).cloned().collect();
        if let Some((x, a)) = unused.iter().find(|(_, a)| !is_pure_type(a)) {
            return Err(format!("`{x} : {a}` has a non-pure type but does not occur in {}", show(t)));
        }
        if unused.is_empty() {
            return self.check_used(ctx, t, goal);
        }
        let mut keep = fv.clone();
        let mut d = self.check_used(&ctx.restrict(&keep), t, goal)?;
        for (x, _) in unused {
            keep.insert(x);
            let c = TypingJudgment::new(ctx.restrict(&keep), t.clone(), d.ty().clone());
            d = Derivation::from_premises(Rule::Weak, c, vec![d]);
        }
        Ok(d)
    }

    /// `ctx` binds exactly the free variables of `t`.
    fn check_used(&mut self, ctx: &Context, t: &RawDistribution, goal: &Type) -> R {
        // retries after a failed guess revisit the same subgoals
        let key = format!("{ctx} ⊢ {} : {goal}", pretty(t, Style::Exact));
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.check_used_uncached(ctx, t, goal);
        self.memo.insert(key, r.clone());
        r
    }

    fn check_used_uncached(&mut self, ctx: &Context, t: &RawDistribution, goal: &Type) -> R {
        let r = match t {
            RawDistribution::Single(p) => self.check_term(ctx, p, t, goal),
            _ => self.check_dist(ctx, t, goal),
        };
        match r {
            Ok(d) => Ok(d),
            Err(e) => {
                if ctx.is_empty()
                    && t.is_closed()
                    && may_confirm(&normalize_type(goal))
                    && realizes(&canonicalize(t), goal, self.cfg) == Verdict::Yes
                {
                    Ok(Derivation::leaf(Rule::Closed, judgment(ctx, t, goal)))
                } else {
                    Err(e)
                }
            }
        }
    }

    fn check_term(&mut self, ctx: &Context, p: &PureTerm, t: &RawDistribution, goal: &Type) -> R {
        match p {
            PureTerm::Val(PureValue::Var(Var::Free(x))) => {
                let a = ctx.get(x).cloned().ok_or_else(|| format!("`{x}` is not in the context"))?;
                self.sub(Derivation::leaf(Rule::Axiom, judgment(ctx, t, &a)), goal)
            }
            PureTerm::Val(PureValue::Var(Var::Bound(_))) => Err("dangling bound variable".into()),
            PureTerm::Val(PureValue::Void) => self.sub(Derivation::leaf(Rule::Void, judgment(ctx, t, &Type::Unit)), goal),
            PureTerm::Val(PureValue::Lam(name, body)) => self.lam(ctx, name, body, t, goal),
            PureTerm::Val(PureValue::Pair(v, w)) => {
                self.pair(ctx, &PureTerm::Val((**v).clone()).dist(), &PureTerm::Val((**w).clone()).dist(), goal)
            }
            PureTerm::Val(PureValue::Inl(v)) => self.inj(ctx, true, &PureTerm::Val((**v).clone()).dist(), goal),
            PureTerm::Val(PureValue::Inr(v)) => self.inj(ctx, false, &PureTerm::Val((**v).clone()).dist(), goal),
            PureTerm::App(s, r) => self.app(ctx, &(**s).clone().dist(), &(**r).clone().dist(), goal),
            PureTerm::Seq(a, s) => self.seq(ctx, &(**a).clone().dist(), s, goal),
            PureTerm::LetPair(nx, ny, a, s) => self.let_pair(ctx, &(**a).clone().dist(), nx, ny, s, goal),
            PureTerm::Match(a, n1, s1, n2, s2) => self.match_(ctx, &(**a).clone().dist(), [n1, n2], [s1, s2], goal),
        }
    }

    /// Sums are typed by pulling out a common constructor: `s⃗ t⃗` with a
    /// common argument or a common function, `t⃗ ; s⃗` and the other
    /// destructors with a common continuation, pairs and injections.
    fn check_dist(&mut self, ctx: &Context, t: &RawDistribution, goal: &Type) -> R {
        let leaves = t.leaves();
        let Some(first) = leaves.first() else { return Err("no rule types the empty distribution".into()) };
        let all = |f: &dyn Fn(&PureTerm) -> bool| leaves.iter().all(|p| f(p));
        let mut err = format!("no rule types the sum {}", show(t));
        match first {
            PureTerm::App(_, r0) => {
                if all(&|p| matches!(p, PureTerm::App(_, r) if r == r0)) {
                    let heads = t.map_leaves(&mut |p| match p {
                        PureTerm::App(s, _) => (**s).clone().dist(),
                        _ => unreachable!(),
                    });
                    match self.app(ctx, &heads, &(**r0).clone().dist(), goal) {
                        Ok(d) => return Ok(d),
                        Err(e) => err = e,
                    }
                }
                if let PureTerm::App(s0, _) = first {
                    if all(&|p| matches!(p, PureTerm::App(s, _) if s == s0)) {
                        let args = t.map_leaves(&mut |p| match p {
                            PureTerm::App(_, r) => (**r).clone().dist(),
                            _ => unreachable!(),
                        });
                        return self.app(ctx, &(**s0).clone().dist(), &args, goal);
                    }
                }
                Err(err)
            }
            PureTerm::Seq(_, s0) if all(&|p| matches!(p, PureTerm::Seq(_, s) if s == s0)) => {
                let a = t.map_leaves(&mut |p| match p {
                    PureTerm::Seq(a, _) => (**a).clone().dist(),
                    _ => unreachable!(),
                });
                self.seq(ctx, &a, s0, goal)
            }
            PureTerm::LetPair(nx, ny, _, s0) if all(&|p| matches!(p, PureTerm::LetPair(_, _, _, s) if s == s0)) => {
                let a = t.map_leaves(&mut |p| match p {
                    PureTerm::LetPair(_, _, a, _) => (**a).clone().dist(),
                    _ => unreachable!(),
                });
                self.let_pair(ctx, &a, nx, ny, s0, goal)
            }
            PureTerm::Match(_, n1, s1, n2, s2)
                if all(&|p| matches!(p, PureTerm::Match(_, _, b1, _, b2) if b1 == s1 && b2 == s2)) =>
            {
                let a = t.map_leaves(&mut |p| match p {
                    PureTerm::Match(a, ..) => (**a).clone().dist(),
                    _ => unreachable!(),
                });
                self.match_(ctx, &a, [n1, n2], [s1, s2], goal)
            }
            PureTerm::Val(PureValue::Pair(_, w0)) if all(&|p| matches!(p, PureTerm::Val(PureValue::Pair(_, w)) if w == w0)) => {
                let v = t.map_leaves(&mut |p| match p {
                    PureTerm::Val(PureValue::Pair(v, _)) => PureTerm::Val((**v).clone()).dist(),
                    _ => unreachable!(),
                });
                self.pair(ctx, &v, &PureTerm::Val((**w0).clone()).dist(), goal)
            }
            PureTerm::Val(PureValue::Pair(v0, _)) if all(&|p| matches!(p, PureTerm::Val(PureValue::Pair(v, _)) if v == v0)) => {
                let w = t.map_leaves(&mut |p| match p {
                    PureTerm::Val(PureValue::Pair(_, w)) => PureTerm::Val((**w).clone()).dist(),
                    _ => unreachable!(),
                });
                self.pair(ctx, &PureTerm::Val((**v0).clone()).dist(), &w, goal)
            }
            PureTerm::Val(PureValue::Inl(_)) if all(&|p| matches!(p, PureTerm::Val(PureValue::Inl(_)))) => {
                let v = t.map_leaves(&mut |p| match p {
                    PureTerm::Val(PureValue::Inl(v)) => PureTerm::Val((**v).clone()).dist(),
                    _ => unreachable!(),
                });
                self.inj(ctx, true, &v, goal)
            }
            PureTerm::Val(PureValue::Inr(_)) if all(&|p| matches!(p, PureTerm::Val(PureValue::Inr(_)))) => {
                let v = t.map_leaves(&mut |p| match p {
                    PureTerm::Val(PureValue::Inr(v)) => PureTerm::Val((**v).clone()).dist(),
                    _ => unreachable!(),
                });
                self.inj(ctx, false, &v, goal)
            }
            _ => Err(err),
        }
    }

    fn lam(&mut self, ctx: &Context, name: &Name, body: &RawDistribution, t: &RawDistribution, goal: &Type) -> R {
        let mut err = format!("an abstraction cannot have type {goal}");
        for cand in candidates(&normalize_type(goal)) {
            let (rule, a, b) = match &cand {
                Type::PureArrow(a, b) => (Rule::PureLam, a, b),
                Type::UnitArrow(a, b) => (Rule::UnitLam, a, b),
                _ => continue,
            };
            if rule == Rule::PureLam && !ctx.all_pure() {
                err = format!("PureLam needs a pure context, got {ctx}");
                continue;
            }
            let x = self.fresh(name.as_str());
            match self.check(&ctx.with(&x, (**a).clone()), &body.open_names(&[&x]), b) {
                Ok(p) => return self.sub(Derivation::from_premises(rule, judgment(ctx, t, &cand), vec![p]), goal),
                Err(e) => err = e,
            }
        }
        Err(err)
    }

    fn pair(&mut self, ctx: &Context, v: &RawDistribution, w: &RawDistribution, goal: &Type) -> R {
        let mut err = format!("a pair cannot have type {goal}");
        for cand in candidates(&normalize_type(goal)) {
            let Type::Prod(a, b) = &cand else { continue };
            let split = self.split(ctx, &v.free_vars(), &w.free_vars())?;
            let w2 = split.rename(w);
            let r = self.check(&split.first, v, a).and_then(|dv| Ok((dv, self.check(&split.second, &w2, b)?)));
            match r {
                Ok((dv, dw)) => {
                    let term = raw_pair(v, &w2).map_err(|e| e.to_string())?;
                    let d = Derivation::from_premises(Rule::Pair, judgment(&split.whole(), &term, &cand), vec![dv, dw]);
                    return self.sub(self.contract(d, &split), goal);
                }
                Err(e) => err = e,
            }
        }
        Err(err)
    }

    fn inj(&mut self, ctx: &Context, left: bool, v: &RawDistribution, goal: &Type) -> R {
        let mut err = format!("an injection cannot have type {goal}");
        for cand in candidates(&normalize_type(goal)) {
            let Type::Sum(a, b) = &cand else { continue };
            match self.check(ctx, v, if left { a } else { b }) {
                Ok(dv) => {
                    let (rule, term) = if left { (Rule::InL, raw_inl(v)) } else { (Rule::InR, raw_inr(v)) };
                    let term = term.map_err(|e| e.to_string())?;
                    return self.sub(Derivation::from_premises(rule, judgment(ctx, &term, &cand), vec![dv]), goal);
                }
                Err(e) => err = e,
            }
        }
        Err(err)
    }

    fn app(&mut self, ctx: &Context, s: &RawDistribution, r: &RawDistribution, goal: &Type) -> R {
        let split = self.split(ctx, &s.free_vars(), &r.free_vars())?;
        let r2 = split.rename(r);
        let term = raw_app(s, &r2);
        let d = match self.app_head_first(&split, s, &r2, &term, goal) {
            Ok(d) => d,
            Err(e1) => {
                let synthesised = self.synth(&split.second, &r2);
                let mut demanded: Vec<Type> = self.demand_of_head(s, goal).into_iter().collect();
                if let Some(a) = reconstruct::argument(&split.whole(), s, &r2, goal) {
                    // modalities are erased by reconstruction; the quantum
                    // reading of the same shape is the usual alternative
                    demanded.extend([a.clone(), Type::sharp(a)]);
                }
                demanded.push(goal.clone());
                let options = self.scrutinee_options(&split.second, &r2, synthesised, demanded);
                let mut err = e1.clone();
                let mut found = None;
                for dr in options.map_err(|e2| format!("{e1}; {e2}"))? {
                    let fty = Type::unit_arrow(dr.ty().clone(), goal.clone());
                    match self.check(&split.first, s, &fty) {
                        Ok(ds) => {
                            found = Some(Derivation::from_premises(Rule::App, judgment(&split.whole(), &term, goal), vec![ds, dr]));
                            break;
                        }
                        Err(e2) => err = format!("{e1}; {e2}"),
                    }
                }
                found.ok_or(err)?
            }
        };
        Ok(self.contract(d, &split))
    }

    fn app_head_first(&mut self, split: &Split, s: &RawDistribution, r: &RawDistribution, term: &RawDistribution, goal: &Type) -> R {
        let ds = self.synth(&split.first, s)?;
        let (a, b, ds) = match normalize_type(ds.ty()) {
            Type::UnitArrow(a, b) => (*a, *b, ds),
            Type::PureArrow(a, b) => {
                let ds = self.sub(ds, &Type::unit_arrow((*a).clone(), (*b).clone()))?;
                (*a, *b, ds)
            }
            other => return Err(format!("{} : {other} is not a function", show(s))),
        };
        let dr = self.check(&split.second, r, &a)?;
        self.sub(Derivation::from_premises(Rule::App, judgment(&split.whole(), term, &b), vec![ds, dr]), goal)
    }

    fn seq(&mut self, ctx: &Context, a: &RawDistribution, s: &RawDistribution, goal: &Type) -> R {
        let split = self.split(ctx, &a.free_vars(), &s.free_vars())?;
        let s2 = split.rename(s);
        let ds = self.check(&split.second, &s2, goal)?;
        let term = raw_seq(a, &s2);
        let (rule, da) = match self.check(&split.first, a, &Type::Unit) {
            Ok(da) => (Rule::Seq, da),
            Err(e) => {
                if !matches!(normalize_type(goal), Type::Sharp(_)) {
                    return Err(e);
                }
                (Rule::SeqSharp, self.check(&split.first, a, &Type::sharp(Type::Unit))?)
            }
        };
        let d = Derivation::from_premises(rule, judgment(&split.whole(), &term, goal), vec![da, ds]);
        Ok(self.contract(d, &split))
    }

    fn let_pair(&mut self, ctx: &Context, a: &RawDistribution, nx: &Name, ny: &Name, body: &RawDistribution, goal: &Type) -> R {
        let split = self.split(ctx, &a.free_vars(), &body.free_vars())?;
        let body2 = split.rename(body);
        let (x, y) = (self.fresh(nx.as_str()), self.fresh(ny.as_str()));
        let opened = body2.open_names(&[&x, &y]);
        let term = raw_let(a, &Name::new(x.as_str()), &Name::new(y.as_str()), &body2);
        let synthesised = self.synth(&split.first, a);
        let mut demanded = Vec::new();
        if let (Some(p), Some(q)) = (self.demand(&opened, &x, goal), self.demand(&opened, &y, goal)) {
            demanded.push(Type::prod(p.clone(), q.clone()));
            demanded.push(Type::sharp(Type::prod(p, q)));
        }
        if let Some(a) = reconstruct::pair_scrutinee(&split.whole(), a, &x, &y, &opened, goal) {
            demanded.extend([a.clone(), Type::sharp(a)]);
        }
        let mut err = String::new();
        for da in self.scrutinee_options(&split.first, a, synthesised, demanded)? {
            match self.let_pair_with(&split, da, a, &x, &y, &opened, &term, goal) {
                Ok(d) => return Ok(d),
                Err(e) => err = e,
            }
        }
        Err(err)
    }

    /// Derivations of the destructed term: the synthesised one, then one at
    /// each type its uses ask for.
    fn scrutinee_options(
        &mut self,
        ctx: &Context,
        a: &RawDistribution,
        synthesised: R,
        demanded: Vec<Type>,
    ) -> std::result::Result<Vec<Derivation>, String> {
        let mut out = Vec::new();
        let mut err = None;
        match synthesised {
            Ok(d) => out.push(d),
            Err(e) => err = Some(e),
        }
        let mut tried = Vec::new();
        for ty in demanded {
            if tried.contains(&ty) {
                continue;
            }
            tried.push(ty.clone());
            if out.iter().all(|d| *d.ty() != ty) {
                match self.check(ctx, a, &ty) {
                    Ok(d) => out.push(d),
                    Err(e) => err = err.or(Some(e)),
                }
            }
        }
        if out.is_empty() {
            return Err(err.unwrap_or_else(|| format!("cannot determine the type of {}", show(a))));
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn let_pair_with(
        &mut self,
        split: &Split,
        da: Derivation,
        a: &RawDistribution,
        x: &str,
        y: &str,
        opened: &RawDistribution,
        term: &RawDistribution,
        goal: &Type,
    ) -> R {
        let sharp_goal = matches!(normalize_type(goal), Type::Sharp(_));
        let (p, q, tensor) = match normalize_type(da.ty()) {
            Type::Prod(p, q) => (*p, *q, false),
            Type::Sharp(inner) => match *inner {
                Type::Prod(p, q) => (*p, *q, true),
                other => return Err(format!("{} : ♯{other} is not a product", show(a))),
            },
            other => return Err(format!("{} : {other} is not a product", show(a))),
        };
        let whole = split.whole();
        let mut err = String::new();
        if !tensor {
            let c = split.second.with(x, p.clone()).with(y, q.clone());
            match self.check(&c, opened, goal) {
                Ok(ds) => {
                    let d = Derivation::from_premises(Rule::LetPair, judgment(&whole, term, goal), vec![da, ds]);
                    return Ok(self.contract(d, split));
                }
                Err(e) => err = e,
            }
        }
        if !sharp_goal {
            return Err(if err.is_empty() { format!("let over {} needs a ♯ result, not {goal}", da.ty()) } else { err });
        }
        let da = self.sub(da, &Type::sharp(Type::prod(p.clone(), q.clone())))?;
        let c = split.second.with(x, Type::sharp(p)).with(y, Type::sharp(q));
        let ds = self.check(&c, opened, goal)?;
        let d = Derivation::from_premises(Rule::LetTens, judgment(&whole, term, goal), vec![da, ds]);
        Ok(self.contract(d, split))
    }

    fn match_(&mut self, ctx: &Context, a: &RawDistribution, names: [&Name; 2], branches: [&RawDistribution; 2], goal: &Type) -> R {
        let mut fv_br = branches[0].free_vars();
        fv_br.extend(branches[1].free_vars());
        let split = self.split(ctx, &a.free_vars(), &fv_br)?;
        let (s1, s2) = (split.rename(branches[0]), split.rename(branches[1]));
        let (x1, x2) = (self.fresh(names[0].as_str()), self.fresh(names[1].as_str()));
        let (b1, b2) = (s1.open_names(&[&x1]), s2.open_names(&[&x2]));
        let term = raw_match(a, &Name::new(x1.as_str()), &s1, &Name::new(x2.as_str()), &s2);
        let synthesised = self.synth(&split.first, a);
        let guess = match synthesised.as_ref().map(|d| normalize_type(d.ty())) {
            Ok(Type::Sum(p, q)) => Some((*p, *q)),
            _ => None,
        };
        let mut demanded: Vec<Type> = match (self.demand(&b1, &x1, goal), self.demand(&b2, &x2, goal), guess) {
            (Some(p), Some(q), _) => vec![Type::sum(p, q)],
            (Some(p), None, Some((_, q))) | (None, Some(q), Some((p, _))) => vec![Type::sum(p, q)],
            _ => vec![],
        };
        if let Some(a) = reconstruct::match_scrutinee(&split.whole(), a, (&x1, &b1), (&x2, &b2), goal) {
            demanded.extend([a.clone(), Type::sharp(a)]);
        }
        let mut err = String::new();
        for da in self.scrutinee_options(&split.first, a, synthesised, demanded)? {
            match self.match_with(&split, da, a, [&x1, &x2], [&b1, &b2], &term, goal) {
                Ok(d) => return Ok(d),
                Err(e) => err = e,
            }
        }
        Err(err)
    }

    #[allow(clippy::too_many_arguments)]
    fn match_with(
        &mut self,
        split: &Split,
        da: Derivation,
        a: &RawDistribution,
        [x1, x2]: [&str; 2],
        [b1, b2]: [&RawDistribution; 2],
        term: &RawDistribution,
        goal: &Type,
    ) -> R {
        let whole = split.whole();
        let sharp_goal = matches!(normalize_type(goal), Type::Sharp(_));
        let (p, q, tensor) = match normalize_type(da.ty()) {
            Type::Sum(p, q) => (*p, *q, false),
            Type::Sharp(inner) => match *inner {
                Type::Sum(p, q) => (*p, *q, true),
                other => return Err(format!("{} : ♯{other} is not a sum", show(a))),
            },
            other => return Err(format!("{} : {other} is not a sum", show(a))),
        };
        let mut err = String::new();
        if !tensor {
            let r = self
                .check(&split.second.with(x1, p.clone()), b1, goal)
                .and_then(|d1| Ok((d1, self.check(&split.second.with(x2, q.clone()), b2, goal)?)));
            match r {
                Ok((d1, d2)) => {
                    let d = Derivation::from_premises(Rule::PureMatch, judgment(&whole, term, goal), vec![da, d1, d2]);
                    return Ok(self.contract(d, split));
                }
                Err(e) => err = e,
            }
        }
        if !sharp_goal {
            return Err(if err.is_empty() { format!("match over {} needs a ♯ result, not {goal}", da.ty()) } else { err });
        }
        let da = self.sub(da, &Type::sharp(Type::sum(p.clone(), q.clone())))?;
        let (sp, sq) = (Type::sharp(p), Type::sharp(q));
        let d1 = self.check(&split.second.with(x1, sp.clone()), b1, goal)?;
        let d2 = self.check(&split.second.with(x2, sq.clone()), b2, goal)?;
        let oj = OrthogonalityJudgment {
            shared: split.second.clone(),
            left_ctx: Context::new().with(x1, sp),
            left: b1.clone(),
            right_ctx: Context::new().with(x2, sq),
            right: b2.clone(),
            ty: goal.clone(),
        };
        match orthogonal_outputs(&oj, self.cfg) {
            Verdict::Yes => {}
            Verdict::No => return Err(format!("branches of {} are not orthogonal", show(term))),
            Verdict::Unsupported => return Err(format!("cannot establish orthogonality of the branches of {}", show(term))),
        }
        let d = Derivation::new(
            Rule::UnitaryMatch,
            judgment(&whole, term, goal),
            vec![
                Premise::Typing(da),
                Premise::Orthogonality { judgment: oj, left: Box::new(d1), right: Box::new(d2) },
            ],
        );
        Ok(self.contract(d, split))
    }

    /// For a head `λz. body` applied at `goal`, the type that `body` uses `z` at.
    fn demand_of_head(&mut self, s: &RawDistribution, goal: &Type) -> Option<Type> {
        let RawDistribution::Single(PureTerm::Val(PureValue::Lam(n, body))) = s else { return None };
        let z = self.fresh(n.as_str());
        self.demand(&body.open_names(&[&z]), &z, goal)
    }

    /// The type at which `t`, checked against `goal`, uses the free variable
    /// `x`, read off the constructors around its occurrences.
    fn demand(&mut self, t: &RawDistribution, x: &str, goal: &Type) -> Option<Type> {
        if !t.free_vars().contains(x) {
            return None;
        }
        t.leaves().into_iter().find_map(|p| self.demand_term(p, x, goal))
    }

    fn demand_term(&mut self, p: &PureTerm, x: &str, goal: &Type) -> Option<Type> {
        let val = |v: &PureValue| PureTerm::Val(v.clone()).dist();
        let goals = candidates(&normalize_type(goal));
        match p {
            PureTerm::Val(PureValue::Var(Var::Free(y))) if y == x => Some(goal.clone()),
            PureTerm::Val(PureValue::Inl(v)) | PureTerm::Val(PureValue::Inr(v)) => {
                let left = matches!(p, PureTerm::Val(PureValue::Inl(_)));
                goals.iter().find_map(|g| match g {
                    Type::Sum(a, b) => self.demand(&val(v), x, if left { a } else { b }),
                    _ => None,
                })
            }
            PureTerm::Val(PureValue::Pair(v, w)) => goals.iter().find_map(|g| match g {
                Type::Prod(a, b) => self.demand(&val(v), x, a).or_else(|| self.demand(&val(w), x, b)),
                _ => None,
            }),
            PureTerm::Val(PureValue::Lam(n, body)) => goals.iter().find_map(|g| match g {
                Type::PureArrow(_, b) | Type::UnitArrow(_, b) => {
                    let z = self.fresh(n.as_str());
                    self.demand(&body.open_names(&[&z]), x, b)
                }
                _ => None,
            }),
            PureTerm::Val(_) => None,
            PureTerm::App(s, r) => {
                let (s, r) = ((**s).clone().dist(), (**r).clone().dist());
                if r.free_vars().contains(x) {
                    let a = self.demand_of_head(&s, goal)?;
                    self.demand(&r, x, &a)
                } else {
                    let RawDistribution::Single(PureTerm::Val(PureValue::Lam(n, body))) = &s else { return None };
                    let z = self.fresh(n.as_str());
                    self.demand(&body.open_names(&[&z]), x, goal)
                }
            }
            PureTerm::Seq(_, s) => self.demand(s, x, goal),
            PureTerm::LetPair(nx, ny, a, s) => {
                let (y1, y2) = (self.fresh(nx.as_str()), self.fresh(ny.as_str()));
                let body = s.open_names(&[&y1, &y2]);
                let a = (**a).clone().dist();
                if a.free_vars().contains(x) {
                    let pair = Type::prod(self.demand(&body, &y1, goal)?, self.demand(&body, &y2, goal)?);
                    self.demand(&a, x, &pair)
                } else {
                    self.demand(&body, x, goal)
                }
            }
            PureTerm::Match(a, n1, s1, n2, s2) => {
                let (z1, z2) = (self.fresh(n1.as_str()), self.fresh(n2.as_str()));
                let (b1, b2) = (s1.open_names(&[&z1]), s2.open_names(&[&z2]));
                let a = (**a).clone().dist();
                if a.free_vars().contains(x) {
                    let sum = Type::sum(self.demand(&b1, &z1, goal)?, self.demand(&b2, &z2, goal)?);
                    self.demand(&a, x, &sum)
                } else {
                    self.demand(&b1, x, goal).or_else(|| self.demand(&b2, x, goal))
                }
            }
        }
    }

    /// Derives some type for `t`; `ctx` binds exactly its free variables.
    fn synth(&mut self, ctx: &Context, t: &RawDistribution) -> R {
        if let RawDistribution::Single(p) = t {
            match p {
                PureTerm::Val(PureValue::Var(Var::Free(x))) => {
                    if let Some(a) = ctx.get(x) {
                        return Ok(Derivation::leaf(Rule::Axiom, judgment(ctx, t, a)));
                    }
                }
                PureTerm::Val(PureValue::Void) => {
                    return Ok(Derivation::leaf(Rule::Void, judgment(ctx, t, &Type::Unit)));
                }
                PureTerm::App(s, r) => {
                    let (s, r) = ((**s).clone().dist(), (**r).clone().dist());
                    let split = self.split(ctx, &s.free_vars(), &r.free_vars())?;
                    let r2 = split.rename(&r);
                    let ds = self.synth(&split.first, &s);
                    if let Ok(ds) = ds {
                        let arrow = match normalize_type(ds.ty()) {
                            Type::UnitArrow(a, b) => Some((*a, *b, ds)),
                            Type::PureArrow(a, b) => {
                                let ds = self.sub(ds, &Type::unit_arrow((*a).clone(), (*b).clone()))?;
                                Some((*a, *b, ds))
                            }
                            _ => None,
                        };
                        if let Some((a, b, ds)) = arrow {
                            let dr = self.check(&split.second, &r2, &a)?;
                            let d = Derivation::from_premises(
                                Rule::App,
                                judgment(&split.whole(), &raw_app(&s, &r2), &b),
                                vec![ds, dr],
                            );
                            return Ok(self.contract(d, &split));
                        }
                    }
                    // a redex: type the argument, then the body under it
                    if let RawDistribution::Single(PureTerm::Val(PureValue::Lam(n, body))) = &s {
                        if let Ok(dr) = self.synth(&split.second, &r2) {
                            let z = self.fresh(n.as_str());
                            let inner = split.first.with(&z, dr.ty().clone());
                            if let Ok(db) = self.synth(&inner, &body.open_names(&[&z])) {
                                return self.check(ctx, t, db.ty());
                            }
                        }
                    }
                }
                PureTerm::Val(PureValue::Pair(v, w)) => {
                    let (v, w) = (PureTerm::Val((**v).clone()).dist(), PureTerm::Val((**w).clone()).dist());
                    let split = self.split(ctx, &v.free_vars(), &w.free_vars())?;
                    let w2 = split.rename(&w);
                    if let (Ok(dv), Ok(dw)) = (self.synth(&split.first, &v), self.synth(&split.second, &w2)) {
                        let ty = Type::prod(dv.ty().clone(), dw.ty().clone());
                        let term = raw_pair(&v, &w2).map_err(|e| e.to_string())?;
                        let d = Derivation::from_premises(Rule::Pair, judgment(&split.whole(), &term, &ty), vec![dv, dw]);
                        return Ok(self.contract(d, &split));
                    }
                }
                PureTerm::Seq(a, s) => {
                    let a = (**a).clone().dist();
                    if let Ok(split) = self.split(ctx, &a.free_vars(), &s.free_vars()) {
                        if let Ok(ds) = self.synth(&split.second, &split.rename(s)) {
                            return self.check(ctx, t, ds.ty());
                        }
                    }
                }
                PureTerm::LetPair(nx, ny, a, s) => {
                    let a = (**a).clone().dist();
                    if let Ok(split) = self.split(ctx, &a.free_vars(), &s.free_vars()) {
                        if let Ok(da) = self.synth(&split.first, &a) {
                            if let Type::Prod(p, q) = normalize_type(da.ty()) {
                                let (x, y) = (self.fresh(nx.as_str()), self.fresh(ny.as_str()));
                                let inner = split.second.with(&x, *p).with(&y, *q);
                                if let Ok(ds) = self.synth(&inner, &split.rename(s).open_names(&[&x, &y])) {
                                    return self.check(ctx, t, ds.ty());
                                }
                            }
                        }
                    }
                }
                PureTerm::Match(a, n1, s1, n2, s2) => {
                    let a = (**a).clone().dist();
                    let mut rest = s1.free_vars();
                    rest.extend(s2.free_vars());
                    if let Ok(split) = self.split(ctx, &a.free_vars(), &rest) {
                        if let Ok(da) = self.synth(&split.first, &a) {
                            if let Type::Sum(p, q) = normalize_type(da.ty()) {
                                let (z1, z2) = (self.fresh(n1.as_str()), self.fresh(n2.as_str()));
                                let b1 = split.rename(s1).open_names(&[&z1]);
                                let b2 = split.rename(s2).open_names(&[&z2]);
                                let d1 = self.synth(&split.second.with(&z1, *p), &b1);
                                let d2 = self.synth(&split.second.with(&z2, *q), &b2);
                                // one synthesised branch fixes the goal for both
                                if let Some(ty) = d1.ok().or(d2.ok()).map(|d| d.ty().clone()) {
                                    return self.check(ctx, t, &ty);
                                }
                            }
                        }
                    }
                }
                PureTerm::Val(PureValue::Inl(v)) | PureTerm::Val(PureValue::Inr(v)) if !ctx.is_empty() => {
                    // the other summand is unconstrained; take the same type
                    if let Ok(dv) = self.synth(ctx, &PureTerm::Val((**v).clone()).dist()) {
                        let a = dv.ty().clone();
                        return self.check(ctx, t, &Type::sum(a.clone(), a));
                    }
                }
                _ => {}
            }
        }
        if ctx.is_empty() && t.is_closed() {
            if let Some(nf) = normalize(&canonicalize(t), self.cfg.fuel).normal() {
                if let Some(ty) = guess_type(nf) {
                    return self.check_used(ctx, t, &ty);
                }
            }
        }
        Err(format!("cannot determine the type of {}", show(t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelude::Prelude;
    use crate::typing::derivation::check_derivation;
    use crate::typing::judgment::parse_judgment;

    fn derive(s: &str) -> Result<Derivation> {
        let j = parse_judgment(s, &Prelude).unwrap();
        let cfg = Config::default();
        let d = infer(&j.ctx, &j.term, &j.ty, &cfg)?;
        check_derivation(&d, &cfg).unwrap_or_else(|e| panic!("{s}: {e}\n{d}"));
        assert!(d.conclusion.ctx.same_as(&j.ctx));
        assert_eq!(d.conclusion.ty, j.ty);
        Ok(d)
    }

    #[test]
    fn hadamard_by_unitary_match() {
        let d = derive("|- H : #B -> #B").unwrap();
        assert!(d.uses(Rule::UnitaryMatch));
        assert!(!d.uses(Rule::Closed) || d.uses(Rule::UnitaryMatch));
        assert!(derive("|- N : #B -> #B").unwrap().uses(Rule::UnitaryMatch));
        assert!(derive("|- I : #B -> #B").is_ok());
        assert!(derive("|- K_tt : B -> B").is_ok());
        assert!(derive("|- K_tt : #B -> #B").is_err());
    }

    #[test]
    fn church_numerals() {
        for n in 0..4 {
            assert!(derive(&format!("|- church {n} : (#B -> #B) -> (#B -> #B)")).is_ok(), "{n}");
        }
        assert!(derive("|- church 0 : (#B => #B) => (#B => #B)").is_err());
        assert!(derive("|- church 1 : (#B => #B) => (#B => #B)").is_ok());
        assert!(derive("|- church 2 : (#B => #B) => (#B => #B)").is_err());
    }

    #[test]
    fn linearity() {
        assert!(derive("x:#B |- H x : #B").is_ok());
        assert!(derive("x:#B |- (x, x) : #B * #B").is_err());
        assert!(derive("x:B |- (x, x) : B * B").is_ok());
        assert!(derive("x:#B, y:#B |- (x, y) : #B (x) #B").is_ok());
        assert!(derive("x:#B, y:B |- x : #B").is_ok());
        assert!(derive("x:#B, y:#B |- x : #B").is_err());
        assert!(derive("z:#B (x) #B |- let (a, b) = z in (b, a) : #B (x) #B").is_ok());
        assert!(derive("f:#B -> #B, x:#B |- f (f x) : #B").is_ok());
    }

    #[test]
    fn control_operator() {
        assert!(derive("|- ctl : (#B -> #B) -> ((B (x) B) => (B (x) B))").is_ok());
        assert!(derive("|- ctl : (#B => #B) -> ((B (x) B) => (B (x) B))").is_err());
    }

    #[test]
    fn closed_terms() {
        assert!(derive("|- H tt : #B").is_ok());
        assert!(derive("|- church 0 F tt : #B").is_err());
        assert!(derive("|- church 1 F tt : #B").is_ok());
    }
}

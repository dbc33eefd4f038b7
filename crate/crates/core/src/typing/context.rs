use crate::semantics::subtype::type_equiv;
use crate::semantics::{is_pure_type, Type};
use std::collections::BTreeSet;
use std::fmt;

/// Ordered typing context `x1:A1, ..., xn:An`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    bindings: Vec<(String, Type)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Fails on a repeated variable.
    pub fn from_bindings(bindings: Vec<(String, Type)>) -> Result<Context, String> {
        let mut ctx = Context::new();
        for (x, a) in bindings {
            if ctx.get(&x).is_some() {
                return Err(format!("variable `{x}` bound twice"));
            }
            ctx.bindings.push((x, a));
        }
        Ok(ctx)
    }

    pub fn bindings(&self) -> &[(String, Type)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, x: &str) -> Option<&Type> {
        self.bindings.iter().find(|(y, _)| y == x).map(|(_, a)| a)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.get(x).is_some()
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.bindings.iter().map(|(x, _)| x.clone()).collect()
    }

    /// `Γ, x:A`; the caller guarantees `x` is fresh.
    pub fn with(&self, x: &str, a: Type) -> Context {
        let mut c = self.clone();
        debug_assert!(!c.contains(x));
        c.bindings.push((x.to_string(), a));
        c
    }

    /// Bindings of the listed variables, in context order.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> Context {
        Context { bindings: self.bindings.iter().filter(|(x, _)| keep.contains(x)).cloned().collect() }
    }

    pub fn without(&self, x: &str) -> Context {
        Context { bindings: self.bindings.iter().filter(|(y, _)| y != x).cloned().collect() }
    }

    /// `Γ, Δ` for disjoint contexts.
    pub fn concat(&self, other: &Context) -> Option<Context> {
        let mut c = self.clone();
        for (x, a) in &other.bindings {
            if c.contains(x) {
                return None;
            }
            c.bindings.push((x.clone(), a.clone()));
        }
        Some(c)
    }

    /// Same variables with equivalent types, in any order.
    pub fn same_as(&self, other: &Context) -> bool {
        self.len() == other.len()
            && self.bindings.iter().all(|(x, a)| other.get(x).is_some_and(|b| type_equiv(a, b)))
    }

    pub fn all_pure(&self) -> bool {
        self.bindings.iter().all(|(_, a)| is_pure_type(a))
    }
}

/// `dom♯(Γ)`: the variables whose type is not pure.
pub fn strict_domain(ctx: &Context) -> BTreeSet<String> {
    ctx.bindings.iter().filter(|(_, a)| !is_pure_type(a)).map(|(x, _)| x.clone()).collect()
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bindings.iter().map(|(x, a)| format!("{x}:{a}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::parse_type;

    fn ctx(items: &[(&str, &str)]) -> Context {
        Context::from_bindings(items.iter().map(|(x, a)| (x.to_string(), parse_type(a).unwrap())).collect())
            .unwrap()
    }

    #[test]
    fn strict_domains() {
        assert_eq!(strict_domain(&ctx(&[("x", "#B")])), BTreeSet::from(["x".to_string()]));
        assert!(strict_domain(&ctx(&[("x", "B"), ("f", "#B -> #B")])).is_empty());
        assert!(strict_domain(&Context::new()).is_empty());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(Context::from_bindings(vec![("x".into(), Type::Unit), ("x".into(), Type::Unit)]).is_err());
    }

    #[test]
    fn set_equality() {
        assert!(ctx(&[("x", "B"), ("y", "!#B")]).same_as(&ctx(&[("y", "B"), ("x", "U + U")])));
        assert!(!ctx(&[("x", "B")]).same_as(&ctx(&[("x", "#B")])));
    }
}

use super::types::Type;

/// Normal form used by the subtyping check: `♯♯A` collapses to `♯A`, and
/// `♭` is pushed through `♯`, `+`, `×`, `U` and `→`, so it only remains in
/// front of a unitary arrow.
pub fn normalize_type(a: &Type) -> Type {
    match a {
        Type::Unit => Type::Unit,
        Type::Sum(l, r) => Type::sum(normalize_type(l), normalize_type(r)),
        Type::Prod(l, r) => Type::prod(normalize_type(l), normalize_type(r)),
        Type::PureArrow(l, r) => Type::arrow(normalize_type(l), normalize_type(r)),
        Type::UnitArrow(l, r) => Type::unit_arrow(normalize_type(l), normalize_type(r)),
        Type::Sharp(b) => match normalize_type(b) {
            s @ Type::Sharp(_) => s,
            n => Type::sharp(n),
        },
        Type::Flat(b) => push_flat(&normalize_type(b)),
    }
}

fn push_flat(a: &Type) -> Type {
    match a {
        Type::Unit => Type::Unit,
        Type::Sharp(b) => push_flat(b),
        Type::Flat(_) => a.clone(),
        Type::Sum(l, r) => Type::sum(push_flat(l), push_flat(r)),
        Type::Prod(l, r) => Type::prod(push_flat(l), push_flat(r)),
        Type::PureArrow(..) => a.clone(),
        Type::UnitArrow(..) => Type::flat(a.clone()),
    }
}

/// `A ≤ B` in the closure of the subtyping axioms under `♭`, `♯`, `+` and
/// `×`; arrows are compared invariantly.
pub fn subtype(a: &Type, b: &Type) -> bool {
    sub(&normalize_type(a), &normalize_type(b))
}

/// `A ≡ B`: subtypes both ways.
pub fn type_equiv(a: &Type, b: &Type) -> bool {
    let (a, b) = (normalize_type(a), normalize_type(b));
    sub(&a, &b) && sub(&b, &a)
}

fn equiv_n(a: &Type, b: &Type) -> bool {
    sub(a, b) && sub(b, a)
}

// both arguments are in normal form
fn sub(a: &Type, b: &Type) -> bool {
    if a == b {
        return true;
    }
    match (a, b) {
        (_, Type::Sharp(b1)) => {
            if sub(a, b1) {
                return true;
            }
            if let Type::Sharp(a1) = a {
                if sub(a1, b) {
                    return true;
                }
            }
            match (a, &**b1) {
                (Type::Sum(a1, a2), Type::Sum(c1, c2)) | (Type::Prod(a1, a2), Type::Prod(c1, c2))
                    if sub(a1, &Type::sharp((**c1).clone())) && sub(a2, &Type::sharp((**c2).clone())) => {
                        return true;
                    }
                _ => {}
            }
            // A ≤ ♯♭A
            let fa = push_flat(a);
            fa != *a && sub(&fa, b)
        }
        (Type::Sum(a1, a2), Type::Sum(b1, b2)) | (Type::Prod(a1, a2), Type::Prod(b1, b2)) => {
            sub(a1, b1) && sub(a2, b2)
        }
        (Type::Flat(a1), Type::Flat(b1)) => sub(a1, b1),
        (Type::PureArrow(a1, a2), Type::PureArrow(b1, b2))
        | (Type::PureArrow(a1, a2), Type::UnitArrow(b1, b2))
        | (Type::UnitArrow(a1, a2), Type::UnitArrow(b1, b2)) => equiv_n(a1, b1) && equiv_n(a2, b2),
        (Type::PureArrow(..), Type::Flat(b1)) => sub(a, b1),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::types::parse_type;

    fn st(a: &str, b: &str) -> bool {
        subtype(&parse_type(a).unwrap(), &parse_type(b).unwrap())
    }

    fn eq(a: &str, b: &str) -> bool {
        type_equiv(&parse_type(a).unwrap(), &parse_type(b).unwrap())
    }

    #[test]
    fn axioms() {
        assert!(st("B", "#B"));
        assert!(!st("#B", "B"));
        assert!(!st("!(#B => #B)", "#B => #B"));
        assert!(eq("!#B", "!B"));
        assert!(eq("!!B", "!B"));
        assert!(eq("##B", "#B"));
        assert!(eq("!(B + #U)", "!B + !#U"));
        assert!(eq("!(#B * U)", "!#B * !U"));
        assert!(st("#U + #U", "#(U + U)"));
        assert!(st("#B * #B", "#(B * B)"));
        assert!(st("#B -> #B", "#B => #B"));
        assert!(st("#B => #B", "#(#B => #B)"));
        assert!(st("#(#B -> #B)", "#(#B => #B)"));
        assert!(eq("!(#B -> #B)", "#B -> #B"));
        assert!(st("#B", "#!#B"));
        assert!(st("(#U + U) * #B", "#(B * B)"));
        assert!(!st("#B => #B", "#B -> #B"));
        assert!(!st("B -> B", "B -> #B"));
    }
}

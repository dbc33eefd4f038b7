use super::inner::{boolean_projection, inner_unchecked};
use super::member::{apply_body, merged_body};
use super::types::{basis_of_type, Type};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::{normalize, EvalOutcome};
use crate::syntax::{pretty_value, CanonicalDistribution, PureValue, Scalar, Style};
use serde_json::json;
use std::fmt;

/// `→` or `⇒`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowKind {
    Pure,
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitaryVerdict {
    Pass,
    Fail,
    Unsupported,
}

impl UnitaryVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitaryVerdict::Pass => "pass",
            UnitaryVerdict::Fail => "fail",
            UnitaryVerdict::Unsupported => "unsupported",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            UnitaryVerdict::Pass => 0,
            UnitaryVerdict::Fail => 1,
            UnitaryVerdict::Unsupported => 2,
        }
    }
}

/// Outcome of a unitarity check on `♯D1 → ♯D2` or `♯D1 ⇒ ♯D2`.
#[derive(Clone, Debug)]
pub struct UnitaryReport {
    pub verdict: UnitaryVerdict,
    /// Why the check failed before any image was computed.
    pub reason: Option<String>,
    pub basis_inputs: Vec<PureValue>,
    pub basis_outputs: Vec<PureValue>,
    pub images: Vec<CanonicalDistribution>,
    /// `gram[i][j] = ⟨imageᵢ, imageⱼ⟩`.
    pub gram: Vec<Vec<Scalar>>,
    /// `matrix[r][c]` is the coefficient of output basis vector `r` in image `c`.
    pub matrix: Vec<Vec<Scalar>>,
}

impl UnitaryReport {
    fn rejected(reason: String, inputs: Vec<PureValue>, outputs: Vec<PureValue>) -> UnitaryReport {
        UnitaryReport {
            verdict: UnitaryVerdict::Fail,
            reason: Some(reason),
            basis_inputs: inputs,
            basis_outputs: outputs,
            images: Vec::new(),
            gram: Vec::new(),
            matrix: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mat = |m: &Vec<Vec<Scalar>>| -> serde_json::Value {
            m.iter().map(|row| row.iter().map(|c| c.to_json()).collect::<Vec<_>>()).collect()
        };
        let vals = |vs: &[PureValue]| -> Vec<String> { vs.iter().map(|v| pretty_value(v, Style::Exact)).collect() };
        json!({
            "verdict": self.verdict.as_str(),
            "reason": self.reason,
            "basis_inputs": vals(&self.basis_inputs),
            "basis_outputs": vals(&self.basis_outputs),
            "images": self.images.iter().map(|i| i.to_json()).collect::<Vec<_>>(),
            "gram": mat(&self.gram),
            "matrix": mat(&self.matrix),
        })
    }
}

impl fmt::Display for UnitaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict.as_str())?;
        if let Some(r) = &self.reason {
            writeln!(f, "reason: {r}")?;
        }
        for (b, img) in self.basis_inputs.iter().zip(&self.images) {
            writeln!(f, "  {} ↦ {}", pretty_value(b, Style::Display), img)?;
        }
        let grid = |f: &mut fmt::Formatter<'_>, name: &str, m: &Vec<Vec<Scalar>>| -> fmt::Result {
            if m.is_empty() {
                return Ok(());
            }
            writeln!(f, "{name}:")?;
            for row in m {
                let cells: Vec<String> = row.iter().map(|c| c.display()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
            Ok(())
        };
        grid(f, "gram", &self.gram)?;
        grid(f, "matrix", &self.matrix)
    }
}

fn sharp_data(t: &Type) -> Result<&Type> {
    match t {
        Type::Sharp(d) if d.is_data() => Ok(d),
        _ => Err(Error::UnsupportedType(format!("expected ♯D with D a data type, got {t}"))),
    }
}

/// Decides whether `f` represents a unitary map `♯D1 → ♯D2` (or `⇒`) by
/// evaluating its body on every basis vector of `D1`.
pub fn check_unitary_endo(
    f: &CanonicalDistribution,
    a: &Type,
    b: &Type,
    arrow: ArrowKind,
    cfg: &Config,
) -> Result<UnitaryReport> {
    let (d1, d2) = (sharp_data(a)?, sharp_data(b)?);
    let (inputs, outputs) = (basis_of_type(d1)?, basis_of_type(d2)?);
    if inputs.len() != outputs.len() {
        return Err(Error::UnsupportedType(format!(
            "dimension mismatch: {a} has {} basis vectors, {b} has {}",
            inputs.len(),
            outputs.len()
        )));
    }
    if !f.is_closed() {
        let mut free: Vec<String> = f.terms().iter().flat_map(|(_, t)| t.free_vars()).collect();
        free.sort();
        free.dedup();
        return Err(Error::OpenValue(free));
    }
    let nf = match normalize(f, cfg.fuel) {
        EvalOutcome::Normal { result, .. } => result,
        EvalOutcome::OutOfFuel { .. } => return Err(Error::OutOfFuel(cfg.fuel)),
    };
    let Some(vals) = nf.values() else {
        return Ok(UnitaryReport::rejected(format!("{nf} is not a value"), inputs, outputs));
    };
    let vals: Vec<(Scalar, PureValue)> = vals.into_iter().map(|(c, v)| (c, v.clone())).collect();
    let body = match arrow {
        ArrowKind::Pure => match vals.as_slice() {
            [(c, PureValue::Lam(_, body))] if c.approx_eq(Scalar::ONE, cfg.eps) => (**body).clone(),
            _ => {
                return Ok(UnitaryReport::rejected(format!("{nf} is not 1·λx.t"), inputs, outputs));
            }
        },
        ArrowKind::Unit => {
            let n = vals.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt();
            if (n - 1.0).abs() > cfg.eps {
                return Ok(UnitaryReport::rejected(format!("{nf} has norm {n}"), inputs, outputs));
            }
            match merged_body(&vals) {
                Some(body) => body,
                None => {
                    return Ok(UnitaryReport::rejected(
                        format!("{nf} is not a distribution of abstractions"),
                        inputs,
                        outputs,
                    ))
                }
            }
        }
    };
    let mut images = Vec::new();
    let mut columns = Vec::new();
    let mut in_span = true;
    for x in &inputs {
        let image = match normalize(&apply_body(&body, &CanonicalDistribution::value(x.clone())), cfg.fuel) {
            EvalOutcome::Normal { result, .. } => result,
            EvalOutcome::OutOfFuel { .. } => return Err(Error::OutOfFuel(cfg.fuel)),
        };
        match boolean_projection(&image, &outputs) {
            Ok(col) => columns.push(col),
            Err(_) => {
                in_span = false;
                columns.push(vec![Scalar::ZERO; outputs.len()]);
            }
        }
        images.push(image);
    }
    let n = inputs.len();
    let gram: Vec<Vec<Scalar>> =
        (0..n).map(|i| (0..n).map(|j| inner_unchecked(&images[i], &images[j])).collect()).collect();
    let identity = (0..n).all(|i| {
        (0..n).all(|j| {
            let delta = if i == j { Scalar::ONE } else { Scalar::ZERO };
            (gram[i][j] - delta).abs() <= cfg.gram_eps
        })
    });
    let matrix = (0..n).map(|r| (0..n).map(|c| columns[c][r]).collect()).collect();
    Ok(UnitaryReport {
        verdict: if in_span && identity { UnitaryVerdict::Pass } else { UnitaryVerdict::Fail },
        reason: if in_span { None } else { Some("an image leaves the span of the output basis".into()) },
        basis_inputs: inputs,
        basis_outputs: outputs,
        images,
        gram,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::types::parse_type;
    use crate::syntax::{canonicalize, parse_term};

    fn run(src: &str, ty: &str, arrow: ArrowKind) -> UnitaryReport {
        let f = canonicalize(&parse_term(src).unwrap());
        let t = parse_type(ty).unwrap();
        check_unitary_endo(&f, &t, &t, arrow, &Config::default()).unwrap()
    }

    const H: &str = "lam x. if x then (1/sqrt(2) * tt + 1/sqrt(2) * ff) else (1/sqrt(2) * tt - 1/sqrt(2) * ff)";

    #[test]
    fn hadamard_matrix() {
        let r = run(H, "#B", ArrowKind::Pure);
        assert_eq!(r.verdict, UnitaryVerdict::Pass);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [[h, h], [h, -h]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(r.matrix[i][j].approx_eq(Scalar::real(want[i][j]), 1e-12));
            }
        }
    }

    #[test]
    fn constant_fails() {
        let r = run("lam x. tt", "#B", ArrowKind::Pure);
        assert_eq!(r.verdict, UnitaryVerdict::Fail);
        assert!(r.gram[0][1].approx_eq(Scalar::ONE, 1e-12));
    }

    #[test]
    fn merged_bodies() {
        let r = run("3/5 * (lam x. 5/6 * x) + 4/5 * (lam x. 5/8 * x)", "#B", ArrowKind::Unit);
        assert_eq!(r.verdict, UnitaryVerdict::Pass);
        let r = run("3/5 * (lam x. 5/6 * x) + 4/5 * (lam x. 5/8 * x)", "#B", ArrowKind::Pure);
        assert_eq!(r.verdict, UnitaryVerdict::Fail);
    }

    #[test]
    fn two_qubit_swap() {
        let r = run("lam p. let (a, b) = p in (b, a)", "#(B * B)", ArrowKind::Pure);
        assert_eq!(r.verdict, UnitaryVerdict::Pass);
        assert_eq!(r.matrix[1][2], Scalar::ONE);
    }

    #[test]
    fn dimension_mismatch() {
        let f = canonicalize(&parse_term("lam x. x").unwrap());
        let e = check_unitary_endo(
            &f,
            &parse_type("#B").unwrap(),
            &parse_type("#(B * B)").unwrap(),
            ArrowKind::Pure,
            &Config::default(),
        );
        assert!(matches!(e, Err(Error::UnsupportedType(_))));
    }
}

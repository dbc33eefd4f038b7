use crate::error::{Error, Result};
use crate::syntax::Scalar;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

/// `m[row][col]`; the gate sends `|0⟩` to `m[0][0]|0⟩ + m[1][0]|1⟩`.
pub type Matrix2 = [[Scalar; 2]; 2];

const UNITARY_EPS: f64 = 1e-7;

/// Named single-qubit gates. `phase{θ}` is always available.
#[derive(Clone, Debug)]
pub struct GateTable {
    gates: BTreeMap<String, Matrix2>,
}

fn r(x: f64) -> Scalar {
    Scalar::real(x)
}

pub fn is_unitary(m: &Matrix2, eps: f64) -> bool {
    (0..2).all(|i| {
        (0..2).all(|j| {
            let dot = (0..2).fold(Scalar::ZERO, |acc, k| acc + m[k][i].conj() * m[k][j]);
            dot.approx_eq(if i == j { Scalar::ONE } else { Scalar::ZERO }, eps)
        })
    })
}

fn phase(theta: f64) -> Matrix2 {
    [[Scalar::ONE, Scalar::ZERO], [Scalar::ZERO, Scalar::new(theta.cos(), theta.sin())]]
}

#[derive(Deserialize)]
struct JsonScalar {
    re: f64,
    #[serde(default)]
    im: f64,
}

impl GateTable {
    pub fn empty() -> GateTable {
        GateTable { gates: BTreeMap::new() }
    }

    /// `H`, `X`, `Y`, `Z`, `S` and `T`.
    pub fn standard() -> GateTable {
        let h = FRAC_1_SQRT_2;
        let mut g = GateTable::empty();
        let z = Scalar::ZERO;
        g.gates.insert("H".into(), [[r(h), r(h)], [r(h), r(-h)]]);
        g.gates.insert("X".into(), [[z, Scalar::ONE], [Scalar::ONE, z]]);
        g.gates.insert("Y".into(), [[z, -Scalar::I], [Scalar::I, z]]);
        g.gates.insert("Z".into(), [[Scalar::ONE, z], [z, r(-1.0)]]);
        g.gates.insert("S".into(), phase(std::f64::consts::FRAC_PI_2));
        g.gates.insert("T".into(), phase(std::f64::consts::FRAC_PI_4));
        g
    }

    /// Adds or replaces a gate after checking `U†U = I` within 1e-7.
    pub fn insert(&mut self, name: &str, m: Matrix2) -> Result<()> {
        if !name.chars().next().is_some_and(|c| c.is_alphabetic()) || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Domain(format!("`{name}` is not a valid gate name")));
        }
        if !is_unitary(&m, UNITARY_EPS) {
            return Err(Error::Domain(format!("gate `{name}` is not unitary")));
        }
        self.gates.insert(name.to_string(), m);
        Ok(())
    }

    /// Reads `{"NAME": [[a, b], [c, d]], ...}` with entries `{"re": .., "im": ..}`
    /// and adds the gates to the standard ones.
    pub fn from_json(src: &str) -> Result<GateTable> {
        let doc: BTreeMap<String, [[JsonScalar; 2]; 2]> =
            serde_json::from_str(src).map_err(|e| Error::Io(format!("gate table: {e}")))?;
        let mut g = GateTable::standard();
        for (name, m) in doc {
            let m = m.map(|row| row.map(|c| Scalar::new(c.re, c.im)));
            g.insert(&name, m)?;
        }
        Ok(g)
    }

    /// Looks up a gate by its written name, including `phase{θ}`.
    pub fn get(&self, name: &str) -> Option<Matrix2> {
        if let Some(m) = self.gates.get(name) {
            return Some(*m);
        }
        let theta = name.strip_prefix("phase{")?.strip_suffix('}')?.parse::<f64>().ok()?;
        Some(phase(theta))
    }

    /// Whether `name` starts a gate application.
    pub fn contains(&self, name: &str) -> bool {
        name == "phase" || self.gates.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.gates.keys().map(String::as_str)
    }
}

impl Default for GateTable {
    fn default() -> GateTable {
        GateTable::standard()
    }
}

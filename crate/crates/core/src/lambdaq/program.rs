use super::gates::GateTable;
use super::parse::parse_qterm;
use super::state::QuantumState;
use super::term::QTerm;
use super::typecheck::{typecheck_quantum, TypeCtx};
use super::types::QType;
use crate::error::{Error, Result};
use crate::syntax::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A configuration `[Q, L, t]`: a state, a bijection from the free
/// variables of `t` onto the wires `1..n`, and a term.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub state: QuantumState,
    pub wires: BTreeMap<String, usize>,
    pub term: QTerm,
}

#[derive(Serialize, Deserialize)]
struct JsonAmp {
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonProgram {
    #[serde(default)]
    amplitudes: Vec<JsonAmp>,
    #[serde(default)]
    wires: BTreeMap<String, usize>,
    term: String,
}

impl Program {
    /// Checks that `wires` is a bijection from the free variables of `term`
    /// onto `1..n` where `n` is the number of qubits.
    pub fn new(state: QuantumState, wires: BTreeMap<String, usize>, term: QTerm) -> Result<Program> {
        let n = state.qubits();
        let fv = term.free_vars();
        let keys: std::collections::BTreeSet<String> = wires.keys().cloned().collect();
        if keys != fv {
            return Err(Error::Domain(format!(
                "wire map covers {:?} but the free variables are {:?}",
                keys, fv
            )));
        }
        let mut idx: Vec<usize> = wires.values().copied().collect();
        idx.sort_unstable();
        if idx != (1..=n).collect::<Vec<_>>() {
            return Err(Error::Domain(format!("wire indices {idx:?} are not 1..{n}")));
        }
        Ok(Program { state, wires, term })
    }

    /// A closed term with no qubits.
    pub fn closed(term: QTerm) -> Result<Program> {
        Program::new(QuantumState::empty(), BTreeMap::new(), term)
    }

    /// Reads `{"amplitudes": [{"re", "im"}...], "wires": {name: index}, "term": text}`.
    /// Missing amplitudes mean the empty state.
    pub fn from_json(src: &str, gates: &GateTable, eps: f64) -> Result<Program> {
        let doc: JsonProgram = serde_json::from_str(src).map_err(|e| Error::Io(format!("program: {e}")))?;
        let state = if doc.amplitudes.is_empty() {
            QuantumState::empty()
        } else {
            QuantumState::new(doc.amplitudes.iter().map(|a| Scalar::new(a.re, a.im)).collect(), eps)?
        };
        Program::new(state, doc.wires, parse_qterm(&doc.term, gates)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "amplitudes": self.state.amplitudes().iter().map(|a| a.to_json()).collect::<Vec<_>>(),
            "wires": self.wires,
            "term": self.term.to_string(),
        })
    }

    /// `∅ | FV(t):qbit ⊢_Q t : A_Q`.
    pub fn typecheck(&self) -> Result<QType> {
        let gamma: TypeCtx = self.wires.keys().map(|x| (x.clone(), QType::Qbit)).collect();
        typecheck_quantum(&TypeCtx::new(), &gamma, &self.term)
    }

    pub fn wire(&self, x: &str) -> Result<usize> {
        self.wires.get(x).copied().ok_or_else(|| Error::Stuck(format!("`{x}` is not a wire")))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        f.write_str("[")?;
        for (bits, a) in self.state.components() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let ket: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            write!(f, "{}·|{ket}⟩", a.display())?;
        }
        let mut by_index: Vec<(&usize, &String)> = self.wires.iter().map(|(x, i)| (i, x)).collect();
        by_index.sort();
        let l: Vec<String> = by_index.iter().map(|(i, x)| format!("{x}↦{i}")).collect();
        write!(f, ", {{{}}}, {}]", l.join(", "), self.term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_documents() {
        let g = GateTable::standard();
        let src = r#"{"amplitudes": [{"re": 0.6}, {"re": 0}, {"re": 0}, {"re": 0.8}],
                     "wires": {"x": 1, "y": 2}, "term": "x (x) y"}"#;
        let p = Program::from_json(src, &g, 1e-9).unwrap();
        assert_eq!(p.state.qubits(), 2);
        assert_eq!(p.typecheck().unwrap(), QType::qbits(2));
        let back = Program::from_json(&p.to_json().to_string(), &g, 1e-9).unwrap();
        assert_eq!(back, p);
        assert!(Program::from_json(r#"{"term": "x"}"#, &g, 1e-9).is_err());
        let bad = r#"{"amplitudes": [{"re": 1}, {"re": 0}], "wires": {"x": 2}, "term": "x"}"#;
        assert!(Program::from_json(bad, &g, 1e-9).is_err());
    }
}

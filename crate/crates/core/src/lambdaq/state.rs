use super::gates::Matrix2;
use crate::error::{Error, Result};
use crate::syntax::Scalar;

/// State of `n` qubits as `2^n` amplitudes. Wire 1 is the most
/// significant bit of the basis index, so `|01⟩` has index 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n: usize,
    amps: Vec<Scalar>,
}

impl QuantumState {
    /// The zero-qubit state, a single amplitude 1.
    pub fn empty() -> QuantumState {
        QuantumState { n: 0, amps: vec![Scalar::ONE] }
    }

    /// Checks the length is a power of two and the norm is 1 within `eps`.
    pub fn new(amps: Vec<Scalar>, eps: f64) -> Result<QuantumState> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Domain(format!("{len} amplitudes is not a power of two")));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > eps {
            return Err(Error::Domain(format!("state has squared norm {norm}, not 1")));
        }
        Ok(QuantumState { n: len.trailing_zeros() as usize, amps })
    }

    pub fn basis(bits: &[bool]) -> QuantumState {
        let mut s = QuantumState::empty();
        for &b in bits {
            s.push(b);
        }
        s
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Scalar] {
        &self.amps
    }

    pub fn amplitude(&self, bits: &[bool]) -> Scalar {
        self.amps[index_of(bits)]
    }

    /// Bit of wire `w` (1-based) in basis index `i`.
    pub fn bit(&self, i: usize, w: usize) -> bool {
        (i >> (self.n - w)) & 1 == 1
    }

    /// Tensor on a fresh last wire in state `|b⟩`.
    pub fn push(&mut self, b: bool) {
        let mut amps = vec![Scalar::ZERO; self.amps.len() * 2];
        for (i, a) in self.amps.iter().enumerate() {
            amps[2 * i + usize::from(b)] = *a;
        }
        self.amps = amps;
        self.n += 1;
    }

    /// Applies `m` to wire `w`, restricted to the basis states where every
    /// `(wire, bit)` control holds.
    pub fn apply(&mut self, m: &Matrix2, w: usize, controls: &[(usize, bool)]) {
        let mask = 1usize << (self.n - w);
        for i in 0..self.amps.len() {
            if i & mask != 0 || !controls.iter().all(|&(c, b)| self.bit(i, c) == b) {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | mask]);
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i | mask] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    /// Moves the content of wire `from[k]` to wire `to[k]` for every `k`,
    /// on the basis states where the controls hold. `to` must be a
    /// permutation of `from`.
    pub fn permute(&mut self, from: &[usize], to: &[usize], controls: &[(usize, bool)]) {
        let holds = |i: usize| controls.iter().all(|&(c, b)| self.bit(i, c) == b);
        let mut amps = self.amps.clone();
        for i in (0..self.amps.len()).filter(|&i| holds(i)) {
            amps[i] = Scalar::ZERO;
        }
        for i in (0..self.amps.len()).filter(|&i| holds(i)) {
            let mut j = i;
            for (&f, &t) in from.iter().zip(to) {
                let m = 1usize << (self.n - t);
                j = if self.bit(i, f) { j | m } else { j & !m };
            }
            amps[j] = self.amps[i];
        }
        self.amps = amps;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn approx_eq(&self, other: &QuantumState, eps: f64) -> bool {
        self.n == other.n && self.amps.iter().zip(&other.amps).all(|(a, b)| a.approx_eq(*b, eps))
    }

    /// Non-zero basis components as `(bits, amplitude)`.
    pub fn components(&self) -> impl Iterator<Item = (Vec<bool>, Scalar)> + '_ {
        self.amps.iter().enumerate().filter(|(_, a)| a.norm_sqr() != 0.0).map(|(i, a)| {
            ((1..=self.n).map(|w| self.bit(i, w)).collect(), *a)
        })
    }
}

fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| 2 * acc + usize::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h() -> Matrix2 {
        let r = Scalar::real(FRAC_1_SQRT_2);
        [[r, r], [r, -r]]
    }

    #[test]
    fn push_and_apply() {
        let mut s = QuantumState::basis(&[false, true]);
        assert_eq!(s.amplitude(&[false, true]), Scalar::ONE);
        s.apply(&h(), 1, &[]);
        assert!(s.amplitude(&[true, true]).approx_eq(Scalar::real(FRAC_1_SQRT_2), 1e-12));
        let x = [[Scalar::ZERO, Scalar::ONE], [Scalar::ONE, Scalar::ZERO]];
        // CNOT from wire 1 onto wire 2
        s.apply(&x, 2, &[(1, true)]);
        assert!(s.amplitude(&[true, false]).approx_eq(Scalar::real(FRAC_1_SQRT_2), 1e-12));
        assert!(s.amplitude(&[false, true]).approx_eq(Scalar::real(FRAC_1_SQRT_2), 1e-12));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn controlled_swap() {
        let mut s = QuantumState::basis(&[true, true, false]);
        s.permute(&[2, 3], &[3, 2], &[(1, true)]);
        assert_eq!(s.amplitude(&[true, false, true]), Scalar::ONE);
        let mut s = QuantumState::basis(&[false, true, false]);
        s.permute(&[2, 3], &[3, 2], &[(1, true)]);
        assert_eq!(s.amplitude(&[false, true, false]), Scalar::ONE);
    }

    #[test]
    fn validation() {
        assert!(QuantumState::new(vec![Scalar::ONE, Scalar::ONE], 1e-9).is_err());
        assert!(QuantumState::new(vec![Scalar::ONE; 3], 1e-9).is_err());
        assert_eq!(QuantumState::new(vec![Scalar::ZERO, Scalar::ONE], 1e-9).unwrap().qubits(), 1);
    }
}

use crate::eval::DEFAULT_FUEL;
use crate::syntax::default_eps;

/// Tolerance and step budget shared by the semantic checks.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Scalar comparison tolerance.
    pub eps: f64,
    /// Tolerance for Gram-matrix and inner-product identities, which
    /// accumulate rounding over several reductions.
    pub gram_eps: f64,
    /// Steps allowed per normalisation.
    pub fuel: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { eps: default_eps(), gram_eps: 1e-7, fuel: DEFAULT_FUEL }
    }
}

impl Config {
    pub fn with_fuel(fuel: usize) -> Config {
        Config { fuel, ..Config::default() }
    }
}

//! Step-by-step comparison of the machine against the translation.

use super::gates::GateTable;
use super::machine::{step, StepRule};
use super::program::Program;
use super::translate::{translate_program, translate_term};
use super::types::translate_type;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::normalize;
use crate::semantics::{Type, Verdict};
use crate::syntax::CanonicalDistribution;
use crate::typing::{infer, Context};

#[derive(Clone, Debug)]
pub struct AdequacyReport {
    pub rules: Vec<StepRule>,
    pub final_program: Program,
    /// Normal form shared by every program along the run.
    pub normal_form: CanonicalDistribution,
    /// Whether `x⃗ : ♯B ⊢ ⟦t⟧ : ⟦A⟧` was derived. A failed search gives
    /// `Unsupported`, not `No`.
    pub typed: Verdict,
}

fn nf(p: &Program, gates: &GateTable, fuel: usize) -> Result<CanonicalDistribution> {
    normalize(&translate_program(p, gates)?, fuel).into_result()
}

/// Runs `p` to a value and checks that every step preserves the normal form
/// of the translation.
pub fn adequacy_check(p: &Program, gates: &GateTable, fuel: usize, cfg: &Config) -> Result<AdequacyReport> {
    adequacy_check_with(p, gates, gates, fuel, cfg)
}

/// Like [`adequacy_check`], but the machine and the translation may use
/// different gate tables. Used to show that a wrong model is caught.
pub fn adequacy_check_with(
    p: &Program,
    run_gates: &GateTable,
    model_gates: &GateTable,
    fuel: usize,
    cfg: &Config,
) -> Result<AdequacyReport> {
    let ty = p.typecheck()?;
    let typed = typed_verdict(p, model_gates, &translate_type(&ty), cfg);
    let start = nf(p, model_gates, cfg.fuel)?;
    let mut cur = p.clone();
    let mut rules = Vec::new();
    while let Some((next, k)) = step(&cur, run_gates)? {
        if rules.len() == fuel {
            return Err(Error::OutOfFuel(fuel));
        }
        let after = nf(&next, model_gates, cfg.fuel)?;
        if !after.approx_eq_as_vectors(&start, cfg.eps) {
            return Err(Error::AdequacyViolation {
                step: rules.len() + 1,
                msg: format!("{k} on {cur} gives {} but the start gives {}", after.display(), start.display()),
            });
        }
        rules.push(k);
        cur = next;
    }
    Ok(AdequacyReport { rules, final_program: cur, normal_form: start, typed })
}

fn typed_verdict(p: &Program, gates: &GateTable, goal: &Type, cfg: &Config) -> Verdict {
    let Ok(t) = translate_term(&p.term, gates) else { return Verdict::Unsupported };
    let bindings = p.wires.keys().map(|x| (x.clone(), Type::qbit())).collect();
    let Ok(ctx) = Context::from_bindings(bindings) else { return Verdict::Unsupported };
    match infer(&ctx, &t, goal, cfg) {
        Ok(_) => Verdict::Yes,
        Err(_) => Verdict::Unsupported,
    }
}

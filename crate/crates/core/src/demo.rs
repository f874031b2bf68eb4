//! Both horns of the dichotomy, each checked by machine.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use thiserror::Error;

use crate::calculus::axioms::factivity;
use crate::calculus::{check_proof, Enumerator, TheorySpec, Verdict};
use crate::machines::{make_self_knowing_machine, SlashEval, TruthValue3};
use crate::selfref::build_refutation;
use crate::syntax::{encode_formula, Formula};

/// Knowledge entries compared against the machine's own program.
pub const PREFIX: usize = 50;
/// Knowledge of Factivity samples required from the slash model.
pub const SLASH_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DemoError {
    #[error("self-knowing machine: {0}")]
    SelfKnowing(String),
    #[error("refutation for e={e} rejected: {verdict}")]
    Refutation { e: u64, verdict: Verdict },
    #[error("slash model: {0}")]
    Slash(String),
}

/// Closed formulas `ψ` with `K(ψ) -> ψ` in the stream so far, in stream
/// order.
pub fn factivity_samples(slash: &Enumerator) -> Vec<Formula> {
    slash
        .stream()
        .filter_map(|f| match f.as_imp() {
            Some((Formula::Know(a), b)) if **a == *b && b.is_sentence() => Some(b.clone()),
            _ => None,
        })
        .collect()
}

/// Builds the self-knowing machine, refutes the machine that also knows its
/// factivity, and samples Knowledge of Factivity in the slash model. `budget`
/// is the number of enumeration stages for the slash model.
pub fn demo_dichotomy(budget: u64) -> Result<String, DemoError> {
    let mut out = String::new();

    let (machine, e) = make_self_knowing_machine();
    writeln!(out, "[self-knowing machine] e* = {e}").unwrap();
    let known = machine.knowledge_codes(PREFIX);
    if known.len() < PREFIX {
        return Err(DemoError::SelfKnowing(format!("only {} entries", known.len())));
    }
    let mut direct = Enumerator::new(TheorySpec::sigma_prime(e));
    direct.run_until_len(PREFIX, budget.max(10_000));
    let theory: Vec<BigUint> = direct.stream().take(PREFIX).map(encode_formula).collect();
    let deep: HashSet<BigUint> = machine.knowledge_codes(4 * PREFIX).into_iter().collect();
    let mut deep_theory = direct.clone();
    deep_theory.run_until_len(4 * PREFIX, budget.max(10_000));
    let deep_theory: HashSet<BigUint> = deep_theory.stream().map(encode_formula).collect();
    let fwd = known.iter().all(|c| deep_theory.contains(c));
    let bwd = theory.iter().all(|c| deep.contains(c));
    if !(fwd && bwd) {
        return Err(DemoError::SelfKnowing("knowledge and W_e* disagree".into()));
    }
    writeln!(out, "  first {PREFIX} entries of W_e* are consequences of the index theory: ok").unwrap();
    writeln!(out, "  first {PREFIX} consequences of the index theory are in W_e*: ok").unwrap();

    let proof = build_refutation(e);
    let verdict = check_proof(&proof, &TheorySpec::sigma_e(e));
    writeln!(out, "[refutation] e = {e}, {} steps, conclusion {}", proof.len(), proof.conclusion().unwrap()).unwrap();
    writeln!(out, "  check under sigma_e: {verdict}").unwrap();
    if !verdict.is_accept() {
        return Err(DemoError::Refutation { e, verdict });
    }

    let mut slash = SlashEval::new(TheorySpec::sigma_slash());
    slash.advance(budget);
    let samples = factivity_samples(slash.enumerator());
    writeln!(out, "[slash model] {} stages, Knowledge of Factivity samples:", budget).unwrap();
    let mut verified = 0;
    for psi in samples {
        let kof = Formula::know(factivity(psi.clone()));
        if slash.eval(&kof, budget).map_err(|e| DemoError::Slash(e.to_string()))? == TruthValue3::True {
            writeln!(out, "  {kof} : true").unwrap();
            verified += 1;
        }
        if verified == SLASH_SAMPLES {
            break;
        }
    }
    if verified < SLASH_SAMPLES {
        return Err(DemoError::Slash(format!("only {verified} verified samples")));
    }
    writeln!(out, "DICHOTOMY: both horns verified").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_reports_both_horns() {
        let report = demo_dichotomy(10_000).unwrap();
        assert!(report.trim_end().ends_with("DICHOTOMY: both horns verified"), "{report}");
        assert!(report.contains("check under sigma_e: ACCEPT"));
        assert!(report.matches(" : true").count() >= 10);
    }
}

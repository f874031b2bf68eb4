//! Random single-step corruptions of a proof.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::Formula;

use super::proof::{Justification, Proof};

/// Corrupts one main step: negates its formula, redirects one premise of a
/// modus ponens or generalization, or renames a generalized variable.
/// Returns the mutated proof and the index of the changed step.
pub fn mutate_step(proof: &Proof, rng: &mut impl Rng) -> (Proof, usize) {
    let mut out = proof.clone();
    let k = rng.gen_range(0..proof.steps.len());
    let step = &mut out.steps[k];
    let other = |rng: &mut dyn rand::RngCore, i: usize| -> Option<usize> {
        (k >= 2).then(|| {
            let j = rng.gen_range(0..k - 1);
            if j >= i {
                j + 1
            } else {
                j
            }
        })
    };
    let choice = rng.gen_range(0..3);
    let changed = match (&step.just, choice) {
        (Justification::Mp(i, j), 1) => other(rng, *i).map(|i2| Justification::Mp(i2, *j)),
        (Justification::Mp(i, j), 2) => other(rng, *j).map(|j2| Justification::Mp(*i, j2)),
        (Justification::Gen(i, x), 1) => other(rng, *i).map(|i2| Justification::Gen(i2, *x)),
        (Justification::Gen(i, x), 2) => Some(Justification::Gen(*i, x + 1)),
        _ => None,
    };
    match changed {
        Some(j) => step.just = j,
        None => step.formula = Formula::not(step.formula.clone()),
    }
    (out, k)
}

/// `n` independent mutants from a seeded generator.
pub fn mutants(proof: &Proof, n: usize, seed: u64) -> Vec<(Proof, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| mutate_step(proof, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::taut::identity;
    use crate::calculus::{check_pure, Verdict};
    use crate::syntax::parse;

    #[test]
    fn mutants_of_identity_reject_at_the_changed_step() {
        let p = identity(&parse("0 = 0").unwrap());
        assert_eq!(check_pure(&p), Verdict::Accept);
        for (m, k) in mutants(&p, 30, 5) {
            assert_ne!(m, p);
            match check_pure(&m) {
                Verdict::Reject { step, .. } => assert_eq!(step, k),
                Verdict::Accept => panic!("mutant accepted"),
            }
        }
    }
}

use proptest::prelude::*;

use episteme::calculus::axioms::{chain, prop_ax1};
use episteme::calculus::catalog::formula_of;
use episteme::calculus::{
    check_proof, check_pure, enumerate_consequences, hilbertize, is_tautology, prove_tautology, Enumerator, SchemaId,
    Script, ScriptStep, TheorySpec,
};
use episteme::enumvm::Registry;
use episteme::machines::{std_eval, TruthValue3};
use episteme::syntax::{Formula, Term};

fn letter(i: u32) -> Formula {
    Formula::eq(Term::var(i), Term::Zero)
}

fn propositional() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![(0u32..3).prop_map(letter), (0u32..3).prop_map(|i| Formula::know(letter(i)))];
    atom.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

/// Truth-table evaluation where the atoms are the six listed formulas.
fn value(f: &Formula, row: u32) -> bool {
    match f {
        Formula::Not(a) => !value(a, row),
        Formula::Imp(a, b) => !value(a, row) || value(b, row),
        Formula::Eq(Term::Var(i), _) => row >> i & 1 == 1,
        Formula::Know(a) => match &**a {
            Formula::Eq(Term::Var(i), _) => row >> (i + 3) & 1 == 1,
            _ => unreachable!(),
        },
        _ => unreachable!(),
    }
}

fn valid(f: &Formula) -> bool {
    (0..64).all(|row| value(f, row))
}

/// A script that assumes the hypotheses, re-derives one of them (or an
/// implication ending in one) by weakening, and discharges everything.
fn script(hyps: &[Formula], pick: usize, weaken: Option<usize>) -> (Script, Formula) {
    let mut steps: Vec<ScriptStep> = hyps.iter().cloned().map(ScriptStep::Assume).collect();
    let j = pick % hyps.len();
    let target = &hyps[j];
    let weak = |f: &Formula, g: &Formula| ScriptStep::Axiom {
        formula: prop_ax1(f.clone(), g.clone()),
        schema: SchemaId::PropAx1,
        witness: None,
    };
    let conclusion = match weaken {
        Some(i) => {
            let other = hyps[i % hyps.len()].clone();
            steps.push(weak(target, &other));
            steps.push(ScriptStep::Mp(j, hyps.len()));
            Formula::imp(other, target.clone())
        }
        None => {
            let last = hyps.len() - 1;
            steps.push(weak(target, &hyps[last]));
            steps.push(ScriptStep::Mp(j, hyps.len()));
            steps.push(ScriptStep::Mp(last, hyps.len() + 1));
            target.clone()
        }
    };
    steps.extend(hyps.iter().map(|_| ScriptStep::Discharge));
    (Script { lemmas: vec![], steps }, chain(hyps, conclusion))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hilbertized_scripts_check(
        hyps in proptest::collection::vec(any::<u16>().prop_map(|n| formula_of(n as u64)), 1..4),
        pick in any::<usize>(),
        weaken in proptest::option::of(any::<usize>()),
    ) {
        let (s, expected) = script(&hyps, pick, weaken);
        let proof = hilbertize(&s).unwrap();
        prop_assert!(check_pure(&proof).is_accept());
        prop_assert_eq!(proof.conclusion(), Some(&expected));
    }

    #[test]
    fn tautology_decision_matches_truth_tables(f in propositional()) {
        prop_assert_eq!(is_tautology(&f), valid(&f));
        if valid(&f) {
            let proof = prove_tautology(&f).unwrap();
            prop_assert!(check_pure(&proof).is_accept());
            prop_assert_eq!(proof.conclusion(), Some(&f));
        } else {
            prop_assert!(prove_tautology(&f).is_err());
        }
    }
}

#[test]
fn enumeration_prefixes_are_monotone() {
    for theory in [TheorySpec::logic(), TheorySpec::pa(), TheorySpec::sigma_slash()] {
        let short = enumerate_consequences(&theory, 200);
        let long = enumerate_consequences(&theory, 800);
        assert!(long.len() >= short.len());
        assert_eq!(&long[..short.len()], &short[..]);
    }
}

#[test]
fn enumerated_formulas_have_checkable_proofs() {
    let theory = TheorySpec::sigma_slash();
    let mut en = Enumerator::new(theory.clone());
    en.run_to(500);
    for pos in (0..en.len()).step_by(7) {
        let proof = en.proof_of(pos);
        assert!(check_proof(&proof, &theory).is_accept(), "entry {pos}");
        assert_eq!(proof.conclusion(), en.get(pos));
    }
}

#[test]
fn arithmetic_consequences_are_never_false() {
    let reg = Registry::new();
    let oracle = |_: &Formula| TruthValue3::Unknown;
    for f in enumerate_consequences(&TheorySpec::pa(), 1500) {
        let v = std_eval(&f.closure(), 32, &oracle, &reg).unwrap();
        assert_ne!(v, TruthValue3::False, "{f}");
    }
}

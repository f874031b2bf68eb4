use std::collections::HashMap;

use num_bigint::BigUint;
use proptest::prelude::*;

use episteme::syntax::{
    decode, decode_formula, encode_formula, encode_term, eval_term_with, pair, parse, substitute, unpair, Decoded,
    Formula, Term, Var,
};

fn term(diag: bool) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0u32..4).prop_map(Term::Var),
        Just(Term::Zero),
        (0u32..20).prop_map(Term::num),
    ];
    leaf.prop_recursive(4, 16, 2, move |inner| {
        let mut arms = vec![
            inner.clone().prop_map(Term::succ).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::times(a, b)).boxed(),
        ];
        if diag {
            arms.push(inner.prop_map(Term::diag).boxed());
        }
        proptest::strategy::Union::new(arms)
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term(true), term(true)).prop_map(|(a, b)| Formula::eq(a, b)),
        (term(true), term(true)).prop_map(|(a, b)| Formula::in_w(a, b)),
    ];
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (0u32..4, inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            inner.prop_map(Formula::know),
        ]
    })
}

/// Quantifier-free, knowledge-free equations, which can be evaluated
/// directly.
fn equational() -> impl Strategy<Value = Formula> {
    let atom = (term(false), term(false)).prop_map(|(a, b)| Formula::eq(a, b));
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn holds(f: &Formula, env: &HashMap<Var, BigUint>) -> bool {
    let lookup = |x: Var| env.get(&x).cloned();
    match f {
        Formula::Eq(a, b) => eval_term_with(a, &lookup).unwrap() == eval_term_with(b, &lookup).unwrap(),
        Formula::Not(a) => !holds(a, env),
        Formula::Imp(a, b) => !holds(a, env) || holds(b, env),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pairing_is_a_bijection(a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (BigUint::from(a), BigUint::from(b));
        prop_assert_eq!(unpair(&pair(&a, &b)), (a, b));
    }

    #[test]
    fn codes_round_trip(f in formula()) {
        let c = encode_formula(&f);
        prop_assert_eq!(decode_formula(&c).unwrap(), f.clone());
        prop_assert_eq!(decode(&c).unwrap(), Decoded::Formula(f));
    }

    #[test]
    fn term_codes_round_trip(t in term(true)) {
        prop_assert_eq!(decode(&encode_term(&t)).unwrap(), Decoded::Term(t));
    }

    #[test]
    fn printing_round_trips(f in formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn distinct_formulas_get_distinct_codes(f in formula(), g in formula()) {
        prop_assert_eq!(f == g, encode_formula(&f) == encode_formula(&g));
    }

    #[test]
    fn knowledge_is_opaque(f in formula(), x in 0u32..4, t in term(true)) {
        let k = Formula::know(f);
        prop_assert!(k.free_vars().is_empty());
        prop_assert!(k.is_sentence());
        prop_assert_eq!(substitute(&k, x, &t), k);
    }

    #[test]
    fn substitution_tracks_free_variables(f in formula(), x in 0u32..4, t in term(true)) {
        let out = substitute(&f, x, &t);
        let mut expected = f.free_vars();
        if expected.remove(&x) {
            expected.extend(t.free_vars());
        }
        prop_assert_eq!(out.free_vars(), expected);
    }

    #[test]
    fn substitution_agrees_with_evaluation(
        f in equational(),
        x in 0u32..4,
        t in term(false),
        vals in proptest::collection::vec(0u32..6, 4),
    ) {
        let env: HashMap<Var, BigUint> = vals.iter().enumerate().map(|(i, v)| (i as Var, BigUint::from(*v))).collect();
        let tv = eval_term_with(&t, &|y| env.get(&y).cloned()).unwrap();
        let mut shifted = env.clone();
        shifted.insert(x, tv);
        prop_assert_eq!(holds(&substitute(&f, x, &t), &env), holds(&f, &shifted));
    }
}

#[test]
fn reference_codes() {
    assert_eq!(encode_formula(&parse("0 = 0").unwrap()), BigUint::from(59u32));
    assert_eq!(decode_formula(&BigUint::from(2544u32)).unwrap(), parse("K(0 = 0)").unwrap());
}

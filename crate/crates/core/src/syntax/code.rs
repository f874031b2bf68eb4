//! Structural Gödel coding by Cantor pairing.
//!
//! Every node is coded as `pair(tag, payload)`:
//!
//! | tag | node    | payload              |
//! |-----|---------|----------------------|
//! | 0   | Var     | index                |
//! | 1   | Zero    | 0                    |
//! | 2   | Succ    | code of child        |
//! | 3   | Plus    | pair of child codes  |
//! | 4   | Times   | pair of child codes  |
//! | 5   | Num     | the number itself    |
//! | 6   | Eq      | pair of child codes  |
//! | 7   | In      | pair of child codes  |
//! | 8   | Not     | code of child        |
//! | 9   | Imp     | pair of child codes  |
//! | 10  | Forall  | pair(index, body)    |
//! | 11  | K       | code of child        |
//! | 12  | Diag    | code of child        |

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Formula, Term};

const VAR: u32 = 0;
const ZERO: u32 = 1;
const SUCC: u32 = 2;
const PLUS: u32 = 3;
const TIMES: u32 = 4;
const NUM: u32 = 5;
const EQ: u32 = 6;
const IN: u32 = 7;
const NOT: u32 = 8;
const IMP: u32 = 9;
const FORALL: u32 = 10;
const KNOW: u32 = 11;
const DIAG: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("tag {0} is not a node tag")]
    BadTag(BigUint),
    #[error("expected a term code, found a formula code")]
    ExpectedTerm,
    #[error("expected a formula code, found a term code")]
    ExpectedFormula,
    #[error("zero node with nonzero payload")]
    BadZeroPayload,
    #[error("variable index out of range")]
    VarOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Term(Term),
    Formula(Formula),
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    let t = &s * (&s + 1u32) >> 1;
    t + b
}

/// Inverse of [`pair`].
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let disc: BigUint = (z << 3) + 1u32;
    let w = (disc.sqrt() - 1u32) >> 1;
    let t = &w * (&w + 1u32) >> 1;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

fn node(tag: u32, payload: &BigUint) -> BigUint {
    pair(&BigUint::from(tag), payload)
}

pub fn encode_term(t: &Term) -> BigUint {
    match t {
        Term::Var(i) => node(VAR, &BigUint::from(*i)),
        Term::Zero => node(ZERO, &BigUint::zero()),
        Term::Succ(a) => node(SUCC, &encode_term(a)),
        Term::Plus(a, b) => node(PLUS, &pair(&encode_term(a), &encode_term(b))),
        Term::Times(a, b) => node(TIMES, &pair(&encode_term(a), &encode_term(b))),
        Term::Num(n) => node(NUM, n),
        Term::Diag(a) => node(DIAG, &encode_term(a)),
    }
}

pub fn encode_formula(f: &Formula) -> BigUint {
    match f {
        Formula::Eq(a, b) => node(EQ, &pair(&encode_term(a), &encode_term(b))),
        Formula::In(a, b) => node(IN, &pair(&encode_term(a), &encode_term(b))),
        Formula::Not(a) => node(NOT, &encode_formula(a)),
        Formula::Imp(a, b) => node(IMP, &pair(&encode_formula(a), &encode_formula(b))),
        Formula::Forall(x, body) => node(FORALL, &pair(&BigUint::from(*x), &encode_formula(body))),
        Formula::Know(a) => node(KNOW, &encode_formula(a)),
    }
}

pub fn decode(c: &BigUint) -> Result<Decoded, CodeError> {
    let (tag, payload) = unpair(c);
    let tag = match tag.to_u32() {
        Some(t) if t <= DIAG => t,
        _ => return Err(CodeError::BadTag(tag)),
    };
    let term = |code: &BigUint| match decode(code)? {
        Decoded::Term(t) => Ok(Arc::new(t)),
        Decoded::Formula(_) => Err(CodeError::ExpectedTerm),
    };
    let formula = |code: &BigUint| match decode(code)? {
        Decoded::Formula(f) => Ok(Arc::new(f)),
        Decoded::Term(_) => Err(CodeError::ExpectedFormula),
    };
    Ok(match tag {
        VAR => Decoded::Term(Term::Var(payload.to_u32().ok_or(CodeError::VarOutOfRange)?)),
        ZERO if payload.is_zero() => Decoded::Term(Term::Zero),
        ZERO => return Err(CodeError::BadZeroPayload),
        SUCC => Decoded::Term(Term::Succ(term(&payload)?)),
        PLUS | TIMES => {
            let (a, b) = unpair(&payload);
            let (a, b) = (term(&a)?, term(&b)?);
            Decoded::Term(if tag == PLUS { Term::Plus(a, b) } else { Term::Times(a, b) })
        }
        NUM => Decoded::Term(Term::Num(payload)),
        DIAG => Decoded::Term(Term::Diag(term(&payload)?)),
        EQ | IN => {
            let (a, b) = unpair(&payload);
            let (a, b) = (term(&a)?, term(&b)?);
            let (a, b) = (Arc::unwrap_or_clone(a), Arc::unwrap_or_clone(b));
            Decoded::Formula(if tag == EQ { Formula::Eq(a, b) } else { Formula::In(a, b) })
        }
        NOT => Decoded::Formula(Formula::Not(formula(&payload)?)),
        IMP => {
            let (a, b) = unpair(&payload);
            Decoded::Formula(Formula::Imp(formula(&a)?, formula(&b)?))
        }
        FORALL => {
            let (x, body) = unpair(&payload);
            let x = x.to_u32().ok_or(CodeError::VarOutOfRange)?;
            Decoded::Formula(Formula::Forall(x, formula(&body)?))
        }
        KNOW => Decoded::Formula(Formula::Know(formula(&payload)?)),
        _ => unreachable!(),
    })
}

pub fn decode_formula(c: &BigUint) -> Result<Formula, CodeError> {
    match decode(c)? {
        Decoded::Formula(f) => Ok(f),
        Decoded::Term(_) => Err(CodeError::ExpectedFormula),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pairing evaluated directly from the polynomial, on machine integers.
    fn pair_poly(a: u128, b: u128) -> u128 {
        (a + b) * (a + b + 1) / 2 + b
    }

    #[test]
    fn pairing_polynomial_values() {
        for a in 0..40u128 {
            for b in 0..40u128 {
                let p = pair(&BigUint::from(a), &BigUint::from(b));
                assert_eq!(p, BigUint::from(pair_poly(a, b)));
                assert_eq!(unpair(&p), (BigUint::from(a), BigUint::from(b)));
            }
        }
    }

    #[test]
    fn unpair_enumerates_in_order() {
        // Brute-force inverse: walk the diagonals.
        let mut z = 0u32;
        for s in 0..30u32 {
            for b in 0..=s {
                let (x, y) = unpair(&BigUint::from(z));
                assert_eq!((x, y), (BigUint::from(s - b), BigUint::from(b)));
                z += 1;
            }
        }
    }

    #[test]
    fn reference_codes() {
        // pair(0,0) = 0, pair(1,0) = 1, pair(6, pair(1,1)) = pair(6,4) = 59,
        // pair(11, 59) = 2544.
        assert_eq!(encode_term(&Term::Var(0)), BigUint::from(0u32));
        assert_eq!(encode_term(&Term::Zero), BigUint::from(1u32));
        let eq = Formula::eq(Term::Zero, Term::Zero);
        assert_eq!(encode_formula(&eq), BigUint::from(pair_poly(6, pair_poly(1, 1))));
        assert_eq!(encode_formula(&eq), BigUint::from(59u32));
        let k = Formula::know(eq);
        assert_eq!(encode_formula(&k), BigUint::from(pair_poly(11, 59)));
        assert_eq!(encode_formula(&k), BigUint::from(2544u32));
    }

    #[test]
    fn malformed_codes_are_rejected() {
        // pair(13, 0) has tag 13.
        let bad = BigUint::from(pair_poly(13, 0));
        assert!(matches!(decode(&bad), Err(CodeError::BadTag(_))));
        // Zero with payload 1.
        assert_eq!(decode(&BigUint::from(pair_poly(1, 1))), Err(CodeError::BadZeroPayload));
        // Not applied to a term code (payload 1 = Zero).
        assert_eq!(decode(&BigUint::from(pair_poly(8, 1))), Err(CodeError::ExpectedFormula));
        // Succ applied to a formula code (59).
        assert_eq!(decode(&BigUint::from(pair_poly(2, 59))), Err(CodeError::ExpectedTerm));
    }
}

//! Surjections from the naturals onto terms and formulas, small indices
//! giving small objects. Used to enumerate axiom instances.

use crate::syntax::{Formula, Term, Var};

/// Cantor unpairing on machine words.
pub fn unpair_u64(z: u64) -> (u64, u64) {
    let z = z as u128;
    let mut w = ((8.0 * z as f64 + 1.0).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let b = z - w * (w + 1) / 2;
    ((w - b) as u64, b as u64)
}

pub fn unpair3(z: u64) -> (u64, u64, u64) {
    let (a, r) = unpair_u64(z);
    let (b, c) = unpair_u64(r);
    (a, b, c)
}

pub fn unpair4(z: u64) -> (u64, u64, u64, u64) {
    let (a, r) = unpair_u64(z);
    let (b, c, d) = unpair3(r);
    (a, b, c, d)
}

fn var_of(n: u64) -> Var {
    Var::try_from(n).unwrap_or(Var::MAX)
}

pub fn term_of(n: u64) -> Term {
    let (tag, rest) = (n % 7, n / 7);
    match tag {
        0 => Term::Var(var_of(rest)),
        1 => Term::Zero,
        2 => Term::succ(term_of(rest)),
        3 => {
            let (a, b) = unpair_u64(rest);
            Term::plus(term_of(a), term_of(b))
        }
        4 => {
            let (a, b) = unpair_u64(rest);
            Term::times(term_of(a), term_of(b))
        }
        5 => Term::num(rest),
        _ => Term::diag(term_of(rest)),
    }
}

pub fn closed_term_of(n: u64) -> Term {
    let (tag, rest) = (n % 6, n / 6);
    match tag {
        0 => Term::Zero,
        1 => Term::succ(closed_term_of(rest)),
        2 => {
            let (a, b) = unpair_u64(rest);
            Term::plus(closed_term_of(a), closed_term_of(b))
        }
        3 => {
            let (a, b) = unpair_u64(rest);
            Term::times(closed_term_of(a), closed_term_of(b))
        }
        4 => Term::num(rest),
        _ => Term::diag(closed_term_of(rest)),
    }
}

pub fn formula_of(n: u64) -> Formula {
    let (tag, rest) = (n % 6, n / 6);
    match tag {
        0 => {
            let (a, b) = unpair_u64(rest);
            Formula::eq(term_of(a), term_of(b))
        }
        1 => Formula::not(formula_of(rest)),
        2 => {
            let (a, b) = unpair_u64(rest);
            Formula::imp(formula_of(a), formula_of(b))
        }
        3 => {
            let (a, b) = unpair_u64(rest);
            Formula::in_w(term_of(a), term_of(b))
        }
        4 => {
            let (x, b) = unpair_u64(rest);
            Formula::forall(var_of(x), formula_of(b))
        }
        _ => Formula::know(formula_of(rest)),
    }
}

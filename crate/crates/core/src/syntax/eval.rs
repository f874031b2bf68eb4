use num_bigint::BigUint;
use thiserror::Error;

use super::{Term, Var};
use crate::selfref::diag_fn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("term has free variable x{0}")]
    OpenTerm(Var),
}

/// Value of a closed term in the standard model. `diag` is interpreted by
/// [`diag_fn`].
pub fn eval_ground_term(t: &Term) -> Result<BigUint, EvalError> {
    eval_term_with(t, &|_| None)
}

/// Value of `t` under a partial assignment of variables.
pub fn eval_term_with(t: &Term, env: &dyn Fn(Var) -> Option<BigUint>) -> Result<BigUint, EvalError> {
    Ok(match t {
        Term::Var(x) => env(*x).ok_or(EvalError::OpenTerm(*x))?,
        Term::Zero => BigUint::ZERO,
        Term::Num(n) => n.clone(),
        Term::Succ(a) => eval_term_with(a, env)? + 1u32,
        Term::Plus(a, b) => eval_term_with(a, env)? + eval_term_with(b, env)?,
        Term::Times(a, b) => eval_term_with(a, env)? * eval_term_with(b, env)?,
        Term::Diag(a) => diag_fn(&eval_term_with(a, env)?),
    })
}

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Formula, Term, Var};

/// Replaces free occurrences of `x` in `t` by `r`.
pub fn substitute_term(t: &Term, x: Var, r: &Term) -> Term {
    if !t.has_var(x) {
        return t.clone();
    }
    match t {
        Term::Var(_) => r.clone(),
        Term::Zero | Term::Num(_) => t.clone(),
        Term::Succ(a) => Term::Succ(Arc::new(substitute_term(a, x, r))),
        Term::Diag(a) => Term::Diag(Arc::new(substitute_term(a, x, r))),
        Term::Plus(a, b) => Term::plus(substitute_term(a, x, r), substitute_term(b, x, r)),
        Term::Times(a, b) => Term::times(substitute_term(a, x, r), substitute_term(b, x, r)),
    }
}

/// Capture-avoiding substitution `φ(x|t)`.
///
/// Knowledge atoms are left untouched. A binder that would capture a
/// variable of `t` is renamed to the smallest index free in neither the
/// body nor `t`.
pub fn substitute(phi: &Formula, x: Var, t: &Term) -> Formula {
    let t_vars = t.free_vars();
    subst(phi, x, t, &t_vars)
}

fn subst(phi: &Formula, x: Var, t: &Term, t_vars: &BTreeSet<Var>) -> Formula {
    if !phi.is_free(x) {
        return phi.clone();
    }
    match phi {
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, x, t), substitute_term(b, x, t)),
        Formula::In(a, b) => Formula::In(substitute_term(a, x, t), substitute_term(b, x, t)),
        Formula::Not(a) => Formula::not(subst(a, x, t, t_vars)),
        Formula::Imp(a, b) => Formula::imp(subst(a, x, t, t_vars), subst(b, x, t, t_vars)),
        Formula::Forall(y, body) => {
            if t_vars.contains(y) {
                let mut avoid = body.free_vars();
                avoid.extend(t_vars.iter().copied());
                let z = (0..).find(|v| !avoid.contains(v)).expect("variable space exhausted");
                let renamed = substitute(body, *y, &Term::Var(z));
                Formula::forall(z, subst(&renamed, x, t, t_vars))
            } else {
                Formula::forall(*y, subst(body, x, t, t_vars))
            }
        }
        Formula::Know(_) => phi.clone(),
    }
}

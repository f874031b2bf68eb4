//! Terms and formulas of first-order arithmetic weakly extended by a
//! knowledge operator.
//!
//! `K(φ)` is a 0-ary predicate symbol indexed by `φ`: it has no free
//! variables and substitution never descends into it.

mod code;
mod eval;
mod parse;
mod print;
mod subst;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;

pub use code::{decode, decode_formula, encode_formula, encode_term, pair, unpair, CodeError, Decoded};
pub use eval::{eval_ground_term, eval_term_with, EvalError};
pub use parse::{parse, parse_term, ParseError};
pub use subst::{substitute, substitute_term};

/// Variable index. Variables are written `x0`, `x1`, ...
pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Zero,
    Succ(Arc<Term>),
    Plus(Arc<Term>, Arc<Term>),
    Times(Arc<Term>, Arc<Term>),
    /// Canonical numeral; semantically `S^n(0)`.
    Num(BigUint),
    /// The diagonal function symbol.
    Diag(Arc<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    /// `In(a, b)`: `a` is a member of the `b`-th enumerable set.
    In(Term, Term),
    Not(Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Forall(Var, Arc<Formula>),
    /// The knowledge atom `K(φ)`.
    Know(Arc<Formula>),
}

impl Term {
    pub fn var(i: Var) -> Term {
        Term::Var(i)
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Arc::new(t))
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Arc::new(a), Arc::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Arc::new(a), Arc::new(b))
    }

    pub fn num(n: impl Into<BigUint>) -> Term {
        Term::Num(n.into())
    }

    pub fn diag(t: Term) -> Term {
        Term::Diag(Arc::new(t))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::Zero | Term::Num(_) => {}
            Term::Succ(t) | Term::Diag(t) => t.collect_vars(out),
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn has_var(&self, x: Var) -> bool {
        match self {
            Term::Var(i) => *i == x,
            Term::Zero | Term::Num(_) => false,
            Term::Succ(t) | Term::Diag(t) => t.has_var(x),
            Term::Plus(a, b) | Term::Times(a, b) => a.has_var(x) || b.has_var(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Zero | Term::Num(_) => true,
            Term::Succ(t) | Term::Diag(t) => t.is_closed(),
            Term::Plus(a, b) | Term::Times(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::Num(_) => 1,
            Term::Succ(t) | Term::Diag(t) => 1 + t.size(),
            Term::Plus(a, b) | Term::Times(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn in_w(a: Term, b: Term) -> Formula {
        Formula::In(a, b)
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Arc::new(a))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn forall(x: Var, body: Formula) -> Formula {
        Formula::Forall(x, Arc::new(body))
    }

    pub fn know(a: Formula) -> Formula {
        Formula::Know(Arc::new(a))
    }

    /// `A & B`, expanded to `~(A -> ~B)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::imp(a, Formula::not(b)))
    }

    /// `A | B`, expanded to `~A -> B`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::imp(Formula::not(a), b)
    }

    /// `A <-> B`, expanded to `(A -> B) & (B -> A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        let ab = Formula::imp(a.clone(), b.clone());
        let ba = Formula::imp(b, a);
        Formula::and(ab, ba)
    }

    /// `exists x. A`, expanded to `~forall x. ~A`.
    pub fn exists(x: Var, body: Formula) -> Formula {
        Formula::not(Formula::forall(x, Formula::not(body)))
    }

    /// Splits an expanded biconditional `~((A -> B) -> ~(B -> A))` into `(A, B)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let Formula::Not(inner) = self else { return None };
        let Formula::Imp(ab, nba) = &**inner else { return None };
        let Formula::Imp(a, b) = &**ab else { return None };
        let Formula::Not(ba) = &**nba else { return None };
        let Formula::Imp(b2, a2) = &**ba else { return None };
        (a == a2 && b == b2).then_some((&**a, &**b))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(a) => a.collect_free(out),
            Formula::Imp(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Forall(x, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
            Formula::Know(_) => {}
        }
    }

    pub fn is_free(&self, x: Var) -> bool {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => a.has_var(x) || b.has_var(x),
            Formula::Not(a) => a.is_free(x),
            Formula::Imp(a, b) => a.is_free(x) || b.is_free(x),
            Formula::Forall(y, body) => *y != x && body.is_free(x),
            Formula::Know(_) => false,
        }
    }

    pub fn is_sentence(&self) -> bool {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => a.is_closed() && b.is_closed(),
            Formula::Not(a) => a.is_sentence(),
            Formula::Imp(a, b) => a.is_sentence() && b.is_sentence(),
            Formula::Forall(..) => self.free_vars().is_empty(),
            Formula::Know(_) => true,
        }
    }

    /// Universal closure over the free variables, innermost quantifier on the
    /// smallest index.
    pub fn closure(&self) -> Formula {
        let vars = self.free_vars();
        vars.into_iter().fold(self.clone(), |acc, x| Formula::forall(x, acc))
    }

    /// Nesting depth; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Know(a) => 1 + a.depth(),
            Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of nodes, counting term nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(a, b) | Formula::In(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Know(a) => 1 + a.size(),
            Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_examples() {
        let f = Formula::eq(Term::var(0), Term::var(1));
        assert_eq!(f.free_vars(), BTreeSet::from([0, 1]));
        assert!(Formula::know(f.clone()).free_vars().is_empty());
        assert_eq!(Formula::forall(0, f).free_vars(), BTreeSet::from([1]));
    }

    #[test]
    fn iff_round_trips_through_as_iff() {
        let a = Formula::eq(Term::Zero, Term::Zero);
        let b = Formula::know(a.clone());
        let f = Formula::iff(a.clone(), b.clone());
        assert_eq!(f.as_iff(), Some((&a, &b)));
        assert_eq!(Formula::imp(a.clone(), b).as_iff(), None);
    }

    #[test]
    fn closure_binds_everything() {
        let f = Formula::eq(Term::var(3), Term::plus(Term::var(1), Term::Zero));
        let c = f.closure();
        assert!(c.is_sentence());
        assert_eq!(c, Formula::forall(3, Formula::forall(1, f)));
    }
}

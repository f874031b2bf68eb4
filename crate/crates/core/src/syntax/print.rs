//! Concrete syntax printing. Only core connectives are printed, so the
//! output parses back to the identical tree.

use std::fmt;

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Zero => f.write_str("0"),
            Term::Succ(a) => write!(f, "S({a})"),
            Term::Plus(a, b) => write!(f, "({a} + {b})"),
            Term::Times(a, b) => write!(f, "({a} * {b})"),
            Term::Num(n) => write!(f, "num {n}"),
            Term::Diag(a) => write!(f, "diag({a})"),
        }
    }
}

struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Imp(..) | Formula::Forall(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::In(a, b) => write!(f, "In({a}, {b})"),
            Formula::Not(a) => write!(f, "~{}", Operand(a)),
            Formula::Imp(a, b) => write!(f, "{} -> {b}", Operand(a)),
            Formula::Forall(x, body) => write!(f, "forall x{x}. {body}"),
            Formula::Know(a) => write!(f, "K({a})"),
        }
    }
}

//! An indexed system of enumerator programs.
//!
//! Programs are small trees. Index `e` of a [`Registry`] names a program
//! whose emissions form the set `W_e`. The system has s-m-n
//! ([`Registry::smn`]) and two constructions of recursion-theorem fixed
//! points ([`fixed_point`], [`fixed_point_classical`]).

mod fixpoint;
mod registry;
mod run;
mod sexpr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::syntax::pair;

pub use fixpoint::{apply, consequences_transformer, fixed_point, fixed_point_classical, sigma_prime_code, Template};
pub use registry::Registry;
pub use run::{RunOutcome, Runner, MAX_NESTING, MAX_VALUE_BITS};
pub use sexpr::parse_prog;

pub type Index = u64;

/// Default step budget for program runs.
pub const DEFAULT_VM_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VmError {
    #[error("index {0} is not allocated")]
    Unallocated(Index),
    #[error("template parameter in a registered program")]
    OpenProgram,
    #[error("transcript line {line}: {msg}")]
    Transcript { line: usize, msg: String },
    #[error("program syntax: {0}")]
    Syntax(String),
    #[error("classical fixed point landed on {got}, expected {expected}")]
    FixedPointDrift { expected: Index, got: Index },
}

/// A natural-number expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Nat {
    Lit(BigUint),
    /// The index of the registry entry holding the program.
    SelfIndex,
    /// The argument of a template.
    Param,
    Pair(Box<Nat>, Box<Nat>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexExpr {
    Lit(Index),
    SelfIndex,
    Param,
    /// The index `smn(e, n)`, run without allocating.
    Smn(Box<IndexExpr>, Nat),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prog {
    Emit(Vec<Nat>),
    /// Alternates strictly between the two sides.
    Interleave(Box<Prog>, Box<Prog>),
    /// Emits `pair(n, m)` for every emitted `m`.
    MapPair(Nat, Box<Prog>),
    /// Emits `m` for every emitted `pair(n, m)`.
    Section(Nat, Box<Prog>),
    RunIndex(IndexExpr),
    /// Gödel codes of the consequences of the theory with this code, in
    /// enumeration order.
    EnumConsequences(Nat),
}

impl Nat {
    pub fn lit(n: impl Into<BigUint>) -> Nat {
        Nat::Lit(n.into())
    }

    /// Value with `SelfIndex` bound to `this`. `None` if a template
    /// parameter or an unbound `SelfIndex` remains.
    pub fn eval(&self, this: Option<Index>) -> Option<BigUint> {
        match self {
            Nat::Lit(n) => Some(n.clone()),
            Nat::SelfIndex => this.map(BigUint::from),
            Nat::Param => None,
            Nat::Pair(a, b) => Some(pair(&a.eval(this)?, &b.eval(this)?)),
        }
    }

    fn has_param(&self) -> bool {
        match self {
            Nat::Param => true,
            Nat::Pair(a, b) => a.has_param() || b.has_param(),
            _ => false,
        }
    }

    fn subst(&self, with: &Nat, index: &IndexExpr) -> Nat {
        match self {
            Nat::Param => with.clone(),
            Nat::Pair(a, b) => Nat::Pair(Box::new(a.subst(with, index)), Box::new(b.subst(with, index))),
            n => n.clone(),
        }
    }
}

impl IndexExpr {
    fn has_param(&self) -> bool {
        match self {
            IndexExpr::Param => true,
            IndexExpr::Smn(i, n) => i.has_param() || n.has_param(),
            _ => false,
        }
    }

    fn subst(&self, with: &Nat, index: &IndexExpr) -> IndexExpr {
        match self {
            IndexExpr::Param => index.clone(),
            IndexExpr::Smn(i, n) => IndexExpr::Smn(Box::new(i.subst(with, index)), n.subst(with, index)),
            i => i.clone(),
        }
    }
}

impl Prog {
    pub fn emit(items: impl IntoIterator<Item = u64>) -> Prog {
        Prog::Emit(items.into_iter().map(Nat::lit).collect())
    }

    pub fn interleave(a: Prog, b: Prog) -> Prog {
        Prog::Interleave(Box::new(a), Box::new(b))
    }

    pub fn map_pair(n: Nat, p: Prog) -> Prog {
        Prog::MapPair(n, Box::new(p))
    }

    pub fn section(n: Nat, p: Prog) -> Prog {
        Prog::Section(n, Box::new(p))
    }

    /// Whether a template parameter occurs.
    pub fn has_param(&self) -> bool {
        match self {
            Prog::Emit(items) => items.iter().any(Nat::has_param),
            Prog::Interleave(a, b) => a.has_param() || b.has_param(),
            Prog::MapPair(n, p) | Prog::Section(n, p) => n.has_param() || p.has_param(),
            Prog::RunIndex(i) => i.has_param(),
            Prog::EnumConsequences(n) => n.has_param(),
        }
    }

    /// Replaces the parameter by `with` in number positions and by `index`
    /// in index positions.
    fn subst(&self, with: &Nat, index: &IndexExpr) -> Prog {
        match self {
            Prog::Emit(items) => Prog::Emit(items.iter().map(|n| n.subst(with, index)).collect()),
            Prog::Interleave(a, b) => Prog::interleave(a.subst(with, index), b.subst(with, index)),
            Prog::MapPair(n, p) => Prog::map_pair(n.subst(with, index), p.subst(with, index)),
            Prog::Section(n, p) => Prog::section(n.subst(with, index), p.subst(with, index)),
            Prog::RunIndex(i) => Prog::RunIndex(i.subst(with, index)),
            Prog::EnumConsequences(n) => Prog::EnumConsequences(n.subst(with, index)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nat_evaluation() {
        let n = Nat::Pair(Box::new(Nat::lit(2u32)), Box::new(Nat::SelfIndex));
        assert_eq!(n.eval(Some(1)), Some(BigUint::from(7u32)));
        assert_eq!(n.eval(None), None);
        assert_eq!(Nat::Param.eval(Some(0)), None);
    }

    #[test]
    fn parameter_substitution() {
        let t = Prog::interleave(Prog::Emit(vec![Nat::Param]), Prog::RunIndex(IndexExpr::Param));
        assert!(t.has_param());
        let p = t.subst(&Nat::lit(4u32), &IndexExpr::Lit(4));
        assert!(!p.has_param());
        assert_eq!(p, Prog::interleave(Prog::emit([4]), Prog::RunIndex(IndexExpr::Lit(4))));
    }
}

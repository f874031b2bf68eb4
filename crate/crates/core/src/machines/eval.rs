use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::calculus::{Enumerator, TheorySpec};
use crate::enumvm::{Index, Registry, RunOutcome};
use crate::syntax::{eval_ground_term, substitute, Formula, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruthValue3 {
    True,
    False,
    Unknown,
}

use TruthValue3::{False, True, Unknown};

impl TruthValue3 {
    pub fn from_bool(b: bool) -> TruthValue3 {
        if b {
            True
        } else {
            False
        }
    }

    pub fn not(self) -> TruthValue3 {
        match self {
            True => False,
            False => True,
            Unknown => Unknown,
        }
    }

    pub fn and(self, other: TruthValue3) -> TruthValue3 {
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    pub fn or(self, other: TruthValue3) -> TruthValue3 {
        self.not().and(other.not()).not()
    }

    pub fn implies(self, other: TruthValue3) -> TruthValue3 {
        self.not().or(other)
    }

    pub fn is_decided(self) -> bool {
        self != Unknown
    }
}

impl fmt::Display for TruthValue3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            True => "true",
            False => "false",
            Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula has free variables: {0}")]
pub struct OpenFormula(pub Formula);

/// Most values an unbounded quantifier is tried on.
pub const MAX_SEARCH: u64 = 64;

/// Budgeted evaluation in the standard model. `In(a, b)` consults run `b`
/// of the registry; knowledge atoms are resolved by the oracle.
pub struct StdEval<'a> {
    registry: &'a Registry,
    budget: u64,
    oracle: &'a dyn Fn(&Formula) -> TruthValue3,
    runs: RefCell<HashMap<Index, RunOutcome>>,
    fuel: Cell<u64>,
}

impl<'a> StdEval<'a> {
    pub fn new(registry: &'a Registry, budget: u64, oracle: &'a dyn Fn(&Formula) -> TruthValue3) -> StdEval<'a> {
        StdEval { registry, budget, oracle, runs: RefCell::new(HashMap::new()), fuel: Cell::new(0) }
    }

    pub fn eval(&self, phi: &Formula) -> Result<TruthValue3, OpenFormula> {
        if !phi.is_sentence() {
            return Err(OpenFormula(phi.clone()));
        }
        self.fuel.set(self.budget.saturating_mul(64).max(10_000));
        Ok(self.go(phi))
    }

    fn term(&self, t: &Term) -> Option<BigUint> {
        eval_ground_term(t).ok()
    }

    fn member(&self, a: &BigUint, b: &BigUint) -> TruthValue3 {
        let Some(e) = b.to_u64() else { return Unknown };
        let mut runs = self.runs.borrow_mut();
        let out = match runs.get(&e) {
            Some(o) => o,
            None => match self.registry.run(e, self.budget) {
                Ok(o) => runs.entry(e).or_insert(o),
                Err(_) => return Unknown,
            },
        };
        if out.contains(a) {
            True
        } else if out.exhausted {
            False
        } else {
            Unknown
        }
    }

    fn go(&self, phi: &Formula) -> TruthValue3 {
        let fuel = self.fuel.get();
        if fuel == 0 {
            return Unknown;
        }
        self.fuel.set(fuel - 1);
        match phi {
            Formula::Eq(a, b) => match (self.term(a), self.term(b)) {
                (Some(x), Some(y)) => TruthValue3::from_bool(x == y),
                _ => Unknown,
            },
            Formula::In(a, b) => match (self.term(a), self.term(b)) {
                (Some(x), Some(y)) => self.member(&x, &y),
                _ => Unknown,
            },
            Formula::Not(a) => self.go(a).not(),
            Formula::Imp(a, b) => {
                let va = self.go(a);
                if va == False {
                    return True;
                }
                va.implies(self.go(b))
            }
            Formula::Know(a) => (self.oracle)(a),
            Formula::Forall(x, body) => self.forall(*x, body),
        }
    }

    fn forall(&self, x: Var, body: &Formula) -> TruthValue3 {
        if !body.is_free(x) {
            return self.go(body);
        }
        let at = |n: u64| self.go(&substitute(body, x, &Term::num(n)));
        if let Some((bound, inner)) = bounded(x, body) {
            let Some(n) = self.term(bound).and_then(|n| n.to_u64()) else { return Unknown };
            if n <= self.budget {
                let mut acc = True;
                for k in 0..=n {
                    acc = acc.and(self.go(&substitute(inner, x, &Term::num(k))));
                    if acc == False {
                        break;
                    }
                }
                return acc;
            }
        }
        for n in 0..self.budget.min(MAX_SEARCH) {
            if at(n) == False {
                return False;
            }
        }
        Unknown
    }
}

/// Recognizes `(exists y. y + x = t) -> ψ` with `t` closed, returning `t`
/// and `ψ`.
fn bounded(x: Var, body: &Formula) -> Option<(&Term, &Formula)> {
    let (guard, inner) = body.as_imp()?;
    let Formula::Not(all) = guard else { return None };
    let Formula::Forall(y, neg) = &**all else { return None };
    let Formula::Not(eq) = &**neg else { return None };
    let Formula::Eq(Term::Plus(l, r), t) = &**eq else { return None };
    let ok = **l == Term::Var(*y) && **r == Term::Var(x) && *y != x && t.is_closed();
    ok.then_some((t, inner))
}

/// The formula `forall x. (exists y. y + x = t) -> ψ`, i.e. `∀x ≤ t. ψ`.
pub fn bounded_forall(x: Var, y: Var, t: Term, psi: Formula) -> Formula {
    let guard = Formula::exists(y, Formula::eq(Term::plus(Term::Var(y), Term::Var(x)), t));
    Formula::forall(x, Formula::imp(guard, psi))
}

/// Standard-model evaluation of a sentence with the given knowledge oracle.
pub fn std_eval(
    phi: &Formula,
    budget: u64,
    oracle: &dyn Fn(&Formula) -> TruthValue3,
    registry: &Registry,
) -> Result<TruthValue3, OpenFormula> {
    StdEval::new(registry, budget, oracle).eval(phi)
}

/// Evaluation in the model where `K(ψ)` holds iff `ψ` holds and the theory
/// proves it. Provability is membership in the consequence stream after
/// `budget` stages; the stream is shared across queries.
pub struct SlashEval {
    theory: Enumerator,
    /// Stream length after each stage.
    lens: Vec<usize>,
    registry: Registry,
}

impl SlashEval {
    pub fn new(theory: TheorySpec) -> SlashEval {
        SlashEval { theory: Enumerator::new(theory), lens: vec![0], registry: Registry::new() }
    }

    pub fn theory(&self) -> &TheorySpec {
        self.theory.theory()
    }

    pub fn enumerator(&self) -> &Enumerator {
        &self.theory
    }

    /// Runs the consequence stream through `stages` stages.
    pub fn advance(&mut self, stages: u64) {
        while (self.lens.len() as u64) <= stages {
            self.theory.step();
            self.lens.push(self.theory.len());
        }
    }

    /// Whether `psi` is emitted within `stages` stages.
    pub fn provable_within(&mut self, psi: &Formula, stages: u64) -> bool {
        self.advance(stages);
        let len = self.lens[stages as usize];
        self.theory.position(psi).is_some_and(|p| p < len)
    }

    pub fn eval(&mut self, phi: &Formula, budget: u64) -> Result<TruthValue3, OpenFormula> {
        self.advance(budget);
        let len = self.lens[budget as usize];
        let this = &*self;
        let known = |psi: &Formula| this.theory.position(psi).is_some_and(|p| p < len);
        Ok(this.value(phi, budget, &known)?)
    }

    fn value(&self, phi: &Formula, budget: u64, known: &dyn Fn(&Formula) -> bool) -> Result<TruthValue3, OpenFormula> {
        let oracle = |psi: &Formula| -> TruthValue3 {
            if !psi.is_sentence() {
                return Unknown;
            }
            let v = self.value(psi, budget, known).unwrap_or(Unknown);
            v.and(if known(psi) { True } else { Unknown })
        };
        std_eval(phi, budget, &oracle, &self.registry)
    }
}

/// One-off [`SlashEval::eval`].
pub fn slash_eval(theory: &TheorySpec, phi: &Formula, budget: u64) -> Result<TruthValue3, OpenFormula> {
    SlashEval::new(theory.clone()).eval(phi, budget)
}

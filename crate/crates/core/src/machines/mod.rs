//! Knowing machines: the standard-model and slash evaluators, a zoo of
//! machines given by knowledge streams, and factivity audits.

mod eval;

use std::fmt;

use num_bigint::BigUint;

use crate::calculus::{Enumerator, TheorySpec};
use crate::enumvm::{consequences_transformer, fixed_point, Index, Registry, DEFAULT_VM_BUDGET};
use crate::syntax::{decode, decode_formula, encode_formula, Decoded, Formula};

pub use eval::{bounded_forall, slash_eval, std_eval, OpenFormula, SlashEval, StdEval, TruthValue3, MAX_SEARCH};

/// Stage cap when filling a theory machine's knowledge prefix.
pub const MAX_THEORY_STAGES: u64 = 200_000;

#[derive(Debug, Clone)]
enum Source {
    Nothing,
    All,
    Theory(TheorySpec),
    Program(Registry, Index),
}

/// A machine given by the enumeration of what it knows.
#[derive(Debug, Clone)]
pub struct Machine {
    pub name: String,
    source: Source,
    /// The index the machine claims for its own knowledge set.
    pub claimed_index: Option<Index>,
    pub theory: Option<TheorySpec>,
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn make_know_nothing() -> Machine {
    Machine { name: "know-nothing".into(), source: Source::Nothing, claimed_index: None, theory: None }
}

/// Knows every formula, listed in code order.
pub fn make_know_all() -> Machine {
    Machine { name: "know-all".into(), source: Source::All, claimed_index: None, theory: None }
}

/// Knows exactly the consequences of Peano arithmetic.
pub fn make_pa_machine() -> Machine {
    theory_machine("pa", TheorySpec::pa())
}

/// Knows exactly the consequences of the knowing-machine axioms with
/// arithmetic, which is what the slash model knows.
pub fn make_slash_machine() -> Machine {
    theory_machine("slash", TheorySpec::sigma_slash())
}

fn theory_machine(name: &str, t: TheorySpec) -> Machine {
    Machine { name: name.into(), source: Source::Theory(t.clone()), claimed_index: None, theory: Some(t) }
}

/// The machine whose knowledge is `W_e` for the fixed point `e` of the
/// consequence transformer: the consequences of `Σ′_e`.
pub fn make_self_knowing_machine() -> (Machine, Index) {
    let mut reg = Registry::new();
    let e = fixed_point(&mut reg, &consequences_transformer());
    let m = Machine {
        name: "self-knowing".into(),
        source: Source::Program(reg, e),
        claimed_index: Some(e),
        theory: Some(TheorySpec::sigma_prime(e)),
    };
    (m, e)
}

pub const MACHINE_NAMES: [&str; 5] = ["know-nothing", "know-all", "pa", "slash", "self-knowing"];

pub fn machine_by_name(name: &str) -> Option<Machine> {
    Some(match name {
        "know-nothing" => make_know_nothing(),
        "know-all" => make_know_all(),
        "pa" => make_pa_machine(),
        "slash" => make_slash_machine(),
        "self-knowing" => make_self_knowing_machine().0,
        _ => return None,
    })
}

impl Machine {
    /// The registry that interprets `In`; an empty one unless the machine is
    /// a registry program.
    pub fn registry(&self) -> Registry {
        match &self.source {
            Source::Program(reg, _) => reg.clone(),
            _ => Registry::new(),
        }
    }

    /// The first `n` known formulas (fewer if the stream dries up within its
    /// step cap).
    pub fn knowledge(&self, n: usize) -> Vec<Formula> {
        match &self.source {
            Source::Nothing => vec![],
            Source::All => {
                let mut out = Vec::with_capacity(n);
                let mut c = BigUint::ZERO;
                while out.len() < n {
                    if let Ok(Decoded::Formula(f)) = decode(&c) {
                        out.push(f);
                    }
                    c += 1u32;
                }
                out
            }
            Source::Theory(t) => {
                let mut en = Enumerator::new(t.clone());
                en.run_until_len(n, MAX_THEORY_STAGES);
                en.stream().take(n).cloned().collect()
            }
            Source::Program(reg, e) => {
                let mut r = reg.runner(*e).expect("allocated");
                r.advance_until(reg, n, DEFAULT_VM_BUDGET * 10);
                r.emitted().iter().take(n).filter_map(|c| decode_formula(c).ok()).collect()
            }
        }
    }

    pub fn knowledge_codes(&self, n: usize) -> Vec<BigUint> {
        self.knowledge(n).iter().map(encode_formula).collect()
    }
}

/// A known formula that is false in the standard model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub position: usize,
    pub formula: Formula,
    pub value: TruthValue3,
}

/// Scans the first `budget` known formulas for ones decided false. Knowledge
/// atoms count as true when their formula is in the scanned prefix.
pub fn audit_factivity(m: &Machine, budget: usize) -> Vec<Violation> {
    let known = m.knowledge(budget);
    let set: std::collections::HashSet<&Formula> = known.iter().collect();
    let oracle = |psi: &Formula| if set.contains(psi) { TruthValue3::True } else { TruthValue3::Unknown };
    let reg = m.registry();
    let ev = StdEval::new(&reg, DEFAULT_VM_BUDGET, &oracle);
    known
        .iter()
        .enumerate()
        .filter_map(|(position, f)| {
            // open entries stand for their universal closure
            let value = ev.eval(&f.closure()).unwrap_or(TruthValue3::Unknown);
            (value == TruthValue3::False).then(|| Violation { position, formula: f.clone(), value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn trivial_machines() {
        assert!(make_know_nothing().knowledge(100).is_empty());
        let all = make_know_all().knowledge(20);
        assert_eq!(all.len(), 20);
        let codes: Vec<_> = all.iter().map(encode_formula).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
        let pa = make_pa_machine().knowledge(3000);
        assert!(pa.contains(&parse("0 = 0").unwrap()));
        assert!(!pa.contains(&parse("~(0 = 0)").unwrap()));
    }

    #[test]
    fn audits() {
        let v = audit_factivity(&make_know_all(), 100);
        assert!(!v.is_empty());
        assert!(audit_factivity(&make_know_nothing(), 100).is_empty());
        assert!(audit_factivity(&make_slash_machine(), 300).is_empty());
    }

    #[test]
    fn self_knowing_machine_runs_its_theory() {
        let (m, e) = make_self_knowing_machine();
        assert_eq!(m.claimed_index, Some(e));
        let direct = Enumerator::new(TheorySpec::sigma_prime(e));
        let mut direct = direct;
        direct.run_until_len(40, 10_000);
        let got = m.knowledge(40);
        assert_eq!(got.as_slice(), &direct.stream().take(40).cloned().collect::<Vec<_>>()[..]);
    }
}

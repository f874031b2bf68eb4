//! Fair enumeration of the consequences of a theory.
//!
//! Stage `k` does three things:
//!
//! 1. draws the instance with parameter `k / m` from schema source `k % m`
//!    (logical schemas first, then the theory's schemas),
//! 2. closes the derived set under modus ponens,
//! 3. generalizes one derived formula: with `(_, j) = unpair(k)` and
//!    `(i, x) = unpair(j)`, entry `i` over `x`. Every `j` recurs for
//!    infinitely many `k`, so every pair is tried once the entry exists.
//!
//! Every instance is drawn and every derivation step is eventually taken,
//! so every consequence appears at a finite stage. The output depends on
//! the stage count only.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;

use crate::syntax::{eval_ground_term, Formula, Term, Var};

use super::axioms::{
    eq_refl, eq_subst, factivity, gnum, induction, kmp, matches_schema, pa_axioms, prop_ax1, prop_ax2, prop_ax3,
    q_distr, q_inst,
};
use super::catalog::{closed_term_of, formula_of, term_of, unpair3, unpair4, unpair_u64};
use super::proof::{Proof, ProofBuilder};
use super::theory::{SchemaId, TheorySpec};

/// Computations whose value exceeds this many bits are not drawn.
const COMP_BITS: u64 = 1 << 12;

#[derive(Debug, Clone)]
enum Origin {
    /// Schema and index of the witness proof, if any.
    Axiom(SchemaId, Option<usize>),
    Mp(usize, usize),
    Gen(usize, Var),
}

#[derive(Debug, Clone)]
struct Entry {
    formula: Formula,
    /// Free variables of the theory axioms this entry rests on.
    forbidden: BTreeSet<Var>,
    origin: Origin,
}

/// A resumable consequence enumerator.
#[derive(Debug, Clone)]
pub struct Enumerator {
    theory: TheorySpec,
    sources: Vec<SchemaId>,
    stage: u64,
    entries: Vec<Entry>,
    emitted: Vec<usize>,
    by_formula: HashMap<Formula, Vec<usize>>,
    by_antecedent: HashMap<Formula, Vec<usize>>,
    witnesses: Vec<Proof>,
    logic: Option<Box<Enumerator>>,
}

impl Enumerator {
    pub fn new(theory: TheorySpec) -> Enumerator {
        let sources = SchemaId::LOGICAL.iter().copied().chain(theory.schemas()).collect();
        Enumerator {
            theory,
            sources,
            stage: 0,
            entries: vec![],
            emitted: vec![],
            by_formula: HashMap::new(),
            by_antecedent: HashMap::new(),
            witnesses: vec![],
            logic: None,
        }
    }

    pub fn theory(&self) -> &TheorySpec {
        &self.theory
    }

    /// Stages run so far.
    pub fn stage(&self) -> u64 {
        self.stage
    }

    /// Number of distinct formulas emitted so far.
    pub fn len(&self) -> usize {
        self.emitted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emitted.is_empty()
    }

    pub fn get(&self, pos: usize) -> Option<&Formula> {
        self.emitted.get(pos).map(|&i| &self.entries[i].formula)
    }

    pub fn stream(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.emitted.iter().map(|&i| &self.entries[i].formula)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.by_formula.contains_key(f)
    }

    /// Stream position of `f`, if emitted.
    pub fn position(&self, f: &Formula) -> Option<usize> {
        let first = *self.by_formula.get(f)?.first()?;
        self.emitted.iter().position(|&i| i == first)
    }

    pub fn run_to(&mut self, stages: u64) {
        while self.stage < stages {
            self.step();
        }
    }

    /// Runs stages until at least `n` formulas are emitted or `max_stages`
    /// is reached.
    pub fn run_until_len(&mut self, n: usize, max_stages: u64) {
        while self.len() < n && self.stage < max_stages {
            self.step();
        }
    }

    /// Runs one stage and returns the number of newly emitted formulas.
    pub fn step(&mut self) -> usize {
        let before = self.emitted.len();
        let k = self.stage;
        let m = self.sources.len() as u64;
        let schema = self.sources[(k % m) as usize];
        if let Some((f, witness)) = self.instance(schema, k / m) {
            let fb = if schema.is_logical() { BTreeSet::new() } else { f.free_vars() };
            self.add(f, fb, Origin::Axiom(schema, witness));
        }
        let (_, j) = unpair_u64(k);
        let (i, x) = unpair_u64(j);
        if let (Some(e), Ok(x)) = (self.entries.get(i as usize), Var::try_from(x)) {
            if !e.forbidden.contains(&x) {
                let f = Formula::forall(x, e.formula.clone());
                let fb = e.forbidden.clone();
                self.add(f, fb, Origin::Gen(i as usize, x));
            }
        }
        self.stage += 1;
        self.emitted.len() - before
    }

    fn add(&mut self, formula: Formula, forbidden: BTreeSet<Var>, origin: Origin) {
        let mut work = Vec::new();
        if let Some(id) = self.insert(formula, forbidden, origin) {
            work.push(id);
        }
        let mut cursor = 0;
        while cursor < work.len() {
            let n = work[cursor];
            cursor += 1;
            let f = self.entries[n].formula.clone();
            let mut derived = Vec::new();
            if let Some((a, b)) = f.as_imp() {
                for &i in self.by_formula.get(a).into_iter().flatten() {
                    derived.push((b.clone(), i, n));
                }
                self.by_antecedent.entry(a.clone()).or_default().push(n);
            }
            for &j in self.by_antecedent.get(&f).into_iter().flatten() {
                let (_, b) = self.entries[j].formula.as_imp().unwrap();
                derived.push((b.clone(), n, j));
            }
            for (b, i, j) in derived {
                let fb = self.entries[i].forbidden.union(&self.entries[j].forbidden).copied().collect();
                if let Some(id) = self.insert(b, fb, Origin::Mp(i, j)) {
                    work.push(id);
                }
            }
        }
    }

    /// Adds an entry unless an existing entry for the same formula has no
    /// more restrictions.
    fn insert(&mut self, formula: Formula, forbidden: BTreeSet<Var>, origin: Origin) -> Option<usize> {
        let existing = self.by_formula.get(&formula);
        if existing.is_some_and(|ids| ids.iter().any(|&i| self.entries[i].forbidden.is_subset(&forbidden))) {
            return None;
        }
        let id = self.entries.len();
        let fresh = existing.is_none();
        self.by_formula.entry(formula.clone()).or_default().push(id);
        self.entries.push(Entry { formula, forbidden, origin });
        if fresh {
            self.emitted.push(id);
        }
        Some(id)
    }

    fn instance(&mut self, schema: SchemaId, p: u64) -> Option<(Formula, Option<usize>)> {
        let f = formula_of;
        let candidate = match schema {
            SchemaId::PropAx1 => {
                let (a, b) = unpair_u64(p);
                prop_ax1(f(a), f(b))
            }
            SchemaId::PropAx2 => {
                let (a, b, c) = unpair3(p);
                prop_ax2(f(a), f(b), f(c))
            }
            SchemaId::PropAx3 => {
                let (a, b) = unpair_u64(p);
                prop_ax3(f(a), f(b))
            }
            SchemaId::QInst => {
                let (x, a, t) = unpair3(p);
                q_inst(Var::try_from(x).ok()?, &f(a), &term_of(t))
            }
            SchemaId::QDistr => {
                let (x, a, b) = unpair3(p);
                q_distr(Var::try_from(x).ok()?, f(a), f(b))?
            }
            SchemaId::EqRefl => eq_refl(Var::try_from(p).ok()?),
            SchemaId::EqSubst => {
                let (s, t, a, x) = unpair4(p);
                eq_subst(&term_of(s), &term_of(t), &f(a), Var::try_from(x).ok()?)
            }
            SchemaId::KT => {
                let (psi, w) = self.logic_theorem(p)?;
                return Some((Formula::know(psi), Some(w)));
            }
            SchemaId::KArith => Formula::know(arithmetic_instance(p)?),
            SchemaId::Closure => {
                let (which, q) = (p % 3, p / 3);
                return match which {
                    0 => {
                        let (psi, w) = self.logic_theorem(q)?;
                        Some((Formula::know(Formula::know(psi)), Some(w)))
                    }
                    1 => Some((Formula::know(kmp_instance(q)), None)),
                    _ => Some((Formula::know(Formula::know(arithmetic_instance(q)?)), None)),
                };
            }
            s => theory_instance(s, p)?,
        };
        matches_schema(schema, &candidate, None).then_some((candidate, None))
    }

    /// The `p`-th pure-logic theorem and the index of its stored proof.
    fn logic_theorem(&mut self, p: u64) -> Option<(Formula, usize)> {
        let logic = self.logic.get_or_insert_with(|| Box::new(Enumerator::new(TheorySpec::logic())));
        let p = usize::try_from(p).ok()?;
        logic.run_until_len(p + 1, 8 * p as u64 + 64);
        let psi = logic.get(p)?.clone();
        let proof = logic.proof_of(p);
        self.witnesses.push(proof);
        Some((psi, self.witnesses.len() - 1))
    }

    /// A checkable proof of the formula at stream position `pos`.
    pub fn proof_of(&self, pos: usize) -> Proof {
        let root = self.emitted[pos];
        let mut b = ProofBuilder::new();
        let mut done: HashMap<usize, usize> = HashMap::new();
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if done.contains_key(&id) {
                continue;
            }
            let e = &self.entries[id];
            let premises = match e.origin {
                Origin::Axiom(..) => vec![],
                Origin::Mp(i, j) => vec![i, j],
                Origin::Gen(i, _) => vec![i],
            };
            if !expanded {
                stack.push((id, true));
                stack.extend(premises.into_iter().filter(|p| !done.contains_key(p)).map(|p| (p, false)));
                continue;
            }
            let step = match e.origin {
                Origin::Axiom(schema, None) => b.axiom(e.formula.clone(), schema),
                Origin::Axiom(schema, Some(w)) => {
                    let name = format!("w{w}");
                    b.add_lemma(&name, &self.witnesses[w]);
                    b.axiom_with(e.formula.clone(), schema, Some(&name))
                }
                Origin::Mp(i, j) => b.mp(done[&i], done[&j]),
                Origin::Gen(i, x) => b.gen(done[&i], x),
            };
            done.insert(id, step.expect("enumerated derivations replay"));
        }
        b.finish(done[&root])
    }
}

fn kmp_instance(p: u64) -> Formula {
    let (a, b) = unpair_u64(p);
    kmp(formula_of(a), formula_of(b))
}

/// Cycles through basic axioms, induction and computations.
fn arithmetic_instance(p: u64) -> Option<Formula> {
    let schema = [SchemaId::PAAxiom, SchemaId::Induction, SchemaId::Comp][(p % 3) as usize];
    theory_instance(schema, p / 3)
}

fn theory_instance(schema: SchemaId, p: u64) -> Option<Formula> {
    let f = formula_of;
    Some(match schema {
        SchemaId::PAAxiom => pa_axioms().get(usize::try_from(p).ok()?)?.clone(),
        SchemaId::Induction => {
            let (a, x) = unpair_u64(p);
            induction(&f(a), Var::try_from(x).ok()?)
        }
        SchemaId::Comp => {
            let t = closed_term_of(p);
            let v: BigUint = eval_ground_term(&t).ok()?;
            if v.bits() > COMP_BITS {
                return None;
            }
            Formula::eq(t, Term::Num(v))
        }
        SchemaId::KMP => kmp_instance(p),
        SchemaId::Factivity => factivity(f(p)),
        SchemaId::KFactivity => Formula::know(factivity(f(p))),
        SchemaId::GNum(e) => gnum(f(p), e),
        SchemaId::KGNum(e) => Formula::know(gnum(f(p), e)),
        _ => return None,
    })
}

/// The formulas emitted within `budget` stages.
pub fn enumerate_consequences(theory: &TheorySpec, budget: u64) -> Vec<Formula> {
    let mut en = Enumerator::new(theory.clone());
    en.run_to(budget);
    en.stream().cloned().collect()
}

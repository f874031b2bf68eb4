//! Hilbert-style proofs and the checker.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, Var};

use super::axioms::{matches_schema, recognize};
use super::theory::{SchemaId, TheorySpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    /// An instance of `schema`. `witness` names a lemma whose conclusion is
    /// the known formula for `KT` (and `Closure` over `KT`).
    Axiom { schema: SchemaId, witness: Option<String> },
    /// `Mp(i, j)`: step `i` is `A`, step `j` is `A -> B`.
    Mp(usize, usize),
    Gen(usize, Var),
}

impl Justification {
    pub fn axiom(schema: SchemaId) -> Justification {
        Justification::Axiom { schema, witness: None }
    }

    pub fn kt(lemma: &str) -> Justification {
        Justification::Axiom { schema: SchemaId::KT, witness: Some(lemma.to_string()) }
    }

    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Axiom { .. } => vec![],
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::Gen(i, _) => vec![*i],
        }
    }

    fn remap(&self, map: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::Axiom { .. } => self.clone(),
            Justification::Mp(i, j) => Justification::Mp(map(*i), map(*j)),
            Justification::Gen(i, x) => Justification::Gen(map(*i), *x),
        }
    }
}

/// Proof-file notation, with 1-based step numbers.
impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { schema, witness } => match (schema, witness) {
                (SchemaId::PropAx1, None) => f.write_str("prop-ax:1"),
                (SchemaId::PropAx2, None) => f.write_str("prop-ax:2"),
                (SchemaId::PropAx3, None) => f.write_str("prop-ax:3"),
                (SchemaId::QInst, None) => f.write_str("q-inst"),
                (SchemaId::QDistr, None) => f.write_str("q-distr"),
                (SchemaId::EqRefl, None) => f.write_str("eq-refl"),
                (SchemaId::EqSubst, None) => f.write_str("eq-subst"),
                (SchemaId::Comp, None) => f.write_str("comp"),
                (SchemaId::KT, Some(w)) => write!(f, "kt:{w}"),
                (SchemaId::GNum(e) | SchemaId::KGNum(e), None) => write!(f, "ax:{}:{e}", schema.name()),
                (_, None) => write!(f, "ax:{}", schema.name()),
                (_, Some(w)) => write!(f, "ax:{}:{w}", schema.name()),
            },
            Justification::Mp(i, j) => write!(f, "mp:{},{}", i + 1, j + 1),
            Justification::Gen(i, x) => write!(f, "gen:{},x{x}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub formula: Formula,
    pub just: Justification,
}

/// A named pure-logic proof, usable as a `KT` witness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lemma {
    pub name: String,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Proof {
    pub lemmas: Vec<Lemma>,
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn lemma(&self, name: &str) -> Option<&Lemma> {
        self.lemmas.iter().find(|l| l.name == name)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// `step` is 0-based.
    Reject { step: usize, reason: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("ACCEPT"),
            Verdict::Reject { step, reason } => write!(f, "REJECT at step {}: {reason}", step + 1),
        }
    }
}

/// Checks `proof` against `theory`. Lemmas are checked as pure-logic proofs
/// when first cited.
pub fn check_proof(proof: &Proof, theory: &TheorySpec) -> Verdict {
    let mut lemmas = LemmaCache { proof, done: HashMap::new() };
    match check_steps(&proof.steps, Some(theory), &mut lemmas) {
        Ok(()) => Verdict::Accept,
        Err((step, reason)) => Verdict::Reject { step, reason },
    }
}

/// Checks a hypothesis-free proof using logical axioms only.
pub fn check_pure(proof: &Proof) -> Verdict {
    check_proof(proof, &TheorySpec::logic())
}

struct LemmaCache<'a> {
    proof: &'a Proof,
    done: HashMap<String, Result<Formula, String>>,
}

impl LemmaCache<'_> {
    fn conclusion(&mut self, name: &str) -> Result<Formula, String> {
        if let Some(r) = self.done.get(name) {
            return r.clone();
        }
        let result = match self.proof.lemma(name) {
            None => Err(format!("unknown lemma `{name}`")),
            Some(l) => {
                let mut inner = LemmaCache { proof: self.proof, done: HashMap::new() };
                match check_steps(&l.steps, None, &mut inner) {
                    Ok(()) => Ok(l.steps.last().unwrap().formula.clone()),
                    Err((k, why)) => Err(format!("lemma `{name}` rejected at step {}: {why}", k + 1)),
                }
            }
        };
        self.done.insert(name.to_string(), result.clone());
        result
    }
}

/// `theory == None` means pure logic: no theory axioms at all.
fn check_steps(
    steps: &[Step],
    theory: Option<&TheorySpec>,
    lemmas: &mut LemmaCache<'_>,
) -> Result<(), (usize, String)> {
    if steps.is_empty() {
        return Err((0, "empty proof".into()));
    }
    let mut forbidden: Vec<BTreeSet<Var>> = Vec::with_capacity(steps.len());
    for (k, step) in steps.iter().enumerate() {
        let f = &step.formula;
        let earlier = |i: usize| -> Result<(), (usize, String)> {
            if i < k {
                Ok(())
            } else {
                Err((k, format!("step {} is not earlier", i + 1)))
            }
        };
        let fb = match &step.just {
            Justification::Axiom { schema, witness } => {
                if schema.is_logical() {
                    if !matches_schema(*schema, f, None) {
                        return Err((k, format!("not an instance of {schema}")));
                    }
                    BTreeSet::new()
                } else {
                    let Some(theory) = theory else {
                        return Err((k, format!("{schema} is not available in a pure-logic lemma")));
                    };
                    if !theory.contains(*schema) {
                        return Err((k, format!("{schema} is not an axiom schema of the theory")));
                    }
                    let proven = match witness {
                        Some(w) => Some(lemmas.conclusion(w).map_err(|e| (k, e))?),
                        None => None,
                    };
                    if !matches_schema(*schema, f, proven.as_ref()) {
                        let why = match (schema, &proven) {
                            (SchemaId::KT, None) => "KT needs a witness lemma".to_string(),
                            (SchemaId::KT, Some(_)) => "KT witness proves a different formula".to_string(),
                            _ => format!("not an instance of {schema}"),
                        };
                        return Err((k, why));
                    }
                    f.free_vars()
                }
            }
            Justification::Mp(i, j) => {
                earlier(*i)?;
                earlier(*j)?;
                match steps[*j].formula.as_imp() {
                    Some((a, b)) if *a == steps[*i].formula && b == f => {}
                    Some(_) => return Err((k, format!("modus ponens mismatch with steps {} and {}", i + 1, j + 1))),
                    None => return Err((k, format!("step {} is not an implication", j + 1))),
                }
                forbidden[*i].union(&forbidden[*j]).copied().collect()
            }
            Justification::Gen(i, x) => {
                earlier(*i)?;
                if *f != Formula::forall(*x, steps[*i].formula.clone()) {
                    return Err((k, format!("not the generalization of step {} over x{x}", i + 1)));
                }
                if forbidden[*i].contains(x) {
                    return Err((k, format!("x{x} is free in a theory axiom that step {} depends on", i + 1)));
                }
                forbidden[*i].clone()
            }
        };
        forbidden.push(fb);
    }
    Ok(())
}

/// Whether `f` is an axiom of `theory`. `witness`, when given, must be a
/// hypothesis-free pure-logic proof; its conclusion is what `KT` may know.
pub fn is_axiom_instance(theory: &TheorySpec, f: &Formula, witness: Option<&Proof>) -> Option<SchemaId> {
    let proven = match witness {
        Some(w) if check_pure(w).is_accept() => w.conclusion().cloned(),
        _ => None,
    };
    recognize(theory, f, proven.as_ref())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct BuildError(pub String);

/// Incremental proof construction. Repeated formulas are shared and
/// [`ProofBuilder::finish`] drops every step the conclusion does not use,
/// so finished proofs have no redundant steps.
#[derive(Debug, Clone, Default)]
pub struct ProofBuilder {
    lemmas: Vec<Lemma>,
    steps: Vec<Step>,
    forbidden: Vec<BTreeSet<Var>>,
    index: HashMap<Formula, Vec<usize>>,
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder::default()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.steps[i].formula
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Registers a pure-logic proof as a lemma and returns its conclusion.
    pub fn add_lemma(&mut self, name: &str, proof: &Proof) -> Formula {
        assert!(proof.lemmas.is_empty(), "lemmas cannot cite lemmas");
        self.lemmas.retain(|l| l.name != name);
        self.lemmas.push(Lemma { name: name.to_string(), steps: proof.steps.clone() });
        proof.conclusion().expect("empty lemma").clone()
    }

    fn push(&mut self, formula: Formula, just: Justification, forbidden: BTreeSet<Var>) -> usize {
        if let Some(hits) = self.index.get(&formula) {
            if let Some(&i) = hits.iter().find(|&&i| self.forbidden[i].is_subset(&forbidden)) {
                return i;
            }
        }
        let k = self.steps.len();
        self.index.entry(formula.clone()).or_default().push(k);
        self.steps.push(Step { formula, just });
        self.forbidden.push(forbidden);
        k
    }

    /// Adds a logical axiom instance.
    pub fn logical(&mut self, formula: Formula) -> Result<usize, BuildError> {
        let schema = super::axioms::is_logical_axiom(&formula)
            .ok_or_else(|| BuildError(format!("not a logical axiom: {formula}")))?;
        Ok(self.push(formula, Justification::axiom(schema), BTreeSet::new()))
    }

    pub fn axiom(&mut self, formula: Formula, schema: SchemaId) -> Result<usize, BuildError> {
        self.axiom_with(formula, schema, None)
    }

    pub fn axiom_with(
        &mut self,
        formula: Formula,
        schema: SchemaId,
        witness: Option<&str>,
    ) -> Result<usize, BuildError> {
        let proven = witness.map(|w| {
            self.lemmas
                .iter()
                .find(|l| l.name == w)
                .map(|l| l.steps.last().unwrap().formula.clone())
                .ok_or_else(|| BuildError(format!("unknown lemma `{w}`")))
        });
        let proven = proven.transpose()?;
        if !matches_schema(schema, &formula, proven.as_ref()) {
            return Err(BuildError(format!("not an instance of {schema}: {formula}")));
        }
        let fb = if schema.is_logical() { BTreeSet::new() } else { formula.free_vars() };
        let just = Justification::Axiom { schema, witness: witness.map(str::to_string) };
        Ok(self.push(formula, just, fb))
    }

    /// `K(ψ)` where `ψ` is the conclusion of lemma `name`.
    pub fn kt(&mut self, name: &str) -> Result<usize, BuildError> {
        let l = self
            .lemmas
            .iter()
            .find(|l| l.name == name)
            .ok_or_else(|| BuildError(format!("unknown lemma `{name}`")))?;
        let f = Formula::know(l.steps.last().unwrap().formula.clone());
        self.axiom_with(f, SchemaId::KT, Some(name))
    }

    /// From step `a` (`A`) and step `ab` (`A -> B`), derives `B`.
    pub fn mp(&mut self, a: usize, ab: usize) -> Result<usize, BuildError> {
        let b = match self.steps[ab].formula.as_imp() {
            Some((x, b)) if *x == self.steps[a].formula => b.clone(),
            _ => {
                return Err(BuildError(format!(
                    "cannot apply {} to {}",
                    self.steps[ab].formula, self.steps[a].formula
                )))
            }
        };
        let fb = self.forbidden[a].union(&self.forbidden[ab]).copied().collect();
        Ok(self.push(b, Justification::Mp(a, ab), fb))
    }

    pub fn gen(&mut self, i: usize, x: Var) -> Result<usize, BuildError> {
        if self.forbidden[i].contains(&x) {
            return Err(BuildError(format!("x{x} is free in a theory axiom used by {}", self.steps[i].formula)));
        }
        let f = Formula::forall(x, self.steps[i].formula.clone());
        let fb = self.forbidden[i].clone();
        Ok(self.push(f, Justification::Gen(i, x), fb))
    }

    /// Splices in a hypothesis-free proof (its lemmas included) and returns
    /// the index of its conclusion.
    pub fn insert(&mut self, proof: &Proof) -> Result<usize, BuildError> {
        for l in &proof.lemmas {
            let existing = self.lemmas.iter().find(|m| m.name == l.name);
            match existing {
                Some(m) if m.steps.last() != l.steps.last() => {
                    return Err(BuildError(format!("lemma name clash: `{}`", l.name)))
                }
                Some(_) => {}
                None => self.lemmas.push(l.clone()),
            }
        }
        let mut map = Vec::with_capacity(proof.steps.len());
        for step in &proof.steps {
            let k = match &step.just {
                Justification::Axiom { schema, witness } => {
                    self.axiom_with(step.formula.clone(), *schema, witness.as_deref())?
                }
                Justification::Mp(i, j) => self.mp(map[*i], map[*j])?,
                Justification::Gen(i, x) => self.gen(map[*i], *x)?,
            };
            map.push(k);
        }
        map.last().copied().ok_or_else(|| BuildError("empty proof".into()))
    }

    /// The proof of step `conclusion`, keeping only the steps it uses.
    pub fn finish(&self, conclusion: usize) -> Proof {
        let mut used = vec![false; conclusion + 1];
        used[conclusion] = true;
        for k in (0..=conclusion).rev() {
            if used[k] {
                for p in self.steps[k].just.premises() {
                    used[p] = true;
                }
            }
        }
        let mut renumber = vec![usize::MAX; conclusion + 1];
        let mut steps = Vec::new();
        let mut cited = BTreeSet::new();
        for k in 0..=conclusion {
            if !used[k] {
                continue;
            }
            renumber[k] = steps.len();
            let s = &self.steps[k];
            if let Justification::Axiom { witness: Some(w), .. } = &s.just {
                cited.insert(w.clone());
            }
            steps.push(Step { formula: s.formula.clone(), just: s.just.remap(|i| renumber[i]) });
        }
        let lemmas = self.lemmas.iter().filter(|l| cited.contains(&l.name)).cloned().collect();
        Proof { lemmas, steps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::axioms::{eq_refl, factivity, prop_ax1, prop_ax2, q_inst};
    use crate::syntax::{parse, Term};

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn identity(a: &Formula) -> Proof {
        let mut b = ProofBuilder::new();
        let aa = Formula::imp(a.clone(), a.clone());
        let s1 = b.logical(prop_ax2(a.clone(), aa.clone(), a.clone())).unwrap();
        let s2 = b.logical(prop_ax1(a.clone(), aa.clone())).unwrap();
        let s3 = b.mp(s2, s1).unwrap();
        let s4 = b.logical(prop_ax1(a.clone(), a.clone())).unwrap();
        let s5 = b.mp(s4, s3).unwrap();
        b.finish(s5)
    }

    #[test]
    fn identity_is_five_steps() {
        let pr = identity(&p("0 = 0"));
        assert_eq!(pr.len(), 5);
        assert_eq!(pr.conclusion(), Some(&p("0 = 0 -> 0 = 0")));
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }

    #[test]
    fn zero_equals_zero_needs_a_proof() {
        let single = Proof { lemmas: vec![], steps: vec![Step { formula: p("0 = 0"), just: Justification::axiom(SchemaId::EqRefl) }] };
        assert!(!check_pure(&single).is_accept());
        let mut b = ProofBuilder::new();
        let r = b.logical(eq_refl(0)).unwrap();
        let i = b.logical(q_inst(0, &p("x0 = x0"), &Term::Zero)).unwrap();
        let c = b.mp(r, i).unwrap();
        let pr = b.finish(c);
        assert_eq!(pr.len(), 3);
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }

    #[test]
    fn kt_with_witness() {
        let mut b = ProofBuilder::new();
        b.add_lemma("id", &identity(&p("0 = 0")));
        let k = b.kt("id").unwrap();
        let pr = b.finish(k);
        assert_eq!(pr.conclusion(), Some(&p("K(0 = 0 -> 0 = 0)")));
        assert_eq!(check_proof(&pr, &TheorySpec::sigma_machine()), Verdict::Accept);
        assert!(!check_proof(&pr, &TheorySpec::pa()).is_accept());
        assert!(!check_pure(&pr).is_accept());
    }

    #[test]
    fn broken_lemma_rejects_the_citing_step() {
        let mut pr = identity(&p("0 = 0"));
        pr.steps[1].formula = p("0 = 0");
        let main = Proof {
            lemmas: vec![Lemma { name: "bad".into(), steps: pr.steps }],
            steps: vec![Step { formula: p("K(0 = 0 -> 0 = 0)"), just: Justification::kt("bad") }],
        };
        match check_proof(&main, &TheorySpec::sigma_machine()) {
            Verdict::Reject { step: 0, reason } => assert!(reason.contains("lemma `bad`"), "{reason}"),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn generalization_restriction() {
        let t = TheorySpec::sigma_machine();
        let fact = factivity(p("x3 = 0"));
        let bad = Proof {
            lemmas: vec![],
            steps: vec![
                Step { formula: fact.clone(), just: Justification::axiom(SchemaId::Factivity) },
                Step { formula: Formula::forall(3, fact.clone()), just: Justification::Gen(0, 3) },
            ],
        };
        assert_eq!(check_proof(&bad, &t), Verdict::Reject { step: 1, reason: "x3 is free in a theory axiom that step 1 depends on".into() });
        let mut ok = bad.clone();
        ok.steps[1] = Step { formula: Formula::forall(4, fact), just: Justification::Gen(0, 4) };
        assert_eq!(check_proof(&ok, &t), Verdict::Accept);
        // logical axioms may be generalized freely
        let mut b = ProofBuilder::new();
        let s = b.logical(prop_ax1(p("x3 = 0"), p("0 = 0"))).unwrap();
        assert!(b.gen(s, 3).is_ok());
    }

    #[test]
    fn earliest_bad_step_reported() {
        let mut pr = identity(&p("x0 = 0"));
        pr.steps[4].just = Justification::Mp(4, 2);
        pr.steps[2].just = Justification::Mp(0, 1);
        assert!(matches!(check_pure(&pr), Verdict::Reject { step: 2, .. }));
    }

    #[test]
    fn builder_shares_and_prunes() {
        let mut b = ProofBuilder::new();
        let junk = b.logical(prop_ax1(p("0 = 0"), p("0 = 0"))).unwrap();
        let r = b.logical(eq_refl(0)).unwrap();
        assert_eq!(b.logical(eq_refl(0)).unwrap(), r);
        let pr = b.finish(r);
        assert_eq!(pr.len(), 1);
        assert_ne!(junk, r);
    }
}

//! Natural-deduction scripts with assumptions, compiled to Hilbert proofs
//! by the deduction theorem.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::syntax::{Formula, Var};

use super::axioms::{prop_ax1, prop_ax2, q_distr};
use super::proof::{BuildError, Proof, ProofBuilder};
use super::theory::SchemaId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("line {0} is out of scope")]
    OutOfScope(usize),
    #[error("no open assumption to discharge")]
    NothingToDischarge,
    #[error("cannot generalize over x{0}: it is free in an assumption")]
    GenOverHypothesis(Var),
    #[error("modus ponens mismatch at line {0}")]
    Mismatch(usize),
}

/// One script instruction. Every instruction yields exactly one line, and
/// lines are numbered from 0 in instruction order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    /// Opens a scope with a hypothesis.
    Assume(Formula),
    Axiom { formula: Formula, schema: SchemaId, witness: Option<String> },
    /// `Mp(a, ab)`: line `a` is `A`, line `ab` is `A -> B`.
    Mp(usize, usize),
    Gen(usize, Var),
    /// Closes the innermost scope: `H -> B` where `B` is the previous line.
    Discharge,
    /// A hypothesis-free proof.
    Insert(Proof),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    /// Pure-logic proofs citable as knowledge witnesses.
    pub lemmas: Vec<(String, Proof)>,
    pub steps: Vec<ScriptStep>,
}

/// Compiles a script into a hypothesis-free proof of its last line, closing
/// any scopes left open.
pub fn hilbertize(script: &Script) -> Result<Proof, ScriptError> {
    let mut d = Deriver::new();
    for (name, proof) in &script.lemmas {
        d.builder_mut().add_lemma(name, proof);
    }
    for step in &script.steps {
        match step {
            ScriptStep::Assume(f) => {
                d.assume(f.clone());
            }
            ScriptStep::Axiom { formula, schema, witness } => {
                d.axiom_with(formula.clone(), *schema, witness.as_deref())?;
            }
            ScriptStep::Mp(a, ab) => {
                d.mp(Line(*a), Line(*ab))?;
            }
            ScriptStep::Gen(i, x) => {
                d.gen(Line(*i), *x)?;
            }
            ScriptStep::Discharge => {
                d.discharge()?;
            }
            ScriptStep::Insert(p) => {
                d.insert(p)?;
            }
        }
    }
    d.finish()
}

/// A line of a derivation, in creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line(pub usize);

#[derive(Debug, Clone)]
enum Kind {
    Hyp,
    /// Hypothesis-free: a step of the underlying proof builder.
    Given(usize),
    /// A line of the enclosing frame.
    Import(usize),
    Mp(usize, usize),
    Gen(usize, Var),
}

#[derive(Debug, Clone)]
struct Entry {
    formula: Formula,
    kind: Kind,
    /// Depths of the hypotheses this entry rests on.
    deps: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
struct Frame {
    serial: usize,
    hyp: Option<Formula>,
    entries: Vec<Entry>,
    imports: HashMap<usize, usize>,
}

/// An eager derivation with nested assumptions. Hypothesis-free lines go
/// straight into a [`ProofBuilder`]; the rest are rewritten when their
/// scope is discharged.
#[derive(Debug, Clone)]
pub struct Deriver {
    builder: ProofBuilder,
    frames: Vec<Frame>,
    next_serial: usize,
    /// Line -> (frame serial, entry index).
    lines: Vec<(usize, usize)>,
}

impl Default for Deriver {
    fn default() -> Self {
        Deriver::new()
    }
}

impl Deriver {
    pub fn new() -> Deriver {
        Deriver::with_builder(ProofBuilder::new())
    }

    pub fn with_builder(builder: ProofBuilder) -> Deriver {
        Deriver {
            builder,
            frames: vec![Frame { serial: 0, hyp: None, entries: vec![], imports: HashMap::new() }],
            next_serial: 1,
            lines: vec![],
        }
    }

    pub fn builder_mut(&mut self) -> &mut ProofBuilder {
        &mut self.builder
    }

    pub fn depth(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn formula(&self, line: Line) -> Result<&Formula, ScriptError> {
        let (depth, idx) = self.locate(line)?;
        Ok(&self.frames[depth].entries[idx].formula)
    }

    fn locate(&self, line: Line) -> Result<(usize, usize), ScriptError> {
        let &(serial, idx) = self.lines.get(line.0).ok_or(ScriptError::OutOfScope(line.0))?;
        self.frames
            .iter()
            .position(|f| f.serial == serial)
            .map(|d| (d, idx))
            .ok_or(ScriptError::OutOfScope(line.0))
    }

    fn record(&mut self, depth: usize, idx: usize) -> Line {
        self.lines.push((self.frames[depth].serial, idx));
        Line(self.lines.len() - 1)
    }

    /// Entry index of `line` as seen from the innermost frame.
    fn resolve(&mut self, line: Line) -> Result<usize, ScriptError> {
        let (depth, idx) = self.locate(line)?;
        let top = self.depth();
        let mut idx = idx;
        for d in depth + 1..=top {
            idx = self.import(d, idx)?;
        }
        Ok(idx)
    }

    fn import(&mut self, depth: usize, parent_idx: usize) -> Result<usize, ScriptError> {
        if let Some(&i) = self.frames[depth].imports.get(&parent_idx) {
            return Ok(i);
        }
        let parent = self.frames[depth - 1].entries[parent_idx].clone();
        let i = self.push(depth, parent.formula, Kind::Import(parent_idx), parent.deps)?;
        self.frames[depth].imports.insert(parent_idx, i);
        Ok(i)
    }

    fn given(&self, depth: usize, idx: usize) -> usize {
        match self.frames[depth].entries[idx].kind {
            Kind::Given(g) => g,
            _ => unreachable!("hypothesis-free entries are always given"),
        }
    }

    fn push(&mut self, depth: usize, formula: Formula, kind: Kind, deps: BTreeSet<usize>) -> Result<usize, ScriptError> {
        let kind = if deps.is_empty() {
            match kind {
                Kind::Mp(a, ab) => {
                    let (ga, gab) = (self.given(depth, a), self.given(depth, ab));
                    Kind::Given(self.builder.mp(ga, gab)?)
                }
                Kind::Gen(i, x) => Kind::Given(self.builder.gen(self.given(depth, i), x)?),
                Kind::Import(i) => Kind::Given(self.given(depth - 1, i)),
                k => k,
            }
        } else {
            kind
        };
        let frame = &mut self.frames[depth];
        frame.entries.push(Entry { formula, kind, deps });
        Ok(frame.entries.len() - 1)
    }

    fn push_given(&mut self, depth: usize, g: usize) -> Result<usize, ScriptError> {
        let f = self.builder.formula(g).clone();
        self.push(depth, f, Kind::Given(g), BTreeSet::new())
    }

    pub fn assume(&mut self, hyp: Formula) -> Line {
        let serial = self.next_serial;
        self.next_serial += 1;
        self.frames.push(Frame { serial, hyp: Some(hyp.clone()), entries: vec![], imports: HashMap::new() });
        let depth = self.depth();
        let idx = self.push(depth, hyp, Kind::Hyp, BTreeSet::from([depth])).expect("hypothesis");
        self.record(depth, idx)
    }

    pub fn axiom(&mut self, formula: Formula, schema: SchemaId) -> Result<Line, ScriptError> {
        self.axiom_with(formula, schema, None)
    }

    pub fn axiom_with(&mut self, formula: Formula, schema: SchemaId, witness: Option<&str>) -> Result<Line, ScriptError> {
        let g = self.builder.axiom_with(formula, schema, witness)?;
        self.given_line(g)
    }

    /// A logical axiom instance, schema inferred.
    pub fn logical(&mut self, formula: Formula) -> Result<Line, ScriptError> {
        let g = self.builder.logical(formula)?;
        self.given_line(g)
    }

    pub fn insert(&mut self, proof: &Proof) -> Result<Line, ScriptError> {
        let g = self.builder.insert(proof)?;
        self.given_line(g)
    }

    fn given_line(&mut self, g: usize) -> Result<Line, ScriptError> {
        let depth = self.depth();
        let idx = self.push_given(depth, g)?;
        Ok(self.record(depth, idx))
    }

    pub fn mp(&mut self, a: Line, ab: Line) -> Result<Line, ScriptError> {
        let (ia, iab) = (self.resolve(a)?, self.resolve(ab)?);
        let depth = self.depth();
        let frame = &self.frames[depth];
        let (ea, eab) = (&frame.entries[ia], &frame.entries[iab]);
        let b = match eab.formula.as_imp() {
            Some((x, b)) if *x == ea.formula => b.clone(),
            _ => return Err(ScriptError::Mismatch(self.lines.len())),
        };
        let deps = ea.deps.union(&eab.deps).copied().collect();
        let idx = self.push(depth, b, Kind::Mp(ia, iab), deps)?;
        Ok(self.record(depth, idx))
    }

    /// Inserts the proof and applies it to `args` by successive modus ponens.
    pub fn apply(&mut self, proof: &Proof, args: &[Line]) -> Result<Line, ScriptError> {
        let mut cur = self.insert(proof)?;
        for &a in args {
            cur = self.mp(a, cur)?;
        }
        Ok(cur)
    }

    pub fn gen(&mut self, i: Line, x: Var) -> Result<Line, ScriptError> {
        let ii = self.resolve(i)?;
        let depth = self.depth();
        let e = &self.frames[depth].entries[ii];
        for &d in &e.deps {
            if self.frames[d].hyp.as_ref().is_some_and(|h| h.is_free(x)) {
                return Err(ScriptError::GenOverHypothesis(x));
            }
        }
        let f = Formula::forall(x, e.formula.clone());
        let deps = e.deps.clone();
        let idx = self.push(depth, f, Kind::Gen(ii, x), deps)?;
        Ok(self.record(depth, idx))
    }

    /// Closes the innermost scope, yielding `H -> B` for the last line `B`.
    pub fn discharge(&mut self) -> Result<Line, ScriptError> {
        let depth = self.depth();
        if depth == 0 {
            return Err(ScriptError::NothingToDischarge);
        }
        let frame = self.frames.pop().unwrap();
        let hyp = frame.hyp.clone().unwrap();
        let mut t = Translation {
            frame: &frame,
            hyp: &hyp,
            depth,
            plain: vec![None; frame.entries.len()],
            cond: vec![None; frame.entries.len()],
        };
        let last = frame.entries.len() - 1;
        let idx = t.cond(self, last)?;
        Ok(self.record(depth - 1, idx))
    }

    /// Closes all open scopes and returns the proof of the last line.
    pub fn finish(mut self) -> Result<Proof, ScriptError> {
        while self.depth() > 0 {
            self.discharge()?;
        }
        let last = self.frames[0].entries.len().checked_sub(1).ok_or(BuildError("empty derivation".into()))?;
        Ok(self.builder.finish(self.given(0, last)))
    }

    /// Proof of a hypothesis-free line.
    pub fn proof_of(&self, line: Line) -> Result<Proof, ScriptError> {
        let (depth, idx) = self.locate(line)?;
        match self.frames[depth].entries[idx].kind {
            Kind::Given(g) => Ok(self.builder.finish(g)),
            _ => Err(ScriptError::OutOfScope(line.0)),
        }
    }
}

/// Rewrites the entries of a closed frame into its parent.
struct Translation<'a> {
    frame: &'a Frame,
    hyp: &'a Formula,
    depth: usize,
    /// Parent entry for an entry that does not rest on the hypothesis.
    plain: Vec<Option<usize>>,
    /// Parent entry for `hyp -> formula`.
    cond: Vec<Option<usize>>,
}

impl Translation<'_> {
    fn independent(&self, i: usize) -> bool {
        !self.frame.entries[i].deps.contains(&self.depth)
    }

    fn parent_deps(&self, i: usize) -> BTreeSet<usize> {
        let mut deps = self.frame.entries[i].deps.clone();
        deps.remove(&self.depth);
        deps
    }

    fn plain(&mut self, d: &mut Deriver, i: usize) -> Result<usize, ScriptError> {
        if let Some(p) = self.plain[i] {
            return Ok(p);
        }
        let parent = self.depth - 1;
        let frame = self.frame;
        let e = &frame.entries[i];
        let p = match e.kind {
            Kind::Hyp => unreachable!(),
            Kind::Given(g) => d.push_given(parent, g)?,
            Kind::Import(j) => j,
            Kind::Mp(a, ab) => {
                let (pa, pab) = (self.plain(d, a)?, self.plain(d, ab)?);
                d.push(parent, e.formula.clone(), Kind::Mp(pa, pab), self.parent_deps(i))?
            }
            Kind::Gen(j, x) => {
                let pj = self.plain(d, j)?;
                d.push(parent, e.formula.clone(), Kind::Gen(pj, x), self.parent_deps(i))?
            }
        };
        self.plain[i] = Some(p);
        Ok(p)
    }

    fn cond(&mut self, d: &mut Deriver, i: usize) -> Result<usize, ScriptError> {
        if let Some(c) = self.cond[i] {
            return Ok(c);
        }
        let parent = self.depth - 1;
        let h = self.hyp.clone();
        let frame = self.frame;
        let e = &frame.entries[i];
        let target = Formula::imp(h.clone(), e.formula.clone());
        let deps = self.parent_deps(i);
        let c = if self.independent(i) {
            let p = self.plain(d, i)?;
            let ax = d.builder.logical(prop_ax1(e.formula.clone(), h.clone()))?;
            let ax = d.push_given(parent, ax)?;
            d.push(parent, target, Kind::Mp(p, ax), deps)?
        } else {
            match e.kind {
                Kind::Hyp => {
                    let g = identity_in(&mut d.builder, &h)?;
                    d.push_given(parent, g)?
                }
                Kind::Mp(a, ab) => {
                    let fa = frame.entries[a].formula.clone();
                    let (ca, cab) = (self.cond(d, a)?, self.cond(d, ab)?);
                    let ax = d.builder.logical(prop_ax2(h.clone(), fa.clone(), e.formula.clone()))?;
                    let ax = d.push_given(parent, ax)?;
                    let mid = Formula::imp(Formula::imp(h.clone(), fa), target.clone());
                    let deps_ab = self.parent_deps(ab);
                    let m = d.push(parent, mid, Kind::Mp(cab, ax), deps_ab)?;
                    d.push(parent, target, Kind::Mp(ca, m), deps)?
                }
                Kind::Gen(j, x) => {
                    let body = frame.entries[j].formula.clone();
                    let cj = self.cond(d, j)?;
                    let qd = q_distr(x, h.clone(), body.clone()).ok_or(ScriptError::GenOverHypothesis(x))?;
                    let g_formula = Formula::forall(x, Formula::imp(h.clone(), body));
                    let g = d.push(parent, g_formula, Kind::Gen(cj, x), deps.clone())?;
                    let ax = d.builder.logical(qd)?;
                    let ax = d.push_given(parent, ax)?;
                    d.push(parent, target, Kind::Mp(g, ax), deps)?
                }
                Kind::Given(_) | Kind::Import(_) => unreachable!("given and imported entries are independent"),
            }
        };
        self.cond[i] = Some(c);
        Ok(c)
    }
}

/// Adds the five-step proof of `a -> a` to `b`.
pub fn identity_in(b: &mut ProofBuilder, a: &Formula) -> Result<usize, BuildError> {
    let aa = Formula::imp(a.clone(), a.clone());
    let s1 = b.logical(prop_ax2(a.clone(), aa.clone(), a.clone()))?;
    let s2 = b.logical(prop_ax1(a.clone(), aa))?;
    let s3 = b.mp(s2, s1)?;
    let s4 = b.logical(prop_ax1(a.clone(), a.clone()))?;
    b.mp(s4, s3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::axioms::{eq_refl, factivity, prop_ax3};
    use crate::calculus::proof::{check_proof, check_pure, Verdict};
    use crate::calculus::theory::TheorySpec;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn discharge_of_bare_hypothesis_is_identity() {
        let mut d = Deriver::new();
        d.assume(p("0 = 0"));
        d.discharge().unwrap();
        let pr = d.finish().unwrap();
        assert_eq!(pr.len(), 5);
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }

    #[test]
    fn nested_scopes_and_outer_references() {
        // A -> ((A -> B) -> B)
        let (a, b) = (p("x0 = 0"), p("K(0 = 0)"));
        let script = Script {
            lemmas: vec![],
            steps: vec![
                ScriptStep::Assume(a.clone()),
                ScriptStep::Assume(Formula::imp(a.clone(), b.clone())),
                ScriptStep::Mp(0, 1),
                ScriptStep::Discharge,
                ScriptStep::Discharge,
            ],
        };
        let pr = hilbertize(&script).unwrap();
        assert_eq!(pr.conclusion(), Some(&Formula::imp(a.clone(), Formula::imp(Formula::imp(a, b.clone()), b))));
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }

    #[test]
    fn open_scopes_close_at_the_end() {
        let mut d = Deriver::new();
        d.assume(p("0 = 0"));
        d.assume(p("x1 = 0"));
        let r = d.logical(eq_refl(2)).unwrap();
        d.gen(r, 1).unwrap();
        let pr = d.finish().unwrap();
        assert_eq!(pr.conclusion(), Some(&p("0 = 0 -> x1 = 0 -> forall x1. forall x2. x2 = x2")));
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }

    #[test]
    fn generalization_under_hypothesis() {
        let mut d = Deriver::new();
        let h = d.assume(p("x0 = 0"));
        assert_eq!(d.gen(h, 0), Err(ScriptError::GenOverHypothesis(0)));
        let g = d.gen(h, 3).unwrap();
        assert_eq!(d.formula(g).unwrap(), &p("forall x3. x0 = 0"));
        let pr = d.finish().unwrap();
        assert_eq!(pr.conclusion(), Some(&p("x0 = 0 -> forall x3. x0 = 0")));
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }

    #[test]
    fn closed_lines_are_out_of_scope() {
        let mut d = Deriver::new();
        let h = d.assume(p("0 = 0"));
        d.discharge().unwrap();
        assert_eq!(d.mp(h, h), Err(ScriptError::OutOfScope(0)));
        assert_eq!(d.discharge(), Err(ScriptError::NothingToDischarge));
    }

    #[test]
    fn theory_axioms_inside_scopes() {
        let t = TheorySpec::sigma_machine();
        let mut d = Deriver::new();
        let k = d.assume(p("K(x1 = 0)"));
        let f = d.axiom(factivity(p("x1 = 0")), SchemaId::Factivity).unwrap();
        d.mp(k, f).unwrap();
        let pr = d.finish().unwrap();
        assert_eq!(pr.conclusion(), Some(&p("K(x1 = 0) -> x1 = 0")));
        assert_eq!(check_proof(&pr, &t), Verdict::Accept);

        // generalizing over a variable free in a theory axiom is caught
        let mut d = Deriver::new();
        d.assume(p("0 = 0"));
        let f = d.axiom(factivity(p("x1 = 0")), SchemaId::Factivity).unwrap();
        assert!(matches!(d.gen(f, 1), Err(ScriptError::Build(_))));
        let h = d.assume(p("x2 = 0"));
        let g = d.mp(h, f).err();
        assert!(g.is_some());
    }

    #[test]
    fn contraposition_by_axiom_three() {
        let (a, b) = (p("0 = 0"), p("x0 = 0"));
        let mut d = Deriver::new();
        let h = d.assume(Formula::imp(Formula::not(a.clone()), Formula::not(b.clone())));
        let ax = d.logical(prop_ax3(a.clone(), b.clone())).unwrap();
        d.mp(h, ax).unwrap();
        let pr = d.finish().unwrap();
        assert_eq!(check_pure(&pr), Verdict::Accept);
    }
}

//! Propositional lemmas and a complete prover for tautologies.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::Formula;

use super::axioms::{prop_ax1, prop_ax3};
use super::proof::Proof;
use super::script::{Deriver, Line, ScriptError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TautError {
    #[error("not a tautology: {0}")]
    NotTautology(Formula),
    #[error("too many propositional atoms ({0})")]
    TooManyAtoms(usize),
    #[error(transparent)]
    Script(#[from] ScriptError),
}

/// Upper bound on distinct atoms; the prover is exponential in this.
pub const MAX_ATOMS: usize = 16;

fn n(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn i(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}

fn done(d: Deriver) -> Proof {
    d.finish().expect("propositional lemma")
}

/// `A -> A`.
pub fn identity(a: &Formula) -> Proof {
    let mut d = Deriver::new();
    d.assume(a.clone());
    done(d)
}

/// `~A -> (A -> B)`.
pub fn neg_elim(a: &Formula, b: &Formula) -> Proof {
    let mut d = Deriver::new();
    let na = d.assume(n(a));
    let ha = d.assume(a.clone());
    let ax1 = d.logical(prop_ax1(n(a), n(b))).unwrap();
    let nb_na = d.mp(na, ax1).unwrap();
    let ax3 = d.logical(prop_ax3(b.clone(), a.clone())).unwrap();
    let a_b = d.mp(nb_na, ax3).unwrap();
    d.mp(ha, a_b).unwrap();
    done(d)
}

/// `~~B -> B`.
pub fn dne(b: &Formula) -> Proof {
    let mut d = Deriver::new();
    let nnb = d.assume(n(&n(b)));
    let ax1 = d.logical(prop_ax1(n(&n(b)), n(&n(&n(&n(b)))))).unwrap();
    let s1 = d.mp(nnb, ax1).unwrap();
    let ax3 = d.logical(prop_ax3(n(&n(&n(b))), n(b))).unwrap();
    let s2 = d.mp(s1, ax3).unwrap();
    let ax3 = d.logical(prop_ax3(b.clone(), n(&n(b)))).unwrap();
    let s3 = d.mp(s2, ax3).unwrap();
    d.mp(nnb, s3).unwrap();
    done(d)
}

/// `B -> ~~B`.
pub fn dni(b: &Formula) -> Proof {
    let mut d = Deriver::new();
    let s = d.insert(&dne(&n(b))).unwrap();
    let ax3 = d.logical(prop_ax3(n(&n(b)), b.clone())).unwrap();
    d.mp(s, ax3).unwrap();
    done(d)
}

/// `(A -> B) -> (~B -> ~A)`.
pub fn contra(a: &Formula, b: &Formula) -> Proof {
    let mut d = Deriver::new();
    let ab = d.assume(i(a, b));
    let nna = d.assume(n(&n(a)));
    let ha = d.apply(&dne(a), &[nna]).unwrap();
    let hb = d.mp(ha, ab).unwrap();
    d.apply(&dni(b), &[hb]).unwrap();
    let s = d.discharge().unwrap();
    let ax3 = d.logical(prop_ax3(n(a), n(b))).unwrap();
    d.mp(s, ax3).unwrap();
    done(d)
}

/// `A -> (~B -> ~(A -> B))`.
pub fn imp_neg(a: &Formula, b: &Formula) -> Proof {
    let mut d = Deriver::new();
    let ha = d.assume(a.clone());
    d.assume(i(a, b));
    let ab = Line(ha.0 + 1);
    d.mp(ha, ab).unwrap();
    let s = d.discharge().unwrap();
    d.apply(&contra(&i(a, b), b), &[s]).unwrap();
    done(d)
}

/// `(A -> B) -> ((~A -> B) -> B)`.
pub fn cases(a: &Formula, b: &Formula) -> Proof {
    let mut d = Deriver::new();
    let ab = d.assume(i(a, b));
    let nab = d.assume(i(&n(a), b));
    let bb = i(b, b);
    d.assume(n(b));
    let nb = Line(nab.0 + 1);
    let na = d.apply(&contra(a, b), &[ab, nb]).unwrap();
    let nna = d.apply(&contra(&n(a), b), &[nab, nb]).unwrap();
    d.apply(&neg_elim(&n(a), &n(&bb)), &[nna, na]).unwrap();
    let s = d.discharge().unwrap();
    let ax3 = d.logical(prop_ax3(b.clone(), bb.clone())).unwrap();
    let t = d.mp(s, ax3).unwrap();
    let id = d.insert(&identity(b)).unwrap();
    d.mp(id, t).unwrap();
    done(d)
}

/// Maximal non-propositional subformulas, in order of first occurrence.
pub fn atoms(f: &Formula) -> Vec<Formula> {
    fn walk(f: &Formula, out: &mut Vec<Formula>) {
        match f {
            Formula::Not(a) => walk(a, out),
            Formula::Imp(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            atom => {
                if !out.contains(atom) {
                    out.push(atom.clone());
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out);
    out
}

fn value(f: &Formula, v: &BTreeMap<&Formula, bool>) -> bool {
    match f {
        Formula::Not(a) => !value(a, v),
        Formula::Imp(a, b) => !value(a, v) || value(b, v),
        atom => v[atom],
    }
}

/// Whether `f` is true under every assignment to its atoms.
pub fn is_tautology(f: &Formula) -> bool {
    let atoms = atoms(f);
    if atoms.len() > MAX_ATOMS {
        return false;
    }
    (0u32..1 << atoms.len()).all(|bits| {
        let v = atoms.iter().enumerate().map(|(k, a)| (a, bits >> k & 1 == 1)).collect();
        value(f, &v)
    })
}

/// A hypothesis-free proof of the tautology `f`, by case analysis on its
/// atoms.
pub fn prove_tautology(f: &Formula) -> Result<Proof, TautError> {
    let atoms = atoms(f);
    if atoms.len() > MAX_ATOMS {
        return Err(TautError::TooManyAtoms(atoms.len()));
    }
    if !is_tautology(f) {
        return Err(TautError::NotTautology(f.clone()));
    }
    let mut d = Deriver::new();
    let mut lits = Vec::new();
    split(&mut d, f, &atoms, &mut lits)?;
    Ok(d.finish()?)
}

/// Derives `f` from the literals already assumed for `atoms[..lits.len()]`.
fn split(d: &mut Deriver, f: &Formula, atoms: &[Formula], lits: &mut Vec<(bool, Line)>) -> Result<Line, TautError> {
    let k = lits.len();
    if k == atoms.len() {
        let v = atoms.iter().zip(lits.iter()).map(|(a, (b, _))| (a, *b)).collect();
        let lines = atoms.iter().zip(lits.iter()).map(|(a, (_, l))| (a, *l)).collect();
        return Ok(leaf(d, f, &v, &lines)?);
    }
    let p = &atoms[k];
    let mut branch = |d: &mut Deriver, hyp: Formula, val: bool| -> Result<Line, TautError> {
        let h = d.assume(hyp);
        lits.push((val, h));
        split(d, f, atoms, lits)?;
        lits.pop();
        Ok(d.discharge()?)
    };
    let pos = branch(d, p.clone(), true)?;
    let neg = branch(d, n(p), false)?;
    Ok(d.apply(&cases(p, f), &[pos, neg])?)
}

/// Derives `g` when it is true under `v`, and `~g` otherwise.
fn leaf(
    d: &mut Deriver,
    g: &Formula,
    v: &BTreeMap<&Formula, bool>,
    lines: &BTreeMap<&Formula, Line>,
) -> Result<Line, ScriptError> {
    match g {
        Formula::Not(a) => {
            let la = leaf(d, a, v, lines)?;
            if value(a, v) {
                d.apply(&dni(a), &[la])
            } else {
                Ok(la)
            }
        }
        Formula::Imp(a, b) => {
            let (va, vb) = (value(a, v), value(b, v));
            if !va {
                let la = leaf(d, a, v, lines)?;
                d.apply(&neg_elim(a, b), &[la])
            } else if vb {
                let lb = leaf(d, b, v, lines)?;
                let ax = d.logical(prop_ax1((**b).clone(), (**a).clone()))?;
                d.mp(lb, ax)
            } else {
                let la = leaf(d, a, v, lines)?;
                let lb = leaf(d, b, v, lines)?;
                d.apply(&imp_neg(a, b), &[la, lb])
            }
        }
        atom => Ok(lines[atom]),
    }
}

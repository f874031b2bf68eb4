//! Axiom schemas: constructors for instances and recognizers.
//!
//! Logical schemas:
//!
//! * `PropAx1`  `A -> (B -> A)`
//! * `PropAx2`  `(A -> (B -> C)) -> ((A -> B) -> (A -> C))`
//! * `PropAx3`  `(~A -> ~B) -> (B -> A)`
//! * `QInst`    `(forall x. φ) -> φ(x|t)`
//! * `QDistr`   `(forall x. A -> B) -> (A -> forall x. B)`, `x` not free in `A`
//! * `EqRefl`   `forall x. x = x`
//! * `EqSubst`  `t1 = t2 -> (φ(x|t1) -> φ(x|t2))`
//!
//! Theory schemas also accept any universal generalization of an instance.

use std::sync::{Arc, OnceLock};

use crate::syntax::{encode_formula, eval_ground_term, substitute, Formula, Term, Var};

use super::theory::{SchemaId, TheorySpec};

pub fn prop_ax1(a: Formula, b: Formula) -> Formula {
    Formula::imp(a.clone(), Formula::imp(b, a))
}

pub fn prop_ax2(a: Formula, b: Formula, c: Formula) -> Formula {
    Formula::imp(
        Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone())),
        Formula::imp(Formula::imp(a.clone(), b), Formula::imp(a, c)),
    )
}

pub fn prop_ax3(a: Formula, b: Formula) -> Formula {
    Formula::imp(
        Formula::imp(Formula::not(a.clone()), Formula::not(b.clone())),
        Formula::imp(b, a),
    )
}

pub fn q_inst(x: Var, phi: &Formula, t: &Term) -> Formula {
    Formula::imp(Formula::forall(x, phi.clone()), substitute(phi, x, t))
}

/// `None` when `x` is free in `a`.
pub fn q_distr(x: Var, a: Formula, b: Formula) -> Option<Formula> {
    if a.is_free(x) {
        return None;
    }
    Some(Formula::imp(
        Formula::forall(x, Formula::imp(a.clone(), b.clone())),
        Formula::imp(a, Formula::forall(x, b)),
    ))
}

pub fn eq_refl(x: Var) -> Formula {
    Formula::forall(x, Formula::eq(Term::Var(x), Term::Var(x)))
}

pub fn eq_subst(t1: &Term, t2: &Term, phi: &Formula, x: Var) -> Formula {
    Formula::imp(
        Formula::eq(t1.clone(), t2.clone()),
        Formula::imp(substitute(phi, x, t1), substitute(phi, x, t2)),
    )
}

pub fn induction(phi: &Formula, x: Var) -> Formula {
    let base = substitute(phi, x, &Term::Zero);
    let step = substitute(phi, x, &Term::succ(Term::Var(x)));
    Formula::imp(
        base,
        Formula::imp(
            Formula::forall(x, Formula::imp(phi.clone(), step)),
            Formula::forall(x, phi.clone()),
        ),
    )
}

pub fn factivity(phi: Formula) -> Formula {
    Formula::imp(Formula::know(phi.clone()), phi)
}

pub fn kmp(a: Formula, b: Formula) -> Formula {
    Formula::imp(
        Formula::know(Formula::imp(a.clone(), b.clone())),
        Formula::imp(Formula::know(a), Formula::know(b)),
    )
}

/// `K(ψ) <-> In(num ⌜ψ⌝, num e)`.
pub fn gnum(psi: Formula, e: u64) -> Formula {
    let code = encode_formula(&psi);
    Formula::iff(Formula::know(psi), Formula::in_w(Term::Num(code), Term::num(e)))
}

/// The six basic axioms of Peano arithmetic, as closed formulas.
pub fn pa_axioms() -> &'static [Formula; 6] {
    static AXIOMS: OnceLock<[Formula; 6]> = OnceLock::new();
    AXIOMS.get_or_init(|| {
        let (x, y) = (Term::Var(0), Term::Var(1));
        let s = |t: Term| Term::succ(t);
        let all2 = |f: Formula| Formula::forall(0, Formula::forall(1, f));
        [
            Formula::forall(0, Formula::not(Formula::eq(s(x.clone()), Term::Zero))),
            all2(Formula::imp(Formula::eq(s(x.clone()), s(y.clone())), Formula::eq(x.clone(), y.clone()))),
            Formula::forall(0, Formula::eq(Term::plus(x.clone(), Term::Zero), x.clone())),
            all2(Formula::eq(
                Term::plus(x.clone(), s(y.clone())),
                s(Term::plus(x.clone(), y.clone())),
            )),
            Formula::forall(0, Formula::eq(Term::times(x.clone(), Term::Zero), Term::Zero)),
            all2(Formula::eq(
                Term::times(x.clone(), s(y.clone())),
                Term::plus(Term::times(x.clone(), y.clone()), x),
            )),
        ]
    })
}

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    f.as_imp()
}

fn not(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(a) => Some(a),
        _ => None,
    }
}

fn know(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Know(a) => Some(a),
        _ => None,
    }
}

fn forall(f: &Formula) -> Option<(Var, &Formula)> {
    match f {
        Formula::Forall(x, body) => Some((*x, body)),
        _ => None,
    }
}

pub fn is_prop_ax1(f: &Formula) -> bool {
    (|| {
        let (a, rest) = imp(f)?;
        let (_, a2) = imp(rest)?;
        Some(a == a2)
    })()
    .unwrap_or(false)
}

pub fn is_prop_ax2(f: &Formula) -> bool {
    (|| {
        let (lhs, rhs) = imp(f)?;
        let (a, bc) = imp(lhs)?;
        let (b, c) = imp(bc)?;
        let (ab, ac) = imp(rhs)?;
        let (a2, b2) = imp(ab)?;
        let (a3, c2) = imp(ac)?;
        Some(a == a2 && a == a3 && b == b2 && c == c2)
    })()
    .unwrap_or(false)
}

pub fn is_prop_ax3(f: &Formula) -> bool {
    (|| {
        let (lhs, rhs) = imp(f)?;
        let (na, nb) = imp(lhs)?;
        let (a, b) = (not(na)?, not(nb)?);
        let (b2, a2) = imp(rhs)?;
        Some(a == a2 && b == b2)
    })()
    .unwrap_or(false)
}

#[derive(Clone, Copy)]
enum Child {
    Left,
    Right,
}

/// Path to the first free occurrence of `x`, through formula and term nodes.
fn first_free_path(f: &Formula, x: Var, path: &mut Vec<Child>) -> bool {
    match f {
        Formula::Eq(a, b) | Formula::In(a, b) => {
            path.push(Child::Left);
            if term_path(a, x, path) {
                return true;
            }
            path.pop();
            path.push(Child::Right);
            if term_path(b, x, path) {
                return true;
            }
            path.pop();
            false
        }
        Formula::Not(a) => {
            path.push(Child::Left);
            if first_free_path(a, x, path) {
                return true;
            }
            path.pop();
            false
        }
        Formula::Imp(a, b) => {
            path.push(Child::Left);
            if first_free_path(a, x, path) {
                return true;
            }
            path.pop();
            path.push(Child::Right);
            if first_free_path(b, x, path) {
                return true;
            }
            path.pop();
            false
        }
        Formula::Forall(y, body) => {
            if *y == x {
                return false;
            }
            path.push(Child::Left);
            if first_free_path(body, x, path) {
                return true;
            }
            path.pop();
            false
        }
        Formula::Know(_) => false,
    }
}

fn term_path(t: &Term, x: Var, path: &mut Vec<Child>) -> bool {
    match t {
        Term::Var(y) => *y == x,
        Term::Zero | Term::Num(_) => false,
        Term::Succ(a) | Term::Diag(a) => {
            path.push(Child::Left);
            if term_path(a, x, path) {
                return true;
            }
            path.pop();
            false
        }
        Term::Plus(a, b) | Term::Times(a, b) => {
            path.push(Child::Left);
            if term_path(a, x, path) {
                return true;
            }
            path.pop();
            path.push(Child::Right);
            if term_path(b, x, path) {
                return true;
            }
            path.pop();
            false
        }
    }
}

fn term_at<'a>(f: &'a Formula, path: &[Child]) -> Option<&'a Term> {
    let (first, rest) = path.split_first()?;
    match (f, first) {
        (Formula::Eq(a, _) | Formula::In(a, _), Child::Left) => subterm_at(a, rest),
        (Formula::Eq(_, b) | Formula::In(_, b), Child::Right) => subterm_at(b, rest),
        (Formula::Not(a) | Formula::Forall(_, a), Child::Left) => term_at(a, rest),
        (Formula::Imp(a, _), Child::Left) => term_at(a, rest),
        (Formula::Imp(_, b), Child::Right) => term_at(b, rest),
        _ => None,
    }
}

fn subterm_at<'a>(t: &'a Term, path: &[Child]) -> Option<&'a Term> {
    let Some((first, rest)) = path.split_first() else { return Some(t) };
    match (t, first) {
        (Term::Succ(a) | Term::Diag(a), Child::Left) => subterm_at(a, rest),
        (Term::Plus(a, _) | Term::Times(a, _), Child::Left) => subterm_at(a, rest),
        (Term::Plus(_, b) | Term::Times(_, b), Child::Right) => subterm_at(b, rest),
        _ => None,
    }
}

pub fn is_q_inst(f: &Formula) -> bool {
    (|| {
        let (lhs, rhs) = imp(f)?;
        let (x, phi) = forall(lhs)?;
        let mut path = Vec::new();
        if !first_free_path(phi, x, &mut path) {
            return Some(phi == rhs);
        }
        let t = term_at(rhs, &path)?;
        Some(&substitute(phi, x, t) == rhs)
    })()
    .unwrap_or(false)
}

pub fn is_q_distr(f: &Formula) -> bool {
    (|| {
        let (lhs, rhs) = imp(f)?;
        let (x, body) = forall(lhs)?;
        let (a, b) = imp(body)?;
        let (a2, all_b) = imp(rhs)?;
        let (x2, b2) = forall(all_b)?;
        Some(x == x2 && a == a2 && b == b2 && !a.is_free(x))
    })()
    .unwrap_or(false)
}

pub fn is_eq_refl(f: &Formula) -> bool {
    matches!(f, Formula::Forall(x, body)
        if matches!(&**body, Formula::Eq(Term::Var(a), Term::Var(b)) if a == x && b == x))
}

/// Recognizes `t1 = t2 -> (A -> B)` where `B` arises from `A` by replacing
/// some occurrences of `t1` with `t2`, at positions outside knowledge atoms
/// and not under a quantifier binding a variable of `t1` or `t2`.
pub fn is_eq_subst(f: &Formula) -> bool {
    (|| {
        let (eq, rest) = imp(f)?;
        let Formula::Eq(t1, t2) = eq else { return None };
        let (a, b) = imp(rest)?;
        let mut vars = t1.free_vars();
        vars.extend(t2.free_vars());
        let ctx = ReplaceCtx { from: t1, to: t2, vars: &vars.into_iter().collect::<Vec<_>>() };
        Some(ctx.formulas(a, b, &mut Vec::new()))
    })()
    .unwrap_or(false)
}

struct ReplaceCtx<'a> {
    from: &'a Term,
    to: &'a Term,
    vars: &'a [Var],
}

impl ReplaceCtx<'_> {
    fn formulas(&self, a: &Formula, b: &Formula, bound: &mut Vec<Var>) -> bool {
        if a == b {
            return true;
        }
        match (a, b) {
            (Formula::Eq(s1, s2), Formula::Eq(u1, u2)) | (Formula::In(s1, s2), Formula::In(u1, u2)) => {
                matches!((a, b), (Formula::Eq(..), Formula::Eq(..)) | (Formula::In(..), Formula::In(..)))
                    && self.terms(s1, u1, bound)
                    && self.terms(s2, u2, bound)
            }
            (Formula::Not(x), Formula::Not(y)) => self.formulas(x, y, bound),
            (Formula::Imp(x1, x2), Formula::Imp(y1, y2)) => {
                self.formulas(x1, y1, bound) && self.formulas(x2, y2, bound)
            }
            (Formula::Forall(v, x), Formula::Forall(w, y)) if v == w => {
                bound.push(*v);
                let ok = self.formulas(x, y, bound);
                bound.pop();
                ok
            }
            _ => false,
        }
    }

    fn terms(&self, s: &Term, u: &Term, bound: &[Var]) -> bool {
        if s == u {
            return true;
        }
        if s == self.from && u == self.to && !self.vars.iter().any(|v| bound.contains(v)) {
            return true;
        }
        match (s, u) {
            (Term::Succ(a), Term::Succ(b)) | (Term::Diag(a), Term::Diag(b)) => self.terms(a, b, bound),
            (Term::Plus(a1, a2), Term::Plus(b1, b2)) | (Term::Times(a1, a2), Term::Times(b1, b2)) => {
                self.terms(a1, b1, bound) && self.terms(a2, b2, bound)
            }
            _ => false,
        }
    }
}

pub fn is_logical_axiom(f: &Formula) -> Option<SchemaId> {
    [
        (SchemaId::PropAx1, is_prop_ax1 as fn(&Formula) -> bool),
        (SchemaId::PropAx2, is_prop_ax2),
        (SchemaId::PropAx3, is_prop_ax3),
        (SchemaId::QInst, is_q_inst),
        (SchemaId::QDistr, is_q_distr),
        (SchemaId::EqRefl, is_eq_refl),
        (SchemaId::EqSubst, is_eq_subst),
    ]
    .into_iter()
    .find_map(|(s, test)| test(f).then_some(s))
}

pub fn is_induction(f: &Formula) -> bool {
    (|| {
        let (base, rest) = imp(f)?;
        let (all_step, all_phi) = imp(rest)?;
        let (x, step_body) = forall(all_step)?;
        let (phi, step) = imp(step_body)?;
        let (x2, phi2) = forall(all_phi)?;
        if x != x2 || phi != phi2 {
            return Some(false);
        }
        Some(*base == substitute(phi, x, &Term::Zero) && *step == substitute(phi, x, &Term::succ(Term::Var(x))))
    })()
    .unwrap_or(false)
}

/// True ground equations over `0, S, +, *, num, diag`.
pub fn is_comp(f: &Formula) -> bool {
    match f {
        Formula::Eq(a, b) if a.is_closed() && b.is_closed() => {
            matches!((eval_ground_term(a), eval_ground_term(b)), (Ok(x), Ok(y)) if x == y)
        }
        _ => false,
    }
}

fn is_factivity(f: &Formula) -> bool {
    matches!(imp(f), Some((Formula::Know(a), b)) if **a == *b)
}

fn is_kmp(f: &Formula) -> bool {
    (|| {
        let (kab, rest) = imp(f)?;
        let (a, b) = imp(know(kab)?)?;
        let (ka, kb) = imp(rest)?;
        Some(know(ka)? == a && know(kb)? == b)
    })()
    .unwrap_or(false)
}

fn is_gnum(f: &Formula, e: u64) -> bool {
    (|| {
        let (k, membership) = f.as_iff()?;
        let psi = know(k)?;
        let Formula::In(Term::Num(code), Term::Num(index)) = membership else { return None };
        Some(*index == e.into() && *code == encode_formula(psi))
    })()
    .unwrap_or(false)
}

fn matches_exact(schema: SchemaId, f: &Formula, proven: Option<&Formula>) -> bool {
    match schema {
        s if s.is_logical() => is_logical_axiom(f) == Some(s) || logical_matches(s, f),
        SchemaId::PAAxiom => pa_axioms().contains(f),
        SchemaId::Induction => is_induction(f),
        SchemaId::Comp => is_comp(f),
        SchemaId::KT => matches!((know(f), proven), (Some(a), Some(p)) if a == p),
        SchemaId::KMP => is_kmp(f),
        SchemaId::KArith => know(f).is_some_and(is_arithmetic),
        SchemaId::Closure => know(f).is_some_and(|a| {
            matches_schema(SchemaId::KT, a, proven)
                || matches_schema(SchemaId::KMP, a, None)
                || matches_schema(SchemaId::KArith, a, None)
        }),
        SchemaId::Factivity => is_factivity(f),
        SchemaId::KFactivity => know(f).is_some_and(|a| matches_schema(SchemaId::Factivity, a, None)),
        SchemaId::GNum(e) => is_gnum(f, e),
        SchemaId::KGNum(e) => know(f).is_some_and(|a| is_gnum(a, e)),
        _ => unreachable!(),
    }
}

fn logical_matches(s: SchemaId, f: &Formula) -> bool {
    match s {
        SchemaId::PropAx1 => is_prop_ax1(f),
        SchemaId::PropAx2 => is_prop_ax2(f),
        SchemaId::PropAx3 => is_prop_ax3(f),
        SchemaId::QInst => is_q_inst(f),
        SchemaId::QDistr => is_q_distr(f),
        SchemaId::EqRefl => is_eq_refl(f),
        SchemaId::EqSubst => is_eq_subst(f),
        _ => false,
    }
}

/// Arithmetic axioms: basic axioms, induction and true computations.
pub fn is_arithmetic(f: &Formula) -> bool {
    [SchemaId::PAAxiom, SchemaId::Induction, SchemaId::Comp]
        .into_iter()
        .any(|s| matches_schema(s, f, None))
}

/// Whether `f` is an instance of `schema`. `proven` is the conclusion of an
/// already-checked pure-logic witness, consulted by `KT` and `Closure`.
/// Theory schemas also match universal generalizations of their instances.
pub fn matches_schema(schema: SchemaId, f: &Formula, proven: Option<&Formula>) -> bool {
    if matches_exact(schema, f, proven) {
        return true;
    }
    match f {
        Formula::Forall(_, body) if !schema.is_logical() => matches_schema(schema, body, proven),
        _ => false,
    }
}

/// First matching schema among the logical schemas and those of `theory`.
pub fn recognize(theory: &TheorySpec, f: &Formula, proven: Option<&Formula>) -> Option<SchemaId> {
    is_logical_axiom(f).or_else(|| theory.schemas().find(|s| matches_schema(*s, f, proven)))
}

/// Peels a chain `A1 -> (A2 -> ... -> C)` into `([A1, A2, ...], C)` for the
/// first `n` antecedents.
pub fn split_chain(f: &Formula, n: usize) -> Option<(Vec<Formula>, Formula)> {
    let mut hyps = Vec::with_capacity(n);
    let mut cur = f;
    for _ in 0..n {
        let (a, b) = imp(cur)?;
        hyps.push(a.clone());
        cur = b;
    }
    Some((hyps, cur.clone()))
}

/// `A1 -> (A2 -> ... -> C)`.
pub fn chain(hyps: &[Formula], conclusion: Formula) -> Formula {
    hyps.iter().rev().fold(conclusion, |acc, h| Formula::Imp(Arc::new(h.clone()), Arc::new(acc)))
}

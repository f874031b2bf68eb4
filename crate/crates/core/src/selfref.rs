//! The diagonal lemma and the refutation of a machine that knows both its
//! own factivity and its own index.

use num_bigint::BigUint;

use crate::calculus::axioms::{eq_refl, eq_subst, factivity, kmp, q_inst};
use crate::calculus::{prove_tautology, Deriver, Proof, ProofBuilder, SchemaId, TheorySpec};
use crate::syntax::{decode, encode_formula, substitute, Decoded, Formula, Term};

/// The diagonal function: for `n = ⌜ψ⌝` returns `⌜ψ(x0|num n)⌝`, otherwise 0.
pub fn diag_fn(n: &BigUint) -> BigUint {
    match decode(n) {
        Ok(Decoded::Formula(psi)) => encode_formula(&substitute(&psi, 0, &Term::Num(n.clone()))),
        _ => BigUint::ZERO,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalResult {
    /// The template with `diag(x0)` in place of `x0`.
    pub theta: Formula,
    /// `theta(x0|num ⌜theta⌝)`.
    pub phi: Formula,
    /// `phi <-> template(x0|num ⌜phi⌝)`, using arithmetic and logic only.
    pub equiv_proof: Proof,
}

/// Basic axioms, induction and true computations.
pub fn arithmetic() -> TheorySpec {
    TheorySpec::new([SchemaId::PAAxiom, SchemaId::Induction, SchemaId::Comp]).unwrap()
}

fn taut(f: Formula) -> Proof {
    prove_tautology(&f).expect("propositional glue is tautological")
}

/// The numerals of `diag(num ⌜theta⌝)` and of its value.
fn diag_terms(theta: &Formula) -> (Term, Term) {
    let t = encode_formula(theta);
    let g = diag_fn(&t);
    (Term::diag(Term::Num(t)), Term::Num(g))
}

/// From step `c` proving `d = g`, derives `g = d`.
fn eq_symm(b: &mut ProofBuilder, c: usize, d: &Term, g: &Term) -> usize {
    let refl = b.axiom(eq_refl(0), SchemaId::EqRefl).unwrap();
    let inst = b.axiom(q_inst(0, &Formula::eq(Term::Var(0), Term::Var(0)), d), SchemaId::QInst).unwrap();
    let dd = b.mp(refl, inst).unwrap();
    let shape = Formula::eq(Term::Var(0), d.clone());
    let sub = b.axiom(eq_subst(d, g, &shape, 0), SchemaId::EqSubst).unwrap();
    let step = b.mp(c, sub).unwrap();
    b.mp(dd, step).unwrap()
}

/// A sentence `phi` with a proof of `phi <-> template(x0|num ⌜phi⌝)`.
pub fn diagonal_general(template: &Formula) -> DiagonalResult {
    let theta = substitute(template, 0, &Term::diag(Term::Var(0)));
    let phi = substitute(&theta, 0, &Term::Num(encode_formula(&theta)));
    let (d, g) = diag_terms(&theta);
    let psi_g = substitute(template, 0, &g);

    let mut b = ProofBuilder::new();
    let c = b.axiom(Formula::eq(d.clone(), g.clone()), SchemaId::Comp).unwrap();
    let fwd_ax = eq_subst(&d, &g, template, 0);
    debug_assert_eq!(fwd_ax.as_imp().and_then(|(_, r)| r.as_imp()).map(|(a, _)| a), Some(&phi));
    let fwd_ax = b.axiom(fwd_ax, SchemaId::EqSubst).unwrap();
    let fwd = b.mp(c, fwd_ax).unwrap();
    let c_rev = eq_symm(&mut b, c, &d, &g);
    let bwd_ax = b.axiom(eq_subst(&g, &d, template, 0), SchemaId::EqSubst).unwrap();
    let bwd = b.mp(c_rev, bwd_ax).unwrap();

    let (p, q) = (phi.clone(), psi_g.clone());
    let intro = taut(Formula::imp(
        Formula::imp(p.clone(), q.clone()),
        Formula::imp(Formula::imp(q.clone(), p.clone()), Formula::iff(p, q)),
    ));
    let intro = b.insert(&intro).unwrap();
    let half = b.mp(fwd, intro).unwrap();
    let done = b.mp(bwd, half).unwrap();
    DiagonalResult { theta, phi, equiv_proof: b.finish(done) }
}

/// `x0 ∉ W_e`.
pub fn outsider_template(e: u64) -> Formula {
    Formula::not(Formula::in_w(Term::Var(0), Term::num(e)))
}

/// The sentence saying of itself that it is not in `W_e`.
pub fn build_diagonal(e: u64) -> DiagonalResult {
    diagonal_general(&outsider_template(e))
}

/// The pieces shared by the object-level lemma and the main proof.
struct Parts {
    phi: Formula,
    /// `⌜phi⌝ ∈ W_e`.
    q: Formula,
    /// `diag(num ⌜theta⌝) = num ⌜phi⌝`.
    comp: Formula,
    /// `comp -> (phi -> ~q)`.
    comp_fwd: Formula,
    /// `K(phi) -> phi`.
    fact: Formula,
    /// `K(phi) <-> q`.
    gnum: Formula,
}

impl Parts {
    fn new(e: u64) -> Parts {
        let diag = build_diagonal(e);
        let (d, g) = diag_terms(&diag.theta);
        let template = outsider_template(e);
        let q = Formula::in_w(g.clone(), Term::num(e));
        let comp = Formula::eq(d.clone(), g.clone());
        Parts {
            comp_fwd: eq_subst(&d, &g, &template, 0),
            fact: factivity(diag.phi.clone()),
            gnum: Formula::iff(Formula::know(diag.phi.clone()), q.clone()),
            phi: diag.phi,
            q,
            comp,
        }
    }
}

/// Pure-logic proof of `comp -> (fact -> (gnum -> phi))`: assuming `~phi`
/// the index axiom yields `K(phi)`, factivity yields `phi`, so `phi`.
fn object_lemma(parts: &Parts, e: u64) -> Proof {
    let Parts { phi, q, comp, fact, gnum, .. } = parts;
    let template = outsider_template(e);
    let Formula::Eq(d, g) = comp else { unreachable!() };
    let kphi = Formula::know(phi.clone());
    let nq = Formula::not(q.clone());
    let nphi = Formula::not(phi.clone());

    let mut s = Deriver::new();
    let h_comp = s.assume(comp.clone());
    let h_fact = s.assume(fact.clone());
    let h_gnum = s.assume(gnum.clone());

    let refl = s.axiom(eq_refl(0), SchemaId::EqRefl).unwrap();
    let inst = s.axiom(q_inst(0, &Formula::eq(Term::Var(0), Term::Var(0)), d), SchemaId::QInst).unwrap();
    let dd = s.mp(refl, inst).unwrap();
    let symm = s.axiom(eq_subst(d, g, &Formula::eq(Term::Var(0), d.clone()), 0), SchemaId::EqSubst).unwrap();
    let symm = s.mp(h_comp, symm).unwrap();
    let gd = s.mp(dd, symm).unwrap();
    let bwd = s.axiom(eq_subst(g, d, &template, 0), SchemaId::EqSubst).unwrap();
    let nq_phi = s.mp(gd, bwd).unwrap();

    let q_k = taut(Formula::imp(gnum.clone(), Formula::imp(q.clone(), kphi.clone())));
    let q_k = s.apply(&q_k, &[h_gnum]).unwrap();
    let contra = taut(Formula::imp(Formula::imp(nq.clone(), phi.clone()), Formula::imp(nphi.clone(), q.clone())));
    let nphi_q = s.apply(&contra, &[nq_phi]).unwrap();

    let h_nphi = s.assume(nphi.clone());
    let q_line = s.mp(h_nphi, nphi_q).unwrap();
    let k_line = s.mp(q_line, q_k).unwrap();
    s.mp(k_line, h_fact).unwrap();
    let mirabilis = s.discharge().unwrap();
    let close = taut(Formula::imp(Formula::imp(nphi, phi.clone()), phi.clone()));
    s.apply(&close, &[mirabilis]).unwrap();
    s.finish().unwrap()
}

/// From step `kab` proving `K(A -> B)` and step `ka` proving `K(A)`, derives
/// `K(B)`.
fn know_mp(b: &mut ProofBuilder, ka: usize, kab: usize) -> usize {
    let Formula::Know(ab) = b.formula(kab).clone() else { panic!("not a knowledge atom") };
    let (x, y) = ab.as_imp().expect("known implication");
    let inst = b.axiom(kmp(x.clone(), y.clone()), SchemaId::KMP).unwrap();
    let step = b.mp(kab, inst).unwrap();
    b.mp(ka, step).unwrap()
}

/// A proof of `~(0 = 0)` from the knowing-machine axioms with Knowledge of
/// Factivity and Knowledge of having index `e`. It checks under
/// [`TheorySpec::sigma_e`] and [`TheorySpec::sigma_e_bare`].
pub fn build_refutation(e: u64) -> Proof {
    let parts = Parts::new(e);
    let obj = object_lemma(&parts, e);
    let Parts { phi, q, comp, comp_fwd, fact, gnum } = &parts;
    let k = |f: &Formula| Formula::know(f.clone());

    let mut b = ProofBuilder::new();
    b.add_lemma("obj", &obj);
    let k_obj = b.kt("obj").unwrap();
    let k_comp = b.axiom(k(comp), SchemaId::KArith).unwrap();
    let k_rest = know_mp(&mut b, k_comp, k_obj);
    let k_fact = b.axiom(k(fact), SchemaId::KFactivity).unwrap();
    let k_rest = know_mp(&mut b, k_fact, k_rest);
    let k_gnum = b.axiom(k(gnum), SchemaId::KGNum(e)).unwrap();
    let k_phi = know_mp(&mut b, k_gnum, k_rest);

    let unquote = |b: &mut ProofBuilder, kf: usize, f: &Formula| {
        let ax = b.axiom(factivity(f.clone()), SchemaId::Factivity).unwrap();
        b.mp(kf, ax).unwrap()
    };
    let gnum_line = unquote(&mut b, k_gnum, gnum);
    let phi_line = unquote(&mut b, k_phi, phi);
    let comp_line = unquote(&mut b, k_comp, comp);

    let k_q = taut(Formula::imp(gnum.clone(), Formula::imp(k(phi), q.clone())));
    let k_q = b.insert(&k_q).unwrap();
    let k_q = b.mp(gnum_line, k_q).unwrap();
    let q_line = b.mp(k_phi, k_q).unwrap();

    let fwd = b.axiom(comp_fwd.clone(), SchemaId::EqSubst).unwrap();
    let fwd = b.mp(comp_line, fwd).unwrap();
    let nq_line = b.mp(phi_line, fwd).unwrap();

    let falsum = Formula::not(Formula::eq(Term::Zero, Term::Zero));
    let clash = taut(Formula::imp(q.clone(), Formula::imp(Formula::not(q.clone()), falsum)));
    let clash = b.insert(&clash).unwrap();
    let clash = b.mp(q_line, clash).unwrap();
    let done = b.mp(nq_line, clash).unwrap();
    b.finish(done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, check_pure, Justification, Verdict};
    use crate::syntax::{eval_ground_term, parse};

    #[test]
    fn diag_fn_cases() {
        assert_eq!(diag_fn(&BigUint::from(2u32)), BigUint::ZERO);
        let open = parse("x0 = 0").unwrap();
        let n = encode_formula(&open);
        let want = encode_formula(&Formula::eq(Term::Num(n.clone()), Term::Zero));
        assert_eq!(diag_fn(&n), want);
        let closed = encode_formula(&parse("0 = 0").unwrap());
        assert_eq!(diag_fn(&closed), closed);
    }

    #[test]
    fn diagonal_sentence() {
        let r = build_diagonal(0);
        assert!(r.phi.is_sentence());
        assert_eq!(r.theta, parse("~In(diag(x0), num 0)").unwrap());
        let t = Term::diag(Term::Num(encode_formula(&r.theta)));
        assert_eq!(eval_ground_term(&t).unwrap(), encode_formula(&r.phi));
        assert_eq!(check_proof(&r.equiv_proof, &arithmetic()), Verdict::Accept);
        let (lhs, rhs) = r.equiv_proof.conclusion().unwrap().as_iff().unwrap();
        assert_eq!(lhs, &r.phi);
        assert_eq!(rhs, &Formula::not(Formula::in_w(Term::Num(encode_formula(&r.phi)), Term::num(0u32))));
    }

    #[test]
    fn general_templates() {
        for src in ["In(x0, num 9)", "0 = 0", "forall x1. (x1 = x0 -> K(0 = 0))"] {
            let template = parse(src).unwrap();
            let r = diagonal_general(&template);
            assert_eq!(check_proof(&r.equiv_proof, &arithmetic()), Verdict::Accept, "{src}");
            let (lhs, rhs) = r.equiv_proof.conclusion().unwrap().as_iff().unwrap();
            assert_eq!(lhs, &r.phi);
            assert_eq!(rhs, &substitute(&template, 0, &Term::Num(encode_formula(&r.phi))));
        }
    }

    #[test]
    fn object_lemma_is_pure_logic() {
        let parts = Parts::new(3);
        let obj = object_lemma(&parts, 3);
        assert_eq!(check_pure(&obj), Verdict::Accept);
        let want = Formula::imp(parts.comp.clone(), Formula::imp(parts.fact.clone(), Formula::imp(parts.gnum.clone(), parts.phi.clone())));
        assert_eq!(obj.conclusion(), Some(&want));
    }

    #[test]
    fn refutation_checks() {
        for e in [0, 1, 7] {
            let p = build_refutation(e);
            assert_eq!(p.conclusion(), Some(&parse("~(0 = 0)").unwrap()));
            assert_eq!(check_proof(&p, &TheorySpec::sigma_e(e)), Verdict::Accept);
            assert_eq!(check_proof(&p, &TheorySpec::sigma_e_bare(e)), Verdict::Accept);
            assert!(!check_proof(&p, &TheorySpec::sigma_e(e + 1)).is_accept());
        }
    }

    #[test]
    fn refutation_needs_knowledge_of_factivity() {
        let p = build_refutation(0);
        let without = TheorySpec::new(TheorySpec::sigma_e(0).schemas().filter(|s| *s != SchemaId::KFactivity)).unwrap();
        let Verdict::Reject { step, .. } = check_proof(&p, &without) else { panic!("accepted") };
        assert!(matches!(p.steps[step].just, Justification::Axiom { schema: SchemaId::KFactivity, .. }));
        let kf: Vec<_> = p
            .steps
            .iter()
            .filter(|s| matches!(s.just, Justification::Axiom { schema: SchemaId::KFactivity, .. }))
            .collect();
        assert_eq!(kf.len(), 1);
    }
}

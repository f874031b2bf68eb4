//! Text format for proofs.
//!
//! ```text
//! theory: sigma_e e=7
//! lemma obj:
//!   1. 0 = 0 -> 0 = 0 -> 0 = 0 ; prop-ax:1
//! end
//! 1. K(0 = 0 -> 0 = 0 -> 0 = 0) ; kt:obj
//! ```
//!
//! Steps are numbered from 1 within each block. Justifications:
//!
//! * `prop-ax:1`, `prop-ax:2`, `prop-ax:3`, `q-inst`, `q-distr`,
//!   `eq-refl`, `eq-subst`
//! * `ax:<Schema>`, `ax:GNum:<e>`, `ax:KGNum:<e>`, `ax:<Schema>:<lemma>`
//! * `kt:<lemma>`, `comp`
//! * `mp:i,j` (step `i` is `A`, step `j` is `A -> B`), `gen:i,x<n>`
//!
//! `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::parse;

use super::proof::{Justification, Lemma, Proof, Step};
use super::theory::{SchemaId, TheorySpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ProofFileError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofFile {
    pub theory: Option<TheorySpec>,
    pub proof: Proof,
}

pub fn write_proof_file(theory: Option<&TheorySpec>, proof: &Proof) -> String {
    let mut out = String::new();
    if let Some(t) = theory {
        writeln!(out, "theory: {}", t.header()).unwrap();
    }
    for l in &proof.lemmas {
        writeln!(out, "lemma {}:", l.name).unwrap();
        for (k, s) in l.steps.iter().enumerate() {
            writeln!(out, "  {}. {} ; {}", k + 1, s.formula, s.just).unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    for (k, s) in proof.steps.iter().enumerate() {
        writeln!(out, "{}. {} ; {}", k + 1, s.formula, s.just).unwrap();
    }
    out
}

pub fn parse_proof_file(text: &str) -> Result<ProofFile, ProofFileError> {
    let mut theory = None;
    let mut proof = Proof::default();
    let mut lemma: Option<Lemma> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |msg: String| ProofFileError { line: line_no, msg };
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("theory:") {
            if theory.is_some() || !proof.steps.is_empty() || !proof.lemmas.is_empty() || lemma.is_some() {
                return Err(err("theory header must come first".into()));
            }
            theory = Some(rest.trim().parse::<TheorySpec>().map_err(|e| err(e.to_string()))?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("lemma ") {
            if lemma.is_some() {
                return Err(err("nested lemma".into()));
            }
            let name = rest.trim().strip_suffix(':').ok_or_else(|| err("expected `lemma <name>:`".into()))?.trim();
            if !valid_name(name) {
                return Err(err(format!("bad lemma name `{name}`")));
            }
            if proof.lemma(name).is_some() {
                return Err(err(format!("duplicate lemma `{name}`")));
            }
            lemma = Some(Lemma { name: name.into(), steps: vec![] });
            continue;
        }
        if line == "end" {
            let l = lemma.take().ok_or_else(|| err("`end` outside a lemma".into()))?;
            if l.steps.is_empty() {
                return Err(err(format!("lemma `{}` is empty", l.name)));
            }
            proof.lemmas.push(l);
            continue;
        }
        let steps = match &mut lemma {
            Some(l) => &mut l.steps,
            None => &mut proof.steps,
        };
        let (num, rest) = line.split_once('.').ok_or_else(|| err("expected `<n>. <formula> ; <justification>`".into()))?;
        let num: usize = num.trim().parse().map_err(|_| err(format!("bad step number `{}`", num.trim())))?;
        if num != steps.len() + 1 {
            return Err(err(format!("expected step {}, found {num}", steps.len() + 1)));
        }
        let (formula, just) = rest.rsplit_once(';').ok_or_else(|| err("missing `; <justification>`".into()))?;
        let formula = parse(formula.trim()).map_err(|e| err(e.to_string()))?;
        let e = theory.as_ref().and_then(TheorySpec::index).unwrap_or(0);
        let just = parse_justification(just.trim(), e).map_err(err)?;
        steps.push(Step { formula, just });
    }
    if let Some(l) = lemma {
        return Err(ProofFileError { line: text.lines().count(), msg: format!("lemma `{}` not closed", l.name) });
    }
    Ok(ProofFile { theory, proof })
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Parses the justification notation; step numbers are 1-based.
pub fn parse_justification(s: &str, e: u64) -> Result<Justification, String> {
    let step = |t: &str| -> Result<usize, String> {
        match t.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(format!("bad step reference `{}`", t.trim())),
        }
    };
    let schema = |name: &str| SchemaId::from_name(name.trim(), e).ok_or_else(|| format!("unknown schema `{}`", name.trim()));
    let logical = match s {
        "prop-ax:1" => Some(SchemaId::PropAx1),
        "prop-ax:2" => Some(SchemaId::PropAx2),
        "prop-ax:3" => Some(SchemaId::PropAx3),
        "q-inst" => Some(SchemaId::QInst),
        "q-distr" => Some(SchemaId::QDistr),
        "eq-refl" => Some(SchemaId::EqRefl),
        "eq-subst" => Some(SchemaId::EqSubst),
        "comp" => Some(SchemaId::Comp),
        _ => None,
    };
    if let Some(schema) = logical {
        return Ok(Justification::axiom(schema));
    }
    if let Some(w) = s.strip_prefix("kt:") {
        return Ok(Justification::kt(w.trim()));
    }
    if let Some(rest) = s.strip_prefix("mp:") {
        let (i, j) = rest.split_once(',').ok_or_else(|| format!("bad mp `{s}`"))?;
        return Ok(Justification::Mp(step(i)?, step(j)?));
    }
    if let Some(rest) = s.strip_prefix("gen:") {
        let (i, x) = rest.split_once(',').ok_or_else(|| format!("bad gen `{s}`"))?;
        let x = x.trim().strip_prefix('x').and_then(|v| v.parse().ok()).ok_or_else(|| format!("bad variable in `{s}`"))?;
        return Ok(Justification::Gen(step(i)?, x));
    }
    let (name, param) = match s.strip_prefix("ax:") {
        Some(rest) => match rest.split_once(':') {
            Some((name, p)) => (name, Some(p.trim())),
            None => (rest, None),
        },
        None => (s, None),
    };
    let schema = schema(name)?;
    Ok(match (schema, param) {
        (SchemaId::GNum(_) | SchemaId::KGNum(_), Some(p)) => {
            let e: u64 = p.parse().map_err(|_| format!("bad index `{p}`"))?;
            SchemaId::from_name(schema.name(), e).map(Justification::axiom).unwrap()
        }
        (_, Some(w)) if valid_name(w) => Justification::Axiom { schema, witness: Some(w.into()) },
        (_, Some(w)) => return Err(format!("bad lemma name `{w}`")),
        (_, None) => Justification::axiom(schema),
    })
}

//! Python bindings. Formulas cross the boundary as text, codes as ints.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use episteme::calculus::{check_proof, parse_proof_file, write_proof_file, Enumerator, TheorySpec, Verdict};
use episteme::machines::{audit_factivity, machine_by_name, make_self_knowing_machine, Machine, SlashEval};
use episteme::selfref::{build_diagonal, build_refutation};
use episteme::syntax::{decode, encode_formula, Decoded, Formula};

fn formula(text: &str) -> PyResult<Formula> {
    episteme::syntax::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn theory(name: &str, e: u64) -> PyResult<TheorySpec> {
    TheorySpec::parse(name, e).map_err(|err| PyValueError::new_err(err.to_string()))
}

fn machine(name: &str) -> PyResult<Machine> {
    machine_by_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown machine `{name}`")))
}

/// Canonical form of a formula.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    Ok(formula(text)?.to_string())
}

#[pyfunction]
fn code(text: &str) -> PyResult<BigUint> {
    Ok(encode_formula(&formula(text)?))
}

#[pyfunction(name = "decode")]
fn decode_code(n: BigUint) -> PyResult<String> {
    match decode(&n) {
        Ok(Decoded::Formula(f)) => Ok(f.to_string()),
        Ok(Decoded::Term(t)) => Ok(t.to_string()),
        Err(e) => Err(PyValueError::new_err(e.to_string())),
    }
}

/// Checks proof-file text. Returns `(accepted, step, reason)` with a
/// 0-based step on rejection.
#[pyfunction]
#[pyo3(signature = (text, theory_name=None, e=0))]
fn check(text: &str, theory_name: Option<&str>, e: u64) -> PyResult<(bool, Option<usize>, String)> {
    let file = parse_proof_file(text).map_err(|err| PyValueError::new_err(err.to_string()))?;
    let t = match (theory_name, file.theory) {
        (Some(name), _) => theory(name, e)?,
        (None, Some(t)) => t,
        (None, None) => TheorySpec::logic(),
    };
    Ok(match check_proof(&file.proof, &t) {
        Verdict::Accept => (true, None, String::new()),
        Verdict::Reject { step, reason } => (false, Some(step), reason),
    })
}

/// Proof-file text of the refutation for index `e`.
#[pyfunction]
fn refute(e: u64) -> String {
    write_proof_file(Some(&TheorySpec::sigma_e(e)), &build_refutation(e))
}

/// `(theta, phi)` for the sentence saying it is not in `W_e`.
#[pyfunction]
fn diagonal(e: u64) -> (String, String) {
    let r = build_diagonal(e);
    (r.theta.to_string(), r.phi.to_string())
}

#[pyfunction]
#[pyo3(signature = (theory_name, stages, e=0))]
fn enumerate(theory_name: &str, stages: u64, e: u64) -> PyResult<Vec<String>> {
    let mut en = Enumerator::new(theory(theory_name, e)?);
    en.run_to(stages);
    Ok(en.stream().map(|f| f.to_string()).collect())
}

/// `"true"`, `"false"` or `"unknown"`.
#[pyfunction]
#[pyo3(signature = (text, budget, theory_name="sigma_slash"))]
fn slash_eval(text: &str, budget: u64, theory_name: &str) -> PyResult<String> {
    let mut s = SlashEval::new(theory(theory_name, 0)?);
    let v = s.eval(&formula(text)?, budget).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(v.to_string())
}

#[pyfunction]
fn knowledge(name: &str, n: usize) -> PyResult<Vec<String>> {
    Ok(machine(name)?.knowledge(n).iter().map(|f| f.to_string()).collect())
}

/// Known entries that are false, as `(position, formula)`.
#[pyfunction]
fn audit(name: &str, budget: usize) -> PyResult<Vec<(usize, String)>> {
    Ok(audit_factivity(&machine(name)?, budget).into_iter().map(|v| (v.position, v.formula.to_string())).collect())
}

#[pyfunction]
fn self_knowing_index() -> u64 {
    make_self_knowing_machine().1
}

#[pyfunction]
fn demo_dichotomy(budget: u64) -> PyResult<String> {
    episteme::demo::demo_dichotomy(budget).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "episteme")]
fn episteme_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(code, m)?)?;
    m.add_function(wrap_pyfunction!(decode_code, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(refute, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(slash_eval, m)?)?;
    m.add_function(wrap_pyfunction!(knowledge, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(self_knowing_index, m)?)?;
    m.add_function(wrap_pyfunction!(demo_dichotomy, m)?)?;
    Ok(())
}

//! Python bindings: group arithmetic, radicals, Moore spaces and cellularity
//! verdicts, plus the command-line entry point.

use moorecell::cellularity::{cw as cw_core, is_cellular as is_cellular_core, moore_on_moore};
use moorecell::cli::{run_command, Status};
use moorecell::homalg::{bifunctor, Kind, Outcome};
use moorecell::moore::{exists_moore as exists_core, moore_model};
use moorecell::radical::{is_quasi_radical as quasi_core, radical as radical_core};
use moorecell::space::{parse_space, SpaceDesc};
use moorecell::verdict::Verdict;
use moorecell::{parse, Error, GroupExpr};
use pyo3::exceptions::{PyNotImplementedError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) | Error::NoRecipe(_) => PyNotImplementedError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn group(text: &str) -> Result<GroupExpr, Error> {
    Ok(parse(text)?.normalize())
}

fn cellular_verdict(moore: &str, space: &str) -> Result<Verdict, Error> {
    let m = moore_model(&group(moore)?)?;
    match parse_space(space)?.normalize() {
        SpaceDesc::MooreSpace { group: a, n: 1 } => moore_on_moore(&m, &a),
        x => is_cellular_core(&m, &x),
    }
}

fn apply(kind: Kind, a: &str, b: &str) -> Result<String, Error> {
    match bifunctor(kind, &group(a)?, &group(b)?)? {
        Outcome::Group(g) => Ok(g.to_string()),
        Outcome::Unsupported(why) => Err(Error::Unsupported(why)),
    }
}

/// Canonical form of a group expression.
#[pyfunction]
fn normalize(expr: &str) -> PyResult<String> {
    group(expr).map(|g| g.to_string()).map_err(to_py)
}

#[pyfunction]
fn hom(a: &str, b: &str) -> PyResult<String> {
    apply(Kind::Hom, a, b).map_err(to_py)
}

#[pyfunction]
fn ext(a: &str, b: &str) -> PyResult<String> {
    apply(Kind::Ext, a, b).map_err(to_py)
}

#[pyfunction]
fn tensor(a: &str, b: &str) -> PyResult<String> {
    apply(Kind::Tensor, a, b).map_err(to_py)
}

#[pyfunction]
fn tor(a: &str, b: &str) -> PyResult<String> {
    apply(Kind::Tor, a, b).map_err(to_py)
}

/// `(T_G N, N / T_G N)`.
#[pyfunction]
fn radical(g: &str, n: &str) -> PyResult<(String, String)> {
    let r = (|| radical_core(&group(g)?, &group(n)?))().map_err(to_py)?;
    Ok((r.radical_subgroup.to_string(), r.reduction.to_string()))
}

/// "Yes", "No" or "Unknown".
#[pyfunction]
fn is_quasi_radical(g: &str, a: &str) -> PyResult<String> {
    let v = (|| quasi_core(&group(g)?, &group(a)?))().map_err(to_py)?;
    Ok(v.answer.to_string())
}

#[pyfunction]
fn exists_moore(g: &str) -> PyResult<String> {
    let v = (|| exists_core(&group(g)?))().map_err(to_py)?;
    Ok(v.answer.to_string())
}

/// The two-dimensional model, as `M(G, 1) = recipe`.
#[pyfunction]
fn moore(g: &str) -> PyResult<String> {
    (|| moore_model(&group(g)?))().map(|m| m.to_string()).map_err(to_py)
}

#[pyfunction]
fn is_cellular(moore: &str, space: &str) -> PyResult<String> {
    cellular_verdict(moore, space).map(|v| v.answer.to_string()).map_err(to_py)
}

/// Citations of the rules consulted, in order.
#[pyfunction]
fn trail(moore: &str, space: &str) -> PyResult<Vec<(String, String, String)>> {
    let v = cellular_verdict(moore, space).map_err(to_py)?;
    Ok(v.trail.into_iter().map(|e| (e.rule, e.citation, e.outcome.to_string())).collect())
}

/// `CW_M x`, or `None` when no rule covers the input.
#[pyfunction]
fn cw(moore: &str, space: &str) -> PyResult<Option<String>> {
    let out = (|| {
        let m = moore_model(&group(moore)?)?;
        cw_core(&m, &parse_space(space)?)
    })()
    .map_err(to_py)?;
    Ok(out.result.map(|x| x.to_string()))
}

/// Run the command-line front end; returns `(exit_code, status, output)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let mut argv = vec!["moorecell".to_string()];
    argv.extend(args);
    let r = run_command(&argv);
    let status = match r.status {
        Status::Ok => "ok",
        Status::InputError => "input-error",
        Status::Unsupported => "unsupported",
    };
    (r.exit_code, status.to_string(), r.render())
}

#[pymodule(name = "moorecell")]
fn moorecell_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(hom, m)?)?;
    m.add_function(wrap_pyfunction!(ext, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(tor, m)?)?;
    m.add_function(wrap_pyfunction!(radical, m)?)?;
    m.add_function(wrap_pyfunction!(is_quasi_radical, m)?)?;
    m.add_function(wrap_pyfunction!(exists_moore, m)?)?;
    m.add_function(wrap_pyfunction!(moore, m)?)?;
    m.add_function(wrap_pyfunction!(is_cellular, m)?)?;
    m.add_function(wrap_pyfunction!(trail, m)?)?;
    m.add_function(wrap_pyfunction!(cw, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrappers() {
        assert_eq!(apply(Kind::Hom, "Z/4", "Z/6").unwrap(), "Z/2");
        assert_eq!(cellular_verdict("Z[1/2] * Z/2", "K(Z,2)").unwrap().answer.to_string(), "No");
        assert!(matches!(apply(Kind::Hom, "Z/0", "Z"), Err(Error::Parse(_))));
    }
}

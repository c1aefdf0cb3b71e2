//! Python bindings.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use strsat::bench::{analyze_corpus, collect_files};
use strsat::frontend::{parse_2cm, parse_problem, print_formula, print_model, print_problem, Problem as CoreProblem};
use strsat::oracle::{brute_force_sat, BoundedVerdict};
use strsat::solver::{check_sat, Verdict as CoreVerdict};
use strsat::twocounter::{bounded_validity_check, encode, simulate, CheckOutcome, SimOutcome};
use strsat::Assignment;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Result of a satisfiability check.
#[pyclass(frozen)]
struct Verdict {
    /// "sat", "unsat" or "unsupported"
    #[pyo3(get)]
    kind: String,
    #[pyo3(get)]
    reason: Option<String>,
    #[pyo3(get)]
    strings: BTreeMap<String, String>,
    #[pyo3(get)]
    ints: BTreeMap<String, u64>,
    model_text: Option<String>,
}

#[pymethods]
impl Verdict {
    fn is_sat(&self) -> bool {
        self.kind == "sat"
    }

    /// The model as `define-fun` lines, if any.
    fn model_text(&self) -> Option<String> {
        self.model_text.clone()
    }

    fn __repr__(&self) -> String {
        match &self.reason {
            Some(r) => format!("Verdict({}: {r})", self.kind),
            None => format!("Verdict({}, {:?})", self.kind, self.strings),
        }
    }
}

fn sat(a: Assignment) -> Verdict {
    Verdict {
        kind: "sat".into(),
        reason: None,
        model_text: Some(print_model(&a)),
        strings: a.strs,
        ints: a.ints,
    }
}

fn plain(kind: &str, reason: Option<String>) -> Verdict {
    Verdict { kind: kind.into(), reason, strings: BTreeMap::new(), ints: BTreeMap::new(), model_text: None }
}

/// A parsed problem file.
#[pyclass(frozen)]
struct Problem {
    inner: CoreProblem,
}

#[pymethods]
impl Problem {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_problem(text.as_bytes()).map(|inner| Problem { inner }).map_err(value_error)
    }

    #[getter]
    fn alphabet(&self) -> String {
        self.inner.alphabet.to_string()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.decls.iter().map(|(n, _)| n.clone()).collect()
    }

    #[getter]
    fn assertions(&self) -> Vec<String> {
        self.inner.assertions.iter().map(print_formula).collect()
    }

    fn solve(&self) -> PyResult<Verdict> {
        match check_sat(&self.inner.formula(), &self.inner.alphabet) {
            Ok(CoreVerdict::Sat(a)) => Ok(sat(a)),
            Ok(CoreVerdict::Unsat) => Ok(plain("unsat", None)),
            Ok(CoreVerdict::Unsupported(r)) => Ok(plain("unsupported", Some(r.to_string()))),
            Err(e) => Err(value_error(e)),
        }
    }

    /// Enumerates assignments up to the given bounds. Returns "unsat" when
    /// no model exists within them.
    #[pyo3(signature = (max_len=6, max_int=10))]
    fn oracle(&self, max_len: usize, max_int: u64) -> PyResult<Verdict> {
        match brute_force_sat(&self.inner.formula(), &self.inner.alphabet, max_len, max_int) {
            Ok(BoundedVerdict::SatWith(a)) => Ok(sat(a)),
            Ok(BoundedVerdict::NoModelUpTo(n)) => Ok(plain("unsat", Some(format!("no model up to length {n}")))),
            Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
        }
    }

    fn __str__(&self) -> String {
        print_problem(&self.inner)
    }
}

#[pyfunction]
fn solve(text: &str) -> PyResult<Verdict> {
    Problem::new(text)?.solve()
}

/// `(files, equations, solved, ratio)` over all files under the paths.
#[pyfunction]
fn analyze(paths: Vec<String>) -> (usize, usize, usize, f64) {
    let roots: Vec<PathBuf> = paths.into_iter().map(PathBuf::from).collect();
    let s = analyze_corpus(&collect_files(&roots));
    (s.files, s.equations_total, s.equations_solved_form, s.ratio())
}

/// "accepted", "rejected" or "running" after at most `max_steps` steps.
#[pyfunction]
#[pyo3(signature = (machine, input, max_steps=1000))]
fn simulate_2cm(machine: &str, input: &str, max_steps: usize) -> PyResult<String> {
    let m = parse_2cm(machine).map_err(value_error)?;
    Ok(match simulate(&m, input, max_steps).map_err(value_error)? {
        SimOutcome::Accepted(_) => "accepted",
        SimOutcome::Rejected => "rejected",
        SimOutcome::StillRunning => "running",
    }
    .into())
}

#[pyfunction]
fn encode_2cm(machine: &str, input: &str) -> PyResult<String> {
    let m = parse_2cm(machine).map_err(value_error)?;
    encode(&m, input).map(|s| s.to_string()).map_err(value_error)
}

/// The first counterexample to the encoded sentence up to `bound`, if any.
#[pyfunction]
fn counterexample_2cm(machine: &str, input: &str, bound: usize) -> PyResult<Option<String>> {
    let m = parse_2cm(machine).map_err(value_error)?;
    let s = encode(&m, input).map_err(value_error)?;
    match bounded_validity_check(&s, bound) {
        Ok(CheckOutcome::Counterexample(ws)) => Ok(ws.into_iter().next()),
        Ok(CheckOutcome::NoCounterexampleUpTo(_)) => Ok(None),
        Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
    }
}

#[pymodule]
fn pystrsat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_2cm, m)?)?;
    m.add_function(wrap_pyfunction!(encode_2cm, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_2cm, m)?)?;
    Ok(())
}

//! Python bindings. Probabilities go in as anything whose `str()` parses as
//! an exact rational (`int`, `float` via its shortest repr, `Fraction`,
//! `"0.25"`, `"1/3"`) and come back as `fractions.Fraction`.

use guesswork::oracle::{check_corollary1, check_delta_sweep, check_theorem1, check_theorem2, OracleReport};
use guesswork::designs::design_for;
use guesswork::rational::{format_exact, parse_rational};
use guesswork::scan::{example_optimal as example_pair, scan_simplex as scan, DEFAULT_INNER_RESOLUTION};
use guesswork::{
    bound_certificate, canonical_optimal, expected_cost as cost, expected_guesswork as guesswork_of,
    kendall_tau as kendall, minimal_path as path, mismatch_cost as mismatch, optimal_set as optimal,
    parse_distribution, total_variation as tv, weighted_kendall as wkendall, Distribution,
    GuessingFunction, Rational, DEFAULT_ENUMERATION_CAP,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

create_exception!(guesswork_py, GuessworkError, PyValueError, "Domain error; the message starts with its code.");

fn err(e: guesswork::Error) -> PyErr {
    GuessworkError::new_err(format!("[{}] {e}", e.code()))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_exact(r),))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    rs.iter().map(|r| fraction(py, r)).collect()
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = value.str()?.to_string();
    parse_rational(&text).map_err(err)
}

fn json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((text,))
}

#[pyclass(name = "Distribution", module = "guesswork_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyDistribution {
    inner: Distribution,
}

#[pymethods]
impl PyDistribution {
    #[new]
    fn new(probs: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = probs.extract::<String>() {
            return Self::parse(&text);
        }
        let probs = probs
            .try_iter()?
            .map(|v| rational(&v?))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: Distribution::new(probs).map_err(err)? })
    }

    /// Parses `"[0.4,0.3,0.2,0.1]"` or `"1/2,1/4,1/4"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_distribution(text).map_err(err)? })
    }

    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        Ok(Self { inner: Distribution::uniform(n).map_err(err)? })
    }

    #[getter]
    fn probs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, self.inner.probs())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Distribution({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(name = "GuessingFunction", module = "guesswork_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyGuessingFunction {
    inner: GuessingFunction,
}

#[pymethods]
impl PyGuessingFunction {
    /// `ranks[i]` is the 1-based position at which symbol `i + 1` is guessed.
    #[new]
    fn new(ranks: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: GuessingFunction::new(ranks).map_err(err)? })
    }

    /// The optimal guessing function for `p`, ties broken by symbol index.
    #[staticmethod]
    fn optimal_for(p: PyRef<'_, PyDistribution>) -> Self {
        Self { inner: canonical_optimal(&p.inner) }
    }

    #[getter]
    fn ranks(&self) -> Vec<usize> {
        self.inner.ranks().to_vec()
    }

    /// Symbols (1-based) in guessing order.
    fn order(&self) -> Vec<usize> {
        self.inner.order().into_iter().map(|s| s + 1).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("GuessingFunction({})", self.inner)
    }
}

impl From<GuessingFunction> for PyGuessingFunction {
    fn from(inner: GuessingFunction) -> Self {
        Self { inner }
    }
}

#[pyfunction]
fn mismatch_cost<'py>(py: Python<'py>, p: PyRef<'_, PyDistribution>, q: PyRef<'_, PyDistribution>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &mismatch(&p.inner, &q.inner).map_err(err)?)
}

#[pyfunction]
fn total_variation<'py>(py: Python<'py>, p: PyRef<'_, PyDistribution>, q: PyRef<'_, PyDistribution>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &tv(&p.inner, &q.inner).map_err(err)?)
}

#[pyfunction]
fn expected_guesswork<'py>(py: Python<'py>, g: PyRef<'_, PyGuessingFunction>, p: PyRef<'_, PyDistribution>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &guesswork_of(&g.inner, &p.inner).map_err(err)?)
}

#[pyfunction]
fn expected_cost<'py>(
    py: Python<'py>,
    g1: PyRef<'_, PyGuessingFunction>,
    g2: PyRef<'_, PyGuessingFunction>,
    p: PyRef<'_, PyDistribution>,
) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &cost(&g1.inner, &g2.inner, &p.inner).map_err(err)?)
}

#[pyfunction]
fn kendall_tau(s1: PyRef<'_, PyGuessingFunction>, s2: PyRef<'_, PyGuessingFunction>) -> PyResult<u64> {
    kendall(&s1.inner, &s2.inner).map_err(err)
}

#[pyfunction]
fn weighted_kendall<'py>(
    py: Python<'py>,
    p: PyRef<'_, PyDistribution>,
    s1: PyRef<'_, PyGuessingFunction>,
    s2: PyRef<'_, PyGuessingFunction>,
) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &wkendall(&p.inner, &s1.inner, &s2.inner).map_err(err)?)
}

/// 1-based slots of the adjacent transpositions taking `s1` to `s2`.
#[pyfunction]
fn minimal_path(s1: PyRef<'_, PyGuessingFunction>, s2: PyRef<'_, PyGuessingFunction>) -> PyResult<Vec<usize>> {
    Ok(path(&s1.inner, &s2.inner).map_err(err)?.steps().to_vec())
}

#[pyfunction]
#[pyo3(signature = (p, cap = DEFAULT_ENUMERATION_CAP))]
fn optimal_set(p: PyRef<'_, PyDistribution>, cap: u64) -> PyResult<Vec<PyGuessingFunction>> {
    Ok(optimal(&p.inner, cap).map_err(err)?.iter().map(Into::into).collect())
}

/// Rounds of the round-robin design on `n` symbols, as lists of pairs.
#[pyfunction]
fn tournament(n: usize) -> PyResult<Vec<Vec<(usize, usize)>>> {
    let d = design_for(n).map_err(err)?;
    Ok(d.rounds().iter().map(|r| r.pairs().to_vec()).collect())
}

/// The bound certificate of `(p, q)` as a dict of decimal/fraction strings.
#[pyfunction]
fn certificate<'py>(py: Python<'py>, p: PyRef<'_, PyDistribution>, q: PyRef<'_, PyDistribution>) -> PyResult<Bound<'py, PyAny>> {
    let cert = bound_certificate(&p.inner, &q.inner).map_err(err)?;
    cert.check().map_err(GuessworkError::new_err)?;
    json(py, &cert.to_json())
}

/// Rows `(p1, p2, p3, max_delta, max_kendall)` of the simplex scan.
#[pyfunction]
#[pyo3(signature = (resolution, epsilon, inner_resolution = DEFAULT_INNER_RESOLUTION))]
fn scan_simplex<'py>(
    py: Python<'py>,
    resolution: u64,
    epsilon: &Bound<'py, PyAny>,
    inner_resolution: u64,
) -> PyResult<Bound<'py, PyList>> {
    let eps = rational(epsilon)?;
    let grid = py.detach(|| scan(resolution, &eps, inner_resolution)).map_err(err)?;
    let rows = grid
        .cells
        .iter()
        .map(|c| {
            let p = fractions(py, c.p.probs())?;
            Ok((p[0].clone(), p[1].clone(), p[2].clone(), fraction(py, &c.max_delta)?, c.max_kendall))
        })
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

/// `(p, q, delta)` with `delta = gamma * 2(n-1) * epsilon`.
#[pyfunction]
fn example_optimal<'py>(
    py: Python<'py>,
    n: usize,
    epsilon: &Bound<'py, PyAny>,
    gamma: &Bound<'py, PyAny>,
) -> PyResult<(PyDistribution, PyDistribution, Bound<'py, PyAny>)> {
    let e = example_pair(n, &rational(epsilon)?, &rational(gamma)?).map_err(err)?;
    let delta = fraction(py, &e.delta)?;
    Ok((PyDistribution { inner: e.p }, PyDistribution { inner: e.q }, delta))
}

fn report<'py>(py: Python<'py>, r: guesswork::Result<OracleReport>) -> PyResult<Bound<'py, PyAny>> {
    json(py, &r.map_err(err)?.to_json())
}

#[pyfunction]
#[pyo3(signature = (n, trials = 1000, seed = 0))]
fn verify_thm1<'py>(py: Python<'py>, n: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| check_theorem1(n, trials, seed)))
}

#[pyfunction]
#[pyo3(signature = (n, trials = 1000, seed = 0))]
fn verify_triangle<'py>(py: Python<'py>, n: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| check_corollary1(n, trials, seed)))
}

#[pyfunction]
#[pyo3(signature = (n, trials = 1000, seed = 0))]
fn verify_thm2<'py>(py: Python<'py>, n: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| check_theorem2(n, trials, seed)))
}

#[pyfunction]
#[pyo3(signature = (n, denominator = 10))]
fn oracle_delta<'py>(py: Python<'py>, n: usize, denominator: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, py.detach(|| check_delta_sweep(n, denominator)))
}

#[pymodule]
fn guesswork_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GuessworkError", m.py().get_type::<GuessworkError>())?;
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyGuessingFunction>()?;
    m.add_function(wrap_pyfunction!(mismatch_cost, m)?)?;
    m.add_function(wrap_pyfunction!(total_variation, m)?)?;
    m.add_function(wrap_pyfunction!(expected_guesswork, m)?)?;
    m.add_function(wrap_pyfunction!(expected_cost, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_kendall, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_path, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_set, m)?)?;
    m.add_function(wrap_pyfunction!(tournament, m)?)?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    m.add_function(wrap_pyfunction!(scan_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(example_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(verify_thm1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(verify_thm2, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_delta, m)?)?;
    Ok(())
}

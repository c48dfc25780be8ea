//! Python bindings. Vectors cross the boundary as lists of Python ints;
//! certificates and reports come back as plain dicts (big integers inside
//! them are decimal strings, as in the JSON output of the CLI).

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use purefv_core as core;
use purefv_core::construct::algebraic::{DEFAULT_M_LIMIT, DEFAULT_M_START};
use purefv_core::construct::Certificate;

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::NoWitnessInRange(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: serde::de::DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "FVector", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFVector(core::FVector);

#[pymethods]
impl PyFVector {
    /// Entries with the leading 1 included; all must be positive.
    #[new]
    fn new(entries: Vec<BigInt>) -> PyResult<Self> {
        core::FVector::new(entries).map(Self).map_err(err)
    }

    #[getter]
    fn entries(&self) -> Vec<BigInt> {
        self.0.entries().to_vec()
    }

    #[getter]
    fn dimension(&self) -> i64 {
        self.0.dimension()
    }

    fn to_h(&self) -> PyHVector {
        PyHVector(core::f_to_h(&self.0))
    }

    fn is_cohen_macaulay(&self) -> bool {
        core::is_cm_fvector(&self.0).is_cm
    }

    fn is_kruskal_katona(&self) -> bool {
        core::is_kk_fvector(self.0.entries()).valid
    }

    fn __len__(&self) -> usize {
        self.0.entries().len()
    }

    fn __repr__(&self) -> String {
        format!("FVector({})", self.0)
    }
}

#[pyclass(name = "HVector", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyHVector(core::HVector);

#[pymethods]
impl PyHVector {
    /// Entries with h_0 = 1 first.
    #[new]
    fn new(entries: Vec<BigInt>) -> PyResult<Self> {
        core::HVector::new(entries).map(Self).map_err(err)
    }

    #[getter]
    fn entries(&self) -> Vec<BigInt> {
        self.0.entries().to_vec()
    }

    #[getter]
    fn dimension(&self) -> i64 {
        self.0.dimension()
    }

    fn to_f(&self) -> PyFVector {
        PyFVector(core::h_to_f(&self.0))
    }

    fn is_o_sequence(&self) -> bool {
        core::is_o_sequence(self.0.entries()).valid
    }

    fn __len__(&self) -> usize {
        self.0.entries().len()
    }

    fn __repr__(&self) -> String {
        format!("HVector({})", self.0)
    }
}

#[pyclass(name = "TripleSystem", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyTripleSystem(core::TripleSystem);

#[pymethods]
impl PyTripleSystem {
    #[new]
    fn new(order: u64, blocks: Vec<[u32; 3]>) -> Self {
        Self(core::TripleSystem::new(order, blocks))
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        core::TripleSystem::from_text(text).map(Self).map_err(err)
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order
    }

    #[getter]
    fn blocks(&self) -> Vec<[u32; 3]> {
        self.0.blocks.clone()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    /// `{"valid": bool, "problem": None | dict}`.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &core::verify_sts(&self.0))
    }

    fn f_vector(&self) -> PyResult<PyFVector> {
        core::steiner::sts_f_vector(&self.0).map(PyFVector).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.blocks.len()
    }

    fn __repr__(&self) -> String {
        format!("TripleSystem(order={}, blocks={})", self.0.order, self.0.blocks.len())
    }
}

#[pyfunction]
fn binom(n: u64, k: i64) -> BigUint {
    core::macaulay::binom(n, k)
}

/// The i-binomial expansion of n as a list of (top, bottom) pairs.
#[pyfunction]
fn expand(n: BigUint, i: u32) -> PyResult<Vec<(BigUint, u32)>> {
    let e = core::expand(&n, i).map_err(err)?;
    Ok(e.terms.into_iter().map(|t| (t.top, t.bottom)).collect())
}

#[pyfunction]
fn macaulay_bound(n: BigUint, i: u32) -> BigUint {
    core::macaulay_bound(&n, i)
}

#[pyfunction]
fn kk_bound(n: BigUint, i: u32) -> BigUint {
    core::kk_bound(&n, i)
}

#[pyfunction]
fn is_o_sequence(h: Vec<BigInt>) -> bool {
    core::is_o_sequence(&h).valid
}

/// Index of the first entry that breaks the O-sequence conditions.
#[pyfunction]
fn o_sequence_violation(h: Vec<BigInt>) -> Option<usize> {
    core::is_o_sequence(&h).first_violation()
}

#[pyfunction]
fn is_kk_fvector(f: Vec<BigInt>) -> bool {
    core::is_kk_fvector(&f).valid
}

#[pyfunction]
fn f_to_h(f: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    let f = core::FVector::from_entries_unchecked(f).map_err(err)?;
    Ok(core::f_to_h(&f).into_entries())
}

#[pyfunction]
fn h_to_f(h: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    let h = core::HVector::new(h).map_err(err)?;
    Ok(core::h_to_f(&h).into_entries())
}

#[pyfunction]
fn is_cm_fvector(f: Vec<BigInt>) -> PyResult<bool> {
    let f = core::FVector::from_entries_unchecked(f).map_err(err)?;
    Ok(core::is_cm_fvector(&f).is_cm)
}

/// `{"peaks": [{"start", "end"}], "peak_count", "unimodal"}`.
#[pyfunction]
fn peak_profile<'py>(py: Python<'py>, values: Vec<BigInt>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::peak_profile(&values))
}

#[pyfunction]
#[pyo3(signature = (n_peaks, m_start = DEFAULT_M_START, m_limit = DEFAULT_M_LIMIT))]
fn construct_algebraic<'py>(py: Python<'py>, n_peaks: u32, m_start: u64, m_limit: u64) -> PyResult<Bound<'py, PyAny>> {
    let cert = py
        .detach(|| core::construct::algebraic::construct_algebraic(n_peaks, m_start, m_limit))
        .map_err(err)?;
    to_py(py, &Certificate::Algebraic(cert))
}

#[pyfunction]
#[pyo3(signature = (k, r_limit = None))]
fn construct_combinatorial<'py>(py: Python<'py>, k: Vec<u64>, r_limit: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let cert = py
        .detach(|| core::construct::combinatorial::construct_combinatorial(&k, r_limit))
        .map_err(err)?;
    to_py(py, &Certificate::Combinatorial(cert))
}

/// Re-derives a certificate dict; returns `{"ok": bool, "failures": [...]}`.
#[pyfunction]
fn verify_certificate<'py>(cert: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let parsed: Certificate = from_py(cert)?;
    to_py(cert.py(), &core::construct::verify_certificate(&parsed))
}

#[pyfunction]
fn sts(r: u64) -> PyResult<PyTripleSystem> {
    core::sts(r).map(PyTripleSystem).map_err(err)
}

#[pyfunction]
fn is_admissible(r: u64) -> bool {
    core::steiner::is_admissible(r)
}

/// `{"status": "pure"|"not_pure"|"unknown", "witness", "nodes_explored", "budget_hit"}`.
#[pyfunction]
#[pyo3(signature = (f, budget = 20_000_000))]
fn decide_pure<'py>(py: Python<'py>, f: Vec<BigInt>, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let f = core::FVector::new(f).map_err(err)?;
    let v = py.detach(|| core::decide_pure(&f, budget)).map_err(err)?;
    to_py(py, &v)
}

#[pyfunction]
fn b0(r: u64) -> PyResult<u64> {
    core::pure_decide::b0(r).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (r, budget = 20_000_000, sweep = false))]
fn ip_experiment<'py>(py: Python<'py>, r: u64, budget: u64, sweep: bool) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| core::ip_experiment(r, budget, sweep)).map_err(err)?;
    to_py(py, &rep)
}

#[pymodule]
fn purefv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFVector>()?;
    m.add_class::<PyHVector>()?;
    m.add_class::<PyTripleSystem>()?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(macaulay_bound, m)?)?;
    m.add_function(wrap_pyfunction!(kk_bound, m)?)?;
    m.add_function(wrap_pyfunction!(is_o_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(o_sequence_violation, m)?)?;
    m.add_function(wrap_pyfunction!(is_kk_fvector, m)?)?;
    m.add_function(wrap_pyfunction!(f_to_h, m)?)?;
    m.add_function(wrap_pyfunction!(h_to_f, m)?)?;
    m.add_function(wrap_pyfunction!(is_cm_fvector, m)?)?;
    m.add_function(wrap_pyfunction!(peak_profile, m)?)?;
    m.add_function(wrap_pyfunction!(construct_algebraic, m)?)?;
    m.add_function(wrap_pyfunction!(construct_combinatorial, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(sts, m)?)?;
    m.add_function(wrap_pyfunction!(is_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(decide_pure, m)?)?;
    m.add_function(wrap_pyfunction!(b0, m)?)?;
    m.add_function(wrap_pyfunction!(ip_experiment, m)?)?;
    Ok(())
}

//! Python bindings. Structured results (reports, certificates) come back as
//! plain Python objects decoded from the library's JSON.

use masa_core::asymptotics;
use masa_core::report::SuiteReport;
use masa_core::stallings::parse_generators;
use masa_core::suites::{run_suite, SuiteConfig};
use masa_core::{affine, Element, Subgroup, SubgroupGraph, Word};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::{json, Value};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A reduced word in a free group.
#[pyclass(name = "Word", module = "masa", eq, hash, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord(Word);

#[pymethods]
impl PyWord {
    #[new]
    #[pyo3(signature = (text, rank = 2))]
    fn new(text: &str, rank: usize) -> PyResult<Self> {
        Word::parse(text, rank).map(PyWord).map_err(err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    /// Signed generator indices, `a = 1`, `A = -1`, `b = 2`, ...
    #[getter]
    fn letters(&self) -> Vec<i32> {
        self.0.letters().iter().map(|l| l.signed_index()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word({:?}, rank={})", self.0.to_string(), self.0.rank())
    }

    fn __mul__(&self, other: &PyWord) -> PyResult<PyWord> {
        self.0.multiply(&other.0).map(PyWord).map_err(err)
    }

    fn inverse(&self) -> PyWord {
        PyWord(self.0.invert())
    }

    fn pow(&self, k: i64) -> PyWord {
        PyWord(self.0.pow(k))
    }

    /// `(root, e)` with `self = root^e` and `root` not a proper power.
    fn root_power(&self) -> PyResult<(PyWord, usize)> {
        let (r, e) = self.0.root_power().map_err(err)?;
        Ok((PyWord(r), e))
    }
}

/// An element of the group algebra with Gaussian-rational coefficients.
#[pyclass(name = "Element", module = "masa", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyElement(Element);

#[pymethods]
impl PyElement {
    #[new]
    #[pyo3(signature = (text, rank = 2))]
    fn new(text: &str, rank: usize) -> PyResult<Self> {
        Element::parse(text, rank).map(PyElement).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.0.to_string())
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.add(&other.0).map(PyElement).map_err(err)
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.sub(&other.0).map(PyElement).map_err(err)
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.multiply(&other.0).map(PyElement).map_err(err)
    }

    fn adjoint(&self) -> PyElement {
        PyElement(self.0.adjoint())
    }

    /// Exact trace as a string such as `1/2+i`.
    fn trace(&self) -> String {
        self.0.trace().to_string()
    }

    /// Exact `‖x‖₂²` as a string fraction.
    fn norm2_sq(&self) -> String {
        self.0.norm2_sq().to_string()
    }

    /// Expectation onto a finitely generated subgroup.
    fn expect(&self, subgroup: &PySubgroupGraph) -> PyResult<PyElement> {
        self.0.expect(&subgroup.0).map(PyElement).map_err(err)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.to_json())
    }
}

/// Folded subgroup graph of a finitely generated subgroup.
#[pyclass(name = "SubgroupGraph", module = "masa", frozen)]
struct PySubgroupGraph(SubgroupGraph);

#[pymethods]
impl PySubgroupGraph {
    /// `generators` is comma-separated, e.g. `"ab,bb"`.
    #[new]
    #[pyo3(signature = (generators, rank = 2))]
    fn new(generators: &str, rank: usize) -> PyResult<Self> {
        let gens = parse_generators(generators, rank).map_err(err)?;
        SubgroupGraph::build(rank, &gens).map(PySubgroupGraph).map_err(err)
    }

    fn contains(&self, word: &PyWord) -> PyResult<bool> {
        self.0.contains(&word.0).map_err(err)
    }

    fn __contains__(&self, word: &PyWord) -> PyResult<bool> {
        self.contains(word)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    /// `"infinite"` or the finite index as a decimal string.
    fn index(&self) -> String {
        self.0.index().to_string()
    }

    fn free_basis(&self) -> Vec<PyWord> {
        self.0.free_basis().into_iter().map(PyWord).collect()
    }
}

/// Exceptional exponents `m` with `h aᵐ k ∈ ⟨a⟩`.
#[pyfunction]
#[pyo3(signature = (h, k, generator = "a", rank = 2))]
fn exceptional(h: &str, k: &str, generator: &str, rank: usize) -> PyResult<Vec<i64>> {
    let a = Word::parse(generator, rank).map_err(err)?;
    let h = Word::parse(h, rank).map_err(err)?;
    let k = Word::parse(k, rank).map_err(err)?;
    let set = asymptotics::exceptional_exponents(&h, &k, &a).map_err(err)?;
    Ok(set.into_iter().collect())
}

/// Decay certificate `{"K", "exceptions", "witnesses"}` for `(x, y)`.
#[pyfunction]
#[pyo3(signature = (x, y, generator = "a"))]
fn horizon<'py>(py: Python<'py>, x: &PyElement, y: &PyElement, generator: &str) -> PyResult<Bound<'py, PyAny>> {
    let a = Word::parse(generator, x.0.rank()).map_err(err)?;
    let cert = asymptotics::decay_horizon(&x.0, &y.0, &a).map_err(err)?;
    to_py(py, &cert.to_json())
}

/// `φ_k(x, y) = E(x aᵏ y) − E(x) aᵏ E(y)`.
#[pyfunction]
#[pyo3(signature = (x, y, k, generator = "a"))]
fn phi(x: &PyElement, y: &PyElement, k: i64, generator: &str) -> PyResult<PyElement> {
    let a = Word::parse(generator, x.0.rank()).map_err(err)?;
    asymptotics::phi_k(&x.0, &y.0, &a, k).map(PyElement).map_err(err)
}

/// Affine-stage report; `check` is `"malnormal"` or `"icc-trend"`.
#[pyfunction]
#[pyo3(signature = (p, d = 1, check = "malnormal"))]
fn affine_check<'py>(py: Python<'py>, p: u64, d: u32, check: &str) -> PyResult<Bound<'py, PyAny>> {
    let report = match check {
        "malnormal" => affine::check_malnormal(p, d),
        "icc-trend" => affine::check_icc_trend(p, d),
        other => return Err(PyValueError::new_err(format!("unknown check {other:?}"))),
    }
    .map_err(err)?;
    let suite = SuiteReport::new("affine", 0, json!({ "p": p, "d": d }), vec![report]);
    to_py(py, &serde_json::to_value(&suite).map_err(err)?)
}

/// Runs a named suite; `dims` restricts the matrix sizes.
#[pyfunction]
#[pyo3(signature = (name, seed = 0, dims = None, samples = None, matrix_samples = None, restarts = None))]
fn verify<'py>(
    py: Python<'py>,
    name: &str,
    seed: u64,
    dims: Option<Vec<usize>>,
    samples: Option<usize>,
    matrix_samples: Option<usize>,
    restarts: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let d = SuiteConfig::default();
    let cfg = SuiteConfig {
        seed,
        dims: dims.unwrap_or(d.dims.clone()),
        samples: samples.unwrap_or(d.samples),
        matrix_samples: matrix_samples.unwrap_or(d.matrix_samples),
        restarts: restarts.unwrap_or(d.restarts),
        ..d
    };
    let report = py.detach(|| run_suite(name, &cfg)).map_err(err)?;
    to_py(py, &serde_json::to_value(&report).map_err(err)?)
}

#[pymodule]
fn masa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PySubgroupGraph>()?;
    m.add_function(wrap_pyfunction!(exceptional, m)?)?;
    m.add_function(wrap_pyfunction!(horizon, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(affine_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

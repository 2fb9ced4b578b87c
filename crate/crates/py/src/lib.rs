//! Python bindings. Sets are lists of vertex ids; structured results come back
//! as plain dicts and lists, in the same shape as the CLI's JSON output.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use jrt_core::constructions;
use jrt_core::decomposition;
use jrt_core::profiles;
use jrt_core::search::{self, SearchBudget};
use jrt_core::stars::{self, Star};
use jrt_core::structure::{self, AssertLevel, StructureCertificate, StructureOptions};
use jrt_core::sunflowers::{self, DEFAULT_NODE_BUDGET};
use jrt_core::vertex_set::MAX_VERTICES;
use jrt_core::{DivisiblePairParams, Error, JrtParams, VertexSet};

fn err(e: Error) -> PyErr {
    match e {
        Error::InvalidParams(_) | Error::UniverseTooLarge(_) | Error::EdgeOutOfRange { .. } | Error::NotUniform { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(format!("{}: {e}", e.kind())),
    }
}

fn params(r: usize, t: usize) -> PyResult<JrtParams> {
    JrtParams::new(r, t).map_err(err)
}

fn to_set(vertices: &[usize]) -> PyResult<VertexSet> {
    let mut s = VertexSet::EMPTY;
    for &v in vertices {
        if v >= MAX_VERTICES {
            return Err(PyValueError::new_err(format!("vertex {v} is out of range")));
        }
        s.insert(v);
    }
    Ok(s)
}

fn to_sets(sets: &[Vec<usize>]) -> PyResult<Vec<VertexSet>> {
    sets.iter().map(|s| to_set(s)).collect()
}

/// Serialises through JSON so the Python side sees the same shapes as the CLI.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn from_py<T: DeserializeOwned>(py: Python<'_>, value: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = py.import("json")?.call_method1("dumps", (value,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Hypergraph", module = "jrt", frozen, eq)]
#[derive(PartialEq)]
struct PyHypergraph {
    inner: jrt_core::Hypergraph,
}

impl From<jrt_core::Hypergraph> for PyHypergraph {
    fn from(inner: jrt_core::Hypergraph) -> Self {
        PyHypergraph { inner }
    }
}

#[pymethods]
impl PyHypergraph {
    /// Edges are deduplicated and sorted. With `k` set, every edge must have
    /// exactly `k` vertices.
    #[new]
    #[pyo3(signature = (n, edges, k=None))]
    fn new(n: usize, edges: Vec<Vec<usize>>, k: Option<usize>) -> PyResult<Self> {
        let edges = to_sets(&edges)?;
        let inner = match k {
            Some(k) => jrt_core::Hypergraph::uniform(n, k, edges),
            None => jrt_core::Hypergraph::new(n, edges),
        };
        Ok(inner.map_err(err)?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        jrt_core::Hypergraph::from_json(text)
            .map(Into::into)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> Option<usize> {
        self.inner.k()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<usize>> {
        self.inner.edges().iter().map(|e| e.to_vec()).collect()
    }

    fn degree(&self, v: usize) -> usize {
        self.inner.degree(v)
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Hypergraph(n={}, k={:?}, edges={})", self.inner.n(), self.inner.k(), self.inner.len())
    }
}

#[pyclass(name = "Params", module = "jrt", frozen)]
struct PyParams {
    inner: JrtParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(r: usize, t: usize) -> PyResult<Self> {
        Ok(PyParams { inner: params(r, t)? })
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn ell(&self) -> usize {
        self.inner.ell()
    }

    #[getter]
    fn centre_size(&self) -> usize {
        self.inner.centre_size()
    }

    #[getter]
    fn red_size(&self) -> usize {
        self.inner.red_size()
    }

    /// Whether two edges may meet in `s` vertices.
    fn in_profile(&self, s: usize) -> bool {
        self.inner.in_profile(s)
    }

    fn __repr__(&self) -> String {
        format!("Params(r={}, t={})", self.inner.r(), self.inner.t())
    }
}

#[pyfunction]
fn thick_clique(n: usize, k: usize, t: usize) -> PyResult<PyHypergraph> {
    Ok(constructions::thick_clique(n, k, t).map_err(err)?.0.into())
}

#[pyfunction]
fn full_star(n: usize, k: usize, s: usize) -> PyResult<PyHypergraph> {
    Ok(constructions::full_star(n, k, s).map_err(err)?.0.into())
}

#[pyfunction]
fn two_star_gadget(r: usize, t: usize, u: usize) -> PyResult<PyHypergraph> {
    Ok(constructions::two_star_gadget(&params(r, t)?, u).map_err(err)?.hypergraph.into())
}

#[pyfunction]
#[pyo3(signature = (r, t, n, m, seed=0))]
fn random_jrt(r: usize, t: usize, n: usize, m: usize, seed: u64) -> PyResult<PyHypergraph> {
    Ok(constructions::random_jrt(&params(r, t)?, n, m, seed).map_err(err)?.hypergraph.into())
}

#[pyfunction]
fn is_member(h: &PyHypergraph, r: usize, t: usize) -> PyResult<bool> {
    Ok(profiles::is_jrt_member(&params(r, t)?, &h.inner))
}

/// The first violation found, or None for members.
#[pyfunction]
fn membership_violation(py: Python<'_>, h: &PyHypergraph, r: usize, t: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &profiles::check_jrt(&params(r, t)?, &h.inner).err())
}

#[pyfunction]
fn rank_bound_check(py: Python<'_>, t: usize, h: &PyHypergraph) -> PyResult<Py<PyAny>> {
    to_py(py, &profiles::rank_bound_check(t, &h.inner).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (sets, a, b, budget_nodes=DEFAULT_NODE_BUDGET))]
fn find_sunflower(py: Python<'_>, sets: Vec<Vec<usize>>, a: usize, b: usize, budget_nodes: u64) -> PyResult<Py<PyAny>> {
    to_py(py, &sunflowers::find_sunflower(&to_sets(&sets)?, a, b, budget_nodes).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (sets, kernel=None, budget_nodes=DEFAULT_NODE_BUDGET))]
fn sunflower(py: Python<'_>, sets: Vec<Vec<usize>>, kernel: Option<Vec<usize>>, budget_nodes: u64) -> PyResult<Py<PyAny>> {
    let sets = to_sets(&sets)?;
    let sf = match kernel {
        Some(k) => sunflowers::max_sunflower_with_kernel(&sets, to_set(&k)?, budget_nodes),
        None => sunflowers::largest_sunflower(&sets, budget_nodes),
    };
    to_py(py, &sf)
}

#[pyfunction]
fn red_colouring(py: Python<'_>, h: &PyHypergraph, r: usize, t: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &sunflowers::red_colouring(&params(r, t)?, &h.inner).map_err(err)?)
}

#[pyfunction]
fn decompose(py: Python<'_>, q: usize, k: usize, f: Vec<Vec<usize>>, g: Vec<Vec<usize>>) -> PyResult<Py<PyAny>> {
    let p = DivisiblePairParams::new(q, k).map_err(err)?;
    to_py(py, &decomposition::decompose(&p, &to_sets(&f)?, &to_sets(&g)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(name = "core")]
fn star_core(py: Python<'_>, r: usize, t: usize, centre: Vec<usize>, edges: Vec<Vec<usize>>) -> PyResult<Py<PyAny>> {
    let star = Star::new(to_set(&centre)?, to_sets(&edges)?).map_err(err)?;
    to_py(py, &stars::core(&params(r, t)?, &star))
}

#[pyfunction]
fn hat_n(r: usize, t: usize, n: u64, m: u128) -> PyResult<u64> {
    stars::hat_n(&params(r, t)?, n, m).map_err(err)
}

#[pyfunction]
fn extract_stars(py: Python<'_>, h: &PyHypergraph, r: usize, t: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &stars::extract_stars(&params(r, t)?, &h.inner).map_err(err)?)
}

/// Certificate plus pipeline trace. With `hard`, checks that only hold for
/// large `n` are enforced as well.
#[pyfunction]
#[pyo3(signature = (h, r, t, hard=false, budget_nodes=DEFAULT_NODE_BUDGET))]
fn build_structure(py: Python<'_>, h: &PyHypergraph, r: usize, t: usize, hard: bool, budget_nodes: u64) -> PyResult<Py<PyAny>> {
    let opts = StructureOptions {
        assert_level: if hard { AssertLevel::Hard } else { AssertLevel::Soft },
        node_budget: budget_nodes,
    };
    to_py(py, &structure::build_structure_with(&params(r, t)?, &h.inner, &opts).map_err(err)?)
}

#[pyfunction]
fn verify_certificate(py: Python<'_>, h: &PyHypergraph, r: usize, t: usize, certificate: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let c: StructureCertificate = from_py(py, certificate)?;
    to_py(py, &structure::verify_certificate(&params(r, t)?, &h.inner, &c))
}

#[pyfunction]
#[pyo3(signature = (r, t, n, m, budget_nodes=Some(10_000_000), budget_secs=None))]
fn min_max_degree(py: Python<'_>, r: usize, t: usize, n: usize, m: usize, budget_nodes: Option<u64>, budget_secs: Option<u64>) -> PyResult<Py<PyAny>> {
    let budget = SearchBudget {
        nodes: budget_nodes,
        secs: budget_secs,
    };
    let p = params(r, t)?;
    let report = py.detach(|| search::min_max_degree(&p, n, m, &budget)).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (r, t, n, m, canonical=false, budget_nodes=Some(10_000_000)))]
fn extremal_witnesses(py: Python<'_>, r: usize, t: usize, n: usize, m: usize, canonical: bool, budget_nodes: Option<u64>) -> PyResult<Py<PyAny>> {
    let budget = SearchBudget {
        nodes: budget_nodes,
        secs: None,
    };
    let p = params(r, t)?;
    let list = py.detach(|| search::extremal_witnesses(&p, n, m, &budget, canonical)).map_err(err)?;
    to_py(py, &list)
}

/// CSV text with a header row.
#[pyfunction]
#[pyo3(signature = (r, t, ns, budget_nodes=Some(5_000_000)))]
fn phase_scan(py: Python<'_>, r: usize, t: usize, ns: Vec<usize>, budget_nodes: Option<u64>) -> PyResult<String> {
    let budget = SearchBudget {
        nodes: budget_nodes,
        secs: None,
    };
    let p = params(r, t)?;
    let rows = py.detach(|| search::phase_scan(&p, &ns, &budget)).map_err(err)?;
    Ok(search::scan_csv(&rows))
}

#[pymodule]
pub fn jrt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypergraph>()?;
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(thick_clique, m)?)?;
    m.add_function(wrap_pyfunction!(full_star, m)?)?;
    m.add_function(wrap_pyfunction!(two_star_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(random_jrt, m)?)?;
    m.add_function(wrap_pyfunction!(is_member, m)?)?;
    m.add_function(wrap_pyfunction!(membership_violation, m)?)?;
    m.add_function(wrap_pyfunction!(rank_bound_check, m)?)?;
    m.add_function(wrap_pyfunction!(find_sunflower, m)?)?;
    m.add_function(wrap_pyfunction!(sunflower, m)?)?;
    m.add_function(wrap_pyfunction!(red_colouring, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(star_core, m)?)?;
    m.add_function(wrap_pyfunction!(hat_n, m)?)?;
    m.add_function(wrap_pyfunction!(extract_stars, m)?)?;
    m.add_function(wrap_pyfunction!(build_structure, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(min_max_degree, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_witnesses, m)?)?;
    m.add_function(wrap_pyfunction!(phase_scan, m)?)?;
    Ok(())
}

//! Python bindings: graphs, the exact solver, bounds, generators and model
//! exports.

use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use frustration::cli::{export_dot as dot, run_zscore};
use frustration::gen;
use frustration::models::{build_ilp, build_ubqp, export_lp as lp, export_qubo as qubo, IlpOptions};
use frustration::sgraph::{is_balanced, parse_edge_list, serialise, BalanceCertificate};
use frustration::solver::{lower_bound_root, solve_exact, upper_bound_trivial};
use frustration::{oracle, Colouring, FrustrationResult, Sign, SolverOptions};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn colouring(bits: Vec<bool>) -> Colouring {
    Colouring::from_bools(bits)
}

/// Undirected signed graph on nodes `0..n`.
#[pyclass(name = "SignedGraph", module = "pyfrustration", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySignedGraph {
    inner: frustration::SignedGraph,
}

#[pymethods]
impl PySignedGraph {
    /// `edges` holds `(u, v, sign)` triples with sign `+1` or `-1`.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize, i64)>) -> PyResult<Self> {
        let triples = edges
            .into_iter()
            .map(|(u, v, s)| Sign::from_value(s).map(|s| (u, v, s)).ok_or_else(|| value_error(format!("bad sign {s}"))))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = frustration::SignedGraph::new(n, triples).map_err(value_error)?;
        Ok(PySignedGraph { inner })
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PySignedGraph { inner: parse_edge_list(text).map_err(value_error)? })
    }

    fn to_edge_list(&self) -> String {
        serialise(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn m_minus(&self) -> usize {
        self.inner.negative_count()
    }

    fn edges(&self) -> Vec<(usize, usize, i64)> {
        self.inner.edges().iter().map(|e| (e.u, e.v, e.sign.value())).collect()
    }

    fn circuit_rank(&self) -> usize {
        self.inner.circuit_rank()
    }

    fn net_degree(&self, i: usize) -> PyResult<i64> {
        self.inner.net_degree(i).map_err(value_error)
    }

    /// Number of frustrated edges; `colouring[i]` is true for black nodes.
    fn frustration_count(&self, colouring_: Vec<bool>) -> PyResult<usize> {
        self.inner.frustration_count(&colouring(colouring_)).map_err(value_error)
    }

    fn frustrated_edges(&self, colouring_: Vec<bool>) -> PyResult<Vec<(usize, usize, i64)>> {
        let edges = self.inner.frustrated_edges(&colouring(colouring_)).map_err(value_error)?;
        Ok(edges.iter().map(|e| (e.u, e.v, e.sign.value())).collect())
    }

    /// Negates the edges crossing between the marked nodes and the rest.
    fn switch(&self, subset: Vec<bool>) -> PyResult<Self> {
        Ok(PySignedGraph { inner: self.inner.switch(&colouring(subset)).map_err(value_error)? })
    }

    /// `(True, colouring)` or `(False, nodes of a negative cycle)`.
    fn is_balanced(&self) -> (bool, Vec<usize>) {
        match is_balanced(&self.inner) {
            BalanceCertificate::Balanced(x) => (true, x.to_bits().into_iter().map(usize::from).collect()),
            BalanceCertificate::NegativeCycle(c) => (false, c),
        }
    }

    fn __repr__(&self) -> String {
        format!("SignedGraph(n={}, m={}, m_minus={})", self.n(), self.m(), self.m_minus())
    }
}

#[pyclass(name = "SolveResult", module = "pyfrustration", frozen, get_all)]
struct PySolveResult {
    value: usize,
    optimal: bool,
    lower_bound: usize,
    upper_bound: usize,
    colouring: Vec<bool>,
    deletion_set: Vec<(usize, usize, i64)>,
    nodes_explored: u64,
    wall_seconds: f64,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        let optimal = if self.optimal { "True" } else { "False" };
        format!("SolveResult(value={}, optimal={optimal})", self.value)
    }
}

impl From<FrustrationResult> for PySolveResult {
    fn from(r: FrustrationResult) -> Self {
        PySolveResult {
            value: r.value,
            optimal: r.is_optimal(),
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            colouring: r.colouring.as_slice().to_vec(),
            deletion_set: r.deletion_set.iter().map(|e| (e.u, e.v, e.sign.value())).collect(),
            nodes_explored: r.stats.nodes_explored,
            wall_seconds: r.stats.wall_time.as_secs_f64(),
        }
    }
}

fn options(net_degree: bool, fix_max_degree: bool, time_limit: f64, threads: usize, seed: u64) -> PyResult<SolverOptions> {
    if !(time_limit.is_finite() && time_limit > 0.0) {
        return Err(value_error("time_limit must be positive"));
    }
    Ok(SolverOptions {
        use_net_degree_pruning: net_degree,
        use_fixing: fix_max_degree,
        time_limit: Duration::from_secs_f64(time_limit),
        threads,
        seed,
        ..SolverOptions::default()
    })
}

/// Exact frustration index, or bounds if the time limit is reached.
#[pyfunction]
#[pyo3(signature = (graph, net_degree = true, fix_max_degree = true, time_limit = 3600.0, threads = 1, seed = 0))]
fn solve(
    py: Python<'_>,
    graph: &PySignedGraph,
    net_degree: bool,
    fix_max_degree: bool,
    time_limit: f64,
    threads: usize,
    seed: u64,
) -> PyResult<PySolveResult> {
    let opts = options(net_degree, fix_max_degree, time_limit, threads, seed)?;
    let g = &graph.inner;
    let r = py.detach(|| solve_exact(g, &opts)).map_err(value_error)?;
    Ok(r.into())
}

/// Exhaustive enumeration; small graphs only.
#[pyfunction]
fn brute_force(graph: &PySignedGraph) -> PyResult<PySolveResult> {
    Ok(oracle::brute_force(&graph.inner).map_err(value_error)?.into())
}

/// `(lower, upper)` from negative-cycle packing and `min(m⁻, m/2, circuit rank)`.
#[pyfunction]
fn bounds(graph: &PySignedGraph) -> (usize, usize) {
    (lower_bound_root(&graph.inner), upper_bound_trivial(&graph.inner))
}

#[pyfunction]
fn erdos_renyi(n: usize, m: usize, m_minus: usize, seed: u64) -> PyResult<PySignedGraph> {
    Ok(PySignedGraph { inner: gen::erdos_renyi(n, m, m_minus, seed).map_err(value_error)? })
}

#[pyfunction]
fn barabasi_albert(n: usize, k: usize, m_minus: usize, seed: u64) -> PyResult<PySignedGraph> {
    Ok(PySignedGraph { inner: gen::barabasi_albert(n, k, m_minus, seed).map_err(value_error)? })
}

#[pyfunction]
fn random_regular(n: usize, d: usize, m_minus: usize, seed: u64) -> PyResult<PySignedGraph> {
    Ok(PySignedGraph { inner: gen::random_regular(n, d, m_minus, seed).map_err(value_error)? })
}

#[pyfunction]
fn balanced_random(n: usize, m: usize, seed: u64) -> PyResult<PySignedGraph> {
    Ok(PySignedGraph { inner: gen::balanced_random(n, m, seed).map_err(value_error)? })
}

#[pyfunction]
fn antibalanced_complete(n: usize) -> PySignedGraph {
    PySignedGraph { inner: gen::antibalanced_complete(n) }
}

/// Same skeleton and negative count, signs placed uniformly at random.
#[pyfunction]
fn reshuffle(graph: &PySignedGraph, seed: u64) -> PySignedGraph {
    PySignedGraph { inner: gen::reshuffle(&graph.inner, seed) }
}

/// `(L(G), mean, sd, z)` over `reps` reshuffles; `z` is None when sd is 0.
#[pyfunction]
#[pyo3(signature = (graph, reps, seed = 0, time_limit = 3600.0))]
fn zscore(py: Python<'_>, graph: &PySignedGraph, reps: usize, seed: u64, time_limit: f64) -> PyResult<(usize, f64, f64, Option<f64>)> {
    let opts = options(true, true, time_limit, 1, 0)?;
    let g = &graph.inner;
    let report = py.detach(|| run_zscore(g, reps, seed, &opts)).map_err(value_error)?;
    let original = report.original.as_ref().map_or(0, |r| r.value);
    let agg = &report.aggregates[0];
    Ok((original, agg.mean, agg.sd, report.z))
}

#[pyfunction]
#[pyo3(signature = (graph, net_degree = false, triangles = false, fix_max_degree = false))]
fn export_lp(graph: &PySignedGraph, net_degree: bool, triangles: bool, fix_max_degree: bool) -> PyResult<String> {
    lp(&build_ilp(&graph.inner, IlpOptions { net_degree, triangles, fix_max_degree })).map_err(value_error)
}

#[pyfunction]
fn export_qubo(graph: &PySignedGraph) -> PyResult<String> {
    qubo(&build_ubqp(&graph.inner)).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (graph, colouring = None))]
fn export_dot(graph: &PySignedGraph, colouring: Option<Vec<bool>>) -> PyResult<String> {
    let x = colouring.map(Colouring::from_bools);
    if let Some(x) = &x {
        graph.inner.frustration_count(x).map_err(value_error)?;
    }
    Ok(dot(&graph.inner, x.as_ref()))
}

#[pymodule]
fn pyfrustration(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignedGraph>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(barabasi_albert, m)?)?;
    m.add_function(wrap_pyfunction!(random_regular, m)?)?;
    m.add_function(wrap_pyfunction!(balanced_random, m)?)?;
    m.add_function(wrap_pyfunction!(antibalanced_complete, m)?)?;
    m.add_function(wrap_pyfunction!(reshuffle, m)?)?;
    m.add_function(wrap_pyfunction!(zscore, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    m.add_function(wrap_pyfunction!(export_qubo, m)?)?;
    m.add_function(wrap_pyfunction!(export_dot, m)?)?;
    Ok(())
}

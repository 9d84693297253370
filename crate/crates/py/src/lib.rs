//! Python bindings: graphs, partitions, quality functions, generators,
//! detectors and experiment configs.

use std::path::PathBuf;

use modnmf_core as core;
use modnmf_core::objectives::{KlVariant, SigmaChoice};
use modnmf_core::solvers::SolverConfig;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Simple undirected graph on nodes `0..n`.
#[pyclass(name = "Graph", module = "modnmf", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGraph(core::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        core::Graph::from_edge_list(&edges, n)
            .map(Self)
            .map_err(py_err)
    }

    /// Reads a whitespace-separated edge list.
    #[staticmethod]
    #[pyo3(signature = (path, n=None))]
    fn read(path: PathBuf, n: Option<usize>) -> PyResult<Self> {
        core::io::read_edge_list(path, n).map(Self).map_err(py_err)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        core::io::write_edge_list(path, &self.0).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.0.n() && v < self.0.n() && self.0.has_edge(u, v)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.0.n(), self.0.m())
    }
}

/// Hard partition with labels `1..=c`, all communities nonempty.
#[pyclass(name = "Partition", module = "modnmf", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPartition(core::Partition);

#[pymethods]
impl PyPartition {
    #[new]
    fn new(labels: Vec<usize>) -> PyResult<Self> {
        core::Partition::new(labels).map(Self).map_err(py_err)
    }

    /// Relabels arbitrary integer labels to `1..=c` by first appearance.
    #[staticmethod]
    fn from_raw(labels: Vec<i64>) -> Self {
        Self(core::Partition::from_raw_labels(&labels))
    }

    #[staticmethod]
    #[pyo3(signature = (path, n=None))]
    fn read(path: PathBuf, n: Option<usize>) -> PyResult<Self> {
        core::io::load_partition_file(path, n)
            .map(Self)
            .map_err(py_err)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        core::io::save_partition_file(path, &self.0).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn c(&self) -> usize {
        self.0.c()
    }

    fn labels(&self) -> Vec<usize> {
        self.0.labels().to_vec()
    }

    fn sizes(&self) -> Vec<usize> {
        self.0.sizes().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Partition(n={}, c={})", self.0.n(), self.0.c())
    }
}

#[pyfunction]
fn modularity_q(g: &PyGraph, p: &PyPartition) -> PyResult<f64> {
    core::objectives::modularity_q(&g.0, &p.0).map_err(py_err)
}

#[pyfunction]
fn modularity_q_star(g: &PyGraph, p: &PyPartition) -> PyResult<f64> {
    core::objectives::modularity_q_star(&g.0, &p.0).map_err(py_err)
}

#[pyfunction]
fn modularity_density(g: &PyGraph, p: &PyPartition) -> PyResult<f64> {
    core::objectives::modularity_density(&g.0, &p.0).map_err(py_err)
}

#[pyfunction]
fn q_rb(g: &PyGraph, p: &PyPartition, gamma: f64) -> PyResult<f64> {
    core::objectives::q_rb(&g.0, &p.0, gamma).map_err(py_err)
}

#[pyfunction]
fn q_afg(g: &PyGraph, p: &PyPartition, r: f64) -> PyResult<f64> {
    core::objectives::q_afg(&g.0, &p.0, r).map_err(py_err)
}

/// KL objective at `p` with the constant null model of the chosen variant:
/// `"base"`, `"rb"` (uses `param` as gamma) or `"afg"` (uses `param` as r).
#[pyfunction]
#[pyo3(signature = (g, p, variant="base", param=1.0))]
fn kl_objective(g: &PyGraph, p: &PyPartition, variant: &str, param: f64) -> PyResult<f64> {
    let variant = match variant {
        "base" => KlVariant::Base,
        "rb" => KlVariant::Rb { gamma: param },
        "afg" => KlVariant::Afg { r: param },
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    let null = core::objectives::constant_null(&g.0, variant).map_err(py_err)?;
    core::objectives::kl_objective(&g.0, &null, &p.0.membership()).map_err(py_err)
}

fn solver(communities: usize, iters: usize, runs: usize, seed: u64) -> SolverConfig {
    SolverConfig::new(communities)
        .with_iters(iters)
        .with_runs(runs)
        .with_seed(seed)
}

/// Returns `(partition, final_objective)` of the best of `runs` restarts.
#[pyfunction]
#[pyo3(signature = (g, communities, iters=500, runs=10, seed=0))]
fn detect_q_nmf(
    g: &PyGraph,
    communities: usize,
    iters: usize,
    runs: usize,
    seed: u64,
) -> PyResult<(PyPartition, f64)> {
    let cfg = solver(communities, iters, runs, seed);
    let (p, trace) = core::solvers::detect_q_nmf(&g.0, &cfg).map_err(py_err)?;
    Ok((PyPartition(p), trace.final_objective))
}

/// Like `detect_q_nmf`; `sigma` is `"auto"`, `"auto+X"` or a number.
#[pyfunction]
#[pyo3(signature = (g, communities, iters=500, runs=10, seed=0, sigma="auto"))]
fn detect_d_nmf(
    g: &PyGraph,
    communities: usize,
    iters: usize,
    runs: usize,
    seed: u64,
    sigma: &str,
) -> PyResult<(PyPartition, f64)> {
    let sigma: SigmaChoice = sigma.parse().map_err(py_err)?;
    let cfg = solver(communities, iters, runs, seed);
    let (p, trace) = core::solvers::detect_d_nmf(&g.0, &cfg, sigma).map_err(py_err)?;
    Ok((PyPartition(p), trace.final_objective))
}

#[pyfunction]
fn fast_greedy(g: &PyGraph) -> PyResult<PyPartition> {
    core::solvers::fast_greedy(&g.0)
        .map(PyPartition)
        .map_err(py_err)
}

#[pyfunction]
fn nmi(truth: &PyPartition, inferred: &PyPartition) -> PyResult<f64> {
    core::metrics::nmi(&truth.0, &inferred.0).map_err(py_err)
}

#[pyfunction]
fn pearson(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<f64> {
    core::metrics::pearson(&xs, &ys).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (sizes, theta_in, theta_out, seed=0))]
fn sample_sbm(
    sizes: Vec<usize>,
    theta_in: f64,
    theta_out: f64,
    seed: u64,
) -> PyResult<(PyGraph, PyPartition)> {
    let params =
        core::generators::SbmParams::planted(sizes, theta_in, theta_out).map_err(py_err)?;
    let (g, p) = core::generators::sample_sbm(&params, seed);
    Ok((PyGraph(g), PyPartition(p)))
}

#[pyfunction]
#[pyo3(signature = (z_out, seed=0))]
fn sample_gn(z_out: f64, seed: u64) -> PyResult<(PyGraph, PyPartition)> {
    let (g, p) = core::generators::sample_gn(z_out, seed).map_err(py_err)?;
    Ok((PyGraph(g), PyPartition(p)))
}

#[pyfunction]
#[pyo3(signature = (n, mu, k=20.0, maxk=50, minc=20, maxc=100, seed=0))]
fn sample_lfr(
    n: usize,
    mu: f64,
    k: f64,
    maxk: usize,
    minc: usize,
    maxc: usize,
    seed: u64,
) -> PyResult<(PyGraph, PyPartition)> {
    let params = core::generators::LfrParams::new(n, mu, k, maxk, minc, maxc).map_err(py_err)?;
    let (g, p) = core::generators::sample_lfr(&params, seed).map_err(py_err)?;
    Ok((PyGraph(g), PyPartition(p)))
}

type ExperimentResult = (String, Vec<(String, String, Option<f64>)>, usize);

/// Runs an experiment config file. Returns `(records_csv, summary, failures)`
/// where `summary` maps `"metric key"` to a float or `None`.
#[pyfunction]
fn run_experiment(path: PathBuf) -> PyResult<ExperimentResult> {
    let cfg = core::experiments::ExperimentConfig::from_file(path).map_err(py_err)?;
    let out = core::experiments::run_experiment(&cfg);
    let summary = out
        .summary
        .iter()
        .map(|s| (s.metric.clone(), s.key.clone(), s.value.clone().ok()))
        .collect();
    Ok((out.records_csv(), summary, out.failures()))
}

#[pymodule]
fn modnmf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPartition>()?;
    m.add_function(wrap_pyfunction!(modularity_q, m)?)?;
    m.add_function(wrap_pyfunction!(modularity_q_star, m)?)?;
    m.add_function(wrap_pyfunction!(modularity_density, m)?)?;
    m.add_function(wrap_pyfunction!(q_rb, m)?)?;
    m.add_function(wrap_pyfunction!(q_afg, m)?)?;
    m.add_function(wrap_pyfunction!(kl_objective, m)?)?;
    m.add_function(wrap_pyfunction!(detect_q_nmf, m)?)?;
    m.add_function(wrap_pyfunction!(detect_d_nmf, m)?)?;
    m.add_function(wrap_pyfunction!(fast_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(sample_sbm, m)?)?;
    m.add_function(wrap_pyfunction!(sample_gn, m)?)?;
    m.add_function(wrap_pyfunction!(sample_lfr, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}

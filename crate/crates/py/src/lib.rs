//! Python bindings. Vertices and colours are 0-based integers; edges are
//! `(tail, head, colour)` tuples.

use std::collections::HashMap;
use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rainbow_core::detectors::{hitting_times, RSearch};
use rainbow_core::experiments::{self as exp, ExperimentReport, Harness};
use rainbow_core::mappings::{self, RandomMapping};
use rainbow_core::matching::{build_colour_bigraph, find_colour_assignment, find_k_witness};
use rainbow_core::process::{self, ColourCount, DEFAULT_SEED};
use rainbow_core::solver::{self, DecideOptions, DecisionMode, RainbowDecision, RootChoice};
use rainbow_core::{ColouredEdge, VertexId};

type Edge = (u32, u32, u32);

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn colours_arg(colours: Option<usize>) -> ColourCount {
    colours.map_or(ColourCount::Auto, ColourCount::Fixed)
}

fn tuple(e: ColouredEdge) -> Edge {
    (e.tail.0, e.head.0, e.colour.0)
}

#[pyclass(name = "ColouredDigraph", module = "rainbow_py", skip_from_py_object)]
#[derive(Clone)]
struct PyDigraph {
    inner: rainbow_core::ColouredDigraph,
}

#[pymethods]
impl PyDigraph {
    #[new]
    #[pyo3(signature = (n, colours, edges = Vec::new()))]
    fn new(n: usize, colours: usize, edges: Vec<Edge>) -> PyResult<Self> {
        let edges = edges.into_iter().map(|(t, h, c)| ColouredEdge::new(t, h, c));
        let inner = rainbow_core::ColouredDigraph::from_edges(n, colours, edges).map_err(value_err)?;
        Ok(Self { inner })
    }

    fn add_edge(&mut self, tail: u32, head: u32, colour: u32) -> PyResult<()> {
        self.inner
            .add_edge(ColouredEdge::new(tail, head, colour))
            .map_err(value_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn colours(&self) -> usize {
        self.inner.colour_count()
    }

    fn edges(&self) -> Vec<Edge> {
        self.inner.edges().iter().copied().map(tuple).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn in_degrees(&self) -> Vec<u32> {
        self.inner.in_degrees().to_vec()
    }

    fn zero_in_vertices(&self) -> Vec<u32> {
        self.inner.zero_in_vertices().into_iter().map(|v| v.0).collect()
    }

    fn distinct_colours(&self) -> usize {
        self.inner.distinct_colours()
    }

    /// A root from which every vertex is reachable, if any.
    fn spanning_arborescence_root(&self) -> Option<u32> {
        self.inner.has_spanning_arborescence().map(|v| v.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "ColouredDigraph(n={}, colours={}, edges={})",
            self.inner.vertex_count(),
            self.inner.colour_count(),
            self.inner.edge_count()
        )
    }
}

#[pyclass(name = "ProcessTrace", module = "rainbow_py")]
struct PyTrace {
    inner: rainbow_core::ProcessTrace,
}

#[pymethods]
impl PyTrace {
    #[new]
    #[pyo3(signature = (n, colours = None, seed = DEFAULT_SEED))]
    fn new(n: usize, colours: Option<usize>, seed: u64) -> PyResult<Self> {
        let cfg = rainbow_core::ProcessConfig::new(n, colours_arg(colours), seed);
        let inner = rainbow_core::ProcessTrace::lazy(cfg).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn colours(&self) -> usize {
        self.inner.colours()
    }

    fn __len__(&self) -> usize {
        self.inner.total_len()
    }

    /// The first `m` edges.
    fn prefix(&mut self, m: usize) -> PyResult<Vec<Edge>> {
        if m > self.inner.total_len() {
            return Err(value_err(format!("prefix {m} exceeds n(n-1)")));
        }
        Ok(self.inner.prefix(m).iter().copied().map(tuple).collect())
    }

    fn graph_at(&mut self, m: usize) -> PyResult<PyDigraph> {
        if m > self.inner.total_len() {
            return Err(value_err(format!("prefix {m} exceeds n(n-1)")));
        }
        Ok(PyDigraph {
            inner: self.inner.graph_at(m),
        })
    }

    /// `{"m_C", "m_Z", "m_A", "m_R", "r_decision_mode"}`; undefined times are `None`.
    #[pyo3(signature = (r_mode = "exact", budget_ms = None))]
    fn hitting_times(&mut self, py: Python<'_>, r_mode: &str, budget_ms: Option<u64>) -> PyResult<Py<PyAny>> {
        let mut search = RSearch::new(r_mode.parse::<DecisionMode>().map_err(value_err)?);
        if let Some(ms) = budget_ms {
            search.budget = Some(Duration::from_millis(ms));
        }
        let t = hitting_times(&mut self.inner, &search);
        let d = pyo3::types::PyDict::new(py);
        d.set_item("m_C", t.m_c)?;
        d.set_item("m_Z", t.m_z)?;
        d.set_item("m_A", t.m_a)?;
        d.set_item("m_R", t.m_r)?;
        d.set_item("r_decision_mode", t.r_decision_mode.to_string())?;
        Ok(d.into_any().unbind())
    }
}

/// Result of `decide`: `status` is "found", "absent" or "unknown".
#[pyclass(name = "Decision", module = "rainbow_py", get_all)]
struct PyDecision {
    status: String,
    root: Option<u32>,
    edges: Vec<Edge>,
}

#[pymethods]
impl PyDecision {
    fn __bool__(&self) -> bool {
        self.status == "found"
    }

    fn __repr__(&self) -> String {
        format!(
            "Decision(status={:?}, root={:?}, edges={})",
            self.status,
            self.root,
            self.edges.len()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (g, mode = "auto", root = None, budget_ms = None))]
fn decide(g: &PyDigraph, mode: &str, root: Option<u32>, budget_ms: Option<u64>) -> PyResult<PyDecision> {
    let mut opts = DecideOptions::new(mode.parse::<DecisionMode>().map_err(value_err)?);
    if let Some(r) = root {
        if r as usize >= g.inner.vertex_count() {
            return Err(value_err(format!("root {r} out of range")));
        }
        opts.root = RootChoice::Fixed(VertexId(r));
    }
    if let Some(ms) = budget_ms {
        opts.budget = Some(Duration::from_millis(ms));
    }
    Ok(match solver::decide(&g.inner, &opts) {
        RainbowDecision::Found { certificate, .. } => PyDecision {
            status: "found".into(),
            root: Some(certificate.root.0),
            edges: certificate.edges().map(tuple).collect(),
        },
        RainbowDecision::Absent { .. } => PyDecision {
            status: "absent".into(),
            root: None,
            edges: Vec::new(),
        },
        RainbowDecision::NotFound(_) | RainbowDecision::Unknown => PyDecision {
            status: "unknown".into(),
            root: None,
            edges: Vec::new(),
        },
    })
}

/// `("assignment", {vertex: colour})` or `("violation", (S, T))` with `|T| = |S| - 1`.
#[pyfunction]
fn colour_assignment(py: Python<'_>, g: &PyDigraph, root: u32) -> PyResult<(String, Py<PyAny>)> {
    if root as usize >= g.inner.vertex_count() {
        return Err(value_err(format!("root {root} out of range")));
    }
    let b = build_colour_bigraph(&g.inner);
    match find_colour_assignment(&b, VertexId(root)) {
        Ok(a) => {
            let map: HashMap<u32, u32> = a.pairs().map(|(v, c)| (v.0, c.0)).collect();
            Ok(("assignment".into(), map.into_pyobject(py)?.into_any().unbind()))
        }
        Err(_) => {
            let w = find_k_witness(&b, VertexId(root)).expect("a failed assignment has a Hall violator");
            let s: Vec<u32> = w.vertices.iter().map(|v| v.0).collect();
            let t: Vec<u32> = w.colours.iter().map(|c| c.0).collect();
            Ok(("violation".into(), (s, t).into_pyobject(py)?.into_any().unbind()))
        }
    }
}

/// Random mapping as the list `f` where `f[v]` is the in-neighbour of `v`.
#[pyfunction]
#[pyo3(signature = (n, loopless = false, seed = DEFAULT_SEED))]
fn sample_mapping(n: usize, loopless: bool, seed: u64) -> PyResult<Vec<u32>> {
    if n == 0 || (loopless && n < 2) {
        return Err(value_err("need n >= 1 (n >= 2 when loopless)"));
    }
    Ok(mappings::sample_mapping(n, loopless, seed).in_neighbours().to_vec())
}

/// Components of a mapping as `(cycle, trees)` vertex lists.
#[pyfunction]
fn cycle_components(f: Vec<u32>) -> PyResult<Vec<(Vec<u32>, Vec<u32>)>> {
    let n = f.len();
    if f.iter().any(|&u| u as usize >= n) {
        return Err(value_err("mapping values must be below len(f)"));
    }
    let loopless = f.iter().enumerate().all(|(v, &u)| u as usize != v);
    let m = RandomMapping::from_in_neighbours(f, loopless);
    Ok(mappings::cycle_components(&m)
        .into_iter()
        .map(|c| (c.cycle, c.trees))
        .collect())
}

#[pyfunction]
fn epsilon(n: usize) -> f64 {
    process::epsilon(n)
}

/// Colour count used when `colours` is omitted.
#[pyfunction]
fn auto_colours(n: usize) -> usize {
    ColourCount::Auto.resolve(n)
}

#[pyfunction]
fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    process::derive_trial_seed(master_seed, trial_index)
}

#[pyclass(name = "Report", module = "rainbow_py")]
struct PyReport {
    inner: ExperimentReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn columns(&self) -> Vec<String> {
        self.inner.columns.clone()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<String>> {
        self.inner.rows.clone()
    }

    #[getter]
    fn summary(&self) -> HashMap<String, f64> {
        self.inner.summary.iter().cloned().collect()
    }

    /// `{name: (passed, detail)}`
    #[getter]
    fn checks(&self) -> HashMap<String, (bool, String)> {
        self.inner
            .checks
            .iter()
            .map(|c| (c.name.clone(), (c.passed, c.detail.clone())))
            .collect()
    }

    fn all_checks_pass(&self) -> bool {
        self.inner.all_checks_pass()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

/// Runs one of `theorem`, `poisson`, `coupon`, `degree`, `mapping`.
#[pyfunction]
#[pyo3(signature = (
    kind, n, trials = 100, seed = DEFAULT_SEED, c = 0.0, colours = None,
    r_mode = "exact", subsets = 50, loopless = false, threads = None, budget_ms = 10_000,
))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    py: Python<'_>,
    kind: &str,
    n: usize,
    trials: usize,
    seed: u64,
    c: f64,
    colours: Option<usize>,
    r_mode: &str,
    subsets: usize,
    loopless: bool,
    threads: Option<usize>,
    budget_ms: u64,
) -> PyResult<PyReport> {
    let h = Harness::new(seed).with_threads(threads);
    let colours = colours_arg(colours);
    let r_mode = r_mode.parse::<DecisionMode>().map_err(value_err)?;
    let run = || match kind {
        "theorem" => exp::run_theorem_experiment(
            &h,
            &exp::TheoremParams {
                n,
                trials,
                colours,
                r_mode,
                budget: Some(Duration::from_millis(budget_ms)),
            },
        ),
        "poisson" => exp::run_poisson_experiment(&h, &exp::PoissonParams { n, c, trials, colours }),
        "coupon" => exp::run_coupon_experiment(&h, &exp::CouponParams { n, trials, colours }),
        "degree" => exp::run_degree_property_experiment(
            &h,
            &exp::DegreeParams {
                n,
                trials,
                subsets,
                colours,
            },
        ),
        "mapping" => exp::run_mapping_experiment(
            &h,
            &exp::MappingParams {
                n,
                samples: trials,
                loopless,
            },
        ),
        other => Err(exp::ExperimentError::InvalidParameter(format!(
            "unknown experiment {other:?}"
        ))),
    };
    let inner = py.detach(run).map_err(value_err)?;
    Ok(PyReport { inner })
}

#[pymodule]
fn rainbow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    m.add_class::<PyDigraph>()?;
    m.add_class::<PyTrace>()?;
    m.add_class::<PyDecision>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(colour_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(sample_mapping, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_components, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(auto_colours, m)?)?;
    m.add_function(wrap_pyfunction!(derive_trial_seed, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}

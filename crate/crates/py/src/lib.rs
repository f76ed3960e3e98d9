//! Python bindings: reductions, verification suites, generators and a
//! checkpointable engine handle.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use redux_core::engines::{engine_new, BaselineEngine, Checkpoint, DynamicEngine};
use redux_core::gen::{random_cnf, random_graph, random_weighted_graph};
use redux_core::model::{
    graph_to_text, parse_cnf, parse_graph, Answer, Instance, Mode, ProblemKind, QueryOp,
    SetSystem, UpdateOp,
};
use redux_core::runner::{self, RunError, RunRequest};
use redux_core::threesum::gen_tripartite_instance;
use redux_core::verify::{run_suite, Suite};
use redux_core::Error;

fn core_err(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Domain(_) | Error::ModeViolation(_) | Error::Promise(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    mode.parse().map_err(core_err)
}

fn parse_kind(name: &str) -> PyResult<ProblemKind> {
    ProblemKind::ALL
        .into_iter()
        .find(|k| k.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown problem kind '{name}'")))
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn answer_to_py<'py>(py: Python<'py>, a: Answer) -> PyResult<Bound<'py, PyAny>> {
    Ok(match a {
        Answer::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Answer::Int(v) => v.into_pyobject(py)?.into_any(),
        Answer::Absent => py.None().into_bound(py),
    })
}

/// Run a named reduction on input text and return its report as a dict.
#[pyfunction]
#[pyo3(signature = (reduction, input, mode=None, delta=None, seed=0, oracle_check=false))]
fn run_reduction<'py>(
    py: Python<'py>,
    reduction: &str,
    input: &str,
    mode: Option<&str>,
    delta: Option<String>,
    seed: u64,
    oracle_check: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let req = RunRequest {
        reduction: reduction.into(),
        input: input.into(),
        mode: mode.map(parse_mode).transpose()?,
        delta,
        seed,
        oracle_check,
        timing: false,
    };
    let report = py
        .detach(|| runner::run_reduction(&req))
        .map_err(|e| match e {
            RunError::Usage(m) => PyValueError::new_err(m),
            RunError::Failed(e) => core_err(e),
        })?;
    json_to_py(py, &serde_json::to_string(&report).expect("serializable"))
}

/// Run a property suite and return its summary as a dict.
#[pyfunction]
#[pyo3(signature = (suite, trials=20, seed=0, max_n=None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    trials: u64,
    seed: u64,
    max_n: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(core_err)?;
    let summary = py.detach(|| run_suite(suite, trials, seed, max_n));
    json_to_py(py, &serde_json::to_string(&summary).expect("serializable"))
}

#[pyfunction]
fn reduction_names() -> Vec<&'static str> {
    runner::reduction_names()
}

#[pyfunction]
fn problem_kinds() -> Vec<&'static str> {
    ProblemKind::ALL.iter().map(|k| k.name()).collect()
}

/// Brute-force satisfiability of a DIMACS formula.
#[pyfunction]
fn oracle_sat(dimacs: &str) -> PyResult<bool> {
    let f = parse_cnf(dimacs).map_err(core_err)?;
    redux_core::oracles::oracle_sat(&f).map_err(core_err)
}

/// A triangle `(u, v, w, weight)` of minimum weight if `weighted`, else any.
#[pyfunction]
#[pyo3(signature = (graph, weighted=false))]
fn oracle_triangle(graph: &str, weighted: bool) -> PyResult<Option<(usize, usize, usize, u64)>> {
    let g = parse_graph(graph).map_err(core_err)?;
    let hit = redux_core::oracles::oracle_triangle(&g, weighted).map_err(core_err)?;
    Ok(hit.map(|h| (h.u, h.v, h.w, h.weight)))
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn gen_cnf(n: usize, seed: u64) -> String {
    random_cnf(&mut ChaCha8Rng::seed_from_u64(seed), n).to_dimacs()
}

#[pyfunction]
#[pyo3(signature = (n, p=0.3, directed=false, max_weight=None, seed=0))]
fn gen_graph(n: usize, p: f64, directed: bool, max_weight: Option<u64>, seed: u64) -> PyResult<String> {
    if !(0.0..=1.0).contains(&p) || max_weight == Some(0) {
        return Err(PyValueError::new_err(
            "need 0 <= p <= 1 and a positive weight bound",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match max_weight {
        Some(w) => random_weighted_graph(&mut rng, n, p, w, directed),
        None => random_graph(&mut rng, n, p, directed),
    };
    Ok(graph_to_text(&g))
}

#[pyfunction]
#[pyo3(signature = (n_c, r, density=0.5, seed=0))]
fn gen_tripartite(n_c: usize, r: usize, density: f64, seed: u64) -> PyResult<String> {
    gen_tripartite_instance(n_c, r, density, seed)
        .map(|inst| inst.to_text())
        .map_err(core_err)
}

/// A baseline dynamic engine. Checkpoints are returned as integer handles.
#[pyclass(module = "redux")]
struct Engine {
    inner: BaselineEngine,
    checkpoints: Vec<Checkpoint>,
}

impl Engine {
    fn build(kind: &str, mode: &str, inst: Instance) -> PyResult<Self> {
        let inner = engine_new(parse_kind(kind)?, parse_mode(mode)?, inst).map_err(core_err)?;
        Ok(Engine {
            inner,
            checkpoints: Vec::new(),
        })
    }

    fn update(&mut self, op: UpdateOp) -> PyResult<()> {
        self.inner.update(op).map_err(core_err)
    }
}

#[pymethods]
impl Engine {
    /// Engine over a graph in edge-list text.
    #[new]
    fn new(kind: &str, mode: &str, graph: &str) -> PyResult<Self> {
        let g = parse_graph(graph).map_err(core_err)?;
        Self::build(kind, mode, g.into())
    }

    /// Engine over a set system: `sets` are member lists, `scope` set ids.
    #[staticmethod]
    #[pyo3(signature = (kind, mode, universe, sets, scope=Vec::new()))]
    fn sets(
        kind: &str,
        mode: &str,
        universe: usize,
        sets: Vec<Vec<usize>>,
        scope: Vec<usize>,
    ) -> PyResult<Self> {
        let mut sys = SetSystem::new(universe);
        for members in sets {
            sys.push_set(members).map_err(core_err)?;
        }
        for id in scope {
            sys.add_to_scope(id).map_err(core_err)?;
        }
        Self::build(kind, mode, sys.into())
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode().as_str()
    }

    #[pyo3(signature = (u, v, weight=None))]
    fn insert_edge(&mut self, u: usize, v: usize, weight: Option<u64>) -> PyResult<()> {
        self.update(UpdateOp::InsertEdge { u, v, weight })
    }

    fn delete_edge(&mut self, u: usize, v: usize) -> PyResult<()> {
        self.update(UpdateOp::delete(u, v))
    }

    fn activate(&mut self, v: usize) -> PyResult<()> {
        self.update(UpdateOp::ActivateNode(v))
    }

    fn deactivate(&mut self, v: usize) -> PyResult<()> {
        self.update(UpdateOp::DeactivateNode(v))
    }

    fn insert_set(&mut self, members: Vec<usize>) -> PyResult<()> {
        self.update(UpdateOp::InsertSet(members))
    }

    fn intersect_sets(&mut self, a: usize, b: usize) -> PyResult<()> {
        self.update(UpdateOp::IntersectSets(a, b))
    }

    fn add_to_scope(&mut self, id: usize) -> PyResult<()> {
        self.update(UpdateOp::AddToScope(id))
    }

    fn remove_from_scope(&mut self, id: usize) -> PyResult<()> {
        self.update(UpdateOp::RemoveFromScope(id))
    }

    /// Ask the engine's query. Parameterised kinds take their arguments
    /// positionally: the count bound, `k`, or `(set, element)`.
    #[pyo3(signature = (*args))]
    fn query<'py>(&mut self, py: Python<'py>, args: Vec<u64>) -> PyResult<Bound<'py, PyAny>> {
        use ProblemKind::*;
        let arg = |i: usize| {
            args.get(i).copied().ok_or_else(|| {
                PyValueError::new_err(format!("{} query needs {} argument(s)", self.kind(), i + 1))
            })
        };
        let q = match self.inner.kind() {
            StSubConn => QueryOp::StConnected,
            ConnSub => QueryOp::InducedConnected,
            StReach => QueryOp::StReachable,
            ReachCount => QueryOp::ReachCountLessThan(arg(0)?),
            StrongConnectivity => QueryOp::StronglyConnected,
            TwoScc => QueryOp::MoreThanTwoSccs,
            ApproxSccCount => QueryOp::SccCount2VsK(arg(0)?),
            MaxScc => QueryOp::MaxSccSize,
            SetReach => QueryOp::AllStReachable,
            Diameter => QueryOp::Diameter,
            StShortestPath => QueryOp::StDistance,
            PerfectMatching => QueryOp::HasPerfectMatching,
            WeightedMatching => QueryOp::MaxWeightPmWeight,
            ShortAugFreeMatching => QueryOp::KAugFreeMatchingSize(arg(0)? as usize),
            Pagh => QueryOp::Member(arg(0)? as usize, arg(1)? as usize),
            EmptyPagh => QueryOp::IsEmpty(arg(0)? as usize),
            SubsetUnion => QueryOp::UnionIsUniverse,
        };
        let a = self.inner.query(q).map_err(core_err)?;
        answer_to_py(py, a)
    }

    fn checkpoint(&mut self) -> usize {
        self.checkpoints.push(self.inner.checkpoint());
        self.checkpoints.len() - 1
    }

    fn rollback(&mut self, handle: usize) -> PyResult<()> {
        let cp = *self
            .checkpoints
            .get(handle)
            .ok_or_else(|| PyValueError::new_err(format!("no checkpoint {handle}")))?;
        self.inner.rollback(cp).map_err(core_err)
    }

    fn counters(&self) -> (u64, u64, u64, u64) {
        let c = self.inner.counters();
        (c.preprocess_units, c.updates, c.queries, c.rollback_ops)
    }

    fn digest(&self) -> String {
        self.inner.digest()
    }

    fn __repr__(&self) -> String {
        format!("Engine(kind={:?}, mode={:?})", self.kind(), self.mode())
    }
}

#[pymodule]
fn redux(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_names, m)?)?;
    m.add_function(wrap_pyfunction!(problem_kinds, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_sat, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(gen_cnf, m)?)?;
    m.add_function(wrap_pyfunction!(gen_graph, m)?)?;
    m.add_function(wrap_pyfunction!(gen_tripartite, m)?)?;
    m.add_class::<Engine>()?;
    Ok(())
}

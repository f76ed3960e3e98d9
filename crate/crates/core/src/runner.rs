//! Runs one named reduction on a text input and builds its JSON report.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::apsp::{min_weight_triangle_via_bwm, min_weight_triangle_via_stsp};
use crate::engines::{Baseline, EngineFactory};
use crate::error::Error;
use crate::model::{graph_to_text, parse_cnf, parse_graph, sha256_hex, CostCounters, Mode};
use crate::oracles::{oracle_sat, oracle_triangle};
use crate::seth::{parse_delta, run_seth, SethConfig, SethReduction};
use crate::threesum::{
    brute_force_pairs, list_pairs, pairs_to_triangles, parse_tripartite, DecrementalProbe,
    PairList, ProbeBackend, SubConnProbe,
};
use crate::triangle::{run_triangle, TriangleConfig, TriangleReduction};

/// Exit statuses of the command-line driver.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const MISMATCH: i32 = 2;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Seth(SethReduction),
    Triangle(TriangleReduction),
    MinWeightTriangle { via_bwm: bool },
    ThreeSum { triangles: bool },
}

impl Family {
    pub fn from_name(name: &str) -> Option<Self> {
        if let Some(r) = SethReduction::from_name(name) {
            return Some(Family::Seth(r));
        }
        if let Some(r) = TriangleReduction::from_name(name) {
            return Some(Family::Triangle(r));
        }
        Some(match name {
            "mwt-stsp" => Family::MinWeightTriangle { via_bwm: false },
            "mwt-bwm" => Family::MinWeightTriangle { via_bwm: true },
            "3sum-listpairs" => Family::ThreeSum { triangles: false },
            "3sum-triangles" => Family::ThreeSum { triangles: true },
            _ => return None,
        })
    }

    pub fn supported_modes(&self) -> &'static [Mode] {
        match self {
            Family::Seth(r) => r.supported_modes(),
            Family::Triangle(r) => r.supported_modes(),
            Family::MinWeightTriangle { .. } => &Mode::ALL,
            Family::ThreeSum { .. } => &[Mode::Incremental, Mode::Decremental],
        }
    }

    pub fn default_mode(&self) -> Mode {
        match self {
            Family::MinWeightTriangle { .. } => Mode::Decremental,
            Family::ThreeSum { .. } => Mode::Incremental,
            _ => self.supported_modes()[0],
        }
    }
}

/// Every reduction name the runner accepts.
pub fn reduction_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = SethReduction::all().iter().map(|r| r.name()).collect();
    names.extend(TriangleReduction::ALL.iter().map(|r| r.name()));
    names.extend(["mwt-stsp", "mwt-bwm", "3sum-listpairs", "3sum-triangles"]);
    names
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub reduction: String,
    pub input: String,
    pub mode: Option<Mode>,
    pub delta: Option<String>,
    pub seed: u64,
    pub oracle_check: bool,
    pub timing: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub reduction: String,
    pub mode: Mode,
    pub instance_digest: String,
    pub answer: Value,
    /// Absent without `--oracle-check`.
    pub oracle_answer: Option<Value>,
    pub counters: CostCounters,
    pub seed: u64,
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn mismatch(&self) -> bool {
        self.oracle_answer.as_ref().is_some_and(|o| *o != self.answer)
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatch() {
            exit::MISMATCH
        } else {
            exit::OK
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    Usage(String),
    Failed(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => exit::USAGE,
            RunError::Failed(_) => exit::FAILURE,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "usage error: {m}"),
            RunError::Failed(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Failed(e)
    }
}

struct Outcome {
    /// Digest of the parsed input in canonical text form.
    digest: String,
    answer: Value,
    oracle: Option<Value>,
    counters: CostCounters,
}

pub fn run_reduction(req: &RunRequest) -> Result<Report, RunError> {
    let family = Family::from_name(&req.reduction).ok_or_else(|| {
        RunError::Usage(format!(
            "unknown reduction '{}'; expected one of {}",
            req.reduction,
            reduction_names().join(", ")
        ))
    })?;
    let mode = req.mode.unwrap_or(family.default_mode());
    if !family.supported_modes().contains(&mode) {
        return Err(RunError::Usage(format!(
            "{} does not support {mode} mode",
            req.reduction
        )));
    }
    if req.delta.is_some() && !matches!(family, Family::Seth(_)) {
        return Err(RunError::Usage(format!(
            "--delta applies to SAT reductions only, not {}",
            req.reduction
        )));
    }
    let factory: Arc<dyn EngineFactory> = Arc::new(Baseline);
    let start = Instant::now();
    let out = match family {
        Family::Seth(r) => run_sat(r, req, mode, factory)?,
        Family::Triangle(r) => {
            let g = parse_graph(&req.input)?;
            let cfg = TriangleConfig {
                seed: req.seed,
                ..TriangleConfig::new(mode)
            };
            let o = run_triangle(r, &g, &cfg, factory)?;
            let oracle = req
                .oracle_check
                .then(|| oracle_triangle(&g, false).map(|h| json!(h.is_some())))
                .transpose()?;
            Outcome {
                digest: sha256_hex(graph_to_text(&g).as_bytes()),
                answer: json!(o.found),
                oracle,
                counters: o.counters,
            }
        }
        Family::MinWeightTriangle { via_bwm } => {
            let g = parse_graph(&req.input)?;
            let o = if via_bwm {
                min_weight_triangle_via_bwm(&g, mode, factory)?
            } else {
                min_weight_triangle_via_stsp(&g, mode, factory)?
            };
            let oracle = req
                .oracle_check
                .then(|| oracle_triangle(&g, true).map(|h| json!(h.map(|h| h.weight))))
                .transpose()?;
            Outcome {
                digest: sha256_hex(graph_to_text(&g).as_bytes()),
                answer: json!(o.min_weight),
                oracle,
                counters: o.counters,
            }
        }
        Family::ThreeSum { triangles } => run_threesum(triangles, req, mode, factory)?,
    };
    let elapsed = start.elapsed();
    Ok(Report {
        reduction: req.reduction.clone(),
        mode,
        instance_digest: out.digest,
        answer: out.answer,
        oracle_answer: out.oracle,
        counters: out.counters,
        seed: req.seed,
        elapsed_ms: req.timing.then_some(elapsed.as_millis() as u64),
    })
}

fn run_sat(
    r: SethReduction,
    req: &RunRequest,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<Outcome, RunError> {
    let f = parse_cnf(&req.input)?;
    let delta = req.delta.as_deref().map(parse_delta).transpose()?;
    let cfg = SethConfig {
        delta,
        ..SethConfig::new(mode)
    };
    let o = run_seth(r, &f, &cfg, factory)?;
    let oracle = req.oracle_check.then(|| oracle_sat(&f)).transpose()?;
    Ok(Outcome {
        digest: sha256_hex(f.to_dimacs().as_bytes()),
        answer: json!(o.satisfiable),
        oracle: oracle.map(|b| json!(b)),
        counters: o.counters,
    })
}

fn run_threesum(
    triangles: bool,
    req: &RunRequest,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<Outcome, RunError> {
    let inst = parse_tripartite(&req.input)?;
    let mut probe: Box<dyn ProbeBackend> = if mode == Mode::Decremental {
        Box::new(DecrementalProbe::new(&inst, factory)?)
    } else {
        Box::new(SubConnProbe::new(&inst, factory)?)
    };
    let out = list_pairs(&inst, probe.as_mut(), inst.delta)?;
    let render = |pairs: Option<&[(usize, usize)]>| match pairs {
        None => json!("overflow"),
        Some(p) if triangles => json!(pairs_to_triangles(&inst, p)),
        Some(p) => json!(p),
    };
    let answer = match &out.result {
        PairList::Pairs(p) => render(Some(p)),
        PairList::Overflow => render(None),
    };
    let oracle = req.oracle_check.then(|| {
        let pairs = brute_force_pairs(&inst);
        render((pairs.len() <= inst.delta).then_some(&pairs[..]))
    });
    Ok(Outcome {
        digest: sha256_hex(inst.to_text().as_bytes()),
        answer,
        oracle,
        counters: out.counters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(reduction: &str, input: &str) -> RunRequest {
        RunRequest {
            reduction: reduction.into(),
            input: input.into(),
            mode: None,
            delta: None,
            seed: 0,
            oracle_check: true,
            timing: false,
        }
    }

    const K3: &str = "3 3 undirected\n0 1\n1 2\n0 2\n";

    #[test]
    fn triangle_report() {
        let r = run_reduction(&req("tri-streach", K3)).unwrap();
        assert_eq!(r.answer, json!(true));
        assert_eq!(r.oracle_answer, Some(json!(true)));
        assert_eq!(r.exit_code(), exit::OK);
        assert_eq!(r.elapsed_ms, None);
    }

    #[test]
    fn unsat_cnf_via_ssr() {
        let mut q = req("ssr", "p cnf 1 2\n1 0\n-1 0\n");
        q.delta = Some("1/2".into());
        let r = run_reduction(&q).unwrap();
        assert_eq!(r.answer, json!(false));
        assert!(!r.mismatch());
    }

    #[test]
    fn usage_errors() {
        let e = run_reduction(&req("nosuch", "")).unwrap_err();
        assert_eq!(e.exit_code(), exit::USAGE);
        let mut q = req("tri-pp", K3);
        q.mode = Some(Mode::Decremental);
        assert_eq!(run_reduction(&q).unwrap_err().exit_code(), exit::USAGE);
        let e = run_reduction(&req("tri-streach", "x 1 undirected")).unwrap_err();
        assert_eq!(e.exit_code(), exit::FAILURE);
    }

    #[test]
    fn every_name_resolves() {
        for name in reduction_names() {
            let f = Family::from_name(name).unwrap();
            assert!(f.supported_modes().contains(&f.default_mode()), "{name}");
        }
    }
}

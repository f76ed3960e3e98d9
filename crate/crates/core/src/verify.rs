//! Randomized property suites: every reduction and engine against the
//! brute-force oracles, with exact counter checks.
//!
//! Trial `i` of a suite draws from the ChaCha8 stream `i` of the suite
//! seed, so trials are independent of scheduling and reproducible.

use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::apsp::{min_weight_triangle_via_bwm, min_weight_triangle_via_stsp};
use crate::engines::{engine_new, Baseline, Checkpoint, DynamicEngine, EngineFactory};
use crate::error::{Error, Result};
use crate::gen::{random_cnf, random_graph, random_instance_for, random_query, random_update};
use crate::inter::{WrapperEngine, WrapperKind};
use crate::model::{Answer, Graph, Instance, Mode, ProblemKind, QueryOp};
use crate::oracles::{in_triangle, kaug_size_is_plausible, oracle_query, oracle_sat, oracle_triangle};
use crate::seth::{run_seth, sat_via_ssr, split_size, Delta, SethConfig, SethReduction};
use crate::threesum::{
    brute_force_pairs, gen_tripartite_instance, list_pairs, DecrementalProbe, PairList,
    ProbeBackend, SubConnProbe,
};
use crate::triangle::{
    bpm17_stage_sizes, run_triangle, triangle_via_pp, TriangleConfig, TriangleReduction,
};

/// Updates, queries, checkpoints and rollbacks per random trace.
pub const TRACE_STEPS: usize = 40;

fn base() -> Arc<dyn EngineFactory> {
    Arc::new(Baseline)
}

/// The rng of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One property evaluation inside a trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub property: &'static str,
    pub ok: bool,
    /// The failure was a counter bound, not a wrong answer.
    pub bound_violation: bool,
    pub detail: Option<String>,
}

impl Check {
    fn pass(property: &'static str) -> Self {
        Check {
            property,
            ok: true,
            bound_violation: false,
            detail: None,
        }
    }

    fn fail(property: &'static str, detail: String) -> Self {
        Check {
            property,
            ok: false,
            bound_violation: false,
            detail: Some(detail),
        }
    }

    fn bound(property: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        Check {
            property,
            ok,
            bound_violation: !ok,
            detail: (!ok).then(detail),
        }
    }

    fn expect(property: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Check::pass(property)
        } else {
            Check::fail(property, detail())
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PropertyTally {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub bound_violations: u64,
    /// Tolerated share of failures; zero for exact properties.
    pub max_failure_rate: f64,
    pub first_failure: Option<String>,
}

impl PropertyTally {
    pub fn holds(&self) -> bool {
        let total = self.passed + self.failed;
        self.failed as f64 <= self.max_failure_rate * total as f64
    }
}

/// Properties judged by rate rather than per check.
fn tolerance(property: &str) -> f64 {
    match property {
        "triangle.pp_false_positive_rate" => 0.01,
        _ => 0.0,
    }
}

/// Folds checks into per-property tallies, in first-seen order.
pub fn tally(checks: impl IntoIterator<Item = Check>) -> Vec<PropertyTally> {
    let mut out: Vec<PropertyTally> = Vec::new();
    for c in checks {
        let pos = match out.iter().position(|t| t.name == c.property) {
            Some(p) => p,
            None => {
                out.push(PropertyTally {
                    name: c.property,
                    passed: 0,
                    failed: 0,
                    bound_violations: 0,
                    max_failure_rate: tolerance(c.property),
                    first_failure: None,
                });
                out.len() - 1
            }
        };
        let t = &mut out[pos];
        if c.ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            t.bound_violations += c.bound_violation as u64;
            if t.first_failure.is_none() {
                t.first_failure = c.detail;
            }
        }
    }
    out
}

/// Whether `got` is a correct answer to `q` on `inst`.
pub fn answer_is_correct(inst: &Instance, q: QueryOp, got: &Result<Answer>) -> bool {
    match (oracle_query(inst, q), got) {
        (Ok(Some(want)), Ok(have)) => want == *have,
        (Ok(None), Ok(Answer::Int(size))) => match (q, inst.as_graph()) {
            (QueryOp::KAugFreeMatchingSize(k), Some(g)) => {
                kaug_size_is_plausible(g, k, *size as usize).unwrap_or(false)
            }
            _ => false,
        },
        (Err(Error::Promise(_)), Err(Error::Promise(_))) => true,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Seth,
    Triangle,
    Apsp,
    ThreeSum,
    Engines,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "seth", "triangle", "apsp", "threesum", "engines"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Seth => "seth",
            Suite::Triangle => "triangle",
            Suite::Apsp => "apsp",
            Suite::ThreeSum => "threesum",
            Suite::Engines => "engines",
        }
    }

    /// Largest instance parameter used when none is given.
    pub fn default_max_n(self) -> usize {
        match self {
            Suite::Seth => 12,
            Suite::Triangle => 40,
            Suite::Apsp => 24,
            Suite::ThreeSum => 32,
            Suite::Engines | Suite::All => 8,
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Seth,
                Suite::Triangle,
                Suite::Apsp,
                Suite::ThreeSum,
                Suite::Engines,
            ],
            one => vec![one],
        }
    }

    fn trial(self, rng: &mut ChaCha8Rng, max_n: usize) -> Vec<Check> {
        match self {
            Suite::Seth => seth_trial(rng, max_n),
            Suite::Triangle => {
                let mut checks = triangle_trial(rng, max_n);
                checks.extend(bpm17_threshold_trial(rng, max_n));
                checks.extend(pp_trial(rng, max_n));
                checks
            }
            Suite::Apsp => apsp_trial(rng, max_n),
            Suite::ThreeSum => threesum_trial(rng, max_n),
            Suite::Engines => {
                let mut checks = Vec::new();
                for kind in ProblemKind::ALL {
                    let mode = Mode::ALL[rng.random_range(0..3)];
                    checks.extend(rollback_trace(kind, mode, rng, max_n, TRACE_STEPS));
                }
                for w in WrapperKind::ALL {
                    let mode = Mode::ALL[rng.random_range(0..3)];
                    checks.extend(wrapper_trace(w, mode, rng, max_n, TRACE_STEPS));
                }
                checks
            }
            Suite::All => unreachable!("expanded by parts()"),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "seth" => Suite::Seth,
            "triangle" => Suite::Triangle,
            "apsp" => Suite::Apsp,
            "threesum" => Suite::ThreeSum,
            "engines" => Suite::Engines,
            other => return Err(Error::domain(format!("unknown suite '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SuiteSummary {
    pub suite: &'static str,
    pub trials: u64,
    pub seed: u64,
    /// `None` means each part's default.
    pub max_n: Option<usize>,
    pub properties: Vec<PropertyTally>,
    pub all_passed: bool,
    pub warning: Option<String>,
}

/// Runs `trials` trials of every part of `suite`, in parallel, and
/// assembles the tallies in trial order.
pub fn run_suite(suite: Suite, trials: u64, seed: u64, max_n: Option<usize>) -> SuiteSummary {
    let mut properties = Vec::new();
    for part in suite.parts() {
        let n = max_n.unwrap_or(part.default_max_n());
        let per_trial: Vec<Vec<Check>> = (0..trials)
            .into_par_iter()
            .map(|trial| part.trial(&mut trial_rng(seed, trial), n))
            .collect();
        properties.extend(tally(per_trial.into_iter().flatten()));
    }
    let warning = (trials == 0).then(|| "zero trials: the suite passes vacuously".to_string());
    SuiteSummary {
        suite: suite.name(),
        trials,
        seed,
        max_n,
        all_passed: properties.iter().all(PropertyTally::holds),
        properties,
        warning,
    }
}

/// Every SETH reduction in every supported mode against `oracle_sat`, and
/// the exact ssr counters on unsatisfiable formulas.
pub fn seth_trial(rng: &mut impl Rng, max_n: usize) -> Vec<Check> {
    let n = rng.random_range(1..=max_n.max(1));
    let f = random_cnf(rng, n);
    let expected = match oracle_sat(&f) {
        Ok(sat) => sat,
        Err(e) => return vec![Check::fail("seth.equivalence", format!("oracle: {e}"))],
    };
    let mut checks = Vec::new();
    for red in SethReduction::all() {
        for &mode in red.supported_modes() {
            let got = run_seth(red, &f, &SethConfig::new(mode), base()).map(|o| o.satisfiable);
            checks.push(Check::expect("seth.equivalence", got == Ok(expected), || {
                format!(
                    "{} {mode}: got {got:?}, want {expected}\n{}",
                    red.name(),
                    f.to_dimacs()
                )
            }));
        }
    }
    if !expected {
        let delta = Delta::new(1, 2);
        match sat_via_ssr(&f, Some(delta), Mode::Full, base()) {
            Ok(out) => {
                let stages = 1u64 << (n - split_size(n, delta));
                let updates_cap = 2 * stages * (f.clause_count() as u64 + 2);
                checks.push(Check::bound(
                    "seth.ssr_counters",
                    out.counters.queries == stages && out.counters.updates <= updates_cap,
                    || {
                        format!(
                            "queries {} (want {stages}), updates {} (cap {updates_cap})",
                            out.counters.queries, out.counters.updates
                        )
                    },
                ));
            }
            Err(e) => checks.push(Check::fail("seth.ssr_counters", e.to_string())),
        }
    }
    checks
}

/// Sparse graphs with average degree between 0.5 and 4, or (one time in
/// three) a dense random bipartite graph, which is triangle-free. Denser
/// inputs almost always put a triangle on vertex 0 and end every
/// reduction after one stage.
fn random_simple_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
    let n = rng.random_range(1..=max_n.max(1));
    if rng.random_bool(1.0 / 3.0) {
        let p = rng.random_range(0.2..0.8);
        let left = rng.random_range(0..=n);
        let mut g = Graph::undirected(n);
        for u in 0..left {
            for v in left..n {
                if rng.random_bool(p) {
                    g.add_edge(u, v).expect("fresh pair");
                }
            }
        }
        return g;
    }
    let p = (rng.random_range(0.5..4.0) / n as f64).min(1.0);
    random_graph(rng, n, p, false)
}

/// Every deterministic triangle reduction in every supported mode against
/// `oracle_triangle`, witness verification, and the decremental tree
/// accounting.
pub fn triangle_trial(rng: &mut impl Rng, max_n: usize) -> Vec<Check> {
    let g = random_simple_graph(rng, max_n);
    let text = || crate::model::graph_to_text(&g);
    let expected = oracle_triangle(&g, false).map(|h| h.is_some());
    let mut checks = Vec::new();
    for red in TriangleReduction::ALL
        .into_iter()
        .filter(|r| r.is_deterministic())
    {
        for &mode in red.supported_modes() {
            let out = run_triangle(red, &g, &TriangleConfig::new(mode), base());
            let ok = match (&out, &expected) {
                (Ok(o), Ok(want)) => {
                    o.found == *want && o.witness.is_some() == o.found
                        && o.witness.is_none_or(|w| w.verify(&g))
                }
                _ => false,
            };
            checks.push(Check::expect("triangle.equivalence", ok, || {
                format!("{} {mode}: got {out:?}, want {expected:?}\n{}", red.name(), text())
            }));
            if red == TriangleReduction::StReachDecremental {
                if let Ok(o) = &out {
                    let cap = 4 * (2 * g.node_count() as u64).saturating_sub(2);
                    let ops = o.counters.updates + o.counters.rollback_ops;
                    checks.push(Check::bound("triangle.dec_tree_accounting", ops <= cap, || {
                        format!("{ops} tree operations exceed {cap}\n{}", text())
                    }));
                }
            }
        }
    }
    checks
}

/// Per-stage 17-aug-free matching sizes: `4n-1` exactly for triangle
/// vertices, at most `4n-2` otherwise.
pub fn bpm17_threshold_trial(rng: &mut impl Rng, max_n: usize) -> Vec<Check> {
    let g = random_simple_graph(rng, max_n);
    let n = g.node_count();
    let mut checks = Vec::new();
    for mode in Mode::ALL {
        let sizes = match bpm17_stage_sizes(&g, mode, base()) {
            Ok(s) => s,
            Err(e) => {
                checks.push(Check::fail("triangle.bpm17_threshold", e.to_string()));
                continue;
            }
        };
        for (x, &size) in sizes.iter().enumerate() {
            let hit = in_triangle(&g, x).unwrap_or(false);
            let ok = if hit {
                size == 4 * n - 1
            } else {
                size + 2 <= 4 * n
            };
            checks.push(Check::expect("triangle.bpm17_threshold", ok, || {
                format!(
                    "{mode} stage {x} (in triangle: {hit}): size {size}, n {n}\n{}",
                    crate::model::graph_to_text(&g)
                )
            }));
        }
    }
    checks
}

/// The randomized PP reduction: no false negatives, false positives
/// tallied by rate.
pub fn pp_trial(rng: &mut impl Rng, max_n: usize) -> Vec<Check> {
    let g = random_simple_graph(rng, max_n);
    let seed = rng.random();
    let expected = oracle_triangle(&g, false).map(|h| h.is_some());
    match (triangle_via_pp(&g, base(), seed), expected) {
        (Ok(out), Ok(true)) => vec![Check::expect(
            "triangle.pp_no_false_negatives",
            out.found && out.witness.is_some_and(|w| w.verify(&g)),
            || format!("seed {seed}: missed a triangle\n{}", crate::model::graph_to_text(&g)),
        )],
        (Ok(out), Ok(false)) => vec![Check::expect(
            "triangle.pp_false_positive_rate",
            !out.found,
            || format!("seed {seed}: false positive\n{}", crate::model::graph_to_text(&g)),
        )],
        (out, want) => vec![Check::fail(
            "triangle.pp_no_false_negatives",
            format!("got {out:?}, oracle {want:?}"),
        )],
    }
}

/// Both minimum-weight triangle routes in both partially dynamic modes
/// against the brute-force minimum, with `queries = n`, `updates <= 2n`.
pub fn apsp_trial(rng: &mut impl Rng, max_n: usize) -> Vec<Check> {
    let n = rng.random_range(1..=max_n.max(1));
    let p = rng.random_range(0.1..0.7);
    let g = crate::gen::random_weighted_graph(rng, n, p, 10, false);
    let expected = oracle_triangle(&g, true).map(|h| h.map(|h| h.weight));
    let mut checks = Vec::new();
    for mode in [Mode::Incremental, Mode::Decremental] {
        for (route, out) in [
            ("stsp", min_weight_triangle_via_stsp(&g, mode, base())),
            ("bwm", min_weight_triangle_via_bwm(&g, mode, base())),
        ] {
            let got = out.as_ref().map(|o| o.min_weight);
            checks.push(Check::expect(
                "apsp.equivalence",
                matches!((&got, &expected), (Ok(a), Ok(b)) if a == b),
                || {
                    format!(
                        "{route} {mode}: got {got:?}, want {expected:?}\n{}",
                        crate::model::graph_to_text(&g)
                    )
                },
            ));
            if let Ok(o) = out {
                let c = o.counters;
                checks.push(Check::bound(
                    "apsp.counters",
                    c.queries == n as u64 && c.updates <= 2 * n as u64,
                    || format!("{route} {mode}: {c:?} with n = {n}"),
                ));
            }
        }
    }
    checks
}

/// Pair listing with both probes against brute force, with the probe-call
/// and activation bounds.
pub fn threesum_trial(rng: &mut impl Rng, max_nc: usize) -> Vec<Check> {
    let n_c = rng.random_range(1..=max_nc.max(1));
    let r = rng.random_range(1..=8);
    let density = rng.random_range(0.0..=1.0);
    let seed = rng.random();
    let inst = match gen_tripartite_instance(n_c, r, density, seed) {
        Ok(i) => i,
        Err(e) => return vec![Check::fail("threesum.listing", e.to_string())],
    };
    let params = || format!("n_C {n_c}, R {r}, density {density}, seed {seed}");
    let expected = brute_force_pairs(&inst);
    let levels = inst.levels() as u64;
    let mut checks = Vec::new();
    let probes: [(&str, Result<Box<dyn ProbeBackend>>); 2] = [
        (
            "subconn",
            SubConnProbe::new(&inst, base()).map(|p| Box::new(p) as Box<dyn ProbeBackend>),
        ),
        (
            "decremental",
            DecrementalProbe::new(&inst, base()).map(|p| Box::new(p) as Box<dyn ProbeBackend>),
        ),
    ];
    for (name, probe) in probes {
        let out = probe.and_then(|mut p| list_pairs(&inst, p.as_mut(), inst.delta));
        let out = match out {
            Ok(o) => o,
            Err(e) => {
                checks.push(Check::fail("threesum.listing", format!("{name}: {e}")));
                continue;
            }
        };
        match &out.result {
            PairList::Pairs(pairs) => {
                checks.push(Check::expect("threesum.listing", *pairs == expected, || {
                    format!("{name}: listed {} pairs, want {} ({})", pairs.len(), expected.len(), params())
                }));
                let cap = inst.side as u64 + 2 * pairs.len() as u64 * (levels + 1);
                checks.push(Check::bound("threesum.probe_calls", out.probe_calls <= cap, || {
                    format!("{name}: {} probe calls exceed {cap} ({})", out.probe_calls, params())
                }));
                if name == "subconn" {
                    let cap = 2 * (levels + 1) * inst.ab.len() as u64;
                    checks.push(Check::bound(
                        "threesum.activations",
                        out.counters.updates <= cap,
                        || format!("{} activations exceed {cap} ({})", out.counters.updates, params()),
                    ));
                }
            }
            PairList::Overflow => {
                checks.push(Check::expect(
                    "threesum.listing",
                    expected.len() > inst.delta,
                    || format!("{name}: overflow with {} pairs ({})", expected.len(), params()),
                ));
            }
        }
    }
    checks
}

/// Checkpoint entries of a trace, innermost last.
struct Saved {
    cp: Checkpoint,
    digest: String,
}

/// A random update/query/checkpoint/rollback trace on a baseline engine of
/// `kind`. Every rollback must restore the digest recorded at its
/// checkpoint, stale checkpoints must be refused, and every answer must
/// match the oracle.
pub fn rollback_trace(
    kind: ProblemKind,
    mode: Mode,
    rng: &mut impl Rng,
    max_n: usize,
    steps: usize,
) -> Vec<Check> {
    let inst = random_instance_for(kind, rng, max_n);
    let mut e = match engine_new(kind, mode, inst) {
        Ok(e) => e,
        Err(err) => return vec![Check::fail("engines.rollback", format!("{kind}: {err}"))],
    };
    let mut checks = Vec::new();
    let first = e.checkpoint();
    let mut saved = vec![Saved {
        cp: first,
        digest: e.digest(),
    }];
    for _ in 0..steps {
        match rng.random_range(0..10) {
            0..=3 => {
                if let Some(op) = random_update(kind, mode, &e.instance(), rng) {
                    if let Err(err) = e.update(op.clone()) {
                        checks.push(Check::fail("engines.rollback", format!("{kind} {mode} {op:?}: {err}")));
                    }
                }
            }
            4..=5 => {
                let inst = e.instance();
                let q = random_query(kind, &inst, rng);
                let got = e.query(q);
                checks.push(Check::expect(
                    "engines.oracle_agreement",
                    answer_is_correct(&inst, q, &got),
                    || format!("{kind} {q:?}: got {got:?}\n{}", inst.to_text()),
                ));
            }
            6..=7 => {
                let cp = e.checkpoint();
                saved.push(Saved {
                    cp,
                    digest: e.digest(),
                });
            }
            _ => {
                let idx = rng.random_range(0..saved.len());
                checks.push(roll_back_to(&mut e, &mut saved, idx, kind));
            }
        }
    }
    if !saved.is_empty() {
        checks.push(roll_back_to(&mut e, &mut saved, 0, kind));
    }
    checks
}

/// Rolls back to `saved[idx]`, checks the digest, and checks that a
/// checkpoint taken after it is now refused.
fn roll_back_to(
    e: &mut dyn DynamicEngine,
    saved: &mut Vec<Saved>,
    idx: usize,
    kind: ProblemKind,
) -> Check {
    let dropped = saved.split_off(idx);
    let target = &dropped[0];
    if let Err(err) = e.rollback(target.cp) {
        return Check::fail("engines.rollback", format!("{kind}: {err}"));
    }
    let digest = e.digest();
    if digest != target.digest {
        return Check::fail("engines.rollback", format!("{kind}: digest differs after rollback"));
    }
    if let Some(stale) = dropped.get(1) {
        if e.rollback(stale.cp).is_ok() {
            return Check::fail("engines.rollback", format!("{kind}: stale checkpoint accepted"));
        }
    }
    // The restored state stays reachable through a fresh checkpoint.
    let cp = e.checkpoint();
    saved.push(Saved { cp, digest });
    Check::pass("engines.rollback")
}

/// A random trace on wrapper `w` beside a direct baseline engine of the
/// outer kind: equal answers (also against the oracle), one inner update
/// per outer update at most with `inner + suppressed = outer`, inner sizes
/// within the stated bounds, and rollbacks restoring both sides.
pub fn wrapper_trace(
    w: WrapperKind,
    mode: Mode,
    rng: &mut impl Rng,
    max_n: usize,
    steps: usize,
) -> Vec<Check> {
    let kind = w.outer_kind();
    let inst = random_instance_for(kind, rng, max_n);
    let name = format!("{w:?} {mode}");
    let built = WrapperEngine::new(w, mode, inst.clone(), &Baseline)
        .and_then(|wr| Ok((wr, engine_new(kind, mode, inst.clone())?)));
    let (mut wrapped, mut direct) = match built {
        Ok(pair) => pair,
        Err(e) => return vec![Check::fail("wrappers.agreement", format!("{name}: {e}"))],
    };
    let mut checks = vec![size_check(&wrapped, &name)];
    let mut saved: Vec<(Checkpoint, Checkpoint, String, String)> = Vec::new();
    for _ in 0..steps {
        match rng.random_range(0..10) {
            0..=3 => {
                let Some(op) = random_update(kind, mode, &direct.instance(), rng) else {
                    continue;
                };
                let before = wrapped.inner().counters().updates;
                let res = wrapped.update(op.clone()).and_then(|_| direct.update(op.clone()));
                if let Err(e) = res {
                    checks.push(Check::fail("wrappers.agreement", format!("{name} {op:?}: {e}")));
                    continue;
                }
                let inner = wrapped.inner().counters().updates;
                let outer = wrapped.counters().updates;
                checks.push(Check::bound(
                    "wrappers.fan_out",
                    inner - before <= 1 && inner + wrapped.suppressed_updates() == outer,
                    || {
                        format!(
                            "{name} {op:?}: inner {before}->{inner}, suppressed {}, outer {outer}",
                            wrapped.suppressed_updates()
                        )
                    },
                ));
                checks.push(size_check(&wrapped, &name));
            }
            4..=6 => {
                let inst = direct.instance();
                let q = random_query(kind, &inst, rng);
                let (a, b) = (wrapped.query(q), direct.query(q));
                checks.push(Check::expect(
                    "wrappers.agreement",
                    a == b && answer_is_correct(&inst, q, &a),
                    || format!("{name} {q:?}: wrapper {a:?}, direct {b:?}\n{}", inst.to_text()),
                ));
            }
            7..=8 => {
                let (cw, cd) = (wrapped.checkpoint(), direct.checkpoint());
                saved.push((cw, cd, wrapped.digest(), wrapped.inner().digest()));
            }
            _ => {
                if saved.is_empty() {
                    continue;
                }
                let idx = rng.random_range(0..saved.len());
                let (cw, cd, outer, inner) = saved[idx].clone();
                saved.truncate(idx);
                let res = wrapped.rollback(cw).and_then(|_| direct.rollback(cd));
                let ok = res.is_ok()
                    && wrapped.digest() == outer
                    && direct.digest() == outer
                    && wrapped.inner().digest() == inner;
                checks.push(Check::expect("wrappers.rollback", ok, || {
                    format!("{name}: rollback did not restore both sides ({res:?})")
                }));
            }
        }
    }
    checks
}

fn size_check(wrapped: &WrapperEngine, name: &str) -> Check {
    let (max_nodes, max_edges) = wrapped.wrapper().size_bounds(&wrapped.instance());
    let inner = wrapped.inner().instance();
    let Some(h) = inner.as_graph() else {
        return Check::fail("wrappers.size_bounds", format!("{name}: inner instance is not a graph"));
    };
    let (nodes, edges) = (h.node_count(), h.edge_count());
    Check::bound(
        "wrappers.size_bounds",
        nodes <= max_nodes && edges <= max_edges,
        || format!("{name}: inner {nodes} nodes / {edges} edges, bounds {max_nodes} / {max_edges}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_keeps_first_failure_and_order() {
        let t = tally([
            Check::pass("b"),
            Check::fail("a", "first".into()),
            Check::fail("a", "second".into()),
            Check::bound("b", false, || "cap".into()),
        ]);
        assert_eq!(t[0].name, "b");
        assert_eq!((t[0].passed, t[0].failed, t[0].bound_violations), (1, 1, 1));
        assert_eq!(t[1].first_failure.as_deref(), Some("first"));
        assert!(!t[1].holds());
    }

    #[test]
    fn rate_property_tolerates_one_percent() {
        let mut checks = vec![Check::pass("triangle.pp_false_positive_rate"); 99];
        checks.push(Check::fail("triangle.pp_false_positive_rate", "fp".into()));
        assert!(tally(checks.clone())[0].holds());
        checks.push(Check::fail("triangle.pp_false_positive_rate", "fp".into()));
        assert!(!tally(checks)[0].holds());
    }

    #[test]
    fn zero_trials_pass_vacuously_with_warning() {
        let s = run_suite(Suite::All, 0, 1, None);
        assert!(s.all_passed && s.properties.is_empty());
        assert!(s.warning.is_some());
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        for suite in [Suite::Seth, Suite::Triangle, Suite::Apsp, Suite::ThreeSum, Suite::Engines] {
            let a = run_suite(suite, 3, 11, Some(7));
            assert!(a.all_passed, "{a:#?}");
            assert_eq!(a, run_suite(suite, 3, 11, Some(7)));
        }
    }

    #[test]
    fn trial_streams_differ() {
        let a: u64 = trial_rng(5, 0).random();
        let b: u64 = trial_rng(5, 1).random();
        assert_ne!(a, b);
    }

    #[test]
    fn oracle_check_handles_promise_and_kaug() {
        let g = Graph::from_edges(4, false, &[(0, 1), (2, 3)]).unwrap();
        let inst = Instance::Graph(g);
        let q = QueryOp::KAugFreeMatchingSize(1);
        assert!(answer_is_correct(&inst, q, &Ok(Answer::Int(2))));
        // one edge of two is within the 1/2 guarantee for k = 1
        assert!(answer_is_correct(&inst, q, &Ok(Answer::Int(1))));
        assert!(!answer_is_correct(&inst, q, &Ok(Answer::Int(3))));
        let scc = Instance::Graph(Graph::directed(3));
        let q = QueryOp::SccCount2VsK(3);
        assert!(answer_is_correct(&scc, q, &Err(Error::Promise("".into()))));
        assert!(!answer_is_correct(&scc, q, &Ok(Answer::Bool(true))));
    }
}

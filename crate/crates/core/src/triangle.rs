//! Triangle detection through dynamic engines.
//!
//! Most reductions run one anchor stage per vertex `x` in ascending order
//! and report the first `x` whose stage answers "triangle through x".

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::engines::{DynamicEngine, EngineFactory};
use crate::error::{Error, Result};
use crate::guard;
use crate::hashing::hash_family;
use crate::model::{
    Answer, CostCounters, Graph, Mode, NodeId, ProblemKind, QueryOp, SetSystem, UpdateOp,
};
use crate::oracles::in_triangle;
use crate::stage::{inverse, StageRunner};
use crate::tree::HeapTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleWitness {
    Triangle(NodeId, NodeId, NodeId),
    /// A vertex that lies on some triangle.
    Anchor(NodeId),
}

impl TriangleWitness {
    pub fn verify(&self, g: &Graph) -> bool {
        match *self {
            TriangleWitness::Triangle(a, b, c) => {
                a != b
                    && b != c
                    && a != c
                    && g.has_edge(a, b)
                    && g.has_edge(b, c)
                    && g.has_edge(a, c)
            }
            TriangleWitness::Anchor(x) => x < g.node_count() && in_triangle(g, x).unwrap_or(false),
        }
    }

    /// The lexicographically smallest triangle this witness stands for.
    pub fn complete(&self, g: &Graph) -> Option<(NodeId, NodeId, NodeId)> {
        match *self {
            TriangleWitness::Triangle(a, b, c) => {
                let mut t = [a, b, c];
                t.sort_unstable();
                self.verify(g).then_some((t[0], t[1], t[2]))
            }
            TriangleWitness::Anchor(x) => {
                let nbrs = g.neighbors();
                let nx = nbrs.get(x)?;
                let mut best = None;
                for (i, &v) in nx.iter().enumerate() {
                    for &w in &nx[i + 1..] {
                        if g.has_edge(v, w) {
                            let mut t = [x, v, w];
                            t.sort_unstable();
                            let cand = (t[0], t[1], t[2]);
                            best =
                                Some(best.map_or(cand, |b: (NodeId, NodeId, NodeId)| b.min(cand)));
                        }
                    }
                }
                best
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleOutcome {
    /// The reduction's answer. For the randomized PP reduction this may be
    /// a false positive, in which case `witness` is `None`.
    pub found: bool,
    pub witness: Option<TriangleWitness>,
    pub counters: CostCounters,
    pub stages_run: u64,
}

impl TriangleOutcome {
    fn none(counters: CostCounters, stages_run: u64) -> Self {
        TriangleOutcome {
            found: false,
            witness: None,
            counters,
            stages_run,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleReduction {
    StReach,
    StReachDecremental,
    SubConn,
    Bpm5,
    Bpm17,
    EmptyPp,
    Pp,
    Split,
}

impl TriangleReduction {
    pub const ALL: [TriangleReduction; 8] = [
        TriangleReduction::StReach,
        TriangleReduction::StReachDecremental,
        TriangleReduction::SubConn,
        TriangleReduction::Bpm5,
        TriangleReduction::Bpm17,
        TriangleReduction::EmptyPp,
        TriangleReduction::Pp,
        TriangleReduction::Split,
    ];

    pub fn name(self) -> &'static str {
        use TriangleReduction::*;
        match self {
            StReach => "tri-streach",
            StReachDecremental => "tri-streach-dec",
            SubConn => "tri-subconn",
            Bpm5 => "tri-5bpm",
            Bpm17 => "tri-17bpm",
            EmptyPp => "tri-empty-pp",
            Pp => "tri-pp",
            Split => "tri-split",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn supported_modes(self) -> &'static [Mode] {
        use TriangleReduction::*;
        match self {
            StReach | EmptyPp | Split => &[Mode::Full, Mode::Incremental],
            StReachDecremental => &[Mode::Decremental],
            Pp => &[Mode::Full],
            SubConn | Bpm5 | Bpm17 => &Mode::ALL,
        }
    }

    pub fn is_deterministic(self) -> bool {
        self != TriangleReduction::Pp
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TriangleConfig {
    pub mode: Mode,
    /// Seeds the hash functions of the PP reduction.
    pub seed: u64,
    /// Compare instance digests before and after every stage.
    pub check_isolation: bool,
}

impl TriangleConfig {
    pub fn new(mode: Mode) -> Self {
        TriangleConfig {
            mode,
            seed: 0,
            check_isolation: false,
        }
    }
}

fn check_input(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(Error::domain(
            "triangle reductions need an undirected graph",
        ));
    }
    Ok(())
}

fn both(op: UpdateOp) -> Result<(UpdateOp, UpdateOp)> {
    let inv = inverse(&op, None)?;
    Ok((op, inv))
}

/// An anchor-stage reduction: a gadget graph, the updates of stage `x`
/// and the decision rule on the stage answer.
struct AnchorPlan {
    kind: ProblemKind,
    base: Graph,
    stage_ops: Box<dyn Fn(usize) -> Result<Vec<(UpdateOp, UpdateOp)>>>,
    query: QueryOp,
    decide: Box<dyn Fn(Answer, usize) -> Result<bool>>,
}

/// Runs every stage in ascending order, handing each answer to `visit`
/// until it returns true. Returns the stopping stage (if any), the counters
/// and the number of stages run.
fn run_stages(
    plan: &AnchorPlan,
    n: usize,
    cfg: &TriangleConfig,
    factory: &dyn EngineFactory,
    mut visit: impl FnMut(usize, Answer) -> Result<bool>,
) -> Result<(Option<usize>, CostCounters, u64)> {
    guard::check_size(plan.base.node_count() as u128, "gadget nodes")?;
    let engine = factory.build(plan.kind, cfg.mode, plan.base.clone().into())?;
    let mut runner = StageRunner::new(engine, cfg.check_isolation);
    for x in 0..n {
        let ops = (plan.stage_ops)(x)?;
        let answer = runner.stage(&ops, plan.query)?;
        if visit(x, answer)? {
            return Ok((Some(x), runner.engine.counters(), x as u64 + 1));
        }
    }
    Ok((None, runner.engine.counters(), n as u64))
}

fn run_anchor(
    plan: AnchorPlan,
    n: usize,
    cfg: &TriangleConfig,
    factory: &dyn EngineFactory,
) -> Result<TriangleOutcome> {
    let (hit, counters, stages_run) =
        run_stages(&plan, n, cfg, factory, |x, a| (plan.decide)(a, x))?;
    Ok(TriangleOutcome {
        found: hit.is_some(),
        witness: hit.map(TriangleWitness::Anchor),
        counters,
        stages_run,
    })
}

fn require_mode(red: TriangleReduction, mode: Mode) -> Result<()> {
    if !red.supported_modes().contains(&mode) {
        return Err(Error::domain(format!(
            "{} does not support {mode} mode",
            red.name()
        )));
    }
    Ok(())
}

/// Layers A, B, C, A' at offsets 0, n, 2n, 3n, then s and t.
fn streach_gadget(g: &Graph) -> Result<Graph> {
    let n = g.node_count();
    let mut h = Graph::directed(4 * n + 2);
    for (u, v, _) in g.edges() {
        for (a, b) in [(u, v), (v, u)] {
            h.add_edge(a, n + b)?;
            h.add_edge(n + a, 2 * n + b)?;
            h.add_edge(2 * n + a, 3 * n + b)?;
        }
    }
    h.set_st(4 * n, 4 * n + 1)?;
    Ok(h)
}

fn streach_plan(g: &Graph) -> Result<AnchorPlan> {
    let n = g.node_count();
    let (s, t) = (4 * n, 4 * n + 1);
    Ok(AnchorPlan {
        kind: ProblemKind::StReach,
        base: streach_gadget(g)?,
        stage_ops: Box::new(move |x| {
            Ok(vec![
                both(UpdateOp::insert(s, x))?,
                both(UpdateOp::insert(3 * n + x, t))?,
            ])
        }),
        query: QueryOp::StReachable,
        decide: Box::new(|a, _| a.as_bool()),
    })
}

/// A, B at offsets 0, n, then s (adjacent to A) and t (adjacent to B).
fn subconn_plan(g: &Graph, mode: Mode) -> Result<AnchorPlan> {
    let n = g.node_count();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut h = Graph::undirected(2 * n + 2);
    for (u, v, _) in g.edges() {
        h.add_edge(u, n + v)?;
        h.add_edge(v, n + u)?;
    }
    for x in 0..n {
        h.add_edge(s, x)?;
        h.add_edge(t, n + x)?;
    }
    h.set_st(s, t)?;
    if mode == Mode::Decremental {
        h.set_active(0..2 * n + 2)?;
    } else {
        h.set_active([s, t])?;
    }
    let nbrs = g.neighbors();
    Ok(AnchorPlan {
        kind: ProblemKind::StSubConn,
        base: h,
        stage_ops: Box::new(move |u| {
            let mut ops = Vec::new();
            if mode == Mode::Decremental {
                let keep: BTreeSet<usize> = nbrs[u].iter().copied().collect();
                for v in (0..n).filter(|v| !keep.contains(v)) {
                    ops.push(both(UpdateOp::DeactivateNode(v))?);
                    ops.push(both(UpdateOp::DeactivateNode(n + v))?);
                }
            } else {
                for &v in &nbrs[u] {
                    ops.push(both(UpdateOp::ActivateNode(v))?);
                    ops.push(both(UpdateOp::ActivateNode(n + v))?);
                }
            }
            Ok(ops)
        }),
        query: QueryOp::StConnected,
        decide: Box::new(|a, _| a.as_bool()),
    })
}

/// Layers I, Ī, J, J̄ at offsets 0, n, 2n, 3n. Full and decremental runs
/// start with every pendant edge and delete those of N(x); incremental
/// runs start with none and insert those outside N(x).
fn bpm5_plan(g: &Graph, mode: Mode) -> Result<AnchorPlan> {
    let n = g.node_count();
    let mut h = Graph::undirected(4 * n);
    for (u, v, _) in g.edges() {
        h.add_edge(u, 2 * n + v)?;
        h.add_edge(v, 2 * n + u)?;
    }
    let pendants = move |y: usize| {
        [
            UpdateOp::insert(n + y, y),
            UpdateOp::insert(3 * n + y, 2 * n + y),
        ]
    };
    if mode != Mode::Incremental {
        for y in 0..n {
            for op in pendants(y) {
                if let UpdateOp::InsertEdge { u, v, .. } = op {
                    h.add_edge(u, v)?;
                }
            }
        }
    }
    let nbrs = g.neighbors();
    let degree: Vec<usize> = nbrs.iter().map(Vec::len).collect();
    Ok(AnchorPlan {
        kind: ProblemKind::ShortAugFreeMatching,
        base: h,
        stage_ops: Box::new(move |x| {
            let adjacent: BTreeSet<usize> = nbrs[x].iter().copied().collect();
            let mut ops = Vec::new();
            for y in 0..n {
                let chosen = if mode == Mode::Incremental {
                    !adjacent.contains(&y)
                } else {
                    adjacent.contains(&y)
                };
                if !chosen {
                    continue;
                }
                for op in pendants(y) {
                    let op = if mode == Mode::Incremental {
                        op
                    } else {
                        inverse(&op, None)?
                    };
                    ops.push(both(op)?);
                }
            }
            Ok(ops)
        }),
        query: QueryOp::KAugFreeMatchingSize(5),
        decide: Box::new(move |a, x| {
            let size = a.as_int()?.unwrap_or(0) as usize;
            Ok(size > 2 * (n - degree[x]))
        }),
    })
}

/// Layers A1, Ā1, B, B̄, C, C̄, A2, Ā2 at offsets 0..8n. Full and
/// decremental runs delete the two A-pairs of x; incremental runs start
/// without A-pairs and insert those of every other vertex.
fn bpm17_plan(g: &Graph, mode: Mode) -> Result<AnchorPlan> {
    let n = g.node_count();
    let mut h = Graph::undirected(8 * n);
    for (u, v, _) in g.edges() {
        for (a, b) in [(u, v), (v, u)] {
            h.add_edge(n + a, 2 * n + b)?;
            h.add_edge(3 * n + a, 4 * n + b)?;
            h.add_edge(5 * n + a, 6 * n + b)?;
        }
    }
    for u in 0..n {
        h.add_edge(2 * n + u, 3 * n + u)?;
        h.add_edge(4 * n + u, 5 * n + u)?;
        if mode != Mode::Incremental {
            h.add_edge(u, n + u)?;
            h.add_edge(6 * n + u, 7 * n + u)?;
        }
    }
    let a_pairs = move |u: usize| {
        [
            UpdateOp::insert(u, n + u),
            UpdateOp::insert(6 * n + u, 7 * n + u),
        ]
    };
    Ok(AnchorPlan {
        kind: ProblemKind::ShortAugFreeMatching,
        base: h,
        stage_ops: Box::new(move |x| {
            let mut ops = Vec::new();
            if mode == Mode::Incremental {
                for u in (0..n).filter(|&u| u != x) {
                    for op in a_pairs(u) {
                        ops.push(both(op)?);
                    }
                }
            } else {
                for op in a_pairs(x) {
                    ops.push(both(inverse(&op, None)?)?);
                }
            }
            Ok(ops)
        }),
        query: QueryOp::KAugFreeMatchingSize(17),
        decide: Box::new(move |a, _| {
            let size = a.as_int()?.unwrap_or(0) as usize;
            Ok(size + 2 > 4 * n)
        }),
    })
}

pub fn triangle_via_streach(
    g: &Graph,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    run_triangle(
        TriangleReduction::StReach,
        g,
        &TriangleConfig::new(mode),
        factory,
    )
}

pub fn triangle_via_streach_decremental(
    g: &Graph,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    run_triangle(
        TriangleReduction::StReachDecremental,
        g,
        &TriangleConfig::new(Mode::Decremental),
        factory,
    )
}

pub fn triangle_via_subconn(
    g: &Graph,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    run_triangle(
        TriangleReduction::SubConn,
        g,
        &TriangleConfig::new(mode),
        factory,
    )
}

pub fn triangle_via_5bpm(
    g: &Graph,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    run_triangle(
        TriangleReduction::Bpm5,
        g,
        &TriangleConfig::new(mode),
        factory,
    )
}

pub fn triangle_via_17bpm(
    g: &Graph,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    run_triangle(
        TriangleReduction::Bpm17,
        g,
        &TriangleConfig::new(mode),
        factory,
    )
}

pub fn triangle_via_empty_pp(
    g: &Graph,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    run_triangle(
        TriangleReduction::EmptyPp,
        g,
        &TriangleConfig::new(Mode::Full),
        factory,
    )
}

pub fn triangle_via_pp(
    g: &Graph,
    factory: Arc<dyn EngineFactory>,
    seed: u64,
) -> Result<TriangleOutcome> {
    let cfg = TriangleConfig {
        seed,
        ..TriangleConfig::new(Mode::Full)
    };
    run_triangle(TriangleReduction::Pp, g, &cfg, factory)
}

/// The 17-aug-free matching size of every stage of the 17-BPM gadget.
pub fn bpm17_stage_sizes(
    g: &Graph,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<Vec<usize>> {
    check_input(g)?;
    require_mode(TriangleReduction::Bpm17, mode)?;
    let plan = bpm17_plan(g, mode)?;
    let mut sizes = Vec::with_capacity(g.node_count());
    run_stages(
        &plan,
        g.node_count(),
        &TriangleConfig::new(mode),
        factory.as_ref(),
        |_, a| {
            sizes.push(a.as_int()?.unwrap_or(0) as usize);
            Ok(false)
        },
    )?;
    Ok(sizes)
}

struct TreeRun {
    ts: HeapTree,
    tt: HeapTree,
    engine: Box<dyn DynamicEngine>,
    check_isolation: bool,
    stages_run: u64,
}

impl TreeRun {
    fn cut(&mut self, h: usize) -> Result<()> {
        let (a, b) = self.ts.arc(h);
        let (c, d) = self.tt.arc(h);
        self.engine.update(UpdateOp::delete(a, b))?;
        self.engine.update(UpdateOp::delete(c, d))
    }

    /// Keeps the path to one child open while the other subtree is visited.
    fn visit(&mut self, h: usize) -> Result<Option<usize>> {
        if self.ts.is_leaf(h) {
            self.stages_run += 1;
            let x = h - self.ts.slots();
            return Ok(self
                .engine
                .query(QueryOp::StReachable)?
                .as_bool()?
                .then_some(x));
        }
        let (l, r) = (2 * h, 2 * h + 1);
        if !self.ts.is_real(r) {
            return self.visit(l);
        }
        for (open, closed) in [(l, r), (r, l)] {
            let before = self.check_isolation.then(|| self.engine.digest());
            let cp = self.engine.checkpoint();
            let found = self.cut(closed).and_then(|()| self.visit(open));
            self.engine.rollback(cp)?;
            if let Some(before) = before {
                if self.engine.digest() != before {
                    return Err(Error::Construction(
                        "tree stage did not restore the instance".into(),
                    ));
                }
            }
            if let Some(x) = found? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// The st-Reach gadget with the anchor arcs replaced by two trees: T_s
/// directed away from s with leaves A, T_t directed towards t with leaves
/// A'. Only deletions are issued; each stage's open path is restored by
/// rollback. `counters.updates + counters.rollback_ops` counts tree ops.
fn streach_decremental(
    g: &Graph,
    cfg: &TriangleConfig,
    factory: &dyn EngineFactory,
) -> Result<TriangleOutcome> {
    let n = g.node_count();
    let slots = n.next_power_of_two().max(2) as u128;
    guard::check_size(4 * n as u128 + 2 + 2 * slots, "gadget nodes")?;
    let mut h = streach_gadget(g)?;
    let (s, t) = (4 * n, 4 * n + 1);
    let a: Vec<NodeId> = (0..n).collect();
    let a2: Vec<NodeId> = (3 * n..4 * n).collect();
    let ts = HeapTree::build(&mut h, s, &a, false)?;
    let tt = HeapTree::build(&mut h, t, &a2, true)?;
    let engine = factory.build(ProblemKind::StReach, Mode::Decremental, h.into())?;
    let mut run = TreeRun {
        ts,
        tt,
        engine,
        check_isolation: cfg.check_isolation,
        stages_run: 0,
    };
    let hit = if n == 0 { None } else { run.visit(1)? };
    Ok(TriangleOutcome {
        found: hit.is_some(),
        witness: hit.map(TriangleWitness::Anchor),
        counters: run.engine.counters(),
        stages_run: run.stages_run,
    })
}

fn empty_pp(
    g: &Graph,
    cfg: &TriangleConfig,
    factory: &dyn EngineFactory,
) -> Result<TriangleOutcome> {
    let n = g.node_count();
    guard::check_size(n as u128 + g.edge_count() as u128, "sets")?;
    let nbrs = g.neighbors();
    let mut sys = SetSystem::new(n);
    for row in &nbrs {
        sys.push_set(row.iter().copied())?;
    }
    let mut engine = factory.build(ProblemKind::EmptyPagh, cfg.mode, sys.into())?;
    for (i, (v, w, _)) in g.edges().enumerate() {
        engine.update(UpdateOp::IntersectSets(v, w))?;
        if !engine.query(QueryOp::IsEmpty(n + i))?.as_bool()? {
            let c = nbrs[v]
                .iter()
                .copied()
                .find(|&c| g.has_edge(c, w))
                .ok_or_else(|| {
                    Error::Construction("non-empty intersection without a common neighbour".into())
                })?;
            return Ok(TriangleOutcome {
                found: true,
                witness: Some(TriangleWitness::Triangle(v, w, c)),
                counters: engine.counters(),
                stages_run: i as u64 + 1,
            });
        }
    }
    Ok(TriangleOutcome::none(
        engine.counters(),
        g.edge_count() as u64,
    ))
}

/// Smallest `d` with `d^3 >= m`, at least 1.
fn cube_root_ceil(m: usize) -> usize {
    let mut d = 1;
    while d * d * d < m {
        d += 1;
    }
    d
}

/// `⌈2·log₂ n⌉`, at least 1.
pub fn pp_hash_count(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    ((2.0 * (n as f64).log2()).ceil() as usize).max(1)
}

/// Folds `IntersectSets` over `ids`, returning the resulting set id.
fn fold_intersections(
    engine: &mut dyn DynamicEngine,
    next_id: &mut usize,
    ids: &[usize],
) -> Result<Option<usize>> {
    let Some((&first, rest)) = ids.split_first() else {
        return Ok(None);
    };
    let mut current = first;
    for &id in rest {
        engine.update(UpdateOp::IntersectSets(current, id))?;
        current = *next_id;
        *next_id += 1;
    }
    Ok(Some(current))
}

fn pp(g: &Graph, cfg: &TriangleConfig, factory: &dyn EngineFactory) -> Result<TriangleOutcome> {
    let n = g.node_count();
    let m = g.edge_count();
    let nbrs = g.neighbors();
    let delta = cube_root_ceil(m);
    let high: Vec<bool> = nbrs.iter().map(|row| row.len() >= delta).collect();
    let mut counters = CostCounters::default();
    let mut stages = 0u64;

    // Phase 2: triangles with a high-degree vertex j, found as edges (a, b)
    // whose endpoints share the high neighbour j.
    let mut sys = SetSystem::new(n);
    let mut set_of = BTreeMap::new();
    for j in (0..n).filter(|&j| high[j]) {
        let adjacent: BTreeSet<usize> = nbrs[j].iter().copied().collect();
        set_of.insert(j, sys.push_set((0..n).filter(|v| !adjacent.contains(v)))?);
    }
    guard::check_size(sys.set_count() as u128 + 2 * m as u128, "sets")?;
    let mut next_id = sys.set_count();
    let mut engine = factory.build(ProblemKind::Pagh, cfg.mode, sys.into())?;
    let mut y = vec![None; n];
    for a in 0..n {
        let ids: Vec<usize> = nbrs[a]
            .iter()
            .filter_map(|j| set_of.get(j).copied())
            .collect();
        y[a] = fold_intersections(engine.as_mut(), &mut next_id, &ids)?;
    }
    for (a, b, _) in g.edges() {
        let Some(ya) = y[a] else { continue };
        stages += 1;
        if !engine.query(QueryOp::Member(ya, b))?.as_bool()? {
            let j = nbrs[a]
                .iter()
                .copied()
                .find(|&j| high[j] && g.has_edge(j, b))
                .ok_or_else(|| {
                    Error::Construction("phase 2 reported a pair without a common hub".into())
                })?;
            counters += engine.counters();
            return Ok(TriangleOutcome {
                found: true,
                witness: Some(TriangleWitness::Triangle(a, b, j)),
                counters,
                stages_run: stages,
            });
        }
    }
    counters += engine.counters();

    // Phase 1: edges between low-degree vertices, tested by hashed
    // neighbourhoods. A real common neighbour collides under every function.
    let mut candidates: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(a, b, _)| !high[a] && !high[b])
        .map(|(a, b, _)| (a, b))
        .collect();
    let range = (4 * delta * delta).next_power_of_two();
    let bits = range.trailing_zeros().max(1);
    let range = 1usize << bits;
    let r = pp_hash_count(n);
    guard::check_size(r as u128 * (range as u128 + 2 * m as u128), "sets")?;
    for h in hash_family(cfg.seed, r, bits) {
        if candidates.is_empty() {
            break;
        }
        let hv: Vec<usize> = (0..n).map(|v| h.hash(v as u64) as usize).collect();
        let mut sys = SetSystem::new(n);
        for val in 0..range {
            sys.push_set((0..n).filter(|&a| nbrs[a].iter().all(|&c| hv[c] != val)))?;
        }
        let mut next_id = range;
        let mut engine = factory.build(ProblemKind::Pagh, cfg.mode, sys.into())?;
        let mut yb: BTreeMap<usize, usize> = BTreeMap::new();
        let mut kept = Vec::with_capacity(candidates.len());
        for (a, b) in candidates {
            let id = match yb.get(&b) {
                Some(&id) => id,
                None => {
                    let vals: BTreeSet<usize> = nbrs[b].iter().map(|&c| hv[c]).collect();
                    let vals: Vec<usize> = vals.into_iter().collect();
                    let id = fold_intersections(engine.as_mut(), &mut next_id, &vals)?.ok_or_else(
                        || Error::Construction("edge endpoint without neighbours".into()),
                    )?;
                    yb.insert(b, id);
                    id
                }
            };
            stages += 1;
            if !engine.query(QueryOp::Member(id, a))?.as_bool()? {
                kept.push((a, b));
            }
        }
        candidates = kept;
        counters += engine.counters();
    }
    let witness = candidates.iter().find_map(|&(a, b)| {
        nbrs[a]
            .iter()
            .find(|&&c| g.has_edge(c, b))
            .map(|&c| TriangleWitness::Triangle(a, b, c))
    });
    Ok(TriangleOutcome {
        found: !candidates.is_empty(),
        witness,
        counters,
        stages_run: stages,
    })
}

/// Scans every wedge centred at a vertex of degree at most `threshold`,
/// then hands the subgraph induced by the remaining high-degree vertices to
/// `dense_routine`. Its witness is mapped back and verified.
pub fn split_by_degree(
    g: &Graph,
    threshold: usize,
    dense_routine: &mut dyn FnMut(&Graph) -> Result<Option<TriangleWitness>>,
) -> Result<Option<TriangleWitness>> {
    check_input(g)?;
    let nbrs = g.neighbors();
    for (x, row) in nbrs.iter().enumerate() {
        if row.len() > threshold {
            continue;
        }
        for (i, &v) in row.iter().enumerate() {
            for &w in &row[i + 1..] {
                if g.has_edge(v, w) {
                    return Ok(Some(TriangleWitness::Triangle(x, v, w)));
                }
            }
        }
    }
    let keep: BTreeSet<NodeId> = (0..g.node_count())
        .filter(|&x| nbrs[x].len() > threshold)
        .collect();
    let (sub, back) = g.induced_subgraph(&keep);
    let Some(w) = dense_routine(&sub)? else {
        return Ok(None);
    };
    let (a, b, c) = w.complete(&sub).ok_or_else(|| {
        Error::Construction(format!("dense routine returned an invalid witness {w:?}"))
    })?;
    let mapped = TriangleWitness::Triangle(back[a], back[b], back[c]);
    if !mapped.verify(g) {
        return Err(Error::Construction("mapped witness does not verify".into()));
    }
    Ok(Some(mapped))
}

/// `⌈√m⌉`, the usual split threshold.
pub fn default_split_threshold(m: usize) -> usize {
    let mut d = 0;
    while d * d < m {
        d += 1;
    }
    d
}

pub fn run_triangle(
    red: TriangleReduction,
    g: &Graph,
    cfg: &TriangleConfig,
    factory: Arc<dyn EngineFactory>,
) -> Result<TriangleOutcome> {
    check_input(g)?;
    require_mode(red, cfg.mode)?;
    let n = g.node_count();
    let f = factory.as_ref();
    match red {
        TriangleReduction::StReach => run_anchor(streach_plan(g)?, n, cfg, f),
        TriangleReduction::StReachDecremental => streach_decremental(g, cfg, f),
        TriangleReduction::SubConn => run_anchor(subconn_plan(g, cfg.mode)?, n, cfg, f),
        TriangleReduction::Bpm5 => run_anchor(bpm5_plan(g, cfg.mode)?, n, cfg, f),
        TriangleReduction::Bpm17 => run_anchor(bpm17_plan(g, cfg.mode)?, n, cfg, f),
        TriangleReduction::EmptyPp => empty_pp(g, cfg, f),
        TriangleReduction::Pp => pp(g, cfg, f),
        TriangleReduction::Split => {
            let mut counters = CostCounters::default();
            let mut stages = 0;
            let witness =
                split_by_degree(g, default_split_threshold(g.edge_count()), &mut |sub| {
                    let out = run_anchor(streach_plan(sub)?, sub.node_count(), cfg, f)?;
                    counters = out.counters;
                    stages = out.stages_run;
                    Ok(out.witness)
                })?;
            Ok(TriangleOutcome {
                found: witness.is_some(),
                witness,
                counters,
                stages_run: stages,
            })
        }
    }
}

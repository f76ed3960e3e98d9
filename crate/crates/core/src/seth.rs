//! CNF-SAT through dynamic engines via the split-assignment graph H_δ.
//!
//! The first `k = ⌈δn⌉` variables form the block U; a partial assignment
//! to U is encoded by its index (bit `i` is variable `i + 1`). Every
//! reduction runs one stage per assignment ψ to the remaining variables,
//! touching only the clauses ψ leaves unsatisfied.

use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;

use crate::engines::EngineFactory;
use crate::error::{Error, Result};
use crate::guard;
use crate::inter::subunion_via_connsub;
use crate::model::{
    Answer, BlockAssignment, CnfFormula, CostCounters, Graph, Instance, Mode, NodeId, ProblemKind,
    QueryOp, SetSystem, UpdateOp, CLAUSE_CAP_FACTOR,
};
use crate::stage::{inverse, StageRunner};

pub type Delta = Ratio<u32>;

/// Parses `p/q` (or an integer) and checks `0 < δ < 1`.
pub fn parse_delta(text: &str) -> Result<Delta> {
    let d = Delta::from_str(text.trim())
        .map_err(|_| Error::domain(format!("invalid delta '{text}', expected p/q")))?;
    check_delta(d)?;
    Ok(d)
}

fn check_delta(d: Delta) -> Result<()> {
    if *d.numer() == 0 || d >= Delta::from_integer(1) {
        return Err(Error::domain(format!(
            "delta {d} must lie strictly between 0 and 1"
        )));
    }
    Ok(())
}

/// `⌈δn⌉`.
pub fn split_size(n: usize, delta: Delta) -> usize {
    let (p, q) = (*delta.numer() as usize, *delta.denom() as usize);
    (p * n).div_ceil(q)
}

/// The bipartite graph between the 2^k assignments to U and the clauses.
#[derive(Debug, Clone)]
pub struct HDeltaGraph {
    pub delta: Delta,
    pub split_size: usize,
    /// Node of assignment index `i`.
    pub assignment_nodes: Vec<NodeId>,
    /// Node of clause `j`.
    pub clause_nodes: Vec<NodeId>,
    /// Undirected; edge (φ, c) iff φ sets no literal of c true.
    pub graph: Graph,
}

impl HDeltaGraph {
    /// `(assignment index, clause index)` for every edge.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.assignment_nodes.len();
        self.graph.edges().map(move |(a, c, _)| (a, c - k))
    }
}

/// Edges between the assignments of one variable block and the clauses.
fn block_pairs(f: &CnfFormula, first_var: usize, width: usize) -> Result<Vec<(usize, usize)>> {
    let count = guard::pow2_guarded(width, "partial assignments")?;
    let mut pairs = Vec::new();
    for bits in 0..count {
        let phi = BlockAssignment {
            first_var,
            width,
            bits: bits as u64,
        };
        for (j, c) in f.clauses().iter().enumerate() {
            if !phi.satisfies(c) {
                pairs.push((bits, j));
            }
        }
    }
    Ok(pairs)
}

pub fn build_h_delta(f: &CnfFormula, delta: Delta) -> Result<HDeltaGraph> {
    check_delta(delta)?;
    let k = split_size(f.var_count(), delta);
    let count = guard::pow2_guarded(k, "partial assignments")?;
    let m = f.clause_count();
    let mut graph = Graph::undirected(count + m);
    for (a, c) in block_pairs(f, 1, k)? {
        graph.add_edge(a, count + c)?;
    }
    Ok(HDeltaGraph {
        delta,
        split_size: k,
        assignment_nodes: (0..count).collect(),
        clause_nodes: (count..count + m).collect(),
        graph,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SethReduction {
    Ssr,
    Sc2,
    /// Distinguishes 2 SCCs from more than `k`.
    AppxScc {
        k: u64,
    },
    MaxScc,
    StReach,
    Diam,
    SubUnion,
    /// SubUnion through the ConnSub wrapper.
    ConnSub,
    EmptyPp,
}

impl SethReduction {
    pub const DEFAULT_APPX_K: u64 = 2;

    pub fn all() -> [SethReduction; 9] {
        use SethReduction::*;
        [
            Ssr,
            Sc2,
            AppxScc {
                k: Self::DEFAULT_APPX_K,
            },
            MaxScc,
            StReach,
            Diam,
            SubUnion,
            ConnSub,
            EmptyPp,
        ]
    }

    pub fn name(self) -> &'static str {
        use SethReduction::*;
        match self {
            Ssr => "ssr",
            Sc2 => "sc2",
            AppxScc { .. } => "appx-scc",
            MaxScc => "max-scc",
            StReach => "st-reach",
            Diam => "diam",
            SubUnion => "subunion",
            ConnSub => "connsub",
            EmptyPp => "empty-pp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::all().into_iter().find(|r| r.name() == name)
    }

    pub fn supported_modes(self) -> &'static [Mode] {
        match self {
            SethReduction::EmptyPp => &[Mode::Full, Mode::Incremental],
            _ => &Mode::ALL,
        }
    }

    pub fn default_delta(self) -> Delta {
        match self {
            SethReduction::StReach | SethReduction::Diam => Delta::new(1, 4),
            _ => Delta::new(1, 2),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SethConfig {
    /// `None` picks the reduction's default.
    pub delta: Option<Delta>,
    pub mode: Mode,
    /// Compare instance digests before and after every stage.
    pub check_isolation: bool,
}

impl SethConfig {
    pub fn new(mode: Mode) -> Self {
        SethConfig {
            delta: None,
            mode,
            check_isolation: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SethOutcome {
    pub satisfiable: bool,
    pub counters: CostCounters,
    pub split_size: usize,
    /// Stages the schedule has in total.
    pub stage_count: u64,
    /// Stages actually run before the answer was known.
    pub stages_run: u64,
}

/// One stage element: an update in insertion form, attached to a clause.
/// It is present during a stage iff the clause's satisfaction by ψ equals
/// `when_satisfied`.
struct Element {
    op: UpdateOp,
    clause: usize,
    when_satisfied: bool,
}

/// The shared shape of the graph and SubUnion reductions.
struct Plan {
    kind: ProblemKind,
    base: Instance,
    elements: Vec<Element>,
    stage_first_var: usize,
    query: Box<dyn Fn(usize) -> QueryOp>,
    /// Maps the answer and the unsatisfied-clause count to "satisfiable".
    decide: Box<dyn Fn(Answer, usize) -> Result<bool>>,
}

fn insert_element(base: &mut Instance, op: &UpdateOp) -> Result<()> {
    match (base, op) {
        (Instance::Graph(g), UpdateOp::InsertEdge { u, v, .. }) => g.add_edge(*u, *v),
        (Instance::Sets(s), UpdateOp::AddToScope(i)) => s.add_to_scope(*i),
        _ => Err(Error::Construction(format!(
            "unexpected stage element {op:?}"
        ))),
    }
}

fn instance_size(inst: &Instance) -> u128 {
    match inst {
        Instance::Graph(g) => g.node_count() as u128,
        Instance::Sets(s) => s.universe_size() as u128 + s.set_count() as u128,
    }
}

fn unsat_flags(f: &CnfFormula, psi: BlockAssignment) -> Vec<bool> {
    f.clauses().iter().map(|c| !psi.satisfies(c)).collect()
}

fn run_plan(
    plan: Plan,
    f: &CnfFormula,
    k: usize,
    cfg: &SethConfig,
    factory: &dyn EngineFactory,
) -> Result<SethOutcome> {
    let width = f.var_count() + 1 - plan.stage_first_var;
    let stage_count = guard::pow2_guarded(width, "stages")? as u64;
    let mut base = plan.base;
    guard::check_size(instance_size(&base), "instance nodes")?;
    if cfg.mode == Mode::Decremental {
        for e in &plan.elements {
            insert_element(&mut base, &e.op)?;
        }
    }
    let engine = factory.build(plan.kind, cfg.mode, base)?;
    let mut runner = StageRunner::new(engine, cfg.check_isolation);
    for bits in 0..stage_count {
        let psi = BlockAssignment {
            first_var: plan.stage_first_var,
            width,
            bits,
        };
        let unsat = unsat_flags(f, psi);
        let d = unsat.iter().filter(|&&u| u).count();
        let mut ops = Vec::new();
        for e in &plan.elements {
            let present = unsat[e.clause] != e.when_satisfied;
            match cfg.mode {
                Mode::Decremental if !present => {
                    let del = inverse(&e.op, None)?;
                    ops.push((del, e.op.clone()));
                }
                Mode::Full | Mode::Incremental if present => {
                    ops.push((e.op.clone(), inverse(&e.op, None)?));
                }
                _ => {}
            }
        }
        let answer = runner.stage(&ops, (plan.query)(d))?;
        if (plan.decide)(answer, d)? {
            return Ok(SethOutcome {
                satisfiable: true,
                counters: runner.engine.counters(),
                split_size: k,
                stage_count,
                stages_run: bits + 1,
            });
        }
    }
    Ok(SethOutcome {
        satisfiable: false,
        counters: runner.engine.counters(),
        split_size: k,
        stage_count,
        stages_run: stage_count,
    })
}

fn edge(u: NodeId, v: NodeId) -> UpdateOp {
    UpdateOp::insert(u, v)
}

fn ssr_plan(f: &CnfFormula, h: &HDeltaGraph) -> Result<Plan> {
    let count = h.assignment_nodes.len();
    let m = f.clause_count();
    let s = count + m;
    let mut g = Graph::directed(count + m + 1);
    g.set_s(s)?;
    for (a, c) in h.pairs() {
        g.add_edge(count + c, a)?;
    }
    let elements = (0..m)
        .map(|c| Element {
            op: edge(s, count + c),
            clause: c,
            when_satisfied: false,
        })
        .collect();
    Ok(Plan {
        kind: ProblemKind::ReachCount,
        base: g.into(),
        elements,
        stage_first_var: h.split_size + 1,
        query: Box::new(move |d| QueryOp::ReachCountLessThan((count + d) as u64)),
        decide: Box::new(|a, _| a.as_bool()),
    })
}

/// SC2 and its variants: `copies` copies of each assignment node.
fn scc_plan(f: &CnfFormula, h: &HDeltaGraph, variant: SethReduction) -> Result<Plan> {
    let count = h.assignment_nodes.len();
    let m = f.clause_count();
    let copies = match variant {
        SethReduction::AppxScc { k } => k as usize,
        // The s'-component holds the satisfied clauses; replicate until the
        // assignment side alone outweighs every clause.
        SethReduction::MaxScc => m / count + 1,
        _ => 1,
    };
    let width = copies * count;
    guard::check_size((width + m + 2) as u128, "instance nodes")?;
    let s = width + m;
    let s2 = s + 1;
    let mut g = Graph::directed(width + m + 2);
    for (a, c) in h.pairs() {
        for j in 0..copies {
            g.add_edge(width + c, j * count + a)?;
        }
    }
    for phi in 0..width {
        g.add_edge(phi, s)?;
    }
    let mut elements = Vec::new();
    for c in 0..m {
        elements.push(Element {
            op: edge(s, width + c),
            clause: c,
            when_satisfied: false,
        });
        elements.push(Element {
            op: edge(s2, width + c),
            clause: c,
            when_satisfied: true,
        });
        elements.push(Element {
            op: edge(width + c, s2),
            clause: c,
            when_satisfied: true,
        });
    }
    let (kind, query, decide): (
        ProblemKind,
        Box<dyn Fn(usize) -> QueryOp>,
        Box<dyn Fn(Answer, usize) -> Result<bool>>,
    ) = match variant {
        SethReduction::AppxScc { k } => (
            ProblemKind::ApproxSccCount,
            Box::new(move |_| QueryOp::SccCount2VsK(k)),
            Box::new(|a, _| a.as_bool()),
        ),
        SethReduction::MaxScc => (
            ProblemKind::MaxScc,
            Box::new(|_| QueryOp::MaxSccSize),
            Box::new(move |a, d| {
                let size = a
                    .as_int()?
                    .ok_or_else(|| Error::Construction("max SCC size is undefined".into()))?;
                Ok((size as usize) < d + width + 1)
            }),
        ),
        _ => (
            ProblemKind::TwoScc,
            Box::new(|_| QueryOp::MoreThanTwoSccs),
            Box::new(|a, _| a.as_bool()),
        ),
    };
    Ok(Plan {
        kind,
        base: g.into(),
        elements,
        stage_first_var: h.split_size + 1,
        query,
        decide,
    })
}

/// Layout for the two-block reductions: φ, c, c', φ'.
struct TwoBlock {
    count: usize,
    m: usize,
    first_pairs: Vec<(usize, usize)>,
    second_pairs: Vec<(usize, usize)>,
}

impl TwoBlock {
    fn new(f: &CnfFormula, k: usize) -> Result<Self> {
        if 2 * k > f.var_count() {
            return Err(Error::domain(format!(
                "two blocks of {k} variables do not fit in {} variables; use a smaller delta",
                f.var_count()
            )));
        }
        Ok(TwoBlock {
            count: guard::pow2_guarded(k, "partial assignments")?,
            m: f.clause_count(),
            first_pairs: block_pairs(f, 1, k)?,
            second_pairs: block_pairs(f, k + 1, k)?,
        })
    }

    fn phi(&self, a: usize) -> NodeId {
        a
    }

    fn clause(&self, c: usize) -> NodeId {
        self.count + c
    }

    fn clause_copy(&self, c: usize) -> NodeId {
        self.count + self.m + c
    }

    fn phi_copy(&self, a: usize) -> NodeId {
        self.count + 2 * self.m + a
    }

    fn size(&self) -> usize {
        2 * self.count + 2 * self.m
    }

    fn bridge_elements(&self) -> Vec<Element> {
        (0..self.m)
            .map(|c| Element {
                op: edge(self.clause(c), self.clause_copy(c)),
                clause: c,
                when_satisfied: false,
            })
            .collect()
    }
}

fn st_reach_plan(f: &CnfFormula, k: usize) -> Result<Plan> {
    let tb = TwoBlock::new(f, k)?;
    let mut g = Graph::directed(tb.size());
    for &(a, c) in &tb.first_pairs {
        g.add_edge(tb.phi(a), tb.clause(c))?;
    }
    for &(a, c) in &tb.second_pairs {
        g.add_edge(tb.clause_copy(c), tb.phi_copy(a))?;
    }
    g.set_source_sets(
        (0..tb.count).map(|a| tb.phi(a)),
        (0..tb.count).map(|a| tb.phi_copy(a)),
    )?;
    Ok(Plan {
        kind: ProblemKind::SetReach,
        base: g.into(),
        elements: tb.bridge_elements(),
        stage_first_var: 2 * k + 1,
        query: Box::new(|_| QueryOp::AllStReachable),
        decide: Box::new(|a, _| Ok(!a.as_bool()?)),
    })
}

fn diam_plan(f: &CnfFormula, k: usize) -> Result<Plan> {
    let tb = TwoBlock::new(f, k)?;
    let s = tb.size();
    let (s2, hub) = (s + 1, s + 2);
    let mut g = Graph::undirected(tb.size() + 3);
    for &(a, c) in &tb.first_pairs {
        g.add_edge(tb.phi(a), tb.clause(c))?;
    }
    for &(a, c) in &tb.second_pairs {
        g.add_edge(tb.clause_copy(c), tb.phi_copy(a))?;
    }
    for a in 0..tb.count {
        g.add_edge(s, tb.phi(a))?;
        g.add_edge(s2, tb.phi_copy(a))?;
    }
    for c in 0..tb.m {
        g.add_edge(hub, tb.clause(c))?;
        g.add_edge(hub, tb.clause_copy(c))?;
    }
    g.add_edge(hub, s)?;
    g.add_edge(hub, s2)?;
    Ok(Plan {
        kind: ProblemKind::Diameter,
        base: g.into(),
        elements: tb.bridge_elements(),
        stage_first_var: 2 * k + 1,
        query: Box::new(|_| QueryOp::Diameter),
        decide: Box::new(|a, _| match a.as_int()? {
            Some(4) => Ok(true),
            Some(3) => Ok(false),
            other => Err(Error::Construction(format!(
                "stage diameter {other:?} is neither 3 nor 4"
            ))),
        }),
    })
}

/// Whether one block assignment alone satisfies every clause.
fn block_satisfies_all(f: &CnfFormula, first_var: usize, width: usize) -> Result<bool> {
    let count = guard::pow2_guarded(width, "partial assignments")?;
    Ok((0..count).any(|bits| {
        let phi = BlockAssignment {
            first_var,
            width,
            bits: bits as u64,
        };
        f.clauses().iter().all(|c| phi.satisfies(c))
    }))
}

fn subunion_plan(f: &CnfFormula, h: &HDeltaGraph) -> Result<Plan> {
    let count = h.assignment_nodes.len();
    let m = f.clause_count();
    let mut members = vec![Vec::new(); m];
    for (a, c) in h.pairs() {
        members[c].push(a);
    }
    let mut sys = SetSystem::new(count);
    for set in members {
        sys.push_set(set)?;
    }
    let elements = (0..m)
        .map(|c| Element {
            op: UpdateOp::AddToScope(c),
            clause: c,
            when_satisfied: false,
        })
        .collect();
    Ok(Plan {
        kind: ProblemKind::SubsetUnion,
        base: sys.into(),
        elements,
        stage_first_var: h.split_size + 1,
        query: Box::new(|_| QueryOp::UnionIsUniverse),
        decide: Box::new(|a, _| Ok(!a.as_bool()?)),
    })
}

fn empty_pp(
    f: &CnfFormula,
    h: &HDeltaGraph,
    cfg: &SethConfig,
    factory: &dyn EngineFactory,
) -> Result<SethOutcome> {
    let count = h.assignment_nodes.len();
    let m = f.clause_count();
    let mut falsifying = vec![vec![false; count]; m];
    for (a, c) in h.pairs() {
        falsifying[c][a] = true;
    }
    let mut sys = SetSystem::new(count);
    for row in &falsifying {
        sys.push_set((0..count).filter(|&a| !row[a]))?;
    }
    let universe = sys.push_universe();
    let width = f.var_count() - h.split_size;
    let stage_count = guard::pow2_guarded(width, "stages")? as u64;
    let engine = factory.build(ProblemKind::EmptyPagh, cfg.mode, sys.into())?;
    let mut runner = StageRunner::new(engine, cfg.check_isolation);
    for bits in 0..stage_count {
        let psi = BlockAssignment {
            first_var: h.split_size + 1,
            width,
            bits,
        };
        let mut current = universe;
        let mut ops = Vec::new();
        for (c, unsat) in unsat_flags(f, psi).into_iter().enumerate() {
            if unsat {
                ops.push(UpdateOp::IntersectSets(current, c));
                current = universe + ops.len();
            }
        }
        let empty = runner
            .stage_with_rollback(&ops, QueryOp::IsEmpty(current))?
            .as_bool()?;
        if !empty {
            return Ok(SethOutcome {
                satisfiable: true,
                counters: runner.engine.counters(),
                split_size: h.split_size,
                stage_count,
                stages_run: bits + 1,
            });
        }
    }
    Ok(SethOutcome {
        satisfiable: false,
        counters: runner.engine.counters(),
        split_size: h.split_size,
        stage_count,
        stages_run: stage_count,
    })
}

/// Adds unused variables until two blocks of `⌈δn⌉` variables fit, which
/// leaves satisfiability unchanged.
fn pad_for_two_blocks(f: &CnfFormula, delta: Delta) -> Result<CnfFormula> {
    let mut n = f.var_count();
    let limit = n + 2 * *delta.denom() as usize + 2;
    while 2 * split_size(n, delta) > n {
        n += 1;
        if n > limit {
            return Err(Error::domain(format!(
                "two blocks of ⌈{delta}·n⌉ variables never fit; use delta below 1/2"
            )));
        }
    }
    CnfFormula::new(n, f.clauses().to_vec())
}

/// Decides satisfiability of `f` through the named reduction.
pub fn run_seth(
    reduction: SethReduction,
    f: &CnfFormula,
    cfg: &SethConfig,
    factory: Arc<dyn EngineFactory>,
) -> Result<SethOutcome> {
    if !reduction.supported_modes().contains(&cfg.mode) {
        return Err(Error::domain(format!(
            "{} does not support {} mode",
            reduction.name(),
            cfg.mode
        )));
    }
    if let SethReduction::AppxScc { k } = reduction {
        if k < 2 {
            return Err(Error::domain("appx-scc needs k >= 2"));
        }
    }
    f.check_clause_cap(CLAUSE_CAP_FACTOR)?;
    // Tautologies are satisfied by every assignment; dropping them keeps
    // clause nodes from becoming isolated in the SCC constructions.
    let f = &f.without_tautologies();
    let delta = cfg.delta.unwrap_or(reduction.default_delta());
    check_delta(delta)?;
    let padded;
    let f = if matches!(reduction, SethReduction::StReach | SethReduction::Diam) {
        padded = pad_for_two_blocks(f, delta)?;
        &padded
    } else {
        f
    };
    let k = split_size(f.var_count(), delta);
    let plan = match reduction {
        SethReduction::StReach => st_reach_plan(f, k)?,
        SethReduction::Diam => {
            let plan = diam_plan(f, k)?;
            if block_satisfies_all(f, 1, k)? || block_satisfies_all(f, k + 1, k)? {
                return Ok(SethOutcome {
                    satisfiable: true,
                    counters: CostCounters::default(),
                    split_size: k,
                    stage_count: 1 << (f.var_count() - 2 * k),
                    stages_run: 0,
                });
            }
            plan
        }
        _ => {
            let h = build_h_delta(f, delta)?;
            match reduction {
                SethReduction::Ssr => ssr_plan(f, &h)?,
                SethReduction::Sc2 | SethReduction::AppxScc { .. } | SethReduction::MaxScc => {
                    scc_plan(f, &h, reduction)?
                }
                SethReduction::SubUnion | SethReduction::ConnSub => subunion_plan(f, &h)?,
                SethReduction::EmptyPp => return empty_pp(f, &h, cfg, factory.as_ref()),
                SethReduction::StReach | SethReduction::Diam => unreachable!("handled above"),
            }
        }
    };
    if reduction == SethReduction::ConnSub {
        let wrapped = subunion_via_connsub(factory);
        return run_plan(plan, f, k, cfg, &wrapped);
    }
    run_plan(plan, f, k, cfg, factory.as_ref())
}

macro_rules! entry_point {
    ($(#[$doc:meta])* $name:ident, $variant:expr) => {
        $(#[$doc])*
        pub fn $name(
            f: &CnfFormula,
            delta: Option<Delta>,
            mode: Mode,
            factory: Arc<dyn EngineFactory>,
        ) -> Result<SethOutcome> {
            let cfg = SethConfig { delta, mode, check_isolation: false };
            run_seth($variant, f, &cfg, factory)
        }
    };
}

entry_point!(sat_via_ssr, SethReduction::Ssr);
entry_point!(sat_via_sc2, SethReduction::Sc2);
entry_point!(sat_via_max_scc, SethReduction::MaxScc);
entry_point!(sat_via_st_reach, SethReduction::StReach);
entry_point!(sat_via_diam, SethReduction::Diam);
entry_point!(sat_via_empty_pp, SethReduction::EmptyPp);

pub fn sat_via_appx_scc(
    f: &CnfFormula,
    k: u64,
    delta: Option<Delta>,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<SethOutcome> {
    let cfg = SethConfig {
        delta,
        mode,
        check_isolation: false,
    };
    run_seth(SethReduction::AppxScc { k }, f, &cfg, factory)
}

pub fn sat_via_subunion(
    f: &CnfFormula,
    delta: Option<Delta>,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
    via_connsub: bool,
) -> Result<SethOutcome> {
    let reduction = if via_connsub {
        SethReduction::ConnSub
    } else {
        SethReduction::SubUnion
    };
    let cfg = SethConfig {
        delta,
        mode,
        check_isolation: false,
    };
    run_seth(reduction, f, &cfg, factory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::Baseline;
    use crate::model::parse_cnf;
    use crate::oracles::oracle_sat;

    fn base() -> Arc<dyn EngineFactory> {
        Arc::new(Baseline)
    }

    fn example() -> CnfFormula {
        parse_cnf("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap()
    }

    fn contradiction() -> CnfFormula {
        parse_cnf("p cnf 1 2\n1 0\n-1 0\n").unwrap()
    }

    #[test]
    fn h_delta_example() {
        let h = build_h_delta(&example(), Delta::new(1, 2)).unwrap();
        assert_eq!(h.split_size, 1);
        // index 0 is x1=F, index 1 is x1=T
        assert_eq!(h.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn h_delta_tautology_and_outside_clause() {
        let f = parse_cnf("p cnf 2 2\n1 -1 0\n2 0\n").unwrap();
        let h = build_h_delta(&f, Delta::new(1, 2)).unwrap();
        assert_eq!(h.pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn h_delta_split_guard() {
        let f = CnfFormula::new(60, vec![]).unwrap();
        assert!(matches!(
            build_h_delta(&f, Delta::new(1, 2)),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn delta_parsing() {
        assert_eq!(parse_delta("1/2").unwrap(), Delta::new(1, 2));
        assert!(parse_delta("1").is_err());
        assert!(parse_delta("0/3").is_err());
        assert!(parse_delta("x").is_err());
    }

    #[test]
    fn ssr_examples() {
        let out = sat_via_ssr(&example(), None, Mode::Full, base()).unwrap();
        assert!(out.satisfiable);
        // stage 0 (x2=F) fails, stage 1 (x2=T) satisfies
        assert_eq!(out.stages_run, 2);

        let out = sat_via_ssr(&contradiction(), None, Mode::Full, base()).unwrap();
        assert!(!out.satisfiable);
        assert_eq!(out.counters.queries, 1);
    }

    #[test]
    fn ssr_counter_exactness_on_unsat() {
        let f = parse_cnf("p cnf 4 5\n1 2 0\n-1 2 0\n-2 3 0\n-3 4 0\n-4 0\n").unwrap();
        assert!(!oracle_sat(&f).unwrap());
        let out = sat_via_ssr(&f, None, Mode::Full, base()).unwrap();
        assert_eq!(out.counters.queries, 4);
        assert!(out.counters.updates <= 2 * 4 * (5 + 2));
    }

    #[test]
    fn zero_clause_formulas_are_satisfiable_everywhere() {
        let f = CnfFormula::new(4, vec![]).unwrap();
        for r in SethReduction::all() {
            for &mode in r.supported_modes() {
                let cfg = SethConfig::new(mode);
                assert!(
                    run_seth(r, &f, &cfg, base()).unwrap().satisfiable,
                    "{}",
                    r.name()
                );
            }
        }
    }

    #[test]
    fn two_block_reductions_pad_tiny_formulas() {
        let sat = CnfFormula::new(1, vec![vec![1]]).unwrap();
        let unsat = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        for mode in Mode::ALL {
            assert!(sat_via_st_reach(&sat, None, mode, base()).unwrap().satisfiable);
            assert!(!sat_via_st_reach(&unsat, None, mode, base()).unwrap().satisfiable);
            assert!(!sat_via_diam(&unsat, None, mode, base()).unwrap().satisfiable);
        }
        let err = sat_via_st_reach(&sat, Some(Delta::new(3, 4)), Mode::Full, base()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn clause_cap_is_enforced() {
        let f = CnfFormula::new(1, vec![vec![1]; 5]).unwrap();
        assert!(matches!(
            sat_via_ssr(&f, None, Mode::Full, base()),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn all_reductions_match_oracle_on_small_formulas() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.random_range(2..=7);
            let m = rng.random_range(0..=3 * n);
            let clauses = (0..m)
                .map(|_| {
                    (0..rng.random_range(1..=3))
                        .map(|_| {
                            let v = rng.random_range(1..=n as i32);
                            if rng.random_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let f = CnfFormula::new(n, clauses).unwrap();
            let expected = oracle_sat(&f).unwrap();
            for r in SethReduction::all().into_iter().chain([
                SethReduction::AppxScc { k: 3 },
                SethReduction::AppxScc { k: 4 },
            ]) {
                for &mode in r.supported_modes() {
                    let cfg = SethConfig {
                        delta: None,
                        mode,
                        check_isolation: true,
                    };
                    let out = run_seth(r, &f, &cfg, base()).unwrap();
                    assert_eq!(out.satisfiable, expected, "{} {mode} on {f:?}", r.name());
                }
            }
        }
    }
}

//! Triangle-pair listing on tripartite instances through st-SubConn
//! probes, and its decremental st-Reach variant.
//!
//! Vertices are local indices per part: `a < N`, `b < N`, `c < n_C`. B is
//! padded to `N' = 2^L` slots; block `(i, j)` (1-indexed `j`) covers the
//! slots `[(j-1)·N'/2^i, j·N'/2^i)`.

use std::collections::BTreeSet;
use std::ops::Range;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engines::{DynamicEngine, EngineFactory};
use crate::error::{Error, Result};
use crate::model::{
    graph_to_text, parse_graph, CostCounters, Graph, Mode, NodeId, ProblemKind, QueryOp, UpdateOp,
};
use crate::tree::HeapTree;

/// Slack constant in the degree and edge caps.
pub const KAPPA: usize = 2;
/// Largest accepted `N`.
pub const MAX_SIDE: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripartiteInstance {
    /// `|A| = |B|`.
    pub side: usize,
    pub n_c: usize,
    pub r: usize,
    /// Listing cap Δ.
    pub delta: usize,
    pub ab: BTreeSet<(usize, usize)>,
    pub ac: BTreeSet<(usize, usize)>,
    pub bc: BTreeSet<(usize, usize)>,
}

/// `⌈R·√n_C⌉`.
pub fn side_for(n_c: usize, r: usize) -> usize {
    let target = (r * r * n_c) as u128;
    let mut side = ((r as f64) * (n_c as f64).sqrt()).floor() as usize;
    while (side as u128) * (side as u128) < target {
        side += 1;
    }
    while side > 0 && ((side - 1) as u128) * ((side - 1) as u128) >= target {
        side -= 1;
    }
    side
}

impl TripartiteInstance {
    pub fn c_degree_cap(&self) -> usize {
        (KAPPA * self.n_c).div_ceil(self.r).min(self.n_c)
    }

    pub fn ab_cap(&self) -> usize {
        KAPPA * self.n_c * self.r
    }

    /// `⌈κ·n_C²/R⌉`.
    pub fn default_delta(n_c: usize, r: usize) -> usize {
        (KAPPA * n_c * n_c).div_ceil(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_c == 0 || self.r == 0 {
            return Err(Error::domain("n_C and R must be positive"));
        }
        if self.side > MAX_SIDE {
            return Err(Error::Guard(format!(
                "N = {} exceeds {MAX_SIDE}",
                self.side
            )));
        }
        let in_range = |set: &BTreeSet<(usize, usize)>, x: usize, y: usize| {
            set.iter().all(|&(p, q)| p < x && q < y)
        };
        if !in_range(&self.ab, self.side, self.side)
            || !in_range(&self.ac, self.side, self.n_c)
            || !in_range(&self.bc, self.side, self.n_c)
        {
            return Err(Error::domain("edge endpoint outside its part"));
        }
        if self.ab.len() > self.ab_cap() {
            return Err(Error::domain(format!(
                "|E_AB| = {} exceeds κ·n_C·R = {}",
                self.ab.len(),
                self.ab_cap()
            )));
        }
        let cap = self.c_degree_cap();
        for (name, nbrs) in [("A", self.a_to_c()), ("B", self.b_to_c())] {
            if let Some(x) = nbrs.iter().position(|row| row.len() > cap) {
                return Err(Error::domain(format!(
                    "{name} vertex {x} has more than {cap} C-neighbours"
                )));
            }
        }
        Ok(())
    }

    fn adjacency(&self, set: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.side];
        for &(x, y) in set {
            rows[x].push(y);
        }
        rows
    }

    pub fn a_to_b(&self) -> Vec<Vec<usize>> {
        self.adjacency(&self.ab)
    }

    pub fn a_to_c(&self) -> Vec<Vec<usize>> {
        self.adjacency(&self.ac)
    }

    pub fn b_to_c(&self) -> Vec<Vec<usize>> {
        self.adjacency(&self.bc)
    }

    /// `log₂ N'`.
    pub fn levels(&self) -> u32 {
        self.side.next_power_of_two().trailing_zeros()
    }

    /// The undirected graph on A (0..N), B (N..2N), C (2N..2N+n_C).
    pub fn to_graph(&self) -> Graph {
        let (n, c0) = (self.side, 2 * self.side);
        let mut g = Graph::undirected(2 * n + self.n_c);
        let edges = self
            .ab
            .iter()
            .map(|&(a, b)| (a, n + b))
            .chain(self.ac.iter().map(|&(a, c)| (a, c0 + c)))
            .chain(self.bc.iter().map(|&(b, c)| (n + b, c0 + c)));
        for (u, v) in edges {
            g.add_edge(u, v).expect("indices are in range");
        }
        g
    }

    /// A `tripartite <N> <n_C> <R> <Delta>` line, then the graph.
    pub fn to_text(&self) -> String {
        format!(
            "tripartite {} {} {} {}\n{}",
            self.side,
            self.n_c,
            self.r,
            self.delta,
            graph_to_text(&self.to_graph())
        )
    }
}

pub fn parse_tripartite(text: &str) -> Result<TripartiteInstance> {
    let (line_no, header) = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::parse(1, "missing partition header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 || toks[0] != "tripartite" {
        return Err(Error::parse(
            line_no,
            "expected 'tripartite <N> <n_C> <R> <Delta>'",
        ));
    }
    let num = |k: usize| -> Result<usize> {
        toks[k]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid number '{}'", toks[k])))
    };
    let (side, n_c, r, delta) = (num(1)?, num(2)?, num(3)?, num(4)?);
    let rest: String = text
        .lines()
        .skip(line_no)
        .map(|l| format!("{l}\n"))
        .collect();
    let g = parse_graph(&rest).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line: line + line_no,
            message,
        },
        other => other,
    })?;
    if g.is_directed() || g.node_count() != 2 * side + n_c {
        return Err(Error::domain(format!(
            "the graph must be undirected with 2N + n_C = {} nodes",
            2 * side + n_c
        )));
    }
    let part = |v: usize| {
        if v < side {
            (0, v)
        } else if v < 2 * side {
            (1, v - side)
        } else {
            (2, v - 2 * side)
        }
    };
    let mut inst = TripartiteInstance {
        side,
        n_c,
        r,
        delta,
        ab: BTreeSet::new(),
        ac: BTreeSet::new(),
        bc: BTreeSet::new(),
    };
    for (u, v, _) in g.edges() {
        match (part(u), part(v)) {
            ((0, a), (1, b)) => inst.ab.insert((a, b)),
            ((0, a), (2, c)) => inst.ac.insert((a, c)),
            ((1, b), (2, c)) => inst.bc.insert((b, c)),
            _ => {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) lies inside one part"
                )))
            }
        };
    }
    inst.validate()?;
    Ok(inst)
}

/// Samples each allowed edge with probability `density`, then trims to the
/// cap by a uniform random subset.
fn sample(
    rng: &mut ChaCha8Rng,
    candidates: impl Iterator<Item = usize>,
    density: f64,
    cap: usize,
) -> Vec<usize> {
    let mut chosen: Vec<usize> = candidates.filter(|_| rng.random_bool(density)).collect();
    chosen.shuffle(rng);
    chosen.truncate(cap);
    chosen.sort_unstable();
    chosen
}

/// A random instance meeting the degree and edge caps.
pub fn gen_tripartite_instance(
    n_c: usize,
    r: usize,
    density: f64,
    seed: u64,
) -> Result<TripartiteInstance> {
    if n_c == 0 || r == 0 {
        return Err(Error::domain("n_C and R must be positive"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::domain(format!(
            "density {density} is outside [0, 1]"
        )));
    }
    let side = side_for(n_c, r);
    if side > MAX_SIDE {
        return Err(Error::Guard(format!(
            "N = ⌈R·√n_C⌉ = {side} exceeds {MAX_SIDE}"
        )));
    }
    let mut inst = TripartiteInstance {
        side,
        n_c,
        r,
        delta: TripartiteInstance::default_delta(n_c, r),
        ab: BTreeSet::new(),
        ac: BTreeSet::new(),
        bc: BTreeSet::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = inst.c_degree_cap();
    for x in 0..side {
        for c in sample(&mut rng, 0..n_c, density, cap) {
            inst.ac.insert((x, c));
        }
    }
    for x in 0..side {
        for c in sample(&mut rng, 0..n_c, density, cap) {
            inst.bc.insert((x, c));
        }
    }
    for p in sample(&mut rng, 0..side * side, density, inst.ab_cap()) {
        inst.ab.insert((p / side, p % side));
    }
    inst.validate()?;
    Ok(inst)
}

/// All `(a, b) ∈ E_AB` whose endpoints share a C-neighbour, sorted.
pub fn brute_force_pairs(inst: &TripartiteInstance) -> Vec<(usize, usize)> {
    let (ac, bc) = (inst.a_to_c(), inst.b_to_c());
    inst.ab
        .iter()
        .copied()
        .filter(|&(a, b)| ac[a].iter().any(|c| bc[b].binary_search(c).is_ok()))
        .collect()
}

/// Every triangle `(a, b, c)` over the given pairs, sorted and deduplicated.
pub fn pairs_to_triangles(
    inst: &TripartiteInstance,
    pairs: &[(usize, usize)],
) -> Vec<(usize, usize, usize)> {
    let (ac, bc) = (inst.a_to_c(), inst.b_to_c());
    let mut out = BTreeSet::new();
    for &(a, b) in pairs {
        if !inst.ab.contains(&(a, b)) {
            continue;
        }
        let scan: BTreeSet<usize> = ac[a].iter().chain(&bc[b]).copied().collect();
        for c in scan {
            if ac[a].binary_search(&c).is_ok() && bc[b].binary_search(&c).is_ok() {
                out.insert((a, b, c));
            }
        }
    }
    out.into_iter().collect()
}

/// The B slots of block `(i, j)`, clipped to real vertices.
pub fn block(inst: &TripartiteInstance, i: u32, j: usize) -> Range<usize> {
    let width = inst.side.next_power_of_two() >> i;
    let start = (j - 1) * width;
    start.min(inst.side)..(start + width).min(inst.side)
}

fn check_block(inst: &TripartiteInstance, i: u32, j: usize) -> Result<()> {
    if i > inst.levels() || j == 0 || j > 1usize << i {
        return Err(Error::domain(format!("no block ({i}, {j})")));
    }
    Ok(())
}

/// A triangle probe: is there `b ∈ N(a) ∩ B_{i,j}` sharing a C-neighbour
/// with `a`?
pub trait ProbeBackend {
    fn probe(&mut self, a: usize, i: u32, j: usize) -> Result<bool>;
    fn counters(&self) -> CostCounters;
}

/// The st-SubConn probe: H is the instance without E_AB, plus `s`
/// adjacent to A and `t` adjacent to B. C, s, t are active.
pub struct SubConnProbe {
    inst: TripartiteInstance,
    a_to_b: Vec<Vec<usize>>,
    engine: Box<dyn DynamicEngine>,
}

impl SubConnProbe {
    pub fn new(inst: &TripartiteInstance, factory: Arc<dyn EngineFactory>) -> Result<Self> {
        inst.validate()?;
        let (n, c0) = (inst.side, 2 * inst.side);
        let (s, t) = (c0 + inst.n_c, c0 + inst.n_c + 1);
        let mut h = Graph::undirected(t + 1);
        for &(a, c) in &inst.ac {
            h.add_edge(a, c0 + c)?;
        }
        for &(b, c) in &inst.bc {
            h.add_edge(n + b, c0 + c)?;
        }
        for x in 0..n {
            h.add_edge(s, x)?;
            h.add_edge(t, n + x)?;
        }
        let expected = inst.ac.len() + inst.bc.len() + 2 * n;
        if h.edge_count() != expected {
            return Err(Error::Construction(format!(
                "probe graph has {} edges, expected {expected}",
                h.edge_count()
            )));
        }
        h.set_st(s, t)?;
        h.set_active((c0..=t).collect::<Vec<_>>())?;
        let engine = factory.build(ProblemKind::StSubConn, Mode::Incremental, h.into())?;
        Ok(SubConnProbe {
            a_to_b: inst.a_to_b(),
            inst: inst.clone(),
            engine,
        })
    }
}

impl ProbeBackend for SubConnProbe {
    fn probe(&mut self, a: usize, i: u32, j: usize) -> Result<bool> {
        check_block(&self.inst, i, j)?;
        let range = block(&self.inst, i, j);
        let n = self.inst.side;
        let bs: Vec<usize> = self.a_to_b[a]
            .iter()
            .copied()
            .filter(|b| range.contains(b))
            .collect();
        let cp = self.engine.checkpoint();
        let answer = (|| {
            if !bs.is_empty() {
                self.engine.update(UpdateOp::ActivateNode(a))?;
                for &b in &bs {
                    self.engine.update(UpdateOp::ActivateNode(n + b))?;
                }
            }
            self.engine.query(QueryOp::StConnected)?.as_bool()
        })();
        self.engine.rollback(cp)?;
        answer
    }

    fn counters(&self) -> CostCounters {
        self.engine.counters()
    }
}

/// The decremental st-Reach probe: arcs a→c and c→b, a tree T_s from `s`
/// over A and a tree T_t into `t` over B. A probe deletes the T_s siblings
/// off the path to `a` and every T_t subtree without a leaf in
/// `N(a) ∩ B_{i,j}`, queries, and rolls back.
pub struct DecrementalProbe {
    inst: TripartiteInstance,
    a_to_b: Vec<Vec<usize>>,
    ts: HeapTree,
    tt: HeapTree,
    engine: Box<dyn DynamicEngine>,
    /// Deletions issued by the most recent probe.
    pub last_deletions: u64,
}

impl DecrementalProbe {
    pub fn new(inst: &TripartiteInstance, factory: Arc<dyn EngineFactory>) -> Result<Self> {
        inst.validate()?;
        let (n, c0) = (inst.side, 2 * inst.side);
        let (s, t) = (c0 + inst.n_c, c0 + inst.n_c + 1);
        let mut h = Graph::directed(t + 1);
        for &(a, c) in &inst.ac {
            h.add_edge(a, c0 + c)?;
        }
        for &(b, c) in &inst.bc {
            h.add_edge(c0 + c, n + b)?;
        }
        let a_leaves: Vec<NodeId> = (0..n).collect();
        let b_leaves: Vec<NodeId> = (n..2 * n).collect();
        let ts = HeapTree::build(&mut h, s, &a_leaves, false)?;
        let tt = HeapTree::build(&mut h, t, &b_leaves, true)?;
        h.set_st(s, t)?;
        let engine = factory.build(ProblemKind::StReach, Mode::Decremental, h.into())?;
        Ok(DecrementalProbe {
            a_to_b: inst.a_to_b(),
            inst: inst.clone(),
            ts,
            tt,
            engine,
            last_deletions: 0,
        })
    }

    /// Arcs whose deletion leaves exactly `keep` (leaf heap indices)
    /// connected to the root.
    fn prune(tree: &HeapTree, keep: &[usize]) -> Vec<(NodeId, NodeId)> {
        let mut on_path = BTreeSet::new();
        for &leaf in keep {
            let mut h = leaf;
            while h >= 1 && on_path.insert(h) {
                h /= 2;
            }
        }
        let mut cuts = Vec::new();
        for &h in on_path.iter().filter(|&&h| !tree.is_leaf(h)) {
            for child in [2 * h, 2 * h + 1] {
                if tree.is_real(child) && !on_path.contains(&child) {
                    cuts.push(tree.arc(child));
                }
            }
        }
        cuts
    }
}

impl ProbeBackend for DecrementalProbe {
    fn probe(&mut self, a: usize, i: u32, j: usize) -> Result<bool> {
        check_block(&self.inst, i, j)?;
        let range = block(&self.inst, i, j);
        let keep_b: Vec<usize> = self.a_to_b[a]
            .iter()
            .filter(|b| range.contains(b))
            .map(|&b| self.tt.leaf(b))
            .collect();
        self.last_deletions = 0;
        if keep_b.is_empty() {
            return Ok(false);
        }
        let mut cuts = Self::prune(&self.ts, &[self.ts.leaf(a)]);
        cuts.extend(Self::prune(&self.tt, &keep_b));
        let levels = self.ts.slots().trailing_zeros() as u64;
        let bound = 2 * keep_b.len() as u64 * levels + 2 * levels;
        if cuts.len() as u64 > bound {
            return Err(Error::Construction(format!(
                "probe needs {} deletions, above the bound {bound}",
                cuts.len()
            )));
        }
        self.last_deletions = cuts.len() as u64;
        let cp = self.engine.checkpoint();
        let answer = cuts
            .iter()
            .try_for_each(|&(u, v)| self.engine.update(UpdateOp::delete(u, v)))
            .and_then(|()| self.engine.query(QueryOp::StReachable)?.as_bool());
        self.engine.rollback(cp)?;
        answer
    }

    fn counters(&self) -> CostCounters {
        self.engine.counters()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairList {
    Pairs(Vec<(usize, usize)>),
    /// More than Δ pairs were reported.
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListPairsOutcome {
    pub result: PairList,
    pub probe_calls: u64,
    pub counters: CostCounters,
}

struct Search<'a> {
    inst: &'a TripartiteInstance,
    probe: &'a mut dyn ProbeBackend,
    levels: u32,
    delta: usize,
    calls: u64,
    pairs: Vec<(usize, usize)>,
}

impl Search<'_> {
    /// Returns false once the listing overflowed.
    fn search(&mut self, a: usize, i: u32, j: usize) -> Result<bool> {
        if block(self.inst, i, j).is_empty() {
            return Ok(true);
        }
        self.calls += 1;
        if !self.probe.probe(a, i, j)? {
            return Ok(true);
        }
        if i == self.levels {
            self.pairs.push((a, j - 1));
            return Ok(self.pairs.len() <= self.delta);
        }
        Ok(self.search(a, i + 1, 2 * j - 1)? && self.search(a, i + 1, 2 * j)?)
    }
}

/// Lists every `(a, b) ∈ E_AB` whose endpoints share a C-neighbour by
/// binary search over B blocks, stopping with Overflow past `delta` pairs.
pub fn list_pairs(
    inst: &TripartiteInstance,
    probe: &mut dyn ProbeBackend,
    delta: usize,
) -> Result<ListPairsOutcome> {
    let mut s = Search {
        inst,
        probe,
        levels: inst.levels(),
        delta,
        calls: 0,
        pairs: Vec::new(),
    };
    let mut overflow = false;
    for a in 0..inst.side {
        if !s.search(a, 0, 1)? {
            overflow = true;
            break;
        }
    }
    let result = if overflow {
        PairList::Overflow
    } else {
        s.pairs.sort_unstable();
        PairList::Pairs(std::mem::take(&mut s.pairs))
    };
    Ok(ListPairsOutcome {
        result,
        probe_calls: s.calls,
        counters: s.probe.counters(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::Baseline;

    fn base() -> Arc<dyn EngineFactory> {
        Arc::new(Baseline)
    }

    /// A = {a1}, B = {b1, b2}, C = {c1}.
    fn tiny() -> TripartiteInstance {
        TripartiteInstance {
            side: 2,
            n_c: 1,
            r: 1,
            delta: 4,
            ab: [(0, 0), (0, 1)].into(),
            ac: [(0, 0)].into(),
            bc: [(0, 0)].into(),
        }
    }

    #[test]
    fn generator_shape() {
        let inst = gen_tripartite_instance(16, 8, 0.5, 1).unwrap();
        assert_eq!(inst.side, 32);
        assert_eq!(inst.c_degree_cap(), 4);
        assert!(inst.validate().is_ok());
        let empty = gen_tripartite_instance(16, 8, 0.0, 1).unwrap();
        assert!(empty.ab.is_empty() && brute_force_pairs(&empty).is_empty());
        assert!(matches!(
            gen_tripartite_instance(4096, 16, 0.5, 1),
            Err(Error::Guard(_))
        ));
        assert!(matches!(
            gen_tripartite_instance(0, 1, 0.5, 1),
            Err(Error::Domain(_))
        ));
        assert_eq!(side_for(2, 3), 5);
    }

    #[test]
    fn text_round_trip() {
        let inst = gen_tripartite_instance(9, 2, 0.6, 4).unwrap();
        assert_eq!(parse_tripartite(&inst.to_text()).unwrap(), inst);
        assert!(parse_tripartite("tripartite 1 1 1\n").is_err());
    }

    #[test]
    fn subconn_probe_examples() {
        let mut p = SubConnProbe::new(&tiny(), base()).unwrap();
        assert!(p.probe(0, 1, 1).unwrap());
        assert!(!p.probe(0, 1, 2).unwrap());
        assert!(p.probe(0, 0, 1).unwrap());
        // an A vertex without B-neighbours: no activations, one query
        let mut inst = tiny();
        inst.ab.clear();
        let mut p = SubConnProbe::new(&inst, base()).unwrap();
        assert!(!p.probe(1, 0, 1).unwrap());
        assert_eq!((p.counters().queries, p.counters().updates), (1, 0));
    }

    #[test]
    fn list_pairs_example() {
        let inst = tiny();
        let mut p = SubConnProbe::new(&inst, base()).unwrap();
        let out = list_pairs(&inst, &mut p, inst.delta).unwrap();
        assert_eq!(out.result, PairList::Pairs(vec![(0, 0)]));
        // a1 at level 0, both children, nothing for a2
        assert_eq!(out.probe_calls, 4);
        let out = list_pairs(&inst, &mut SubConnProbe::new(&inst, base()).unwrap(), 0).unwrap();
        assert_eq!(out.result, PairList::Overflow);
        assert_eq!(pairs_to_triangles(&inst, &[(0, 0)]), vec![(0, 0, 0)]);
        assert!(pairs_to_triangles(&inst, &[]).is_empty());
    }

    #[test]
    fn two_common_neighbours_give_two_triangles() {
        let inst = TripartiteInstance {
            side: 1,
            n_c: 2,
            r: 1,
            delta: 1,
            ab: [(0, 0)].into(),
            ac: [(0, 0), (0, 1)].into(),
            bc: [(0, 0), (0, 1)].into(),
        };
        assert_eq!(
            pairs_to_triangles(&inst, &[(0, 0)]),
            vec![(0, 0, 0), (0, 0, 1)]
        );
    }

    #[test]
    fn triangle_free_costs_one_probe_per_a() {
        let mut inst = gen_tripartite_instance(9, 3, 0.5, 2).unwrap();
        inst.bc.clear();
        let mut p = SubConnProbe::new(&inst, base()).unwrap();
        let out = list_pairs(&inst, &mut p, inst.delta).unwrap();
        assert_eq!(out.result, PairList::Pairs(vec![]));
        assert_eq!(out.probe_calls, inst.side as u64);
    }

    #[test]
    fn listing_matches_brute_force_with_both_probes() {
        for seed in 0..12 {
            let inst =
                gen_tripartite_instance(1 + seed as usize % 12, 2 + seed as usize % 3, 0.4, seed)
                    .unwrap();
            let expected = brute_force_pairs(&inst);
            let levels = inst.levels() as u64;
            let mut sub = SubConnProbe::new(&inst, base()).unwrap();
            let mut dec = DecrementalProbe::new(&inst, base()).unwrap();
            for probe in [&mut sub as &mut dyn ProbeBackend, &mut dec] {
                let out = list_pairs(&inst, probe, usize::MAX).unwrap();
                assert_eq!(out.result, PairList::Pairs(expected.clone()), "seed {seed}");
                let p = expected.len() as u64;
                assert!(out.probe_calls <= inst.side as u64 + 2 * p * (levels + 1));
            }
            assert!(sub.counters().updates <= 2 * (levels + 1) * inst.ab.len() as u64);
        }
    }

    #[test]
    fn decremental_probe_agrees_with_subconn_probe() {
        let inst = gen_tripartite_instance(16, 4, 0.5, 8).unwrap();
        let mut sub = SubConnProbe::new(&inst, base()).unwrap();
        let mut dec = DecrementalProbe::new(&inst, base()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let levels = inst.levels();
        for _ in 0..100 {
            let a = rng.random_range(0..inst.side);
            let i = rng.random_range(0..=levels);
            let j = rng.random_range(1..=1usize << i);
            assert_eq!(sub.probe(a, i, j).unwrap(), dec.probe(a, i, j).unwrap());
        }
        // singleton block: at most 2·log₂N' deletions
        let (a, b) = *inst.ab.iter().next().unwrap();
        dec.probe(a, levels, b + 1).unwrap();
        assert!(dec.last_deletions <= 2 * levels as u64);
    }

    #[test]
    fn block_sums_partition_degrees() {
        let inst = gen_tripartite_instance(16, 4, 0.5, 3).unwrap();
        let a_to_b = inst.a_to_b();
        for i in 0..=inst.levels() {
            for (a, row) in a_to_b.iter().enumerate() {
                let total: usize = (1..=1usize << i)
                    .map(|j| {
                        row.iter()
                            .filter(|b| block(&inst, i, j).contains(b))
                            .count()
                    })
                    .sum();
                assert_eq!(total, a_to_b[a].len());
            }
        }
    }

    #[test]
    fn rejects_bad_blocks() {
        let mut p = SubConnProbe::new(&tiny(), base()).unwrap();
        assert!(p.probe(0, 0, 2).is_err());
        assert!(p.probe(0, 5, 1).is_err());
    }
}

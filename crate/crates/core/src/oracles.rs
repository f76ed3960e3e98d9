//! Brute-force ground truth. Everything here is written for clarity, not
//! speed, and shares no code with the engines.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Answer, CnfFormula, Graph, Instance, NodeId, QueryOp};

pub const SAT_ORACLE_MAX_VARS: usize = 24;
pub const MATCHING_ORACLE_MAX_NODES: usize = 200;
pub const WEIGHTED_MATCHING_ORACLE_MAX_NODES: usize = 24;
pub const THREESUM_ORACLE_MAX_LEN: usize = 2000;

pub fn oracle_sat(f: &CnfFormula) -> Result<bool> {
    let n = f.var_count();
    if n > SAT_ORACLE_MAX_VARS {
        return Err(Error::Guard(format!(
            "SAT oracle limited to {SAT_ORACLE_MAX_VARS} variables, got {n}"
        )));
    }
    Ok((0..1u64 << n).any(|a| f.is_satisfied_by(a)))
}

/// A triangle `u < v < w` and its total weight (3 for unweighted graphs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleHit {
    pub u: NodeId,
    pub v: NodeId,
    pub w: NodeId,
    pub weight: u64,
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        return Err(Error::domain("triangle oracles need an undirected graph"));
    }
    Ok(())
}

/// The lexicographically first triangle, or with `weighted` the first
/// triangle of minimum total weight.
pub fn oracle_triangle(g: &Graph, weighted: bool) -> Result<Option<TriangleHit>> {
    require_undirected(g)?;
    let n = g.node_count();
    let mut best: Option<TriangleHit> = None;
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                continue;
            }
            for w in v + 1..n {
                let Some(weight) = g.triangle_weight(u, v, w) else {
                    continue;
                };
                if !weighted {
                    return Ok(Some(TriangleHit { u, v, w, weight }));
                }
                if best.is_none_or(|b| weight < b.weight) {
                    best = Some(TriangleHit { u, v, w, weight });
                }
            }
        }
    }
    Ok(best)
}

/// Minimum weight of a triangle through `x`, if any.
pub fn min_triangle_weight_through(g: &Graph, x: NodeId) -> Result<Option<u64>> {
    require_undirected(g)?;
    g.check_node(x)?;
    let n = g.node_count();
    let mut best = None;
    for v in 0..n {
        for w in v + 1..n {
            if let Some(weight) = g.triangle_weight(x, v, w) {
                best = Some(best.map_or(weight, |b: u64| b.min(weight)));
            }
        }
    }
    Ok(best)
}

pub fn in_triangle(g: &Graph, x: NodeId) -> Result<bool> {
    Ok(min_triangle_weight_through(g, x)?.is_some())
}

/// Three distinct members `a + b = c` of the set formed by `values`.
pub fn oracle_threesum(values: &[i64]) -> Result<Option<(i64, i64, i64)>> {
    if values.len() > THREESUM_ORACLE_MAX_LEN {
        return Err(Error::Guard(format!(
            "3SUM oracle limited to {THREESUM_ORACLE_MAX_LEN} values"
        )));
    }
    let set: BTreeSet<i64> = values.iter().copied().collect();
    let lookup: HashSet<i64> = set.iter().copied().collect();
    let items: Vec<i64> = set.into_iter().collect();
    for (i, &a) in items.iter().enumerate() {
        for &b in &items[i + 1..] {
            let Some(c) = a.checked_add(b) else { continue };
            if c != a && c != b && lookup.contains(&c) {
                return Ok(Some((a, b, c)));
            }
        }
    }
    Ok(None)
}

fn out_lists(g: &Graph) -> Vec<Vec<NodeId>> {
    let mut out = vec![Vec::new(); g.node_count()];
    for (u, v, _) in g.edges() {
        out[u].push(v);
        if !g.is_directed() {
            out[v].push(u);
        }
    }
    out
}

fn need(v: Option<NodeId>, name: &str) -> Result<NodeId> {
    v.ok_or_else(|| Error::domain(format!("metric needs distinguished vertex {name}")))
}

/// Nodes reachable from `src` (including `src`) by iterative DFS.
pub fn reachable_from(g: &Graph, src: NodeId) -> Result<Vec<bool>> {
    g.check_node(src)?;
    let out = out_lists(g);
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![src];
    seen[src] = true;
    while let Some(u) = stack.pop() {
        for &v in &out[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    Ok(seen)
}

pub fn st_reachable(g: &Graph) -> Result<bool> {
    let s = need(g.s(), "s")?;
    let t = need(g.t(), "t")?;
    Ok(reachable_from(g, s)?[t])
}

/// Nodes reachable from `s`, not counting `s` itself.
pub fn reach_count(g: &Graph) -> Result<u64> {
    let s = need(g.s(), "s")?;
    Ok(reachable_from(g, s)?.iter().filter(|&&r| r).count() as u64 - 1)
}

/// Strongly connected components by Tarjan's algorithm (iterative).
/// Returns a component id per node.
pub fn scc_ids(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let out = out_lists(g);
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(NodeId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if let Some(&v) = out[u].get(*pos) {
                *pos += 1;
                if index[v] == UNSEEN {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == u {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

pub fn scc_count(g: &Graph) -> usize {
    scc_ids(g).into_iter().max().map_or(0, |m| m + 1)
}

pub fn max_scc_size(g: &Graph) -> usize {
    let ids = scc_ids(g);
    let mut sizes = vec![0; ids.len()];
    for id in ids {
        sizes[id] += 1;
    }
    sizes.into_iter().max().unwrap_or(0)
}

pub fn strongly_connected(g: &Graph) -> bool {
    scc_count(g) <= 1
}

/// The nodes considered active; a graph without an activation set has all
/// nodes active.
pub fn active_nodes(g: &Graph) -> BTreeSet<NodeId> {
    match g.active_set() {
        Some(a) => a.clone(),
        None => (0..g.node_count()).collect(),
    }
}

fn connected_within(g: &Graph, allowed: &BTreeSet<NodeId>, from: NodeId) -> BTreeSet<NodeId> {
    let out = out_lists(g);
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &v in &out[u] {
            if allowed.contains(&v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen
}

/// Whether `s` and `t` are connected through active nodes; `s` and `t`
/// themselves count as active.
pub fn st_connected(g: &Graph) -> Result<bool> {
    let s = need(g.s(), "s")?;
    let t = need(g.t(), "t")?;
    let mut allowed = active_nodes(g);
    allowed.insert(s);
    allowed.insert(t);
    Ok(connected_within(g, &allowed, s).contains(&t))
}

/// Whether the subgraph induced by the active nodes is connected. Zero or
/// one active node counts as connected.
pub fn induced_connected(g: &Graph) -> bool {
    let allowed = active_nodes(g);
    match allowed.first() {
        None => true,
        Some(&first) => connected_within(g, &allowed, first).len() == allowed.len(),
    }
}

/// All-pairs distances by Floyd–Warshall; `None` marks unreachable pairs.
pub fn all_pairs_distances(g: &Graph) -> Vec<Vec<Option<u64>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for (u, v, w) in g.edges() {
        d[u][v] = Some(d[u][v].map_or(w, |x: u64| x.min(w)));
        if !g.is_directed() {
            d[v][u] = d[u][v];
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(dkj) = d[k][j] {
                    let via = dik + dkj;
                    if d[i][j].is_none_or(|cur| via < cur) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d
}

pub fn st_distance(g: &Graph) -> Result<Option<u64>> {
    let s = need(g.s(), "s")?;
    let t = need(g.t(), "t")?;
    Ok(all_pairs_distances(g)[s][t])
}

/// Largest finite distance over ordered pairs, or `None` when some pair is
/// unreachable.
pub fn diameter(g: &Graph) -> Option<u64> {
    let d = all_pairs_distances(g);
    let mut best = 0;
    for row in &d {
        for &x in row {
            best = best.max(x?);
        }
    }
    Some(best)
}

/// Whether every node of `T` is reachable from every node of `S`.
pub fn all_st_reachable(g: &Graph) -> Result<bool> {
    let (Some(sources), Some(targets)) = (g.s_set(), g.t_set()) else {
        return Err(Error::domain("metric needs the S and T node sets"));
    };
    for &s in sources {
        let seen = reachable_from(g, s)?;
        if targets.iter().any(|&t| !seen[t]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every metric the engines answer, computed on one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMetrics {
    pub reachable_st: Option<bool>,
    pub reach_count: Option<u64>,
    pub scc_count: usize,
    pub max_scc_size: usize,
    pub strongly_connected: bool,
    pub induced_connected: bool,
    pub st_connected: Option<bool>,
    pub diameter: Option<u64>,
    pub dist_st: Option<Option<u64>>,
    pub all_st_reachable: Option<bool>,
}

pub fn oracle_graph_metrics(g: &Graph) -> GraphMetrics {
    let has_st = g.s().is_some() && g.t().is_some();
    GraphMetrics {
        reachable_st: has_st.then(|| st_reachable(g).expect("s and t present")),
        reach_count: g.s().map(|_| reach_count(g).expect("s present")),
        scc_count: scc_count(g),
        max_scc_size: max_scc_size(g),
        strongly_connected: strongly_connected(g),
        induced_connected: induced_connected(g),
        st_connected: has_st.then(|| st_connected(g).expect("s and t present")),
        diameter: diameter(g),
        dist_st: has_st.then(|| st_distance(g).expect("s and t present")),
        all_st_reachable: all_st_reachable(g).ok(),
    }
}

/// Two-colouring of an undirected graph: `true` marks side 1. The smallest
/// id of each component goes on side 0.
pub fn bipartition(g: &Graph) -> Result<Vec<bool>> {
    if g.is_directed() {
        return Err(Error::domain("matching needs an undirected graph"));
    }
    let n = g.node_count();
    let out = out_lists(g);
    let mut side: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].expect("coloured before enqueue");
            for &v in &out[u] {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        queue.push_back(v);
                    }
                    Some(sv) if sv == su => {
                        return Err(Error::domain(format!(
                            "graph is not bipartite (edge {u}-{v})"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(side.into_iter().map(|s| s.expect("all coloured")).collect())
}

/// Maximum matching size by repeated simple augmenting-path search (Kuhn).
pub fn max_matching_size(g: &Graph) -> Result<usize> {
    let side = bipartition(g)?;
    let n = g.node_count();
    if n > MATCHING_ORACLE_MAX_NODES {
        return Err(Error::Guard(format!(
            "matching oracle limited to {MATCHING_ORACLE_MAX_NODES} nodes"
        )));
    }
    let out = out_lists(g);
    let mut mate: Vec<Option<NodeId>> = vec![None; n];

    fn try_augment(
        u: NodeId,
        out: &[Vec<NodeId>],
        mate: &mut [Option<NodeId>],
        visited: &mut [bool],
    ) -> bool {
        for &v in &out[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if mate[v].is_none_or(|w| try_augment(w, out, mate, visited)) {
                mate[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut size = 0;
    for u in (0..n).filter(|&u| !side[u]) {
        let mut visited = vec![false; n];
        if try_augment(u, &out, &mut mate, &mut visited) {
            size += 1;
        }
    }
    Ok(size)
}

pub fn has_perfect_matching(g: &Graph) -> Result<bool> {
    Ok(2 * max_matching_size(g)? == g.node_count())
}

/// Maximum total weight of a perfect matching, by exhaustive DP over the
/// subsets of side 1. `None` when no perfect matching exists.
pub fn max_weight_pm_weight(g: &Graph) -> Result<Option<u64>> {
    let side = bipartition(g)?;
    let n = g.node_count();
    if n > WEIGHTED_MATCHING_ORACLE_MAX_NODES {
        return Err(Error::Guard(format!(
            "weighted matching oracle limited to {WEIGHTED_MATCHING_ORACLE_MAX_NODES} nodes"
        )));
    }
    let left: Vec<NodeId> = (0..n).filter(|&v| !side[v]).collect();
    let right: Vec<NodeId> = (0..n).filter(|&v| side[v]).collect();
    if left.len() != right.len() {
        return Ok(None);
    }
    let k = right.len();
    // best[mask]: max weight matching the first popcount(mask) left nodes onto `mask`.
    let mut best: Vec<Option<u64>> = vec![None; 1 << k];
    best[0] = Some(0);
    for mask in 0usize..1 << k {
        let Some(cur) = best[mask] else { continue };
        let l = left[mask.count_ones() as usize..].first().copied();
        let Some(l) = l else { continue };
        for (j, &r) in right.iter().enumerate() {
            if mask & (1 << j) != 0 {
                continue;
            }
            if let Some(w) = g.weight(l, r) {
                let next = &mut best[mask | (1 << j)];
                if next.is_none_or(|x| cur + w > x) {
                    *next = Some(cur + w);
                }
            }
        }
    }
    Ok(best[(1 << k) - 1])
}

/// Matching oracle bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingMetrics {
    pub max_matching_size: usize,
    pub has_perfect: bool,
    pub max_weight_pm_weight: Option<u64>,
}

pub fn oracle_matching(g: &Graph, weighted: bool) -> Result<MatchingMetrics> {
    let size = max_matching_size(g)?;
    Ok(MatchingMetrics {
        max_matching_size: size,
        has_perfect: 2 * size == g.node_count(),
        max_weight_pm_weight: if weighted {
            max_weight_pm_weight(g)?
        } else {
            None
        },
    })
}

/// Checks that `matching` is a matching of `g` and returns the mate array.
pub fn mates_of(g: &Graph, matching: &[(NodeId, NodeId)]) -> Result<Vec<Option<NodeId>>> {
    let mut mate = vec![None; g.node_count()];
    for &(u, v) in matching {
        if !g.has_edge(u, v) {
            return Err(Error::domain(format!(
                "matching edge ({u}, {v}) is not in the graph"
            )));
        }
        if mate[u].is_some() || mate[v].is_some() {
            return Err(Error::domain(format!(
                "matching edges share a node at ({u}, {v})"
            )));
        }
        mate[u] = Some(v);
        mate[v] = Some(u);
    }
    Ok(mate)
}

/// Whether some augmenting path with at most `k` edges exists. Runs one
/// alternating BFS per free side-0 node.
pub fn has_short_augpath(g: &Graph, matching: &[(NodeId, NodeId)], k: usize) -> Result<bool> {
    let side = bipartition(g)?;
    let mate = mates_of(g, matching)?;
    let out = out_lists(g);
    let n = g.node_count();
    for src in (0..n).filter(|&v| !side[v] && mate[v].is_none()) {
        let mut depth: Vec<Option<usize>> = vec![None; n];
        depth[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = depth[u].expect("queued nodes have a depth");
            if du + 1 > k {
                continue;
            }
            for &v in &out[u] {
                if depth[v].is_some() || mate[u] == Some(v) {
                    continue;
                }
                depth[v] = Some(du + 1);
                match mate[v] {
                    None => return Ok(true),
                    Some(w) if depth[w].is_none() => {
                        depth[w] = Some(du + 2);
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(false)
}

/// The answer a correct engine gives to `q` on `inst`, or `None` for
/// `KAugFreeMatchingSize`, whose value depends on the matching found (see
/// [`kaug_size_is_plausible`]).
pub fn oracle_query(inst: &Instance, q: QueryOp) -> Result<Option<Answer>> {
    use QueryOp::*;
    let graph = || {
        inst.as_graph()
            .ok_or_else(|| Error::domain(format!("{q:?} needs a graph")))
    };
    let sets = || {
        inst.as_sets()
            .ok_or_else(|| Error::domain(format!("{q:?} needs a set system")))
    };
    let int = |x: Option<u64>| x.map_or(Answer::Absent, |v| Answer::Int(v as i64));
    Ok(Some(match q {
        StConnected => Answer::Bool(st_connected(graph()?)?),
        StReachable => Answer::Bool(st_reachable(graph()?)?),
        ReachCountLessThan(bound) => Answer::Bool(reach_count(graph()?)? < bound),
        StronglyConnected => Answer::Bool(strongly_connected(graph()?)),
        MoreThanTwoSccs => Answer::Bool(scc_count(graph()?) > 2),
        SccCount2VsK(k) => {
            let count = scc_count(graph()?) as u64;
            if count <= 2 {
                Answer::Bool(false)
            } else if count > k {
                Answer::Bool(true)
            } else {
                return Err(Error::Promise(format!("{count} SCCs is between 2 and {k}")));
            }
        }
        MaxSccSize => Answer::Int(max_scc_size(graph()?) as i64),
        InducedConnected => Answer::Bool(induced_connected(graph()?)),
        HasPerfectMatching => Answer::Bool(has_perfect_matching(graph()?)?),
        KAugFreeMatchingSize(_) => return Ok(None),
        MaxWeightPmWeight => int(max_weight_pm_weight(graph()?)?),
        StDistance => int(st_distance(graph()?)?),
        AllStReachable => Answer::Bool(all_st_reachable(graph()?)?),
        Diameter => int(diameter(graph()?)),
        UnionIsUniverse => {
            let x = sets()?;
            let mut covered = BTreeSet::new();
            for &i in x.scope() {
                covered.extend(x.members(i)?);
            }
            Answer::Bool(covered.len() == x.universe_size())
        }
        Member(i, u) => Answer::Bool(sets()?.members(i)?.contains(&u)),
        IsEmpty(i) => Answer::Bool(sets()?.members(i)?.is_empty()),
    }))
}

/// A matching without augmenting paths of length `<= k` has at least
/// `(k'+1)/(k'+3)` of the maximum size, `k'` the largest odd number `<= k`.
pub fn kaug_size_is_plausible(g: &Graph, k: usize, size: usize) -> Result<bool> {
    let max = max_matching_size(g)?;
    if k == 0 {
        return Ok(size <= max);
    }
    let k = k - (1 - k % 2);
    Ok(size <= max && size * (k + 3) >= max * (k + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_cnf;

    fn k3() -> Graph {
        Graph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn sat_examples() {
        let f = parse_cnf("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
        assert!(oracle_sat(&f).unwrap());
        let f = parse_cnf("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert!(!oracle_sat(&f).unwrap());
        assert!(oracle_sat(&CnfFormula::new(3, vec![]).unwrap()).unwrap());
        let big = CnfFormula::new(25, vec![]).unwrap();
        assert!(matches!(oracle_sat(&big), Err(Error::Guard(_))));
    }

    #[test]
    fn triangle_examples() {
        let hit = oracle_triangle(&k3(), false).unwrap().unwrap();
        assert_eq!((hit.u, hit.v, hit.w), (0, 1, 2));
        let path = Graph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(oracle_triangle(&path, false).unwrap(), None);

        let mut g = Graph::weighted(3, false, 3).unwrap();
        g.add_weighted_edge(0, 1, 1).unwrap();
        g.add_weighted_edge(0, 2, 2).unwrap();
        g.add_weighted_edge(1, 2, 3).unwrap();
        assert_eq!(oracle_triangle(&g, true).unwrap().unwrap().weight, 6);
        assert!(oracle_triangle(&Graph::directed(3), false).is_err());
    }

    #[test]
    fn weighted_triangle_picks_minimum() {
        let mut g = Graph::weighted(4, false, 9).unwrap();
        for (u, v, w) in [(0, 1, 9), (1, 2, 9), (0, 2, 9), (1, 3, 1), (2, 3, 1)] {
            g.add_weighted_edge(u, v, w).unwrap();
        }
        let hit = oracle_triangle(&g, true).unwrap().unwrap();
        assert_eq!((hit.u, hit.v, hit.w, hit.weight), (1, 2, 3, 11));
        assert_eq!(min_triangle_weight_through(&g, 0).unwrap(), Some(27));
    }

    #[test]
    fn threesum_examples() {
        assert_eq!(oracle_threesum(&[1, 2, 3]).unwrap(), Some((1, 2, 3)));
        assert_eq!(oracle_threesum(&[1, 2, 4]).unwrap(), None);
        assert_eq!(oracle_threesum(&[0, 5, 5]).unwrap(), None);
        assert_eq!(oracle_threesum(&[-3, 1, -2]).unwrap(), Some((-3, 1, -2)));
    }

    #[test]
    fn metric_examples() {
        let mut star = Graph::from_edges(4, true, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        star.set_s(0).unwrap();
        assert_eq!(reach_count(&star).unwrap(), 3);

        let cycle = Graph::from_edges(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(strongly_connected(&cycle));
        assert_eq!(scc_count(&cycle), 1);

        let path = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(diameter(&path), Some(3));
        assert!(st_reachable(&path).is_err());
    }

    #[test]
    fn scc_on_two_cycles_joined_one_way() {
        let g = Graph::from_edges(
            5,
            true,
            &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (4, 4 - 1)],
        )
        .unwrap();
        assert_eq!(scc_count(&g), 3);
        assert_eq!(max_scc_size(&g), 2);
    }

    #[test]
    fn subconn_semantics() {
        let mut g = Graph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap();
        g.set_st(0, 2).unwrap();
        g.set_active([]).unwrap();
        assert!(!st_connected(&g).unwrap());
        g.activate(1).unwrap();
        assert!(st_connected(&g).unwrap());
    }

    #[test]
    fn matching_examples() {
        let edge = Graph::from_edges(2, false, &[(0, 1)]).unwrap();
        assert!(has_perfect_matching(&edge).unwrap());

        let mut g = Graph::weighted(4, false, 4).unwrap();
        for (u, v, w) in [(0, 2, 3), (0, 3, 1), (1, 2, 2), (1, 3, 4)] {
            g.add_weighted_edge(u, v, w).unwrap();
        }
        assert_eq!(max_weight_pm_weight(&g).unwrap(), Some(7));

        let unbalanced = Graph::from_edges(5, false, &[(0, 3), (1, 3), (2, 4)]).unwrap();
        assert!(!has_perfect_matching(&unbalanced).unwrap());
        assert_eq!(max_weight_pm_weight(&unbalanced).unwrap(), None);
        assert!(bipartition(&k3()).is_err());
    }

    #[test]
    fn short_augpath_examples() {
        let edge = Graph::from_edges(2, false, &[(0, 1)]).unwrap();
        assert!(has_short_augpath(&edge, &[], 1).unwrap());
        assert!(!has_short_augpath(&edge, &[(0, 1)], 99).unwrap());

        // a1=0, b1=1, a2=2, b2=3
        let path = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(has_short_augpath(&path, &[(1, 2)], 3).unwrap());
        assert!(!has_short_augpath(&path, &[(1, 2)], 1).unwrap());
        assert!(has_short_augpath(&path, &[(0, 2)], 3).is_err());
    }

    fn matrix_reach(g: &Graph) -> Vec<Vec<bool>> {
        let n = g.node_count();
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (u, v, _) in g.edges() {
            r[u][v] = true;
            if !g.is_directed() {
                r[v][u] = true;
            }
        }
        // Repeated squaring of the boolean reachability matrix.
        let mut steps = 1;
        while steps < n {
            let mut next = r.clone();
            for i in 0..n {
                for j in 0..n {
                    next[i][j] = (0..n).any(|k| r[i][k] && r[k][j]);
                }
            }
            r = next;
            steps *= 2;
        }
        r
    }

    #[test]
    fn metrics_agree_with_matrix_powers() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1..=16);
            let directed = rng.random_bool(0.5);
            let mut g = Graph::new(n, directed);
            for u in 0..n {
                for v in 0..n {
                    if u != v && !g.has_edge(u, v) && rng.random_bool(0.15) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let r = matrix_reach(&g);
            for s in 0..n {
                let seen = reachable_from(&g, s).unwrap();
                assert_eq!(seen, r[s]);
            }
            let sccs = (0..n)
                .filter(|&v| (0..v).all(|u| !(r[u][v] && r[v][u])))
                .count();
            assert_eq!(scc_count(&g), sccs);
            let all_reach = r.iter().all(|row| row.iter().all(|&x| x));
            assert_eq!(diameter(&g).is_some(), all_reach);
        }
    }

    #[test]
    fn full_depth_augpath_matches_max_matching() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let half = rng.random_range(1..=6);
            let mut g = Graph::undirected(2 * half);
            for u in 0..half {
                for v in half..2 * half {
                    if rng.random_bool(0.3) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            // Greedy matching, then compare against the oracle maximum.
            let mut matched = vec![false; 2 * half];
            let mut m = Vec::new();
            for (u, v, _) in g.edges() {
                if !matched[u] && !matched[v] {
                    matched[u] = true;
                    matched[v] = true;
                    m.push((u, v));
                }
            }
            let max = max_matching_size(&g).unwrap();
            assert_eq!(
                has_short_augpath(&g, &m, 2 * g.node_count()).unwrap(),
                m.len() < max
            );
        }
    }
}

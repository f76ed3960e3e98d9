//! Recompute-from-scratch algorithms behind the baseline engines.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Graph, NodeId};

pub(crate) type Adj = Vec<Vec<(NodeId, u64)>>;

/// Disjoint-set forest with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Union-find over the edges whose endpoints both pass `allowed`.
pub(crate) fn components_within(g: &Graph, allowed: &[bool]) -> UnionFind {
    let mut uf = UnionFind::new(g.node_count());
    for (u, v, _) in g.edges() {
        if allowed[u] && allowed[v] {
            uf.union(u, v);
        }
    }
    uf
}

/// BFS hop distances from `src`.
pub(crate) fn bfs(adj: &Adj, src: NodeId) -> Vec<Option<u64>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have a distance");
        for &(v, _) in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Dijkstra with a binary heap; weights are positive.
pub(crate) fn dijkstra(adj: &Adj, src: NodeId) -> Vec<Option<u64>> {
    let mut dist: Vec<Option<u64>> = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut heap = BinaryHeap::from([Reverse((0u64, src))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if dist[v].is_none_or(|cur| nd < cur) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Component id per node by Kosaraju's two-pass algorithm.
pub(crate) fn kosaraju(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for (u, v, _) in g.edges() {
        fwd[u].push(v);
        rev[v].push(u);
        if !g.is_directed() {
            fwd[v].push(u);
            rev[u].push(v);
        }
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if let Some(&v) = fwd[u].get(i) {
                stack.push((u, i + 1));
                if !visited[v] {
                    visited[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = count;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if comp[v] == usize::MAX {
                    comp[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Two-colouring; side 0 holds the smallest id of each component.
pub(crate) fn two_colour(g: &Graph) -> Result<Vec<u8>> {
    if g.is_directed() {
        return Err(Error::domain("matching engines need an undirected graph"));
    }
    let adj = g.adjacency();
    let mut colour = vec![u8::MAX; g.node_count()];
    for root in 0..g.node_count() {
        if colour[root] != u8::MAX {
            continue;
        }
        colour[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if colour[v] == u8::MAX {
                    colour[v] = 1 - colour[u];
                    queue.push_back(v);
                } else if colour[v] == colour[u] {
                    return Err(Error::domain(format!(
                        "graph is not bipartite (edge {u}-{v})"
                    )));
                }
            }
        }
    }
    Ok(colour)
}

/// Maximum matching size by Hopcroft–Karp.
pub(crate) fn hopcroft_karp(g: &Graph) -> Result<usize> {
    let colour = two_colour(g)?;
    let n = g.node_count();
    let adj = g.adjacency();
    let left: Vec<NodeId> = (0..n).filter(|&v| colour[v] == 0).collect();
    let mut mate: Vec<Option<NodeId>> = vec![None; n];
    let mut size = 0;
    loop {
        // Layer the free left nodes and everything alternating-reachable.
        let mut layer = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &u in &left {
            if mate[u].is_none() {
                layer[u] = 0;
                queue.push_back(u);
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                match mate[v] {
                    None => found = true,
                    Some(w) if layer[w] == usize::MAX => {
                        layer[w] = layer[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return Ok(size);
        }
        fn augment(u: NodeId, adj: &Adj, mate: &mut [Option<NodeId>], layer: &mut [usize]) -> bool {
            for &(v, _) in &adj[u] {
                let ok = match mate[v] {
                    None => true,
                    Some(w) => layer[w] == layer[u] + 1 && augment(w, adj, mate, layer),
                };
                if ok {
                    mate[u] = Some(v);
                    mate[v] = Some(u);
                    return true;
                }
            }
            layer[u] = usize::MAX;
            false
        }
        for &u in &left {
            if mate[u].is_none() && augment(u, &adj, &mut mate, &mut layer) {
                size += 1;
            }
        }
    }
}

/// Maximum-weight perfect matching by the Hungarian method on the dense
/// side-0 × side-1 matrix. Missing pairs carry a prohibitive cost; a result
/// that needs one means no perfect matching exists.
pub(crate) fn hungarian_max_weight(g: &Graph) -> Result<Option<u64>> {
    let colour = two_colour(g)?;
    let n = g.node_count();
    let left: Vec<NodeId> = (0..n).filter(|&v| colour[v] == 0).collect();
    let right: Vec<NodeId> = (0..n).filter(|&v| colour[v] == 1).collect();
    if left.len() != right.len() {
        return Ok(None);
    }
    let k = left.len();
    if k == 0 {
        return Ok(Some(0));
    }
    let max_w = g.edges().map(|(_, _, w)| w as i128).max().unwrap_or(1);
    let missing = (k as i128 + 1) * (max_w + 1);
    // Minimise cost = max_w - w so all real costs are non-negative.
    let cost = |i: usize, j: usize| -> i128 {
        g.weight(left[i], right[j])
            .map_or(missing, |w| max_w - w as i128)
    };
    // 1-indexed potentials formulation.
    let mut u = vec![0i128; k + 1];
    let mut v = vec![0i128; k + 1];
    let mut p = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i128::MAX; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i128::MAX;
            let mut j1 = 0;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut total = 0u64;
    for j in 1..=k {
        match g.weight(left[p[j] - 1], right[j - 1]) {
            Some(w) => total += w,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// A matching with no augmenting path of at most `k` edges.
///
/// Starts from the greedy maximal matching over edges in canonical order,
/// then makes passes over the free side-0 nodes in ascending id, augmenting
/// along the first depth-bounded alternating path found, until a whole pass
/// augments nothing. Edges are returned as `(min, max)` pairs, sorted.
pub fn compute_kaug_free_matching(g: &Graph, k: usize) -> Result<Vec<(NodeId, NodeId)>> {
    let colour = two_colour(g)?;
    let n = g.node_count();
    let adj = g.adjacency();
    let mut mate: Vec<Option<NodeId>> = vec![None; n];
    for (u, v, _) in g.edges() {
        if mate[u].is_none() && mate[v].is_none() {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
    }
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    loop {
        let mut augmented = false;
        for src in 0..n {
            if colour[src] != 0 || mate[src].is_some() {
                continue;
            }
            depth.fill(usize::MAX);
            depth[src] = 0;
            let mut queue = VecDeque::from([src]);
            let mut end = None;
            'search: while let Some(u) = queue.pop_front() {
                if depth[u] + 1 > k {
                    continue;
                }
                for &(v, _) in &adj[u] {
                    if depth[v] != usize::MAX || mate[u] == Some(v) {
                        continue;
                    }
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    match mate[v] {
                        None => {
                            end = Some(v);
                            break 'search;
                        }
                        Some(w) => {
                            if depth[w] == usize::MAX {
                                depth[w] = depth[v] + 1;
                                parent[w] = v;
                                queue.push_back(w);
                            }
                        }
                    }
                }
            }
            if let Some(mut v) = end {
                // Flip the path back to src: v's parent u becomes v's mate.
                loop {
                    let u = parent[v];
                    let next = mate[u];
                    mate[u] = Some(v);
                    mate[v] = Some(u);
                    match next {
                        Some(w) if u != src => v = w,
                        _ => break,
                    }
                }
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    Ok((0..n)
        .filter_map(|u| mate[u].filter(|&v| u < v).map(|v| (u, v)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use rand::{Rng, SeedableRng};

    fn random_bipartite(rng: &mut impl Rng, max_half: usize, p: f64) -> Graph {
        let a = rng.random_range(0..=max_half);
        let b = rng.random_range(0..=max_half);
        let mut g = Graph::undirected(a + b);
        for u in 0..a {
            for v in a..a + b {
                if rng.random_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn kaug_free_k1_is_maximal() {
        let g = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = compute_kaug_free_matching(&g, 1).unwrap();
        assert_eq!(m, vec![(0, 1), (2, 3)]);
        assert!(compute_kaug_free_matching(&Graph::undirected(3), 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn kaug_free_matches_oracle_properties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = random_bipartite(&mut rng, 12, 0.25);
            let max = oracles::max_matching_size(&g).unwrap();
            for k in [1usize, 3, 5, 7, 17] {
                let m = compute_kaug_free_matching(&g, k).unwrap();
                assert!(!oracles::has_short_augpath(&g, &m, k).unwrap());
                // |M| >= (k'-1)/k' * max with k' = (k+3)/2
                let kp = (k + 3) / 2;
                assert!(
                    m.len() * kp >= (kp - 1) * max,
                    "k={k} |M|={} max={max}",
                    m.len()
                );
            }
            let full = compute_kaug_free_matching(&g, 2 * g.node_count()).unwrap();
            assert_eq!(full.len(), max);
        }
    }

    #[test]
    fn hopcroft_karp_and_hungarian_match_oracles() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let mut g = random_bipartite(&mut rng, 6, 0.5);
            assert_eq!(
                hopcroft_karp(&g).unwrap(),
                oracles::max_matching_size(&g).unwrap()
            );
            let mut w = Graph::weighted(g.node_count(), false, 10).unwrap();
            for (u, v, _) in g.edges().collect::<Vec<_>>() {
                w.add_weighted_edge(u, v, rng.random_range(1..=10)).unwrap();
                g.remove_edge(u, v).unwrap();
            }
            assert_eq!(
                hungarian_max_weight(&w).unwrap(),
                oracles::max_weight_pm_weight(&w).unwrap()
            );
        }
    }

    #[test]
    fn kosaraju_matches_tarjan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.random_range(0..20);
            let mut g = Graph::directed(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.12) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            assert_eq!(kosaraju(&g).1, oracles::scc_count(&g));
        }
    }
}

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// The instance carrier shared by every graph problem.
///
/// Undirected edges are stored with the smaller endpoint first. Unweighted
/// graphs store weight 1 on every edge and report `weight_bound() == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    node_count: usize,
    directed: bool,
    weighted: bool,
    weight_bound: u64,
    edges: BTreeMap<(NodeId, NodeId), u64>,
    active: Option<BTreeSet<NodeId>>,
    s: Option<NodeId>,
    t: Option<NodeId>,
    s_set: Option<BTreeSet<NodeId>>,
    t_set: Option<BTreeSet<NodeId>>,
}

impl Graph {
    pub fn new(node_count: usize, directed: bool) -> Self {
        Graph {
            node_count,
            directed,
            weighted: false,
            weight_bound: 1,
            edges: BTreeMap::new(),
            active: None,
            s: None,
            t: None,
            s_set: None,
            t_set: None,
        }
    }

    pub fn directed(node_count: usize) -> Self {
        Self::new(node_count, true)
    }

    pub fn undirected(node_count: usize) -> Self {
        Self::new(node_count, false)
    }

    /// A weighted graph whose weights must lie in `[1, bound]`.
    pub fn weighted(node_count: usize, directed: bool, bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::domain("weight bound must be positive"));
        }
        let mut g = Self::new(node_count, directed);
        g.weighted = true;
        g.weight_bound = bound;
        Ok(g)
    }

    /// Builds an unweighted graph from an edge list, rejecting invalid edges.
    pub fn from_edges(
        node_count: usize,
        directed: bool,
        edges: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        let mut g = Self::new(node_count, directed);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn weight_bound(&self) -> u64 {
        self.weight_bound
    }

    /// Raises the recorded weight bound. Existing weights stay valid.
    pub fn raise_weight_bound(&mut self, bound: u64) {
        self.weight_bound = self.weight_bound.max(bound);
    }

    /// Appends isolated nodes and returns the id of the first new one.
    pub fn add_nodes(&mut self, count: usize) -> NodeId {
        let first = self.node_count;
        self.node_count += count;
        first
    }

    fn key(&self, u: NodeId, v: NodeId) -> (NodeId, NodeId) {
        if self.directed || u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }

    pub(crate) fn check_node(&self, v: NodeId) -> Result<()> {
        if v >= self.node_count {
            return Err(Error::domain(format!(
                "node {v} out of range for {} nodes",
                self.node_count
            )));
        }
        Ok(())
    }

    fn check_new_edge(&self, u: NodeId, v: NodeId, weight: u64) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::domain(format!("self-loop at node {u}")));
        }
        if weight == 0 || weight > self.weight_bound {
            return Err(Error::domain(format!(
                "weight {weight} outside [1, {}]",
                self.weight_bound
            )));
        }
        if self.has_edge(u, v) {
            return Err(Error::state(format!("duplicate edge ({u}, {v})")));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        self.add_weighted_edge(u, v, 1)
    }

    pub fn add_weighted_edge(&mut self, u: NodeId, v: NodeId, weight: u64) -> Result<()> {
        self.check_new_edge(u, v, weight)?;
        let key = self.key(u, v);
        self.edges.insert(key, weight);
        Ok(())
    }

    /// Removes an edge and returns its weight.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<u64> {
        let key = self.key(u, v);
        self.edges
            .remove(&key)
            .ok_or_else(|| Error::state(format!("missing edge ({u}, {v})")))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains_key(&self.key(u, v))
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        self.edges.get(&self.key(u, v)).copied()
    }

    /// Edges in canonical order with their weights.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Out-adjacency lists (both directions for undirected graphs), sorted by target.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, u64)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (&(u, v), &w) in &self.edges {
            adj[u].push((v, w));
            if !self.directed {
                adj[v].push((u, w));
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Neighbor lists without weights.
    pub fn neighbors(&self) -> Vec<Vec<NodeId>> {
        self.adjacency()
            .into_iter()
            .map(|l| l.into_iter().map(|(v, _)| v).collect())
            .collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(u, v) in self.edges.keys() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn s(&self) -> Option<NodeId> {
        self.s
    }

    pub fn t(&self) -> Option<NodeId> {
        self.t
    }

    pub fn set_s(&mut self, s: NodeId) -> Result<()> {
        self.check_node(s)?;
        self.s = Some(s);
        Ok(())
    }

    pub fn set_t(&mut self, t: NodeId) -> Result<()> {
        self.check_node(t)?;
        self.t = Some(t);
        Ok(())
    }

    pub fn set_st(&mut self, s: NodeId, t: NodeId) -> Result<()> {
        self.set_s(s)?;
        self.set_t(t)
    }

    pub fn s_set(&self) -> Option<&BTreeSet<NodeId>> {
        self.s_set.as_ref()
    }

    pub fn t_set(&self) -> Option<&BTreeSet<NodeId>> {
        self.t_set.as_ref()
    }

    pub fn set_source_sets(
        &mut self,
        sources: impl IntoIterator<Item = NodeId>,
        targets: impl IntoIterator<Item = NodeId>,
    ) -> Result<()> {
        let s: BTreeSet<_> = sources.into_iter().collect();
        let t: BTreeSet<_> = targets.into_iter().collect();
        for &v in s.iter().chain(t.iter()) {
            self.check_node(v)?;
        }
        self.s_set = Some(s);
        self.t_set = Some(t);
        Ok(())
    }

    pub fn active_set(&self) -> Option<&BTreeSet<NodeId>> {
        self.active.as_ref()
    }

    /// Installs an activation set; an empty set is distinct from "no set".
    pub fn set_active(&mut self, nodes: impl IntoIterator<Item = NodeId>) -> Result<()> {
        let set: BTreeSet<_> = nodes.into_iter().collect();
        for &v in &set {
            self.check_node(v)?;
        }
        self.active = Some(set);
        Ok(())
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.active.as_ref().is_some_and(|a| a.contains(&v))
    }

    pub fn activate(&mut self, v: NodeId) -> Result<()> {
        self.check_node(v)?;
        let set = self.active.get_or_insert_with(BTreeSet::new);
        if !set.insert(v) {
            return Err(Error::state(format!("node {v} already active")));
        }
        Ok(())
    }

    pub fn deactivate(&mut self, v: NodeId) -> Result<()> {
        self.check_node(v)?;
        let removed = self.active.as_mut().is_some_and(|a| a.remove(&v));
        if !removed {
            return Err(Error::state(format!("node {v} is not active")));
        }
        Ok(())
    }

    /// Vertex-induced subgraph on `keep` (relabelled densely in ascending
    /// order) plus the map from new ids back to the old ones.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> (Graph, Vec<NodeId>) {
        let back: Vec<NodeId> = keep.iter().copied().collect();
        let mut fwd = vec![usize::MAX; self.node_count];
        for (i, &v) in back.iter().enumerate() {
            fwd[v] = i;
        }
        let mut sub = Graph::new(back.len(), self.directed);
        sub.weighted = self.weighted;
        sub.weight_bound = self.weight_bound;
        for (&(u, v), &w) in &self.edges {
            if fwd[u] != usize::MAX && fwd[v] != usize::MAX {
                let key = sub.key(fwd[u], fwd[v]);
                sub.edges.insert(key, w);
            }
        }
        (sub, back)
    }

    /// Tightens the recorded bound to the largest weight present.
    pub fn normalize_weight_bound(&mut self) {
        if self.weighted {
            self.weight_bound = self.edges.values().copied().max().unwrap_or(1);
        }
    }

    /// Total weight of an undirected triangle, if all three edges exist.
    pub fn triangle_weight(&self, a: NodeId, b: NodeId, c: NodeId) -> Option<u64> {
        if a == b || b == c || a == c {
            return None;
        }
        Some(self.weight(a, b)? + self.weight(b, c)? + self.weight(a, c)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_edges_are_canonical() {
        let mut g = Graph::undirected(3);
        g.add_edge(2, 0).unwrap();
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(2, 0));
        assert_eq!(g.add_edge(0, 2), Err(Error::state("duplicate edge (0, 2)")));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2, 1)]);
    }

    #[test]
    fn directed_edges_keep_orientation() {
        let mut g = Graph::directed(2);
        g.add_edge(1, 0).unwrap();
        assert!(!g.has_edge(0, 1));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn rejects_self_loops_and_bad_weights() {
        let mut g = Graph::weighted(3, false, 5).unwrap();
        assert!(matches!(g.add_edge(1, 1), Err(Error::Domain(_))));
        assert!(matches!(
            g.add_weighted_edge(0, 1, 6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            g.add_weighted_edge(0, 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(g.add_edge(0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn activation_is_tracked_exactly() {
        let mut g = Graph::undirected(3);
        g.activate(1).unwrap();
        assert!(g.activate(1).is_err());
        g.deactivate(1).unwrap();
        assert!(g.deactivate(1).is_err());
        assert_eq!(g.active_set().map(|s| s.len()), Some(0));
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::from_edges(4, false, &[(0, 1), (1, 3), (2, 3)]).unwrap();
        let keep: BTreeSet<_> = [1, 3].into_iter().collect();
        let (sub, back) = g.induced_subgraph(&keep);
        assert_eq!(back, vec![1, 3]);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1, 1)]);
    }
}

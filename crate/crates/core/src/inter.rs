//! Engines for one problem built on top of another problem's engine.
//!
//! Every wrapper keeps a mirror of the outer instance (a baseline engine
//! that is never queried) for validation, mode checks and rollback, and
//! forwards each accepted update as at most one inner update.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::engines::{BaselineEngine, Checkpoint, DynamicEngine, EngineFactory};
use crate::error::{Error, Result};
use crate::model::{
    Answer, CostCounters, Graph, Instance, Mode, NodeId, ProblemKind, QueryOp, UpdateOp,
};

/// The five wrapper constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WrapperKind {
    /// st-SubConn on st-Reach: split each node into `v_in -> v_out`.
    SubConnViaStReach,
    /// st-Reach on BPMatch: perfect matching iff an s-t path exists.
    StReachViaBpm,
    /// st-SP on BWMatch: distance from the maximum perfect-matching weight.
    StSpViaBwm,
    /// st-Reach on SC: permanent arcs into s and out of t.
    StReachViaSc,
    /// SubUnion on ConnSub: universe, set and hub nodes.
    SubUnionViaConnSub,
}

impl WrapperKind {
    pub const ALL: [WrapperKind; 5] = [
        WrapperKind::SubConnViaStReach,
        WrapperKind::StReachViaBpm,
        WrapperKind::StSpViaBwm,
        WrapperKind::StReachViaSc,
        WrapperKind::SubUnionViaConnSub,
    ];

    pub fn outer_kind(self) -> ProblemKind {
        match self {
            WrapperKind::SubConnViaStReach => ProblemKind::StSubConn,
            WrapperKind::StReachViaBpm | WrapperKind::StReachViaSc => ProblemKind::StReach,
            WrapperKind::StSpViaBwm => ProblemKind::StShortestPath,
            WrapperKind::SubUnionViaConnSub => ProblemKind::SubsetUnion,
        }
    }

    pub fn inner_kind(self) -> ProblemKind {
        match self {
            WrapperKind::SubConnViaStReach => ProblemKind::StReach,
            WrapperKind::StReachViaBpm => ProblemKind::PerfectMatching,
            WrapperKind::StSpViaBwm => ProblemKind::WeightedMatching,
            WrapperKind::StReachViaSc => ProblemKind::StrongConnectivity,
            WrapperKind::SubUnionViaConnSub => ProblemKind::ConnSub,
        }
    }

    /// Upper bounds `(nodes, edges)` on the inner instance built for `outer`.
    pub fn size_bounds(self, outer: &Instance) -> (usize, usize) {
        match outer {
            Instance::Graph(g) => {
                let (n, m) = (g.node_count(), g.edge_count());
                match self {
                    WrapperKind::SubConnViaStReach => (2 * n, 2 * m + n),
                    WrapperKind::StReachViaBpm | WrapperKind::StSpViaBwm => {
                        (2 * n.saturating_sub(1), m + n.saturating_sub(2))
                    }
                    WrapperKind::StReachViaSc => (n, m + 2 * n.saturating_sub(2) + 1),
                    WrapperKind::SubUnionViaConnSub => (0, 0),
                }
            }
            Instance::Sets(x) => (
                x.universe_size() + x.set_count() + 1,
                x.total_size() + x.set_count(),
            ),
        }
    }
}

/// Node maps for the split-node bipartite construction: `v_in` exists for
/// `v != s`, `v_out` for `v != t`.
#[derive(Debug, Clone)]
struct SplitMap {
    in_id: Vec<Option<NodeId>>,
    out_id: Vec<Option<NodeId>>,
    node_count: usize,
}

impl SplitMap {
    fn new(n: usize, s: NodeId, t: NodeId) -> Self {
        let mut next = 0;
        let mut alloc = |skip: NodeId| -> Vec<Option<NodeId>> {
            (0..n)
                .map(|v| {
                    (v != skip).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let out_id = alloc(t);
        let in_id = alloc(s);
        SplitMap {
            in_id,
            out_id,
            node_count: next,
        }
    }

    /// The H edge of arc `(u, v)`, or `None` when the arc leaves t or enters s.
    fn arc(&self, u: NodeId, v: NodeId) -> Option<(NodeId, NodeId)> {
        Some((self.out_id[u]?, self.in_id[v]?))
    }

    fn build(&self, g: &Graph, self_weight: u64, arc_weight: impl Fn(u64) -> u64) -> Result<Graph> {
        let bound = self_weight.max(1);
        let mut h = Graph::weighted(self.node_count, false, bound)?;
        for v in 0..g.node_count() {
            if let (Some(i), Some(o)) = (self.in_id[v], self.out_id[v]) {
                h.add_weighted_edge(i, o, self_weight)?;
            }
        }
        for (u, v, w) in g.edges() {
            if let Some((a, b)) = self.arc(u, v) {
                h.add_weighted_edge(a, b, arc_weight(w))?;
            }
        }
        Ok(h)
    }
}

#[derive(Debug, Clone)]
enum Translation {
    SubConn {
        n: usize,
    },
    Bpm {
        map: SplitMap,
    },
    Bwm {
        map: SplitMap,
        m_prime: u64,
        offset: u64,
    },
    Sc {
        permanent: BTreeSet<(NodeId, NodeId)>,
    },
    SubUnion {
        universe: usize,
    },
}

impl Translation {
    fn update(&self, op: &UpdateOp) -> Result<Option<UpdateOp>> {
        use UpdateOp::*;
        Ok(match (self, op) {
            (Translation::SubConn { n }, ActivateNode(v)) => Some(UpdateOp::insert(*v, n + v)),
            (Translation::SubConn { n }, DeactivateNode(v)) => Some(UpdateOp::delete(*v, n + v)),
            (Translation::Bpm { map }, InsertEdge { u, v, .. }) => {
                map.arc(*u, *v).map(|(a, b)| UpdateOp::insert(a, b))
            }
            (Translation::Bpm { map } | Translation::Bwm { map, .. }, DeleteEdge { u, v }) => {
                map.arc(*u, *v).map(|(a, b)| UpdateOp::delete(a, b))
            }
            (Translation::Bwm { map, m_prime, .. }, InsertEdge { u, v, weight }) => map
                .arc(*u, *v)
                .map(|(a, b)| UpdateOp::insert_weighted(a, b, m_prime - weight.unwrap_or(1))),
            (Translation::Sc { permanent }, InsertEdge { u, v, .. } | DeleteEdge { u, v }) => {
                (!permanent.contains(&(*u, *v))).then(|| op.clone())
            }
            (Translation::SubUnion { universe }, AddToScope(i)) => Some(ActivateNode(universe + i)),
            (Translation::SubUnion { universe }, RemoveFromScope(i)) => {
                Some(DeactivateNode(universe + i))
            }
            _ => return Err(Error::domain(format!("{op:?} has no translation"))),
        })
    }

    fn query(&self, inner: &mut dyn DynamicEngine) -> Result<Answer> {
        match self {
            Translation::SubConn { .. } => inner.query(QueryOp::StReachable),
            Translation::Bpm { .. } => inner.query(QueryOp::HasPerfectMatching),
            Translation::Bwm { offset, .. } => {
                Ok(match inner.query(QueryOp::MaxWeightPmWeight)?.as_int()? {
                    Some(w) => Answer::Int(*offset as i64 - w),
                    None => Answer::Absent,
                })
            }
            Translation::Sc { .. } => inner.query(QueryOp::StronglyConnected),
            Translation::SubUnion { .. } => inner.query(QueryOp::InducedConnected),
        }
    }
}

fn distinct_st(g: &Graph) -> Result<(NodeId, NodeId)> {
    match (g.s(), g.t()) {
        (Some(s), Some(t)) if s != t => Ok((s, t)),
        (Some(_), Some(_)) => Err(Error::domain("wrapper needs s != t")),
        _ => Err(Error::domain("wrapper needs s and t")),
    }
}

/// Builds the inner instance and translation for `wrapper` on `outer`.
fn construct(
    wrapper: WrapperKind,
    outer: &Instance,
    mode: Mode,
    factory: &dyn EngineFactory,
) -> Result<(Instance, Translation)> {
    match (wrapper, outer) {
        (WrapperKind::SubConnViaStReach, Instance::Graph(g)) => {
            let (s, t) = distinct_st(g)?;
            let n = g.node_count();
            let mut h = Graph::directed(2 * n);
            for (u, v, _) in g.edges() {
                h.add_edge(n + u, v)?;
                h.add_edge(n + v, u)?;
            }
            for v in 0..n {
                if g.is_active(v) {
                    h.add_edge(v, n + v)?;
                }
            }
            h.set_st(n + s, t)?;
            Ok((h.into(), Translation::SubConn { n }))
        }
        (WrapperKind::StReachViaBpm, Instance::Graph(g)) => {
            let (s, t) = distinct_st(g)?;
            let map = SplitMap::new(g.node_count(), s, t);
            let mut h = Graph::undirected(map.node_count);
            for v in 0..g.node_count() {
                if let (Some(i), Some(o)) = (map.in_id[v], map.out_id[v]) {
                    h.add_edge(i, o)?;
                }
            }
            for (u, v, _) in g.edges() {
                if let Some((a, b)) = map.arc(u, v) {
                    h.add_edge(a, b)?;
                }
            }
            Ok((h.into(), Translation::Bpm { map }))
        }
        (WrapperKind::StSpViaBwm, Instance::Graph(g)) => {
            if !g.is_directed() {
                return Err(Error::domain(
                    "the matching-based st-SP wrapper needs a directed graph",
                ));
            }
            let (s, t) = distinct_st(g)?;
            let m_prime = g.weight_bound() + 1;
            validate_offset(m_prime, mode, factory)?;
            let map = SplitMap::new(g.node_count(), s, t);
            let h = map.build(g, m_prime, |w| m_prime - w)?;
            let offset = m_prime * (g.node_count() as u64 - 1);
            Ok((
                h.into(),
                Translation::Bwm {
                    map,
                    m_prime,
                    offset,
                },
            ))
        }
        (WrapperKind::StReachViaSc, Instance::Graph(g)) => {
            let (s, t) = distinct_st(g)?;
            let mut h = g.clone();
            let mut permanent = BTreeSet::from([(t, s)]);
            for v in (0..g.node_count()).filter(|&v| v != s && v != t) {
                permanent.insert((v, s));
                permanent.insert((t, v));
            }
            for &(u, v) in &permanent {
                if !h.has_edge(u, v) {
                    h.add_edge(u, v)?;
                }
            }
            Ok((h.into(), Translation::Sc { permanent }))
        }
        (WrapperKind::SubUnionViaConnSub, Instance::Sets(sys)) => {
            let universe = sys.universe_size();
            let k = sys.set_count();
            let hub = universe + k;
            let mut h = Graph::undirected(universe + k + 1);
            for i in 0..k {
                for u in sys.members(i)? {
                    h.add_edge(u, universe + i)?;
                }
                h.add_edge(universe + i, hub)?;
            }
            let scoped = sys.scope().iter().map(|&i| universe + i);
            h.set_active((0..universe).chain(scoped).chain([hub]))?;
            Ok((h.into(), Translation::SubUnion { universe }))
        }
        _ => Err(Error::domain(format!(
            "{:?} cannot wrap this instance type",
            wrapper
        ))),
    }
}

/// Confirms on the probe path s -> a -> t (unit weights) that distance =
/// (n-1)·M' - matching weight for the inner engine at hand.
fn validate_offset(m_prime: u64, mode: Mode, factory: &dyn EngineFactory) -> Result<()> {
    let mut probe = Graph::weighted(3, true, m_prime - 1)?;
    probe.add_edge(0, 1)?;
    probe.add_edge(1, 2)?;
    probe.set_st(0, 2)?;
    let map = SplitMap::new(3, 0, 2);
    let h = map.build(&probe, m_prime, |w| m_prime - w)?;
    let mut engine = factory.build(ProblemKind::WeightedMatching, mode, h.into())?;
    let weight = engine
        .query(QueryOp::MaxWeightPmWeight)?
        .as_int()?
        .ok_or_else(|| Error::Construction("probe instance has no perfect matching".into()))?
        as u64;
    let distance = 2;
    if 2 * m_prime == weight + distance {
        Ok(())
    } else if 3 * m_prime == weight + distance {
        Err(Error::Construction(
            "matching weight fits the n·M offset, not (n-1)·M".into(),
        ))
    } else {
        Err(Error::Construction(format!(
            "probe matching weight {weight} fits neither offset"
        )))
    }
}

/// An outer engine realized through an inner one.
pub struct WrapperEngine {
    wrapper: WrapperKind,
    mirror: BaselineEngine,
    inner: Box<dyn DynamicEngine>,
    translation: Translation,
    checkpoints: Vec<(Checkpoint, Checkpoint)>,
    queries: u64,
    suppressed: u64,
}

impl WrapperEngine {
    pub fn new(
        wrapper: WrapperKind,
        mode: Mode,
        instance: Instance,
        factory: &dyn EngineFactory,
    ) -> Result<Self> {
        let mirror = BaselineEngine::new(wrapper.outer_kind(), mode, instance)?;
        let (inner_instance, translation) = construct(wrapper, mirror.current(), mode, factory)?;
        let inner = factory.build(wrapper.inner_kind(), mode, inner_instance)?;
        Ok(WrapperEngine {
            wrapper,
            mirror,
            inner,
            translation,
            checkpoints: Vec::new(),
            queries: 0,
            suppressed: 0,
        })
    }

    pub fn wrapper(&self) -> WrapperKind {
        self.wrapper
    }

    pub fn inner(&self) -> &dyn DynamicEngine {
        self.inner.as_ref()
    }

    /// Outer updates that had no inner counterpart (permanent or absent
    /// gadget arcs).
    pub fn suppressed_updates(&self) -> u64 {
        self.suppressed
    }
}

impl DynamicEngine for WrapperEngine {
    fn kind(&self) -> ProblemKind {
        self.wrapper.outer_kind()
    }

    fn mode(&self) -> Mode {
        self.mirror.mode()
    }

    fn update(&mut self, op: UpdateOp) -> Result<()> {
        self.mirror.update(op.clone())?;
        let translated = self.translation.update(&op)?;
        if let Some(inner_op) = translated {
            self.inner.update(inner_op).map_err(|e| {
                Error::Construction(format!("inner engine rejected a mirrored update: {e}"))
            })?;
        } else {
            self.suppressed += 1;
        }
        Ok(())
    }

    fn query(&mut self, q: QueryOp) -> Result<Answer> {
        if q.kind() != self.kind() {
            return Err(Error::domain(format!(
                "{q:?} is not a query of {}",
                self.kind()
            )));
        }
        let answer = self.translation.query(self.inner.as_mut())?;
        self.queries += 1;
        Ok(answer)
    }

    fn checkpoint(&mut self) -> Checkpoint {
        let outer = self.mirror.checkpoint();
        let inner = self.inner.checkpoint();
        self.checkpoints.push((outer, inner));
        outer
    }

    fn rollback(&mut self, cp: Checkpoint) -> Result<()> {
        let pos = self
            .checkpoints
            .iter()
            .rposition(|(outer, _)| *outer == cp)
            .ok_or_else(|| Error::state(format!("checkpoint {} is stale", cp.id())))?;
        let inner_cp = self.checkpoints[pos].1;
        self.checkpoints.truncate(pos);
        self.mirror.rollback(cp)?;
        self.inner.rollback(inner_cp)
    }

    fn counters(&self) -> CostCounters {
        let outer = self.mirror.counters();
        CostCounters {
            preprocess_units: self.inner.counters().preprocess_units,
            updates: outer.updates,
            queries: self.queries,
            rollback_ops: outer.rollback_ops,
        }
    }

    fn instance(&self) -> Instance {
        self.mirror.instance()
    }
}

/// A factory that serves the wrapper's outer kind through `inner` and
/// passes every other kind straight to `inner`.
#[derive(Clone)]
pub struct Wrapped {
    wrapper: WrapperKind,
    inner: Arc<dyn EngineFactory>,
}

impl Wrapped {
    pub fn new(wrapper: WrapperKind, inner: Arc<dyn EngineFactory>) -> Self {
        Wrapped { wrapper, inner }
    }
}

impl EngineFactory for Wrapped {
    fn build(
        &self,
        kind: ProblemKind,
        mode: Mode,
        instance: Instance,
    ) -> Result<Box<dyn DynamicEngine>> {
        if kind == self.wrapper.outer_kind() {
            Ok(Box::new(WrapperEngine::new(
                self.wrapper,
                mode,
                instance,
                self.inner.as_ref(),
            )?))
        } else {
            self.inner.build(kind, mode, instance)
        }
    }
}

pub fn subconn_via_streach(inner: Arc<dyn EngineFactory>) -> Wrapped {
    Wrapped::new(WrapperKind::SubConnViaStReach, inner)
}

pub fn streach_via_bpm(inner: Arc<dyn EngineFactory>) -> Wrapped {
    Wrapped::new(WrapperKind::StReachViaBpm, inner)
}

pub fn stsp_via_bwm(inner: Arc<dyn EngineFactory>) -> Wrapped {
    Wrapped::new(WrapperKind::StSpViaBwm, inner)
}

pub fn streach_via_sc(inner: Arc<dyn EngineFactory>) -> Wrapped {
    Wrapped::new(WrapperKind::StReachViaSc, inner)
}

pub fn subunion_via_connsub(inner: Arc<dyn EngineFactory>) -> Wrapped {
    Wrapped::new(WrapperKind::SubUnionViaConnSub, inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::Baseline;
    use crate::model::SetSystem;

    fn wrap(w: WrapperKind, inst: impl Into<Instance>) -> WrapperEngine {
        WrapperEngine::new(w, Mode::Full, inst.into(), &Baseline).unwrap()
    }

    fn inner_graph(e: &WrapperEngine) -> Graph {
        e.inner().instance().as_graph().unwrap().clone()
    }

    #[test]
    fn subconn_examples() {
        let mut g = Graph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap();
        g.set_st(0, 2).unwrap();
        g.set_active([]).unwrap();
        let mut e = wrap(WrapperKind::SubConnViaStReach, g);
        assert!(!inner_graph(&e).has_edge(1, 4));
        assert_eq!(e.query(QueryOp::StConnected).unwrap(), Answer::Bool(false));
        e.update(UpdateOp::ActivateNode(1)).unwrap();
        assert!(inner_graph(&e).has_edge(1, 4));
        assert_eq!(e.query(QueryOp::StConnected).unwrap(), Answer::Bool(true));

        let mut iso = Graph::undirected(3);
        iso.set_st(0, 2).unwrap();
        let mut e = wrap(WrapperKind::SubConnViaStReach, iso);
        assert_eq!(e.query(QueryOp::StConnected).unwrap(), Answer::Bool(false));
    }

    #[test]
    fn bpm_examples() {
        let mut g = Graph::from_edges(2, true, &[(0, 1)]).unwrap();
        g.set_st(0, 1).unwrap();
        let mut e = wrap(WrapperKind::StReachViaBpm, g);
        assert_eq!(inner_graph(&e).node_count(), 2);
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));

        let mut g = Graph::from_edges(4, true, &[(0, 1), (2, 3)]).unwrap();
        g.set_st(0, 3).unwrap();
        let mut e = wrap(WrapperKind::StReachViaBpm, g);
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(false));

        let mut g = Graph::from_edges(3, true, &[(0, 1), (1, 2)]).unwrap();
        g.set_st(0, 2).unwrap();
        let mut e = wrap(WrapperKind::StReachViaBpm, g);
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));
    }

    #[test]
    fn bwm_examples() {
        let mut g = Graph::weighted(2, true, 5).unwrap();
        g.add_weighted_edge(0, 1, 5).unwrap();
        g.set_st(0, 1).unwrap();
        let mut e = wrap(WrapperKind::StSpViaBwm, g);
        assert_eq!(e.query(QueryOp::StDistance).unwrap(), Answer::Int(5));

        let mut g = Graph::weighted(3, true, 2).unwrap();
        g.add_weighted_edge(0, 1, 1).unwrap();
        g.add_weighted_edge(1, 2, 1).unwrap();
        g.set_st(0, 2).unwrap();
        let mut e = wrap(WrapperKind::StSpViaBwm, g);
        assert_eq!(e.query(QueryOp::StDistance).unwrap(), Answer::Int(2));
        e.update(UpdateOp::insert_weighted(0, 2, 1)).unwrap();
        assert_eq!(e.query(QueryOp::StDistance).unwrap(), Answer::Int(1));

        let mut g = Graph::weighted(3, true, 2).unwrap();
        g.set_st(0, 2).unwrap();
        let mut e = wrap(WrapperKind::StSpViaBwm, g);
        assert_eq!(e.query(QueryOp::StDistance).unwrap(), Answer::Absent);
    }

    #[test]
    fn sc_examples() {
        let mut g = Graph::from_edges(3, true, &[(0, 2)]).unwrap();
        g.set_st(0, 2).unwrap();
        let mut e = wrap(WrapperKind::StReachViaSc, g);
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));
        e.update(UpdateOp::delete(0, 2)).unwrap();
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(false));

        let mut g = Graph::directed(2);
        g.set_st(0, 1).unwrap();
        let mut e = wrap(WrapperKind::StReachViaSc, g);
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(false));
        e.update(UpdateOp::insert(0, 1)).unwrap();
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));
        // (1, 0) is the permanent arc (t, s): suppressed, so no inner update.
        e.update(UpdateOp::insert(1, 0)).unwrap();
        assert_eq!(e.inner().counters().updates, 1);
        e.update(UpdateOp::delete(1, 0)).unwrap();
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));
    }

    #[test]
    fn subunion_examples() {
        let mut sys = SetSystem::new(2);
        sys.push_set([0]).unwrap();
        sys.push_set([1]).unwrap();
        let mut e = wrap(WrapperKind::SubUnionViaConnSub, sys);
        assert_eq!(
            e.query(QueryOp::UnionIsUniverse).unwrap(),
            Answer::Bool(false)
        );
        e.update(UpdateOp::AddToScope(0)).unwrap();
        assert_eq!(
            e.query(QueryOp::UnionIsUniverse).unwrap(),
            Answer::Bool(false)
        );
        e.update(UpdateOp::AddToScope(1)).unwrap();
        assert_eq!(
            e.query(QueryOp::UnionIsUniverse).unwrap(),
            Answer::Bool(true)
        );
        let h = inner_graph(&e);
        assert_eq!(h.node_count(), 2 + 2 + 1);
        assert_eq!(h.edge_count(), 2 + 2);
    }

    #[test]
    fn rollback_restores_both_sides() {
        let mut g = Graph::from_edges(3, true, &[(0, 1)]).unwrap();
        g.set_st(0, 2).unwrap();
        let mut e = wrap(WrapperKind::StReachViaBpm, g);
        let outer_digest = e.digest();
        let inner_digest = e.inner().digest();
        let cp = e.checkpoint();
        e.update(UpdateOp::insert(1, 2)).unwrap();
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));
        e.rollback(cp).unwrap();
        assert_eq!(e.digest(), outer_digest);
        assert_eq!(e.inner().digest(), inner_digest);
        assert_eq!(e.counters().rollback_ops, 1);
        assert!(e.rollback(cp).is_err());
    }

    #[test]
    fn wrapped_factory_passes_other_kinds_through() {
        let f = streach_via_bpm(Arc::new(Baseline));
        let mut g = Graph::directed(2);
        g.set_st(0, 1).unwrap();
        assert!(f
            .build(ProblemKind::StReach, Mode::Full, g.clone().into())
            .is_ok());
        assert!(f
            .build(ProblemKind::StrongConnectivity, Mode::Full, g.into())
            .is_ok());
    }
}

use super::algo::{self, Adj};
use super::{check_mode, Checkpoint, CheckpointStack, DynamicEngine};
use crate::error::{Error, Result};
use crate::model::{
    Answer, CostCounters, Graph, Instance, Mode, NodeId, ProblemKind, QueryOp, SetId, UpdateOp,
};

/// The exact inverse of an accepted update.
#[derive(Debug, Clone)]
enum Inverse {
    RemoveEdge(NodeId, NodeId),
    RestoreEdge(NodeId, NodeId, u64),
    Activate(NodeId),
    Deactivate(NodeId),
    PopSet,
    ScopeAdd(SetId),
    ScopeRemove(SetId),
}

/// Recomputes every answer from scratch; updates are O(1) bookkeeping.
#[derive(Debug, Clone)]
pub struct BaselineEngine {
    kind: ProblemKind,
    mode: Mode,
    instance: Instance,
    counters: CostCounters,
    undo: Vec<Inverse>,
    checkpoints: CheckpointStack,
}

fn validate(kind: ProblemKind, instance: &mut Instance) -> Result<()> {
    let g = match instance {
        Instance::Sets(_) if kind.is_set_problem() => return Ok(()),
        Instance::Graph(g) if !kind.is_set_problem() => g,
        _ => {
            return Err(Error::domain(format!(
                "{kind} engines cannot maintain this instance type"
            )))
        }
    };
    if let Some(directed) = kind.wants_directed() {
        if g.is_directed() != directed {
            let want = if directed { "directed" } else { "undirected" };
            return Err(Error::domain(format!("{kind} engines need a {want} graph")));
        }
    }
    use ProblemKind::*;
    let needs_s = matches!(kind, StSubConn | StReach | ReachCount | StShortestPath);
    let needs_t = matches!(kind, StSubConn | StReach | StShortestPath);
    if needs_s && g.s().is_none() {
        return Err(Error::domain(format!("{kind} engines need a source s")));
    }
    if needs_t && g.t().is_none() {
        return Err(Error::domain(format!("{kind} engines need a target t")));
    }
    if kind == SetReach && (g.s_set().is_none() || g.t_set().is_none()) {
        return Err(Error::domain("set-reach engines need S and T node sets"));
    }
    if kind.uses_activation() && g.active_set().is_none() {
        g.set_active(0..g.node_count())?;
    }
    Ok(())
}

impl BaselineEngine {
    pub fn new(kind: ProblemKind, mode: Mode, mut instance: Instance) -> Result<Self> {
        validate(kind, &mut instance)?;
        let preprocess_units = match &instance {
            Instance::Graph(g) => g.node_count() + g.edge_count(),
            Instance::Sets(s) => s.set_count() + s.total_size(),
        } as u64;
        Ok(BaselineEngine {
            kind,
            mode,
            instance,
            counters: CostCounters {
                preprocess_units,
                ..CostCounters::default()
            },
            undo: Vec::new(),
            checkpoints: CheckpointStack::default(),
        })
    }

    /// Borrow of the maintained instance.
    pub fn current(&self) -> &Instance {
        &self.instance
    }

    fn graph(&self) -> &Graph {
        match &self.instance {
            Instance::Graph(g) => g,
            Instance::Sets(_) => unreachable!("graph kinds hold graphs"),
        }
    }

    fn apply(&mut self, op: UpdateOp) -> Result<Inverse> {
        match (&mut self.instance, op) {
            (Instance::Graph(g), UpdateOp::InsertEdge { u, v, weight }) => {
                g.add_weighted_edge(u, v, weight.unwrap_or(1))?;
                Ok(Inverse::RemoveEdge(u, v))
            }
            (Instance::Graph(g), UpdateOp::DeleteEdge { u, v }) => {
                let w = g.remove_edge(u, v)?;
                Ok(Inverse::RestoreEdge(u, v, w))
            }
            (Instance::Graph(g), UpdateOp::ActivateNode(v)) => {
                g.activate(v)?;
                Ok(Inverse::Deactivate(v))
            }
            (Instance::Graph(g), UpdateOp::DeactivateNode(v)) => {
                g.deactivate(v)?;
                Ok(Inverse::Activate(v))
            }
            (Instance::Sets(s), UpdateOp::InsertSet(members)) => {
                s.push_set(members)?;
                Ok(Inverse::PopSet)
            }
            (Instance::Sets(s), UpdateOp::IntersectSets(i, j)) => {
                s.push_intersection(i, j)?;
                Ok(Inverse::PopSet)
            }
            (Instance::Sets(s), UpdateOp::AddToScope(i)) => {
                s.add_to_scope(i)?;
                Ok(Inverse::ScopeRemove(i))
            }
            (Instance::Sets(s), UpdateOp::RemoveFromScope(i)) => {
                s.remove_from_scope(i)?;
                Ok(Inverse::ScopeAdd(i))
            }
            (_, op) => Err(Error::domain(format!("{op:?} does not fit the instance"))),
        }
    }

    fn revert(&mut self, inv: Inverse) -> Result<()> {
        match (&mut self.instance, inv) {
            (Instance::Graph(g), Inverse::RemoveEdge(u, v)) => g.remove_edge(u, v).map(drop),
            (Instance::Graph(g), Inverse::RestoreEdge(u, v, w)) => g.add_weighted_edge(u, v, w),
            (Instance::Graph(g), Inverse::Activate(v)) => g.activate(v),
            (Instance::Graph(g), Inverse::Deactivate(v)) => g.deactivate(v),
            (Instance::Sets(s), Inverse::PopSet) => s.pop_set(),
            (Instance::Sets(s), Inverse::ScopeAdd(i)) => s.add_to_scope(i),
            (Instance::Sets(s), Inverse::ScopeRemove(i)) => s.remove_from_scope(i),
            (_, inv) => Err(Error::state(format!(
                "undo entry {inv:?} does not fit the instance"
            ))),
        }
    }

    fn adjacency(&self) -> Adj {
        self.graph().adjacency()
    }

    fn reach_from(&self, src: NodeId) -> Vec<Option<u64>> {
        algo::bfs(&self.adjacency(), src)
    }

    fn evaluate(&self, q: QueryOp) -> Result<Answer> {
        use QueryOp::*;
        let st = |g: &Graph| (g.s().expect("validated"), g.t().expect("validated"));
        Ok(match q {
            StConnected => {
                let g = self.graph();
                let (s, t) = st(g);
                let mut allowed: Vec<bool> = (0..g.node_count()).map(|v| g.is_active(v)).collect();
                allowed[s] = true;
                allowed[t] = true;
                let mut uf = algo::components_within(g, &allowed);
                Answer::Bool(uf.find(s) == uf.find(t))
            }
            InducedConnected => {
                let g = self.graph();
                let allowed: Vec<bool> = (0..g.node_count()).map(|v| g.is_active(v)).collect();
                let mut uf = algo::components_within(g, &allowed);
                let mut roots = (0..g.node_count())
                    .filter(|&v| allowed[v])
                    .map(|v| uf.find(v));
                let first = roots.next();
                Answer::Bool(roots.all(|r| Some(r) == first))
            }
            StReachable => {
                let (s, t) = st(self.graph());
                Answer::Bool(self.reach_from(s)[t].is_some())
            }
            ReachCountLessThan(bound) => {
                let s = self.graph().s().expect("validated");
                let count = self.reach_from(s).iter().filter(|d| d.is_some()).count() - 1;
                Answer::Bool((count as u64) < bound)
            }
            StronglyConnected => Answer::Bool(algo::kosaraju(self.graph()).1 <= 1),
            MoreThanTwoSccs => Answer::Bool(algo::kosaraju(self.graph()).1 > 2),
            SccCount2VsK(k) => {
                let count = algo::kosaraju(self.graph()).1 as u64;
                if count <= 2 {
                    Answer::Bool(false)
                } else if count > k {
                    Answer::Bool(true)
                } else {
                    return Err(Error::Promise(format!(
                        "{count} SCCs lies strictly between 2 and {}",
                        k + 1
                    )));
                }
            }
            MaxSccSize => {
                let (comp, count) = algo::kosaraju(self.graph());
                let mut sizes = vec![0i64; count];
                for c in comp {
                    sizes[c] += 1;
                }
                Answer::Int(sizes.into_iter().max().unwrap_or(0))
            }
            StDistance => {
                let g = self.graph();
                let (s, t) = st(g);
                let dist = if g.is_weighted() {
                    algo::dijkstra(&self.adjacency(), s)
                } else {
                    self.reach_from(s)
                };
                dist[t].map_or(Answer::Absent, |d| Answer::Int(d as i64))
            }
            Diameter => {
                let g = self.graph();
                let adj = self.adjacency();
                let mut best = 0;
                for src in 0..g.node_count() {
                    let dist = if g.is_weighted() {
                        algo::dijkstra(&adj, src)
                    } else {
                        algo::bfs(&adj, src)
                    };
                    for d in dist {
                        match d {
                            Some(d) => best = best.max(d),
                            None => return Ok(Answer::Absent),
                        }
                    }
                }
                Answer::Int(best as i64)
            }
            AllStReachable => {
                let g = self.graph();
                let targets = g.t_set().expect("validated");
                let mut all = true;
                for &s in g.s_set().expect("validated") {
                    let dist = self.reach_from(s);
                    if targets.iter().any(|&t| dist[t].is_none()) {
                        all = false;
                        break;
                    }
                }
                Answer::Bool(all)
            }
            HasPerfectMatching => {
                let g = self.graph();
                Answer::Bool(2 * algo::hopcroft_karp(g)? == g.node_count())
            }
            KAugFreeMatchingSize(k) => {
                Answer::Int(algo::compute_kaug_free_matching(self.graph(), k)?.len() as i64)
            }
            MaxWeightPmWeight => match algo::hungarian_max_weight(self.graph())? {
                Some(w) => Answer::Int(w as i64),
                None => Answer::Absent,
            },
            UnionIsUniverse => Answer::Bool(self.sets().scope_covers_universe()),
            Member(i, u) => Answer::Bool(self.sets().contains(i, u)?),
            IsEmpty(i) => Answer::Bool(self.sets().is_empty_set(i)?),
        })
    }

    fn sets(&self) -> &crate::model::SetSystem {
        match &self.instance {
            Instance::Sets(s) => s,
            Instance::Graph(_) => unreachable!("set kinds hold set systems"),
        }
    }
}

impl DynamicEngine for BaselineEngine {
    fn kind(&self) -> ProblemKind {
        self.kind
    }

    fn mode(&self) -> Mode {
        self.mode
    }

    fn update(&mut self, op: UpdateOp) -> Result<()> {
        if !op.legal_for(self.kind) {
            return Err(Error::domain(format!(
                "{op:?} is not an update of {}",
                self.kind
            )));
        }
        check_mode(self.mode, &op)?;
        let inverse = self.apply(op)?;
        if !self.checkpoints.is_empty() {
            self.undo.push(inverse);
        }
        self.counters.updates += 1;
        Ok(())
    }

    fn query(&mut self, q: QueryOp) -> Result<Answer> {
        if q.kind() != self.kind {
            return Err(Error::domain(format!(
                "{q:?} is not a query of {}",
                self.kind
            )));
        }
        let answer = self.evaluate(q)?;
        self.counters.queries += 1;
        Ok(answer)
    }

    fn checkpoint(&mut self) -> Checkpoint {
        self.checkpoints.push(self.undo.len())
    }

    fn rollback(&mut self, cp: Checkpoint) -> Result<()> {
        self.checkpoints.release(cp)?;
        while self.undo.len() > cp.depth() {
            let inv = self.undo.pop().expect("length checked");
            self.revert(inv)?;
            self.counters.rollback_ops += 1;
        }
        if self.checkpoints.is_empty() {
            self.undo.clear();
        }
        Ok(())
    }

    fn counters(&self) -> CostCounters {
        self.counters
    }

    fn instance(&self) -> Instance {
        self.instance.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SetSystem;

    fn path_sat() -> Graph {
        let mut g = Graph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap();
        g.set_st(0, 2).unwrap();
        g.set_active([]).unwrap();
        g
    }

    #[test]
    fn subconn_activation() {
        let mut e =
            BaselineEngine::new(ProblemKind::StSubConn, Mode::Full, path_sat().into()).unwrap();
        assert_eq!(e.counters().updates, 0);
        assert_eq!(e.counters().preprocess_units, 5);
        assert_eq!(e.query(QueryOp::StConnected).unwrap(), Answer::Bool(false));
        e.update(UpdateOp::ActivateNode(1)).unwrap();
        assert_eq!(e.query(QueryOp::StConnected).unwrap(), Answer::Bool(true));
    }

    #[test]
    fn construction_errors() {
        let sets = SetSystem::new(2);
        assert!(BaselineEngine::new(ProblemKind::Pagh, Mode::Full, sets.into()).is_ok());
        let g = Graph::directed(2);
        let err = BaselineEngine::new(ProblemKind::StReach, Mode::Full, g.into()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let err = BaselineEngine::new(ProblemKind::StReach, Mode::Full, SetSystem::new(1).into());
        assert!(err.is_err());
    }

    #[test]
    fn reach_count_excludes_source() {
        let mut g = Graph::from_edges(4, true, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        g.set_s(0).unwrap();
        let mut e = BaselineEngine::new(ProblemKind::ReachCount, Mode::Full, g.into()).unwrap();
        assert_eq!(
            e.query(QueryOp::ReachCountLessThan(4)).unwrap(),
            Answer::Bool(true)
        );
        assert_eq!(
            e.query(QueryOp::ReachCountLessThan(3)).unwrap(),
            Answer::Bool(false)
        );
    }

    #[test]
    fn insert_edge_and_mode_violation() {
        let mut g = Graph::directed(3);
        g.set_st(0, 2).unwrap();
        let mut e = BaselineEngine::new(ProblemKind::StReach, Mode::Incremental, g.into()).unwrap();
        e.update(UpdateOp::insert(0, 1)).unwrap();
        assert_eq!(e.counters().updates, 1);
        let err = e.update(UpdateOp::delete(0, 1)).unwrap_err();
        assert!(matches!(err, Error::ModeViolation(_)));
        assert!(matches!(
            e.update(UpdateOp::insert(0, 1)),
            Err(Error::State(_))
        ));
        assert_eq!(e.counters().updates, 1);
    }

    #[test]
    fn pagh_intersection() {
        let mut s = SetSystem::new(4);
        s.push_set([1, 2]).unwrap();
        s.push_set([2, 3]).unwrap();
        let mut e = BaselineEngine::new(ProblemKind::EmptyPagh, Mode::Full, s.into()).unwrap();
        e.update(UpdateOp::IntersectSets(0, 1)).unwrap();
        assert_eq!(e.query(QueryOp::IsEmpty(2)).unwrap(), Answer::Bool(false));
        assert!(e.query(QueryOp::Member(2, 2)).is_err());
    }

    #[test]
    fn checkpoint_rollback() {
        let mut g = Graph::directed(3);
        g.set_st(0, 2).unwrap();
        let mut e = BaselineEngine::new(ProblemKind::StReach, Mode::Decremental, g.into()).unwrap();
        let before = e.digest();
        let empty = e.checkpoint();
        e.rollback(empty).unwrap();
        assert_eq!(e.digest(), before);
        assert!(matches!(e.rollback(empty), Err(Error::State(_))));

        let mut g = Graph::directed(3);
        g.set_st(0, 2).unwrap();
        let mut e = BaselineEngine::new(ProblemKind::StReach, Mode::Full, g.into()).unwrap();
        let outer = e.checkpoint();
        e.update(UpdateOp::insert(0, 1)).unwrap();
        let inner = e.checkpoint();
        e.update(UpdateOp::insert(1, 2)).unwrap();
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(true));
        e.rollback(inner).unwrap();
        assert_eq!(e.counters().rollback_ops, 1);
        assert_eq!(e.query(QueryOp::StReachable).unwrap(), Answer::Bool(false));
        e.rollback(outer).unwrap();
        assert_eq!(e.counters().rollback_ops, 2);
        assert_eq!(e.counters().updates, 2);
        assert_eq!(e.digest(), before);
        assert!(e.rollback(inner).is_err());
    }

    #[test]
    fn rolling_back_outer_discards_inner() {
        let mut g = Graph::directed(3);
        g.set_st(0, 2).unwrap();
        let mut e = BaselineEngine::new(ProblemKind::StReach, Mode::Full, g.into()).unwrap();
        let outer = e.checkpoint();
        e.update(UpdateOp::insert(0, 1)).unwrap();
        let inner = e.checkpoint();
        e.update(UpdateOp::insert(1, 2)).unwrap();
        e.rollback(outer).unwrap();
        assert_eq!(e.counters().rollback_ops, 2);
        assert!(matches!(e.rollback(inner), Err(Error::State(_))));
    }

    #[test]
    fn promise_query() {
        let g = Graph::directed(3);
        let mut e = BaselineEngine::new(ProblemKind::ApproxSccCount, Mode::Full, g.into()).unwrap();
        assert!(matches!(
            e.query(QueryOp::SccCount2VsK(2)),
            Ok(Answer::Bool(true))
        ));
        assert!(matches!(
            e.query(QueryOp::SccCount2VsK(3)),
            Err(Error::Promise(_))
        ));
    }
}

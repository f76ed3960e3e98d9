use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::Serialize;

use super::graph::NodeId;
use super::sets::SetId;
use crate::error::{Error, Result};

/// The dynamic problems an engine can maintain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    /// Are `s` and `t` connected in the subgraph induced by the active nodes?
    StSubConn,
    /// Is the subgraph induced by the active nodes connected?
    ConnSub,
    StReach,
    /// Number of nodes reachable from `s`, compared against a threshold.
    ReachCount,
    StrongConnectivity,
    TwoScc,
    ApproxSccCount,
    MaxScc,
    /// Is every node of `T` reachable from every node of `S`?
    SetReach,
    Diameter,
    StShortestPath,
    PerfectMatching,
    WeightedMatching,
    /// Size of a matching without short augmenting paths.
    ShortAugFreeMatching,
    Pagh,
    EmptyPagh,
    SubsetUnion,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 17] = [
        ProblemKind::StSubConn,
        ProblemKind::ConnSub,
        ProblemKind::StReach,
        ProblemKind::ReachCount,
        ProblemKind::StrongConnectivity,
        ProblemKind::TwoScc,
        ProblemKind::ApproxSccCount,
        ProblemKind::MaxScc,
        ProblemKind::SetReach,
        ProblemKind::Diameter,
        ProblemKind::StShortestPath,
        ProblemKind::PerfectMatching,
        ProblemKind::WeightedMatching,
        ProblemKind::ShortAugFreeMatching,
        ProblemKind::Pagh,
        ProblemKind::EmptyPagh,
        ProblemKind::SubsetUnion,
    ];

    pub fn is_set_problem(self) -> bool {
        matches!(
            self,
            ProblemKind::Pagh | ProblemKind::EmptyPagh | ProblemKind::SubsetUnion
        )
    }

    pub fn uses_activation(self) -> bool {
        matches!(self, ProblemKind::StSubConn | ProblemKind::ConnSub)
    }

    /// `Some(true)` for kinds defined on directed graphs, `Some(false)` for
    /// undirected ones, `None` when either is accepted.
    pub fn wants_directed(self) -> Option<bool> {
        use ProblemKind::*;
        match self {
            StReach | ReachCount | StrongConnectivity | TwoScc | ApproxSccCount | MaxScc
            | SetReach => Some(true),
            StSubConn | ConnSub | Diameter | PerfectMatching | WeightedMatching
            | ShortAugFreeMatching => Some(false),
            StShortestPath | Pagh | EmptyPagh | SubsetUnion => None,
        }
    }

    pub fn name(self) -> &'static str {
        use ProblemKind::*;
        match self {
            StSubConn => "st-subconn",
            ConnSub => "connsub",
            StReach => "st-reach",
            ReachCount => "ssr-count",
            StrongConnectivity => "sc",
            TwoScc => "sc2",
            ApproxSccCount => "appx-scc",
            MaxScc => "max-scc",
            SetReach => "set-reach",
            Diameter => "diameter",
            StShortestPath => "st-sp",
            PerfectMatching => "bp-match",
            WeightedMatching => "bw-match",
            ShortAugFreeMatching => "k-bpm",
            Pagh => "pp",
            EmptyPagh => "empty-pp",
            SubsetUnion => "subunion",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which update directions an engine accepts from callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    #[serde(rename = "full")]
    Full,
    #[serde(rename = "inc")]
    Incremental,
    #[serde(rename = "dec")]
    Decremental,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Full, Mode::Incremental, Mode::Decremental];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Incremental => "inc",
            Mode::Decremental => "dec",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "inc" | "incremental" => Ok(Mode::Incremental),
            "dec" | "decremental" => Ok(Mode::Decremental),
            other => Err(Error::domain(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UpdateOp {
    InsertEdge {
        u: NodeId,
        v: NodeId,
        weight: Option<u64>,
    },
    DeleteEdge {
        u: NodeId,
        v: NodeId,
    },
    ActivateNode(NodeId),
    DeactivateNode(NodeId),
    InsertSet(Vec<usize>),
    IntersectSets(SetId, SetId),
    AddToScope(SetId),
    RemoveFromScope(SetId),
}

impl UpdateOp {
    pub fn insert(u: NodeId, v: NodeId) -> Self {
        UpdateOp::InsertEdge { u, v, weight: None }
    }

    pub fn insert_weighted(u: NodeId, v: NodeId, weight: u64) -> Self {
        UpdateOp::InsertEdge {
            u,
            v,
            weight: Some(weight),
        }
    }

    pub fn delete(u: NodeId, v: NodeId) -> Self {
        UpdateOp::DeleteEdge { u, v }
    }

    /// Whether the op only grows the instance. Deletions, deactivations and
    /// scope removals are the shrinking variants.
    pub fn is_insertion(&self) -> bool {
        matches!(
            self,
            UpdateOp::InsertEdge { .. }
                | UpdateOp::ActivateNode(_)
                | UpdateOp::InsertSet(_)
                | UpdateOp::IntersectSets(..)
                | UpdateOp::AddToScope(_)
        )
    }

    /// Whether `kind` accepts this op at all.
    pub fn legal_for(&self, kind: ProblemKind) -> bool {
        use ProblemKind::*;
        match self {
            UpdateOp::InsertEdge { .. } | UpdateOp::DeleteEdge { .. } => {
                !kind.is_set_problem() && !kind.uses_activation()
            }
            UpdateOp::ActivateNode(_) | UpdateOp::DeactivateNode(_) => kind.uses_activation(),
            UpdateOp::InsertSet(_) | UpdateOp::IntersectSets(..) => {
                matches!(kind, Pagh | EmptyPagh)
            }
            UpdateOp::AddToScope(_) | UpdateOp::RemoveFromScope(_) => kind == SubsetUnion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryOp {
    StConnected,
    StReachable,
    /// Is the number of nodes reachable from `s` (excluding `s`) below the bound?
    ReachCountLessThan(u64),
    StronglyConnected,
    MoreThanTwoSccs,
    /// Promise query: false when there are at most 2 SCCs, true when there
    /// are more than `k`; anything in between violates the promise.
    SccCount2VsK(u64),
    MaxSccSize,
    InducedConnected,
    UnionIsUniverse,
    HasPerfectMatching,
    KAugFreeMatchingSize(usize),
    MaxWeightPmWeight,
    StDistance,
    AllStReachable,
    Diameter,
    Member(SetId, usize),
    IsEmpty(SetId),
}

impl QueryOp {
    /// The single problem kind that answers this query.
    pub fn kind(&self) -> ProblemKind {
        use ProblemKind as K;
        match self {
            QueryOp::StConnected => K::StSubConn,
            QueryOp::StReachable => K::StReach,
            QueryOp::ReachCountLessThan(_) => K::ReachCount,
            QueryOp::StronglyConnected => K::StrongConnectivity,
            QueryOp::MoreThanTwoSccs => K::TwoScc,
            QueryOp::SccCount2VsK(_) => K::ApproxSccCount,
            QueryOp::MaxSccSize => K::MaxScc,
            QueryOp::InducedConnected => K::ConnSub,
            QueryOp::UnionIsUniverse => K::SubsetUnion,
            QueryOp::HasPerfectMatching => K::PerfectMatching,
            QueryOp::KAugFreeMatchingSize(_) => K::ShortAugFreeMatching,
            QueryOp::MaxWeightPmWeight => K::WeightedMatching,
            QueryOp::StDistance => K::StShortestPath,
            QueryOp::AllStReachable => K::SetReach,
            QueryOp::Diameter => K::Diameter,
            QueryOp::Member(..) => K::Pagh,
            QueryOp::IsEmpty(_) => K::EmptyPagh,
        }
    }
}

/// A query result. `Absent` stands for an undefined value: no s-t path,
/// no perfect matching, or a disconnected graph's diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Bool(bool),
    Int(i64),
    Absent,
}

impl Answer {
    pub fn as_bool(self) -> Result<bool> {
        match self {
            Answer::Bool(b) => Ok(b),
            other => Err(Error::domain(format!(
                "expected boolean answer, got {other:?}"
            ))),
        }
    }

    /// Integer payload; `None` for `Absent`.
    pub fn as_int(self) -> Result<Option<i64>> {
        match self {
            Answer::Int(v) => Ok(Some(v)),
            Answer::Absent => Ok(None),
            other => Err(Error::domain(format!(
                "expected integer answer, got {other:?}"
            ))),
        }
    }
}

/// Operation counts for a run. Rollback steps are counted apart from updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CostCounters {
    pub preprocess_units: u64,
    pub updates: u64,
    pub queries: u64,
    pub rollback_ops: u64,
}

impl CostCounters {
    /// True when no field of `self` is below the matching field of `earlier`.
    pub fn dominates(&self, earlier: &CostCounters) -> bool {
        self.preprocess_units >= earlier.preprocess_units
            && self.updates >= earlier.updates
            && self.queries >= earlier.queries
            && self.rollback_ops >= earlier.rollback_ops
    }
}

impl Add for CostCounters {
    type Output = CostCounters;

    fn add(self, rhs: CostCounters) -> CostCounters {
        CostCounters {
            preprocess_units: self.preprocess_units + rhs.preprocess_units,
            updates: self.updates + rhs.updates,
            queries: self.queries + rhs.queries,
            rollback_ops: self.rollback_ops + rhs.rollback_ops,
        }
    }
}

impl AddAssign for CostCounters {
    fn add_assign(&mut self, rhs: CostCounters) {
        *self = *self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_counters_are_zero() {
        let c = CostCounters::default();
        assert_eq!(
            (c.preprocess_units, c.updates, c.queries, c.rollback_ops),
            (0, 0, 0, 0)
        );
    }

    #[test]
    fn every_query_maps_to_a_kind_that_lists_it() {
        let q = QueryOp::Member(0, 0);
        assert_eq!(q.kind(), ProblemKind::Pagh);
        assert_eq!(QueryOp::IsEmpty(1).kind(), ProblemKind::EmptyPagh);
    }

    #[test]
    fn update_legality() {
        assert!(UpdateOp::insert(0, 1).legal_for(ProblemKind::StReach));
        assert!(!UpdateOp::insert(0, 1).legal_for(ProblemKind::StSubConn));
        assert!(UpdateOp::ActivateNode(0).legal_for(ProblemKind::ConnSub));
        assert!(UpdateOp::IntersectSets(0, 1).legal_for(ProblemKind::EmptyPagh));
        assert!(!UpdateOp::IntersectSets(0, 1).legal_for(ProblemKind::SubsetUnion));
        assert!(UpdateOp::AddToScope(0).legal_for(ProblemKind::SubsetUnion));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("inc".parse::<Mode>().unwrap(), Mode::Incremental);
        assert_eq!("dec".parse::<Mode>().unwrap(), Mode::Decremental);
        assert!("sideways".parse::<Mode>().is_err());
    }
}

//! Seeded random inputs for the property suites.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::model::{
    CnfFormula, Graph, Instance, Literal, Mode, ProblemKind, QueryOp, SetSystem, UpdateOp,
    CLAUSE_CAP_FACTOR,
};

/// Largest weighted-matching instance; its oracle is exhaustive.
pub const MAX_WEIGHTED_MATCHING_NODES: usize = 12;

/// `n` variables, up to `4n` clauses of width 1 to 3 over distinct variables.
pub fn random_cnf(rng: &mut impl Rng, n: usize) -> CnfFormula {
    let m = rng.random_range(0..=CLAUSE_CAP_FACTOR * n);
    let vars: Vec<usize> = (1..=n).collect();
    let clauses = (0..m)
        .map(|_| {
            let width = rng.random_range(1..=3.min(n));
            vars.choose_multiple(rng, width)
                .map(|&v| {
                    let lit = v as Literal;
                    if rng.random_bool(0.5) {
                        lit
                    } else {
                        -lit
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).expect("literals are in range")
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, directed: bool) -> Graph {
    let mut g = Graph::new(n, directed);
    for (u, v) in pairs(n, directed) {
        if rng.random_bool(p) {
            g.add_edge(u, v).expect("fresh pair");
        }
    }
    g
}

pub fn random_weighted_graph(
    rng: &mut impl Rng,
    n: usize,
    p: f64,
    max_weight: u64,
    directed: bool,
) -> Graph {
    let mut g = Graph::weighted(n, directed, max_weight).expect("positive bound");
    for (u, v) in pairs(n, directed) {
        if rng.random_bool(p) {
            g.add_weighted_edge(u, v, rng.random_range(1..=max_weight))
                .expect("fresh pair");
        }
    }
    g
}

fn pairs(n: usize, directed: bool) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| {
        (0..n)
            .filter(move |&v| if directed { u != v } else { u < v })
            .map(move |v| (u, v))
    })
}

/// Even nodes on one side, odd nodes on the other.
fn parity_bipartite(rng: &mut impl Rng, n: usize, p: f64, weighted: bool) -> Graph {
    let mut g = if weighted {
        Graph::weighted(n, false, 10).expect("positive bound")
    } else {
        Graph::undirected(n)
    };
    for u in (0..n).step_by(2) {
        for v in (1..n).step_by(2) {
            if rng.random_bool(p) {
                let w = if weighted { rng.random_range(1..=10) } else { 1 };
                g.add_weighted_edge(u, v, w).expect("fresh pair");
            }
        }
    }
    g
}

fn random_subset(rng: &mut impl Rng, n: usize, p: f64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.random_bool(p)).collect()
}

fn random_sets(rng: &mut impl Rng, max_n: usize, with_scope: bool) -> SetSystem {
    let universe = rng.random_range(1..=max_n);
    let mut sys = SetSystem::new(universe);
    for _ in 0..rng.random_range(1..=max_n) {
        let members = random_subset(rng, universe, 0.4);
        let id = sys.push_set(members).expect("members are in the universe");
        if with_scope && rng.random_bool(0.5) {
            sys.add_to_scope(id).expect("fresh id");
        }
    }
    sys
}

/// A random instance an engine of `kind` accepts, with at most `max_n`
/// nodes (at least 2, so `s != t`).
pub fn random_instance_for(kind: ProblemKind, rng: &mut impl Rng, max_n: usize) -> Instance {
    use ProblemKind::*;
    let max_n = max_n.max(2);
    let n = rng.random_range(2..=max_n);
    let p = rng.random_range(0.1..0.6);
    let (s, t) = {
        let mut ends: Vec<usize> = (0..n).collect();
        ends.shuffle(rng);
        (ends[0], ends[1])
    };
    let mut g = match kind {
        Pagh | EmptyPagh => return random_sets(rng, max_n, false).into(),
        SubsetUnion => return random_sets(rng, max_n, true).into(),
        PerfectMatching | ShortAugFreeMatching => parity_bipartite(rng, n, p, false),
        WeightedMatching => {
            let n = n.min(MAX_WEIGHTED_MATCHING_NODES);
            parity_bipartite(rng, n, p, true)
        }
        StShortestPath => random_weighted_graph(rng, n, p, 10, true),
        Diameter => {
            if rng.random_bool(0.5) {
                random_weighted_graph(rng, n, p, 10, false)
            } else {
                random_graph(rng, n, p, false)
            }
        }
        _ => random_graph(rng, n, p, kind.wants_directed().unwrap_or(true)),
    };
    match kind {
        StSubConn | StReach | StShortestPath => g.set_st(s, t).expect("in range"),
        ReachCount => g.set_s(s).expect("in range"),
        SetReach => {
            let sources = random_subset(rng, n, 0.3);
            let targets = random_subset(rng, n, 0.3);
            g.set_source_sets(sources, targets).expect("in range");
        }
        _ => {}
    }
    if kind.uses_activation() {
        let active = random_subset(rng, n, 0.6);
        g.set_active(active).expect("in range");
    }
    Instance::Graph(g)
}

/// A random update legal for `kind` under `mode` on `inst`, or `None` if
/// there is none.
pub fn random_update(
    kind: ProblemKind,
    mode: Mode,
    inst: &Instance,
    rng: &mut impl Rng,
) -> Option<UpdateOp> {
    let insert = match mode {
        Mode::Full => rng.random_bool(0.5),
        Mode::Incremental => true,
        Mode::Decremental => false,
    };
    match inst {
        Instance::Sets(sys) => set_update(kind, sys, insert, rng),
        Instance::Graph(g) if kind.uses_activation() => {
            let pick: Vec<usize> = (0..g.node_count())
                .filter(|&v| g.is_active(v) != insert)
                .collect();
            let &v = pick.choose(rng)?;
            Some(if insert {
                UpdateOp::ActivateNode(v)
            } else {
                UpdateOp::DeactivateNode(v)
            })
        }
        Instance::Graph(g) => {
            if !insert {
                let edges: Vec<(usize, usize)> = g.edges().map(|(u, v, _)| (u, v)).collect();
                let &(u, v) = edges.choose(rng)?;
                return Some(UpdateOp::delete(u, v));
            }
            let bipartite = matches!(
                kind,
                ProblemKind::PerfectMatching
                    | ProblemKind::WeightedMatching
                    | ProblemKind::ShortAugFreeMatching
            );
            let free: Vec<(usize, usize)> = pairs(g.node_count(), g.is_directed())
                .filter(|&(u, v)| !g.has_edge(u, v) && (!bipartite || (u + v) % 2 == 1))
                .collect();
            let &(u, v) = free.choose(rng)?;
            Some(if g.is_weighted() {
                UpdateOp::insert_weighted(u, v, rng.random_range(1..=g.weight_bound().max(1)))
            } else {
                UpdateOp::insert(u, v)
            })
        }
    }
}

fn set_update(
    kind: ProblemKind,
    sys: &SetSystem,
    insert: bool,
    rng: &mut impl Rng,
) -> Option<UpdateOp> {
    let k = sys.set_count();
    if kind == ProblemKind::SubsetUnion {
        let pick: Vec<usize> = (0..k)
            .filter(|i| sys.scope().contains(i) != insert)
            .collect();
        let &i = pick.choose(rng)?;
        return Some(if insert {
            UpdateOp::AddToScope(i)
        } else {
            UpdateOp::RemoveFromScope(i)
        });
    }
    if !insert {
        return None;
    }
    if k > 0 && rng.random_bool(0.6) {
        Some(UpdateOp::IntersectSets(
            rng.random_range(0..k),
            rng.random_range(0..k),
        ))
    } else {
        let members = random_subset(rng, sys.universe_size(), 0.5);
        Some(UpdateOp::InsertSet(members.into_iter().collect()))
    }
}

/// A random query of `kind` on `inst`.
pub fn random_query(kind: ProblemKind, inst: &Instance, rng: &mut impl Rng) -> QueryOp {
    use ProblemKind::*;
    let n = match inst {
        Instance::Graph(g) => g.node_count(),
        Instance::Sets(s) => s.universe_size(),
    };
    let set = |rng: &mut _| match inst {
        Instance::Sets(s) => Rng::random_range(rng, 0..s.set_count().max(1)),
        Instance::Graph(_) => 0,
    };
    match kind {
        StSubConn => QueryOp::StConnected,
        ConnSub => QueryOp::InducedConnected,
        StReach => QueryOp::StReachable,
        ReachCount => QueryOp::ReachCountLessThan(rng.random_range(0..=n as u64)),
        StrongConnectivity => QueryOp::StronglyConnected,
        TwoScc => QueryOp::MoreThanTwoSccs,
        ApproxSccCount => QueryOp::SccCount2VsK(rng.random_range(2..=n.max(2) as u64)),
        MaxScc => QueryOp::MaxSccSize,
        SetReach => QueryOp::AllStReachable,
        Diameter => QueryOp::Diameter,
        StShortestPath => QueryOp::StDistance,
        PerfectMatching => QueryOp::HasPerfectMatching,
        WeightedMatching => QueryOp::MaxWeightPmWeight,
        ShortAugFreeMatching => QueryOp::KAugFreeMatchingSize(2 * rng.random_range(0..=4) + 1),
        Pagh => {
            let i = set(rng);
            QueryOp::Member(i, rng.random_range(0..n))
        }
        EmptyPagh => QueryOp::IsEmpty(set(rng)),
        SubsetUnion => QueryOp::UnionIsUniverse,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{engine_new, DynamicEngine};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cnf_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=12 {
            let f = random_cnf(&mut rng, n);
            assert!(f.clause_count() <= 4 * n);
            for c in f.clauses() {
                let vars: BTreeSet<_> = c.iter().map(|l| l.unsigned_abs()).collect();
                assert_eq!(vars.len(), c.len());
                assert!((1..=3).contains(&c.len()));
            }
        }
    }

    #[test]
    fn instances_are_accepted_and_updates_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in ProblemKind::ALL {
            for mode in Mode::ALL {
                for _ in 0..10 {
                    let inst = random_instance_for(kind, &mut rng, 9);
                    let mut e = engine_new(kind, mode, inst.clone()).unwrap();
                    for _ in 0..5 {
                        let cur = e.instance();
                        if let Some(op) = random_update(kind, mode, &cur, &mut rng) {
                            assert!(op.legal_for(kind));
                            e.update(op).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_instance_for(ProblemKind::SetReach, &mut ChaCha8Rng::seed_from_u64(4), 8);
        let b = random_instance_for(ProblemKind::SetReach, &mut ChaCha8Rng::seed_from_u64(4), 8);
        assert_eq!(a, b);
    }
}

//! Minimum-weight triangle through st-shortest-path engines.
//!
//! H has layers A, B, C, A' (offsets 0, n, 2n, 3n) with an arc of weight
//! `w + 2M` in each layer gap for every orientation of an edge, plus `s`
//! and `t`. Vertex `v` (1-indexed `i = v + 1`) owns the anchor arcs
//! `(s, v_A)` and `(v_A', t)`, both of weight `3iM`. While exactly the
//! anchors of vertices `>= i` are present, `y - 6iM - 6M` is the minimum
//! weight of a triangle through `v` when that is at most `3M`.

use std::sync::Arc;

use crate::engines::EngineFactory;
use crate::error::{Error, Result};
use crate::guard;
use crate::inter::stsp_via_bwm;
use crate::model::{CostCounters, Graph, Mode, ProblemKind, QueryOp, UpdateOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwtOutcome {
    pub min_weight: Option<u64>,
    /// The value recorded at the stage of each vertex, if any.
    pub stage_minima: Vec<Option<u64>>,
    pub counters: CostCounters,
}

fn overflow() -> Error {
    Error::Guard("gadget weights overflow 64 bits".into())
}

struct Gadget {
    graph: Graph,
    n: usize,
    big_m: u64,
    s: usize,
    t: usize,
}

impl Gadget {
    fn anchor_weight(&self, v: usize) -> u64 {
        3 * (v as u64 + 1) * self.big_m
    }

    fn anchors(&self, v: usize) -> [UpdateOp; 2] {
        let w = self.anchor_weight(v);
        [
            UpdateOp::insert_weighted(self.s, v, w),
            UpdateOp::insert_weighted(3 * self.n + v, self.t, w),
        ]
    }
}

fn build(g: &Graph) -> Result<Gadget> {
    if g.is_directed() {
        return Err(Error::domain(
            "minimum-weight triangle needs an undirected graph",
        ));
    }
    let n = g.node_count();
    let big_m = g
        .edges()
        .map(|(_, _, w)| w)
        .max()
        .unwrap_or(1)
        .max(g.weight_bound())
        .max(1);
    // The largest path weight is about 6nM + 6M + 3M; 7(n+2)M covers it.
    (n as u64 + 2)
        .checked_mul(7)
        .and_then(|x| x.checked_mul(big_m))
        .ok_or_else(overflow)?;
    guard::check_size(4 * n as u128 + 2, "gadget nodes")?;
    let bound = (3 * (n as u64) * big_m).max(3 * big_m);
    let mut h = Graph::weighted(4 * n + 2, true, bound)?;
    for (u, v, w) in g.edges() {
        for (a, b) in [(u, v), (v, u)] {
            for layer in 0..3 {
                h.add_weighted_edge(layer * n + a, (layer + 1) * n + b, w + 2 * big_m)?;
            }
        }
    }
    let (s, t) = (4 * n, 4 * n + 1);
    h.set_st(s, t)?;
    Ok(Gadget {
        graph: h,
        n,
        big_m,
        s,
        t,
    })
}

/// Runs the stages against st-SP engines from `factory`. Full mode follows
/// the decremental schedule.
pub fn min_weight_triangle_via_stsp(
    g: &Graph,
    mode: Mode,
    factory: Arc<dyn EngineFactory>,
) -> Result<MwtOutcome> {
    let n = g.node_count();
    let mut gadget = build(g)?;
    if mode != Mode::Incremental {
        for v in 0..n {
            for op in gadget.anchors(v) {
                if let UpdateOp::InsertEdge {
                    u,
                    v,
                    weight: Some(w),
                } = op
                {
                    gadget.graph.add_weighted_edge(u, v, w)?;
                }
            }
        }
    }
    let mut engine = factory.build(
        ProblemKind::StShortestPath,
        mode,
        gadget.graph.clone().into(),
    )?;
    let mut stage_minima = vec![None; n];
    let order: Vec<usize> = if mode == Mode::Incremental {
        (0..n).rev().collect()
    } else {
        (0..n).collect()
    };
    let big_m = gadget.big_m;
    for v in order {
        if mode == Mode::Incremental {
            for op in gadget.anchors(v) {
                engine.update(op)?;
            }
        }
        if let Some(y) = engine.query(QueryOp::StDistance)?.as_int()? {
            let offset = 2 * gadget.anchor_weight(v) + 6 * big_m;
            let z = (y as u64).checked_sub(offset).ok_or_else(|| {
                Error::Construction(format!(
                    "stage distance {y} is below the anchor offset {offset}"
                ))
            })?;
            if z <= 3 * big_m {
                stage_minima[v] = Some(z);
            }
        }
        if mode != Mode::Incremental {
            for op in gadget.anchors(v) {
                if let UpdateOp::InsertEdge { u, v, .. } = op {
                    engine.update(UpdateOp::delete(u, v))?;
                }
            }
        }
    }
    Ok(MwtOutcome {
        min_weight: stage_minima.iter().flatten().copied().min(),
        stage_minima,
        counters: engine.counters(),
    })
}

/// The same stages with the st-SP engine replaced by the BWMatch wrapper
/// over `inner`.
pub fn min_weight_triangle_via_bwm(
    g: &Graph,
    mode: Mode,
    inner: Arc<dyn EngineFactory>,
) -> Result<MwtOutcome> {
    min_weight_triangle_via_stsp(g, mode, Arc::new(stsp_via_bwm(inner)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::Baseline;
    use crate::oracles::{min_triangle_weight_through, oracle_triangle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base() -> Arc<dyn EngineFactory> {
        Arc::new(Baseline)
    }

    fn weighted_k3() -> Graph {
        let mut g = Graph::weighted(3, false, 3).unwrap();
        g.add_weighted_edge(0, 1, 1).unwrap();
        g.add_weighted_edge(0, 2, 2).unwrap();
        g.add_weighted_edge(1, 2, 3).unwrap();
        g
    }

    fn random_weighted(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
        let n = rng.random_range(1..=max_n);
        let p = rng.random_range(0.1..0.7);
        let mut g = Graph::weighted(n, false, 10).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.add_weighted_edge(u, v, rng.random_range(1..=10)).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn k3_example() {
        for mode in Mode::ALL {
            let out = min_weight_triangle_via_stsp(&weighted_k3(), mode, base()).unwrap();
            assert_eq!(out.min_weight, Some(6));
            assert_eq!(out.stage_minima, vec![Some(6); 3]);
            assert_eq!(out.counters.queries, 3);
            assert_eq!(out.counters.updates, 6);
        }
        let out = min_weight_triangle_via_bwm(&weighted_k3(), Mode::Decremental, base()).unwrap();
        assert_eq!(out.min_weight, Some(6));
    }

    #[test]
    fn triangle_free_path() {
        let mut g = Graph::weighted(4, false, 5).unwrap();
        g.add_weighted_edge(0, 1, 5).unwrap();
        g.add_weighted_edge(1, 2, 1).unwrap();
        g.add_weighted_edge(2, 3, 4).unwrap();
        for mode in [Mode::Incremental, Mode::Decremental] {
            let out = min_weight_triangle_via_stsp(&g, mode, base()).unwrap();
            assert_eq!(out.min_weight, None);
            assert_eq!(out.counters.queries, 4);
        }
    }

    #[test]
    fn rejects_directed_input() {
        let g = Graph::weighted(3, true, 2).unwrap();
        assert!(matches!(
            min_weight_triangle_via_stsp(&g, Mode::Decremental, base()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn overflow_guard() {
        let mut g = Graph::weighted(3, false, u64::MAX / 4).unwrap();
        g.add_weighted_edge(0, 1, u64::MAX / 4).unwrap();
        assert!(matches!(
            min_weight_triangle_via_stsp(&g, Mode::Decremental, base()),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn matches_oracle_and_per_vertex_minima() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let g = random_weighted(&mut rng, 9);
            let expected = oracle_triangle(&g, true).unwrap().map(|h| h.weight);
            let through: Vec<Option<u64>> = (0..g.node_count())
                .map(|x| min_triangle_weight_through(&g, x).unwrap())
                .collect();
            for mode in [Mode::Incremental, Mode::Decremental] {
                let direct = min_weight_triangle_via_stsp(&g, mode, base()).unwrap();
                assert_eq!(direct.min_weight, expected);
                assert_eq!(direct.stage_minima, through);
                let n = g.node_count() as u64;
                assert_eq!(direct.counters.queries, n);
                assert!(direct.counters.updates <= 2 * n);
                let bwm = min_weight_triangle_via_bwm(&g, mode, base()).unwrap();
                assert_eq!(bwm.stage_minima, through);
                assert_eq!(
                    (bwm.counters.updates, bwm.counters.queries),
                    (direct.counters.updates, direct.counters.queries)
                );
            }
        }
    }
}

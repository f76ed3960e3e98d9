//! Cost counters only grow, and match the stated per-reduction budgets.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use redux_core::engines::{engine_new, Baseline, DynamicEngine, EngineFactory};
use redux_core::gen::{random_graph, random_instance_for, random_query, random_update};
use redux_core::model::{Mode, ProblemKind};
use redux_core::triangle::{run_triangle, TriangleConfig, TriangleReduction};

#[test]
fn counters_are_monotone_over_random_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for kind in ProblemKind::ALL {
        for mode in Mode::ALL {
            let inst = random_instance_for(kind, &mut rng, 7);
            let mut e = engine_new(kind, mode, inst).unwrap();
            let mut last = e.counters();
            let mut cps = Vec::new();
            for _ in 0..30 {
                match rng.random_range(0..4) {
                    0 => {
                        if let Some(op) = random_update(kind, mode, &e.instance(), &mut rng) {
                            e.update(op).unwrap();
                        }
                    }
                    1 => {
                        let q = random_query(kind, &e.instance(), &mut rng);
                        let _ = e.query(q);
                    }
                    2 => cps.push(e.checkpoint()),
                    _ => {
                        if let Some(cp) = cps.pop() {
                            e.rollback(cp).unwrap();
                        }
                    }
                }
                let now = e.counters();
                assert!(now.dominates(&last), "{kind} {mode}: {last:?} -> {now:?}");
                last = now;
            }
        }
    }
}

#[test]
fn anchor_reductions_query_once_per_vertex_on_triangle_free_graphs() {
    let base: Arc<dyn EngineFactory> = Arc::new(Baseline);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seen = 0;
    while seen < 10 {
        let n = rng.random_range(2..=20);
        let g = random_graph(&mut rng, n, 1.5 / n as f64, false);
        if redux_core::oracles::oracle_triangle(&g, false).unwrap().is_some() {
            continue;
        }
        seen += 1;
        for red in [
            TriangleReduction::StReach,
            TriangleReduction::SubConn,
            TriangleReduction::Bpm5,
            TriangleReduction::Bpm17,
        ] {
            for &mode in red.supported_modes() {
                let out = run_triangle(red, &g, &TriangleConfig::new(mode), base.clone()).unwrap();
                assert!(!out.found);
                assert_eq!(out.counters.queries, n as u64, "{} {mode}", red.name());
                assert_eq!(out.stages_run, n as u64);
            }
        }
    }
}

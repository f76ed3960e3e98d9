//! Text formats survive a print/parse round trip.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use redux_core::gen::{random_cnf, random_instance_for};
use redux_core::model::{parse_cnf, parse_graph, Instance, ProblemKind};
use redux_core::threesum::{gen_tripartite_instance, parse_tripartite};

proptest! {
    #[test]
    fn cnf(seed in any::<u64>(), n in 1usize..=12) {
        let f = random_cnf(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert_eq!(parse_cnf(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn graphs_of_every_kind(seed in any::<u64>(), k in 0usize..ProblemKind::ALL.len()) {
        let kind = ProblemKind::ALL[k];
        if let Instance::Graph(g) = random_instance_for(kind, &mut ChaCha8Rng::seed_from_u64(seed), 9) {
            let text = redux_core::model::graph_to_text(&g);
            let back = parse_graph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(redux_core::model::graph_to_text(&back), text);
        }
    }

    #[test]
    fn tripartite(seed in any::<u64>(), n_c in 1usize..=20, r in 1usize..=6, density in 0.0f64..=1.0) {
        let inst = gen_tripartite_instance(n_c, r, density, seed).unwrap();
        prop_assert_eq!(parse_tripartite(&inst.to_text()).unwrap(), inst);
    }
}

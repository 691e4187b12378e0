use proptest::prelude::*;

use planar_limits::generators::{flip_mcmc_triangulation, random_planar};
use planar_limits::graph::canonical_code_with_cap;
use planar_limits::graph::io::{graph_from_json, graph_to_json};
use planar_limits::PlanarGraph;

/// Renames vertex `v` to `perm[v]`, keeping every rotation.
fn relabel(g: &PlanarGraph, perm: &[usize]) -> PlanarGraph {
    let mut rot = vec![Vec::new(); g.vertex_count()];
    for (v, r) in g.rotation().iter().enumerate() {
        rot[perm[v]] = r.iter().map(|&u| perm[u]).collect();
    }
    PlanarGraph::from_rotation(rot).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_planar_is_a_connected_plane_graph(n in 4usize..60, keep in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_planar(n, keep, seed).unwrap();
        prop_assert!(g.is_connected());
        prop_assert!(g.is_plane_embedding());
        // Euler's formula for a connected plane graph.
        let (v, e, f) = (g.vertex_count() as i64, g.edge_count() as i64, g.faces().len() as i64);
        prop_assert_eq!(v - e + f, 2);
    }

    #[test]
    fn flips_keep_a_sphere_triangulation(n in 4usize..40, steps in 0u64..2000, seed in any::<u64>()) {
        let g = flip_mcmc_triangulation(n, steps, seed).unwrap();
        prop_assert!(g.is_sphere_triangulation());
        prop_assert_eq!(g.edge_count(), 3 * n - 6);
    }

    #[test]
    fn json_round_trip(n in 4usize..40, seed in any::<u64>()) {
        let g = random_planar(n, 0.5, seed).unwrap();
        let (back, root) = graph_from_json(&graph_to_json(&g, Some(1))).unwrap();
        prop_assert_eq!(back, g);
        prop_assert_eq!(root, Some(1));
    }

    #[test]
    fn canonical_code_ignores_labels(
        (n, seed, perm, root) in (4usize..30, any::<u64>()).prop_flat_map(|(n, seed)| {
            (Just(n), Just(seed), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), 0..n)
        })
    ) {
        let g = random_planar(n, 0.7, seed).unwrap();
        let h = relabel(&g, &perm);
        let a = canonical_code_with_cap(&g, root, 10_000).unwrap();
        let b = canonical_code_with_cap(&h, perm[root], 10_000).unwrap();
        prop_assert_eq!(a, b);
    }
}

use proptest::prelude::*;

use planar_limits::electric::unit_current_flow;
use planar_limits::generators::{grid, random_planar};
use planar_limits::startree::{lift_flow, star_tree_transform, subdivide};
use planar_limits::Network;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transform_shape(n in 4usize..80, keep in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_planar(n, keep, seed).unwrap();
        let st = star_tree_transform(&g);
        let d = st.graph();
        prop_assert!(d.max_degree() <= 3);
        prop_assert!(d.is_connected());
        prop_assert!(d.is_plane_embedding());
        prop_assert!(st.audit(&g).is_ok());
        // One leaf per edge end, and a binary tree with k leaves has k - 1 internal nodes.
        let internal: usize = (0..g.vertex_count()).map(|v| g.degree(v).saturating_sub(1).max(1)).sum();
        prop_assert_eq!(d.vertex_count(), g.edge_count() + internal);
        for (e, &m) in st.marking.iter().enumerate() {
            prop_assert_eq!(m, g.degree(st.owner[e]));
        }
    }

    #[test]
    fn lifted_energy_bounds(n in 4usize..60, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let g = random_planar(n, 0.6, seed).unwrap();
        let (a, z) = (0, 1 + pick.index(g.vertex_count() - 1));
        let theta = unit_current_flow(&Network::unit(g.clone()), &[a], &[z]).unwrap();
        let st = star_tree_transform(&g);
        let lifted = lift_flow(&g, &theta, &st).unwrap();
        prop_assert!(lifted.exact_conservation);
        prop_assert!((lifted.energy_subdivided - 2.0 * lifted.energy).abs() <= 1e-12 * lifted.energy);
        prop_assert!(lifted.energy_lifted <= 4.0 * lifted.energy * (1.0 + 1e-12));
    }
}

#[test]
fn subdivision_doubles_edges() {
    let g = grid(5).unwrap();
    let s = subdivide(&g);
    assert_eq!(s.graph.vertex_count(), g.vertex_count() + g.edge_count());
    assert_eq!(s.graph.edge_count(), 2 * g.edge_count());
}

use proptest::prelude::*;

use planar_limits::generators::{binary_tree, cycle, grid};
use planar_limits::walks::{avoidance_exact_curve, avoidance_probability, avoidance_probability_with, StartLaw};
use planar_limits::Network;

#[test]
fn monte_carlo_tracks_exact_values() {
    for g in [cycle(11).unwrap(), grid(4).unwrap(), binary_tree(3).unwrap()] {
        let curve = avoidance_exact_curve(&Network::unit(g.clone()), 30).unwrap();
        for t in [1, 2, 5, 30] {
            let est = avoidance_probability(&g, t, 40_000, t as u64).unwrap();
            let se = (curve[t - 1] * (1.0 - curve[t - 1]) / 40_000.0).sqrt().max(1e-9);
            assert!((est.phi - curve[t - 1]).abs() <= 4.0 * se, "T = {t}: {} vs {}", est.phi, curve[t - 1]);
        }
    }
}

#[test]
fn three_vertex_path() {
    // From the center the walk is back at time 2; from a leaf it reaches the center and
    // then the other leaf with probability 1/2. So phi(2) = (2/3)(1/2).
    let g = binary_tree(1).unwrap();
    let curve = avoidance_exact_curve(&Network::unit(g), 2).unwrap();
    assert_eq!(curve[0], 1.0);
    assert!((curve[1] - 1.0 / 3.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimates_are_reproducible_and_bracketed(n in 3usize..30, t in 1usize..50, seed in any::<u64>()) {
        let g = cycle(n).unwrap();
        let a = avoidance_probability(&g, t, 2_000, seed).unwrap();
        let b = avoidance_probability(&g, t, 2_000, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.ci.0 <= a.phi && a.phi <= a.ci.1);
        prop_assert!(a.ci.0 >= 0.0 && a.ci.1 <= 1.0);
    }

    #[test]
    fn exact_curve_is_monotone(side in 2usize..7, t in 1usize..80) {
        let curve = avoidance_exact_curve(&Network::unit(grid(side).unwrap()), t).unwrap();
        prop_assert!(curve.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        prop_assert!(curve.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn fixed_start_on_vertex_transitive_graph_matches_uniform(n in 3usize..15, t in 1usize..20) {
        let net = Network::unit(cycle(n).unwrap());
        let fixed = avoidance_probability_with(&net, StartLaw::Fixed(0), t, 1_000, 9).unwrap();
        let uniform = avoidance_probability_with(&net, StartLaw::Uniform, t, 1_000, 9).unwrap();
        let exact = avoidance_exact_curve(&net, t).unwrap()[t - 1];
        let se = (exact * (1.0 - exact) / 1_000.0).sqrt().max(1e-9);
        prop_assert!((fixed.phi - exact).abs() <= 5.0 * se);
        prop_assert!((uniform.phi - exact).abs() <= 5.0 * se);
    }
}

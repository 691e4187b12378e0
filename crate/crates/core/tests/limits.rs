use proptest::prelude::*;

use planar_limits::generators::{cycle, flip_mcmc_triangulation, grid, random_planar};
use planar_limits::limits::{ball_census, ball_histogram, reweighting_check, tv_distance, RootMode};

#[test]
fn vertex_transitive_graphs_have_one_ball_type() {
    let c = ball_census(&cycle(30).unwrap(), 4, RootMode::Uniform).unwrap();
    assert_eq!(c.probabilities.len(), 1);
    // Large cycles agree with each other at radius r < n / 2.
    let d = ball_census(&cycle(50).unwrap(), 4, RootMode::Stationary).unwrap();
    assert_eq!(tv_distance(&c, &d).unwrap(), 0.0);
}

#[test]
fn grids_converge_towards_the_lattice() {
    // The fraction of roots whose 2-ball is lattice-like is (n - 4)^2 / n^2.
    let far = |n: usize| {
        let h = ball_census(&grid(n).unwrap(), 2, RootMode::Uniform).unwrap();
        h.probabilities.values().fold(0.0f64, |a, &p| a.max(p))
    };
    assert!((far(10) - 36.0 / 100.0).abs() < 1e-12);
    assert!((far(30) - 676.0 / 900.0).abs() < 1e-12);
}

#[test]
fn sampling_converges_to_the_census() {
    let g = random_planar(60, 0.5, 11).unwrap();
    let census = ball_census(&g, 1, RootMode::Uniform).unwrap();
    let sample = ball_histogram(&g, 1, Some(40_000), RootMode::Uniform, 3).unwrap();
    assert!(tv_distance(&census, &sample).unwrap() < 0.03);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn histograms_are_laws(n in 4usize..50, seed in any::<u64>(), r in 0usize..3, stationary in any::<bool>()) {
        let g = random_planar(n, 0.5, seed).unwrap();
        let mode = if stationary { RootMode::Stationary } else { RootMode::Uniform };
        let h = ball_census(&g, r, mode).unwrap();
        let total: f64 = h.probabilities.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(h.probabilities.values().all(|&p| p > 0.0));
    }

    #[test]
    fn tv_is_a_bounded_symmetric_distance(n in 4usize..40, s1 in any::<u64>(), s2 in any::<u64>(), r in 0usize..3) {
        let a = ball_census(&random_planar(n, 0.5, s1).unwrap(), r, RootMode::Uniform).unwrap();
        let b = ball_census(&random_planar(n, 0.5, s2).unwrap(), r, RootMode::Uniform).unwrap();
        let d = tv_distance(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - tv_distance(&b, &a).unwrap()).abs() < 1e-15);
        prop_assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn stationary_reweighting_is_bounded_by_max_degree(n in 6usize..40, seed in any::<u64>()) {
        let g = flip_mcmc_triangulation(n, 10 * n as u64, seed).unwrap();
        let check = reweighting_check(&g, 1).unwrap();
        prop_assert!(check.pass(), "worst ratio {}", check.worst_ratio);
    }
}

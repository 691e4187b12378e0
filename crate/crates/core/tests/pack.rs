use proptest::prelude::*;

use planar_limits::generators::{flip_mcmc_triangulation, triangular_disk, triangular_disk_boundary};
use planar_limits::pack::{pack_triangulation, supported_points, PointCloud};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flip_triangulations_pack(n in 4usize..120, seed in any::<u64>(), face in any::<prop::sample::Index>()) {
        let g = flip_mcmc_triangulation(n, 20 * n as u64, seed).unwrap();
        let faces = g.faces();
        let outer = &faces[face.index(faces.len())];
        let boundary: Vec<(usize, f64)> = outer.iter().map(|&v| (v, 1.0)).collect();
        let p = pack_triangulation(&g, &boundary).unwrap();
        prop_assert!(p.angle_sum_error() <= 1e-8 + 1e-12);
        prop_assert!(p.tangency_error() <= 1e-6);
        prop_assert!(p.overlap_error() <= 1e-6);
        prop_assert!(p.radii.iter().all(|&r| r > 0.0));
    }

    #[test]
    fn supported_counts_fall_with_s(
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 10..120),
        delta in 0.1f64..0.45,
    ) {
        let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        prop_assume!(PointCloud::new(pts.clone()).is_ok());
        let cloud = PointCloud::new(pts).unwrap();
        let mut last = usize::MAX;
        for s in [2, 4, 8, 16] {
            let c = supported_points(&cloud, delta, s).unwrap().count;
            prop_assert!(c <= last);
            last = c;
        }
    }
}

#[test]
fn lattice_disk_packs_with_equal_radii() {
    // With unit boundary radii the hexagonal lattice is already a packing.
    let g = triangular_disk(6).unwrap();
    let boundary: Vec<(usize, f64)> = triangular_disk_boundary(6).into_iter().map(|v| (v, 1.0)).collect();
    let p = pack_triangulation(&g, &boundary).unwrap();
    assert!(p.radii.iter().all(|&r| (r - 1.0).abs() < 1e-9));
}

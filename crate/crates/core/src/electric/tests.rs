use super::*;
use crate::generators::{cycle, grid, path, random_network, triangular_disk};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn series_and_parallel() {
    let p = Network::unit(path(6).unwrap());
    assert!(close(effective_resistance(&p, &[0], &[5]).unwrap(), 5.0, 1e-12));
    let c = Network::unit(cycle(8).unwrap());
    // Two arcs of length 3 and 5 in parallel.
    assert!(close(effective_resistance(&c, &[0], &[3]).unwrap(), 15.0 / 8.0, 1e-12));
}

#[test]
fn infinite_resistance_edges_are_open() {
    let g = path(3).unwrap();
    let net = Network::from_resistances(g, vec![1.0, f64::INFINITY]).unwrap();
    assert!(effective_resistance(&net, &[0], &[2]).unwrap().is_infinite());
    assert!(close(effective_resistance(&net, &[0], &[1]).unwrap(), 1.0, 1e-12));
}

#[test]
fn rejects_bad_resistances_and_sets() {
    let g = path(3).unwrap();
    assert!(Network::from_resistances(g.clone(), vec![1.0, 0.0]).is_err());
    assert!(Network::from_resistances(g.clone(), vec![1.0, -2.0]).is_err());
    assert!(Network::from_resistances(g.clone(), vec![1.0, f64::NAN]).is_err());
    assert!(Network::from_resistances(g.clone(), vec![1.0]).is_err());
    let net = Network::unit(g);
    assert_eq!(
        effective_resistance(&net, &[0, 1], &[1]),
        Err(Error::OverlappingSets(1))
    );
    assert!(effective_resistance(&net, &[], &[1]).unwrap().is_infinite());
    assert!(matches!(
        effective_resistance(&net, &[7], &[1]),
        Err(Error::VertexOutOfRange { .. })
    ));
}

#[test]
fn agrees_with_matrix_tree_oracle() {
    for seed in 0..10 {
        let net = random_network(18, 0.15, seed).unwrap();
        for (a, z) in [(0, 17), (3, 9), (5, 6)] {
            let fast = effective_resistance(&net, &[a], &[z]).unwrap();
            let slow = reff_matrix_tree_oracle(&net, a, z).unwrap();
            assert!(close(fast, slow, 1e-9), "seed {seed}: {fast} vs {slow}");
        }
    }
}

#[test]
fn set_resistance_matches_contraction() {
    let net = Network::unit(grid(6).unwrap());
    let a = [0, 1, 6];
    let z = [35, 34];
    let direct = effective_resistance(&net, &a, &z).unwrap();
    let (small, map) = net.contract(&[&a, &z]).unwrap();
    assert_eq!(map[0], 0);
    assert_eq!(map[35], 1);
    let contracted = effective_resistance(&small, &[0], &[1]).unwrap();
    assert!(close(direct, contracted, 1e-12));
}

#[test]
fn current_flow_energy_is_resistance() {
    let net = random_network(30, 0.1, 11).unwrap();
    let flow = unit_current_flow(&net, &[0], &[29]).unwrap();
    let g = net.graph();
    assert!(flow.interior_divergence(g) < 1e-10);
    assert!(close(flow.strength(g), 1.0, 1e-10));
    let reff = effective_resistance(&net, &[0], &[29]).unwrap();
    assert!(close(flow.energy(&net), reff, 1e-10));
    let pot = harmonic_potential(&net, &[0], &[29]).unwrap();
    assert!(close(dirichlet_energy(&net, &pot), 1.0 / reff, 1e-10));
}

#[test]
fn potential_validation() {
    assert!(Potential::new(vec![0.0, 0.5, 1.0], vec![0], vec![2]).is_ok());
    assert!(Potential::new(vec![0.1, 0.5, 1.0], vec![0], vec![2]).is_err());
}

#[test]
fn escape_probability_identity() {
    for seed in 0..5 {
        let net = random_network(20, 0.2, seed).unwrap();
        let esc = escape_probability(&net, 2, 13).unwrap();
        let reff = effective_resistance(&net, &[2], &[13]).unwrap();
        let expected = 1.0 / (net.vertex_weight(2) * reff);
        assert!(close(esc, expected, 1e-10), "{esc} vs {expected}");
    }
}

#[test]
fn commute_time_identity() {
    let net = random_network(25, 0.15, 3).unwrap();
    let (ta, tz) = commute_time(&net, 0, 20).unwrap();
    let reff = effective_resistance(&net, &[0], &[20]).unwrap();
    let expected = 2.0 * net.total_conductance() * reff;
    assert!(close(ta + tz, expected, 1e-9));
    // Path: E_0 tau_{n-1} = (n-1)^2.
    let p = Network::unit(path(7).unwrap());
    let (t, _) = commute_time(&p, 0, 6).unwrap();
    assert!(close(t, 36.0, 1e-10));
}

#[test]
fn splice_flow_respects_bound() {
    let net = Network::unit(triangular_disk(4).unwrap());
    let set: Vec<usize> = (0..19).collect(); // center and first two rings
    let z = net.graph().vertex_count() - 1;
    let s = splice_flow(&net, &set, 0, z).unwrap();
    let g = net.graph();
    assert!(s.flow.interior_divergence(g) < 1e-10);
    assert!(close(s.flow.strength(g), 1.0, 1e-10));
    let reff = effective_resistance(&net, &[0], &[z]).unwrap();
    assert!(reff <= s.energy + 1e-12);
    assert!(s.energy.sqrt() <= s.reff_set_to_z.sqrt() + s.max_internal.sqrt() + 1e-12);
    assert!(s.energy <= 2.0 * s.bound + 1e-12);
}

#[test]
fn splice_preconditions() {
    let net = Network::unit(path(5).unwrap());
    assert!(splice_flow(&net, &[1, 2], 0, 4).is_err());
    assert!(splice_flow(&net, &[0, 4], 0, 4).is_err());
    let open = Network::from_resistances(path(3).unwrap(), vec![f64::INFINITY, 1.0]).unwrap();
    // 0 is cut off inside the set {0, 1}: no finite flow at all.
    assert!(splice_flow(&open, &[0, 1], 0, 2).is_err());
}

//! Random walks on networks.
//!
//! The walk moves from `x` to `y` with probability `c(x,y) / pi(x)`. Monte Carlo
//! trials draw from independent counter-based streams keyed by `(seed, trial)`,
//! so estimates are identical however the trials are scheduled across threads.

use rand::Rng;
use rayon::prelude::*;

use crate::electric::{self, Network};
use crate::error::{param, Error, Result};
use crate::graph::PlanarGraph;
use crate::rng;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Exact avoidance computations refuse graphs above this many vertices.
pub const EXACT_VERTEX_CAP: usize = 1_000;
/// ... and horizons above this.
pub const EXACT_HORIZON_CAP: usize = 10_000;

/// Flattened transition table.
#[derive(Debug, Clone)]
pub struct WalkTable {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    /// Cumulative conductances per row; `None` when every row is uniform.
    cumulative: Option<Vec<f64>>,
}

impl WalkTable {
    pub fn new(net: &Network) -> Self {
        let g = net.graph();
        let n = g.vertex_count();
        let uniform = net.conductances().iter().all(|&c| c == net.conductances()[0]);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        let mut cumulative = Vec::new();
        offsets.push(0);
        for v in 0..n {
            let mut acc = 0.0;
            for (&u, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                let c = net.conductance(e);
                if c > 0.0 {
                    targets.push(u as u32);
                    acc += c;
                    cumulative.push(acc);
                }
            }
            offsets.push(targets.len());
        }
        Self {
            offsets,
            targets,
            cumulative: (!uniform).then_some(cumulative),
        }
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn step<R: Rng>(&self, v: usize, rng: &mut R) -> usize {
        let (lo, hi) = (self.offsets[v], self.offsets[v + 1]);
        match &self.cumulative {
            None => self.targets[rng.gen_range(lo..hi)] as usize,
            Some(cum) => {
                let row = &cum[lo..hi];
                let x = rng.gen::<f64>() * row[row.len() - 1];
                let i = row.partition_point(|&c| c <= x).min(row.len() - 1);
                self.targets[lo + i] as usize
            }
        }
    }
}

/// `X_0, ..., X_T` started at `start`.
pub fn simulate_walk(net: &Network, start: usize, horizon: usize, seed: u64) -> Result<Vec<usize>> {
    net.graph().check_vertex(start)?;
    if net.vertex_weight(start) == 0.0 {
        return Err(Error::Disconnected(format!("start vertex {start} is isolated")));
    }
    let table = WalkTable::new(net);
    let mut rng = rng::stream(seed, 0);
    let mut path = Vec::with_capacity(horizon + 1);
    let mut x = start;
    path.push(x);
    for _ in 0..horizon {
        x = table.step(x, &mut rng);
        path.push(x);
    }
    Ok(path)
}

/// How the start vertex of each trial is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartLaw {
    Fixed(usize),
    Uniform,
    /// Proportional to the vertex weight `pi(v)` (the degree for unit networks).
    Stationary,
}

/// Monte Carlo estimate of a probability with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AvoidanceEstimate {
    pub phi: f64,
    pub half_width: f64,
    pub ci: (f64, f64),
    pub successes: u64,
    pub trials: u64,
}

impl AvoidanceEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            phi: p,
            half_width: half,
            // The Wilson bounds are exactly 0 and 1 at the extremes; avoid roundoff there.
            ci: (
                if successes == 0 { 0.0 } else { (center - half).max(0.0) },
                if successes == trials { 1.0 } else { (center + half).min(1.0) },
            ),
            successes,
            trials,
        }
    }

    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub fn standard_error(&self) -> f64 {
        (self.phi * (1.0 - self.phi) / self.trials as f64).sqrt()
    }
}

/// `phi(T, G)`: probability that the walk from a uniform start avoids it at times `1..=T`.
pub fn avoidance_probability(g: &PlanarGraph, horizon: usize, trials: u64, seed: u64) -> Result<AvoidanceEstimate> {
    avoidance_probability_with(&Network::unit(g.clone()), StartLaw::Uniform, horizon, trials, seed)
}

pub fn avoidance_probability_with(
    net: &Network,
    law: StartLaw,
    horizon: usize,
    trials: u64,
    seed: u64,
) -> Result<AvoidanceEstimate> {
    if horizon < 1 {
        return Err(param("T", "horizon must be at least 1"));
    }
    if trials < 1 {
        return Err(param("trials", "need at least one trial"));
    }
    let g = net.graph();
    let n = g.vertex_count();
    if let StartLaw::Fixed(v) = law {
        g.check_vertex(v)?;
    }
    let table = WalkTable::new(net);
    let isolated = match law {
        StartLaw::Fixed(v) => (table.out_degree(v) == 0).then_some(v),
        _ => (0..n).find(|&v| table.out_degree(v) == 0),
    };
    if let Some(v) = isolated {
        return Err(Error::Disconnected(format!("vertex {v} is isolated")));
    }
    let stationary_cum: Vec<f64> = if law == StartLaw::Stationary {
        (0..n)
            .scan(0.0, |acc, v| {
                *acc += net.vertex_weight(v);
                Some(*acc)
            })
            .collect()
    } else {
        Vec::new()
    };
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng::stream(seed, trial);
            let start = match law {
                StartLaw::Fixed(v) => v,
                StartLaw::Uniform => rng.gen_range(0..n),
                StartLaw::Stationary => {
                    let x = rng.gen::<f64>() * stationary_cum[n - 1];
                    stationary_cum.partition_point(|&c| c <= x).min(n - 1)
                }
            };
            let mut x = start;
            for _ in 0..horizon {
                x = table.step(x, &mut rng);
                if x == start {
                    return 0;
                }
            }
            1
        })
        .sum();
    Ok(AvoidanceEstimate::from_counts(successes, trials))
}

/// Exact `phi(t, G)` for `t = 1..=T` by absorbing-chain iteration, averaged over uniform starts.
pub fn avoidance_exact_curve(net: &Network, horizon: usize) -> Result<Vec<f64>> {
    let g = net.graph();
    let n = g.vertex_count();
    if n > EXACT_VERTEX_CAP {
        return Err(Error::SizeCap {
            size: n,
            cap: EXACT_VERTEX_CAP,
        });
    }
    if horizon > EXACT_HORIZON_CAP {
        return Err(Error::SizeCap {
            size: horizon,
            cap: EXACT_HORIZON_CAP,
        });
    }
    if horizon < 1 {
        return Err(param("T", "horizon must be at least 1"));
    }
    if let Some(v) = (0..n).find(|&v| net.vertex_weight(v) == 0.0) {
        return Err(Error::Disconnected(format!("vertex {v} is isolated")));
    }
    // Transition rows as (target, probability).
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|v| {
            let w = net.vertex_weight(v);
            g.neighbors(v)
                .iter()
                .zip(g.incident_edges(v))
                .filter(|(_, &e)| net.conductance(e) > 0.0)
                .map(|(&u, &e)| (u, net.conductance(e) / w))
                .collect()
        })
        .collect();
    let per_start: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut p = vec![0.0; n];
            let mut q = vec![0.0; n];
            p[s] = 1.0;
            let mut curve = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                q.iter_mut().for_each(|x| *x = 0.0);
                for (v, row) in rows.iter().enumerate() {
                    let mass = p[v];
                    if mass != 0.0 {
                        for &(u, pr) in row {
                            q[u] += mass * pr;
                        }
                    }
                }
                q[s] = 0.0; // returning walks are killed
                std::mem::swap(&mut p, &mut q);
                curve.push(p.iter().sum());
            }
            curve
        })
        .collect();
    Ok((0..horizon)
        .map(|t| per_start.iter().map(|c| c[t]).sum::<f64>() / n as f64)
        .collect())
}

/// Exact `phi(T, G)` for a graph with unit resistances.
pub fn avoidance_exact_small(g: &PlanarGraph, horizon: usize) -> Result<f64> {
    let curve = avoidance_exact_curve(&Network::unit(g.clone()), horizon)?;
    Ok(curve[horizon - 1])
}

/// Absorption law and mean absorption time for `tau = min{n >= 1 : X_n in targets}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hitting {
    /// `P_a(X_tau = t)` in the order of `targets`.
    pub probabilities: Vec<f64>,
    pub expected_time: f64,
}

pub fn exact_hitting(net: &Network, a: usize, targets: &[usize]) -> Result<Hitting> {
    net.graph().check_vertex(a)?;
    if targets.is_empty() {
        return Err(Error::Precondition("target set is empty".into()));
    }
    for &t in targets {
        net.graph().check_vertex(t)?;
    }
    let mut dedup = targets.to_vec();
    dedup.sort_unstable();
    dedup.dedup();
    if dedup.len() != targets.len() {
        return Err(Error::Precondition("target set has repeated vertices".into()));
    }
    let probabilities = electric::first_step_hitting(net, a, targets)?;
    let expected_time = electric::first_step_expected_time(net, a, targets)?;
    Ok(Hitting {
        probabilities,
        expected_time,
    })
}

/// Outcome of comparing escape probabilities of two networks that differ only inside `S`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PerturbationCheck {
    /// `|P_a(tau_z < tau_a) - P'_a(tau_z < tau_a)|`.
    pub lhs: f64,
    /// `P_a(tau_S < tau_{a,z})`.
    pub rhs: f64,
    pub pass: bool,
}

/// Slack for roundoff in the two independent solves.
const PERTURBATION_SLACK: f64 = 1e-12;

pub fn perturbation_bound_check(
    net: &Network,
    other: &Network,
    set: &[usize],
    a: usize,
    z: usize,
) -> Result<PerturbationCheck> {
    let g = net.graph();
    if g != other.graph() {
        return Err(Error::Precondition("networks have different graphs".into()));
    }
    g.check_vertex(a)?;
    g.check_vertex(z)?;
    if a == z {
        return Err(Error::Precondition("a and z must differ".into()));
    }
    let mut member = vec![false; g.vertex_count()];
    for &v in set {
        g.check_vertex(v)?;
        member[v] = true;
    }
    if member[a] || member[z] {
        return Err(Error::Precondition("a and z must lie outside S".into()));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !(member[u] && member[v]) && net.conductance(e) != other.conductance(e) {
            return Err(Error::Precondition(format!(
                "edge ({u}, {v}) differs but is not inside S"
            )));
        }
    }
    let esc = electric::escape_probability(net, a, z)?;
    let esc_other = electric::escape_probability(other, a, z)?;
    let lhs = (esc - esc_other).abs();
    let rhs = if set.is_empty() {
        0.0
    } else {
        let mut targets = set.to_vec();
        targets.push(a);
        targets.push(z);
        let probs = electric::first_step_hitting(net, a, &targets)?;
        probs[..set.len()].iter().sum()
    };
    Ok(PerturbationCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + PERTURBATION_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, path};

    #[test]
    fn single_edge_alternates() {
        let net = Network::unit(path(2).unwrap());
        assert_eq!(simulate_walk(&net, 0, 4, 1).unwrap(), vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn walks_are_reproducible() {
        let net = Network::unit(cycle(9).unwrap());
        let a = simulate_walk(&net, 3, 200, 42).unwrap();
        assert_eq!(a, simulate_walk(&net, 3, 200, 42).unwrap());
        assert_ne!(a, simulate_walk(&net, 3, 200, 43).unwrap());
        assert!(a.windows(2).all(|w| net.graph().has_edge(w[0], w[1])));
    }

    #[test]
    fn isolated_start_is_rejected() {
        let g = PlanarGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(simulate_walk(&Network::unit(g.clone()), 2, 5, 0).is_err());
        assert!(avoidance_probability(&g, 5, 10, 0).is_err());
    }

    #[test]
    fn horizon_one_always_avoids() {
        let est = avoidance_probability(&cycle(5).unwrap(), 1, 500, 3).unwrap();
        assert_eq!(est.phi, 1.0);
    }

    #[test]
    fn exact_small_cases() {
        assert_eq!(avoidance_exact_small(&path(2).unwrap(), 3).unwrap(), 0.0);
        let tri = cycle(3).unwrap();
        assert!((avoidance_exact_small(&tri, 2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_curve_is_non_increasing() {
        let curve = avoidance_exact_curve(&Network::unit(cycle(20).unwrap()), 60).unwrap();
        assert!(curve.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn wilson_interval() {
        let est = AvoidanceEstimate::from_counts(0, 100);
        assert_eq!(est.ci.0, 0.0);
        assert!(est.ci.1 > 0.0 && est.ci.1 < 0.05);
        let mid = AvoidanceEstimate::from_counts(50, 100);
        assert!((mid.ci.0 + mid.ci.1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hitting_on_short_path() {
        let net = Network::unit(path(3).unwrap());
        let h = exact_hitting(&net, 1, &[0, 2]).unwrap();
        assert!((h.probabilities[0] - 0.5).abs() < 1e-12);
        assert!((h.expected_time - 1.0).abs() < 1e-12);
        assert!(exact_hitting(&net, 1, &[]).is_err());
    }

    #[test]
    fn perturbation_trivial_cases() {
        let net = Network::unit(cycle(6).unwrap());
        let c = perturbation_bound_check(&net, &net, &[], 0, 3).unwrap();
        assert_eq!((c.lhs, c.rhs, c.pass), (0.0, 0.0, true));
        let changed = net.with_resistance(0, 2.0).unwrap(); // edge (0, 1)
        assert!(perturbation_bound_check(&net, &changed, &[4], 0, 3).is_err());
        assert!(perturbation_bound_check(&net, &net, &[0], 0, 3).is_err());
    }
}

//! Dirichlet problems on networks: harmonic extension of boundary data and
//! expected hitting times, all through one grounded-Laplacian factorisation.

use std::collections::VecDeque;

use super::Network;
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, SpdSolver};

/// Harmonic potential pinned to 0 on `A` and 1 on `Z`, with the current leaving `A`.
#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    pub values: Vec<f64>,
    pub current: f64,
    pub connected: bool,
}

impl HarmonicSolution {
    pub fn resistance(&self) -> f64 {
        if self.connected && self.current > 0.0 {
            1.0 / self.current
        } else {
            f64::INFINITY
        }
    }
}

/// Vertices reachable from `sources` through edges of positive conductance.
pub(crate) fn reachable(net: &Network, sources: &[usize]) -> Vec<bool> {
    let g = net.graph();
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (&u, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
            if !seen[u] && net.conductance(e) > 0.0 {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Grounded Laplacian on the non-boundary vertices connected to the boundary.
struct Grounded {
    /// Row of each vertex, or `usize::MAX` for boundary / unreachable vertices.
    row: Vec<usize>,
    vertices: Vec<usize>,
    solver: Option<SpdSolver>,
}

impl Grounded {
    fn new(net: &Network, boundary: &[bool]) -> Result<Self> {
        let g = net.graph();
        let n = g.vertex_count();
        let sources: Vec<usize> = (0..n).filter(|&v| boundary[v]).collect();
        let seen = reachable(net, &sources);
        let mut row = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for v in 0..n {
            if seen[v] && !boundary[v] {
                row[v] = vertices.len();
                vertices.push(v);
            }
        }
        if vertices.is_empty() {
            return Ok(Self {
                row,
                vertices,
                solver: None,
            });
        }
        let rows = vertices
            .iter()
            .map(|&v| {
                let mut entries = Vec::with_capacity(g.degree(v) + 1);
                let mut diag = 0.0;
                for (&u, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                    let c = net.conductance(e);
                    if c == 0.0 {
                        continue;
                    }
                    diag += c;
                    if row[u] != usize::MAX {
                        entries.push((row[u], -c));
                    }
                }
                entries.push((row[v], diag));
                entries
            })
            .collect();
        let solver = SpdSolver::new(CsrMatrix::from_rows(rows))?;
        Ok(Self {
            row,
            vertices,
            solver: Some(solver),
        })
    }

    /// Harmonic extension of `boundary_value` (read only on boundary vertices).
    fn extend(&self, net: &Network, boundary: &[bool], boundary_value: &[f64]) -> Result<Vec<f64>> {
        let g = net.graph();
        let mut values: Vec<f64> = (0..g.vertex_count())
            .map(|v| if boundary[v] { boundary_value[v] } else { 0.0 })
            .collect();
        let Some(solver) = &self.solver else {
            return Ok(values);
        };
        let rhs: Vec<f64> = self
            .vertices
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .zip(g.incident_edges(v))
                    .filter(|(&u, _)| boundary[u])
                    .map(|(&u, &e)| net.conductance(e) * boundary_value[u])
                    .sum()
            })
            .collect();
        let x = solver.solve(&rhs)?;
        for (i, &v) in self.vertices.iter().enumerate() {
            values[v] = x[i];
        }
        Ok(values)
    }

    /// Solves `L_II x = rhs` for a right-hand side given per vertex.
    fn solve_vertex_rhs(&self, n: usize, rhs: impl Fn(usize) -> f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n];
        if let Some(solver) = &self.solver {
            let b: Vec<f64> = self.vertices.iter().map(|&v| rhs(v)).collect();
            let x = solver.solve(&b)?;
            for (i, &v) in self.vertices.iter().enumerate() {
                out[v] = x[i];
            }
        }
        Ok(out)
    }
}

pub(crate) fn solve_potential(net: &Network, a: &[usize], z: &[usize]) -> Result<HarmonicSolution> {
    let g = net.graph();
    let n = g.vertex_count();
    let mut boundary = vec![false; n];
    let mut value = vec![0.0; n];
    let mut in_a = vec![false; n];
    for &v in a {
        boundary[v] = true;
        in_a[v] = true;
    }
    for &v in z {
        boundary[v] = true;
        value[v] = 1.0;
    }
    let connected = {
        let seen = reachable(net, a);
        z.iter().any(|&v| seen[v])
    };
    let grounded = Grounded::new(net, &boundary)?;
    let values = grounded.extend(net, &boundary, &value)?;
    let mut current = 0.0;
    for &x in a {
        for (&y, &e) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
            if !in_a[y] {
                current += net.conductance(e) * values[y];
            }
        }
    }
    Ok(HarmonicSolution {
        values,
        current,
        connected,
    })
}

/// For `tau = min{n >= 1 : X_n in targets}`, returns `P_start(X_tau = t)` for each target.
pub(crate) fn first_step_hitting(net: &Network, start: usize, targets: &[usize]) -> Result<Vec<f64>> {
    let g = net.graph();
    let n = g.vertex_count();
    let weight = net.vertex_weight(start);
    if weight == 0.0 {
        return Err(Error::Disconnected(format!("vertex {start} has no finite-resistance edge")));
    }
    if !targets.iter().any(|&t| reachable(net, &[start])[t]) {
        return Err(Error::Disconnected(format!(
            "no target reachable from {start}"
        )));
    }
    let mut boundary = vec![false; n];
    for &t in targets {
        boundary[t] = true;
    }
    let grounded = Grounded::new(net, &boundary)?;
    let mut probs = Vec::with_capacity(targets.len());
    for &t in targets {
        let mut value = vec![0.0; n];
        value[t] = 1.0;
        let h = grounded.extend(net, &boundary, &value)?;
        let p: f64 = g
            .neighbors(start)
            .iter()
            .zip(g.incident_edges(start))
            .map(|(&y, &e)| net.conductance(e) * h[y])
            .sum::<f64>()
            / weight;
        probs.push(p);
    }
    Ok(probs)
}

/// `E_v tau_T` for every vertex `v`, where `tau_T = min{n >= 0 : X_n in T}`.
///
/// Vertices that cannot reach the targets get `+inf`.
pub fn expected_hitting_times(net: &Network, targets: &[usize]) -> Result<Vec<f64>> {
    let n = net.graph().vertex_count();
    let mut boundary = vec![false; n];
    for &t in targets {
        net.graph().check_vertex(t)?;
        boundary[t] = true;
    }
    let grounded = Grounded::new(net, &boundary)?;
    let mut k = grounded.solve_vertex_rhs(n, |v| net.vertex_weight(v))?;
    for v in 0..n {
        if !boundary[v] && grounded.row[v] == usize::MAX {
            k[v] = f64::INFINITY;
        }
    }
    Ok(k)
}

/// `E_start tau` with `tau = min{n >= 1 : X_n in targets}`.
pub(crate) fn first_step_expected_time(net: &Network, start: usize, targets: &[usize]) -> Result<f64> {
    let g = net.graph();
    let weight = net.vertex_weight(start);
    if weight == 0.0 {
        return Err(Error::Disconnected(format!("vertex {start} has no finite-resistance edge")));
    }
    let k = expected_hitting_times(net, targets)?;
    let mut t = 1.0;
    for (&y, &e) in g.neighbors(start).iter().zip(g.incident_edges(start)) {
        let c = net.conductance(e);
        if c > 0.0 {
            t += c * k[y] / weight;
        }
    }
    Ok(t)
}

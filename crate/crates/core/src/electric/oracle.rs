//! Effective resistance from the matrix-tree theorem.
//!
//! `Reff(a <-> z)` is the weighted count of spanning 2-forests separating `a`
//! and `z` divided by the weighted count of spanning trees. Both counts are
//! principal minors of the conductance Laplacian:
//! `det L[-{a,z}] / det L[-{a}]`. Determinants come from Gaussian elimination
//! with partial pivoting on a freshly assembled dense Laplacian, sharing no
//! code with the main solver.

use super::Network;
use crate::error::{Error, Result};

pub const ORACLE_CAP: usize = 25;

pub fn reff_matrix_tree_oracle(net: &Network, a: usize, z: usize) -> Result<f64> {
    let g = net.graph();
    let n = g.vertex_count();
    if n > ORACLE_CAP {
        return Err(Error::SizeCap {
            size: n,
            cap: ORACLE_CAP,
        });
    }
    g.check_vertex(a)?;
    g.check_vertex(z)?;
    if a == z {
        return Err(Error::Precondition("a and z must differ".into()));
    }
    let mut lap = vec![vec![0.0; n]; n];
    for (&(u, v), &c) in g.edges().iter().zip(net.conductances()) {
        lap[u][u] += c;
        lap[v][v] += c;
        lap[u][v] -= c;
        lap[v][u] -= c;
    }
    let trees = determinant(minor(&lap, &[a]));
    let forests = determinant(minor(&lap, &[a, z]));
    // A disconnected network has no spanning tree; roundoff leaves a tiny remainder.
    if trees <= 1e-12 * forests.abs() {
        return Ok(f64::INFINITY);
    }
    Ok(forests / trees)
}

fn minor(m: &[Vec<f64>], drop: &[usize]) -> Vec<Vec<f64>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| !drop.contains(j))
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("nonempty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for i in col + 1..n {
            let f = m[i][col] / p;
            if f != 0.0 {
                for j in col..n {
                    m[i][j] -= f * m[col][j];
                }
            }
        }
    }
    det
}

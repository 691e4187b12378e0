//! Symmetric positive-definite solves for grounded Laplacians.
//!
//! Small systems are factored densely (Cholesky); larger ones use
//! Jacobi-preconditioned conjugate gradients stopped at a relative residual
//! of [`CG_TOLERANCE`].

use crate::error::{Error, Result};

/// Largest system factored densely.
pub const DENSE_LIMIT: usize = 600;
pub const CG_TOLERANCE: f64 = 1e-12;

/// Symmetric matrix in compressed sparse row form (both triangles stored).
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(col, value)` entries; duplicate columns are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *values.last_mut().expect("previous entry") += v;
                } else {
                    indices.push(c);
                    values.push(v);
                    last = Some(c);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            n,
            indptr,
            indices,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                s += self.values[k] * x[self.indices[k]];
            }
            y[i] = s;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (self.indptr[i]..self.indptr[i + 1])
                    .find(|&k| self.indices[k] == i)
                    .map_or(0.0, |k| self.values[k])
            })
            .collect()
    }

    fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                a[i * self.n + self.indices[k]] += self.values[k];
            }
        }
        a
    }
}

/// Lower-triangular Cholesky factor stored densely, row-major.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    pub fn factor(a: &[f64], n: usize) -> Result<Self> {
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::NotPositiveDefinite);
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = a[i * n + j];
                let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
                for k in 0..j {
                    s -= ri[k] * rj[k];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Self { n, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}

/// A prepared SPD solver; factor once, solve for many right-hand sides.
#[derive(Debug, Clone)]
pub enum SpdSolver {
    Dense(DenseCholesky),
    Iterative { matrix: CsrMatrix, inv_diag: Vec<f64> },
}

impl SpdSolver {
    pub fn new(matrix: CsrMatrix) -> Result<Self> {
        let n = matrix.dim();
        if n <= DENSE_LIMIT {
            return Ok(Self::Dense(DenseCholesky::factor(&matrix.to_dense(), n)?));
        }
        let diag = matrix.diagonal();
        if diag.iter().any(|&d| d <= 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let inv_diag = diag.iter().map(|d| 1.0 / d).collect();
        Ok(Self::Iterative { matrix, inv_diag })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        match self {
            Self::Dense(f) => Ok(f.solve(b)),
            Self::Iterative { matrix, inv_diag } => pcg(matrix, inv_diag, b),
        }
    }
}

fn pcg(a: &CsrMatrix, inv_diag: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.dim();
    let bnorm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let max_iter = 20 * n + 1000;
    for _ in 0..max_iter {
        a.mul_vec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rnorm <= CG_TOLERANCE * bnorm {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rnorm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: rnorm / bnorm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> CsrMatrix {
        // Grounded path Laplacian: tridiagonal (2, -1) with last diagonal 1 + 1.
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![(i, 2.0)];
                if i > 0 {
                    row.push((i - 1, -1.0));
                }
                if i + 1 < n {
                    row.push((i + 1, -1.0));
                }
                row
            })
            .collect();
        CsrMatrix::from_rows(rows)
    }

    fn residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
        let mut ax = vec![0.0; a.dim()];
        a.mul_vec(x, &mut ax);
        ax.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn dense_and_iterative_agree() {
        for n in [5, DENSE_LIMIT + 50] {
            let a = path_laplacian(n);
            let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let x = SpdSolver::new(a.clone()).unwrap().solve(&b).unwrap();
            assert!(residual(&a, &x, &b) < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn duplicates_are_summed() {
        let a = CsrMatrix::from_rows(vec![vec![(0, 1.0), (0, 1.0)]]);
        let x = SpdSolver::new(a).unwrap().solve(&[4.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_is_rejected() {
        let a = CsrMatrix::from_rows(vec![vec![(0, 1.0), (1, -1.0)], vec![(0, -1.0), (1, 1.0)]]);
        assert!(matches!(SpdSolver::new(a), Err(Error::NotPositiveDefinite)));
    }
}

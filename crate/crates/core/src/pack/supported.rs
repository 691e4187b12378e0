//! `(δ, s)`-supported points of a planar point cloud.
//!
//! A point `w` with isolation radius `ρ_w` is supported when every disk of
//! radius `δρ_w` leaves at least `s` cloud points inside `B(w, ρ_w / δ)`. With
//! `N = C ∩ B(w, ρ_w / δ)` that is `|N| - max_p |N ∩ B(p, δρ_w)| >= s`, and
//! the maximum coverage of a fixed-radius closed disk is attained at a disk
//! centered on a point of `N` or at one of the (at most two) disks whose
//! boundary passes through a pair of points of `N`. Both balls are closed.

use rayon::prelude::*;

use super::Point;
use crate::error::{param, Error, Result};

/// Relative slack so points on a candidate disk's boundary count as covered.
const BOUNDARY_SLACK: f64 = 1e-9;

/// Finite set of distinct points with cached isolation radii.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Vec<Point>,
    isolation: Vec<f64>,
}

fn d2(a: Point, b: Point) -> f64 {
    let (x, y) = (a[0] - b[0], a[1] - b[1]);
    x * x + y * y
}

impl PointCloud {
    /// Needs at least two distinct, finite points.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(param("points", "need at least two points"));
        }
        if let Some(p) = points.iter().find(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(param("points", format!("non-finite point {p:?}")));
        }
        let isolation: Vec<f64> = (0..points.len())
            .map(|i| {
                points
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &q)| d2(points[i], q))
                    .fold(f64::INFINITY, f64::min)
                    .sqrt()
            })
            .collect();
        if let Some(i) = isolation.iter().position(|&r| r == 0.0) {
            return Err(Error::Precondition(format!("point {i} is repeated")));
        }
        Ok(Self { points, isolation })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `ρ_w`: distance from point `i` to its nearest other point.
    pub fn isolation_radius(&self, i: usize) -> f64 {
        self.isolation[i]
    }

    /// Indices of the points in the closed disk `B(center, radius)`.
    pub fn within(&self, center: Point, radius: f64) -> Vec<usize> {
        let r2 = radius * radius;
        (0..self.points.len())
            .filter(|&j| d2(self.points[j], center) <= r2)
            .collect()
    }
}

/// Largest number of `pts` in a closed disk of radius `r`.
fn max_coverage(pts: &[Point], r: f64) -> usize {
    let reach = (r * (1.0 + BOUNDARY_SLACK)).powi(2);
    let count = |c: Point| pts.iter().filter(|&&q| d2(q, c) <= reach).count();
    let mut best = 0;
    for (i, &a) in pts.iter().enumerate() {
        best = best.max(count(a));
        for &b in &pts[i + 1..] {
            let dd = d2(a, b);
            if dd > 4.0 * r * r || dd == 0.0 {
                continue;
            }
            let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let d = dd.sqrt();
            let h = (r * r - dd / 4.0).max(0.0).sqrt();
            let (ux, uy) = ((b[1] - a[1]) / d, (a[0] - b[0]) / d);
            best = best.max(count([m[0] + h * ux, m[1] + h * uy]));
            best = best.max(count([m[0] - h * ux, m[1] - h * uy]));
        }
    }
    best
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(param("delta", format!("{delta} not in (0, 1/2)")));
    }
    Ok(())
}

/// `min_p |C ∩ B(w, ρ_w/δ) \ B(p, δρ_w)|` for every point `w`.
pub fn support_depths(cloud: &PointCloud, delta: f64) -> Result<Vec<usize>> {
    check_delta(delta)?;
    Ok((0..cloud.len())
        .into_par_iter()
        .map(|w| {
            let rho = cloud.isolation[w];
            let near: Vec<Point> = cloud
                .within(cloud.points[w], rho / delta)
                .into_iter()
                .map(|j| cloud.points[j])
                .collect();
            near.len() - max_coverage(&near, delta * rho)
        })
        .collect())
}

/// Supported-point count with the supported indices as witnesses.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SupportedPoints {
    pub count: usize,
    pub witnesses: Vec<usize>,
}

pub fn supported_points(cloud: &PointCloud, delta: f64, s: usize) -> Result<SupportedPoints> {
    if s < 2 {
        return Err(param("s", "must be at least 2"));
    }
    let depths = support_depths(cloud, delta)?;
    let witnesses: Vec<usize> = (0..depths.len()).filter(|&w| depths[w] >= s).collect();
    Ok(SupportedPoints {
        count: witnesses.len(),
        witnesses,
    })
}

/// `|C| δ^-2 log(1/δ) / s`, the shape of the supported-point bound.
pub fn supported_bound_shape(size: usize, delta: f64, s: usize) -> f64 {
    size as f64 * (1.0 / delta).ln() / (delta * delta * s as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_never_supported() {
        let c = PointCloud::new(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        for delta in [0.1, 0.25, 0.49] {
            assert_eq!(supported_points(&c, delta, 2).unwrap().count, 0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = PointCloud::new(vec![[0.0, 0.0], [1.0, 0.0]]).unwrap();
        assert!(supported_points(&c, 0.5, 3).is_err());
        assert!(supported_points(&c, 0.0, 3).is_err());
        assert!(supported_points(&c, 0.2, 1).is_err());
        assert!(PointCloud::new(vec![[0.0, 0.0], [0.0, 0.0]]).is_err());
    }

    #[test]
    fn coverage_uses_pair_disks() {
        // Three points on a unit-radius circle's boundary: only the circumscribed disk covers all.
        let pts = [[1.0, 0.0], [-0.5, 0.75f64.sqrt()], [-0.5, -(0.75f64.sqrt())]];
        assert_eq!(max_coverage(&pts, 1.0), 3);
        assert_eq!(max_coverage(&pts, 0.9), 2);
    }

    #[test]
    fn lattice_points_are_supported() {
        let mut pts = Vec::new();
        for i in 0..15 {
            for j in 0..15 {
                pts.push([i as f64, j as f64]);
            }
        }
        let c = PointCloud::new(pts).unwrap();
        // Center point: ρ = 1, B(w, 4) holds 49 points, a disk of radius 1/4 covers one.
        let depths = support_depths(&c, 0.25).unwrap();
        assert_eq!(depths[7 * 15 + 7], 48);
        assert_eq!(supported_points(&c, 0.25, 100).unwrap().count, 0);
    }
}

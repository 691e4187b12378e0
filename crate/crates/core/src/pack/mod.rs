//! Circle packings of disk triangulations.
//!
//! [`pack_triangulation`] takes a triangulated disk (every face a triangle
//! except one outer face) with prescribed radii on the outer face and finds
//! interior radii whose angle sums are `2π`, then lays the circles out face by
//! face. The rest of the module measures packings: Ring-Lemma ratios, vertex
//! sets cut out by disks and annuli, and resistance profiles across annuli.

mod supported;
mod svg;
mod zigzag;

pub use supported::{support_depths, supported_bound_shape, supported_points, PointCloud, SupportedPoints};
pub use svg::{to_svg, SvgOptions};
pub use zigzag::{triangulate_zigzag, ZigzagReport};

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::electric::{effective_resistance, Network};
use crate::error::{param, Error, Result};
use crate::graph::PlanarGraph;

pub type Point = [f64; 2];

/// Stopping rule for the radius iteration.
#[derive(Debug, Clone, Copy)]
pub struct PackOptions {
    /// Largest allowed `|angle sum - 2π|` at an interior vertex.
    pub tolerance: f64,
    /// Maximum number of sweeps over the interior vertices.
    pub max_iterations: usize,
}

impl Default for PackOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 100_000,
        }
    }
}

/// Circles indexed by the vertices of their tangency graph.
#[derive(Debug, Clone)]
pub struct CirclePacking {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
    graph: PlanarGraph,
    /// Vertices of the outer face, sorted.
    boundary: Vec<usize>,
    /// Sweeps used by the radius iteration.
    pub iterations: usize,
    /// Final `max |angle sum - 2π|` over interior vertices.
    pub angle_error: f64,
}

/// Angle at a circle of radius `x` in the triangle formed with tangent circles `y`, `z`.
fn corner_angle(x: f64, y: f64, z: f64) -> f64 {
    2.0 * ((y * z) / ((x + y) * (x + z))).sqrt().min(1.0).asin()
}

struct Layout {
    interior: Vec<usize>,
    /// Consecutive neighbor pairs around each interior vertex (its faces).
    petals: Vec<Vec<(usize, usize)>>,
    face_of: Vec<Vec<usize>>,
    outer: usize,
}

fn analyse(tri: &PlanarGraph, boundary: &[(usize, f64)]) -> Result<Layout> {
    let n = tri.vertex_count();
    if n < 3 {
        return Err(Error::NotTriangulation("fewer than three vertices".into()));
    }
    if !tri.is_connected() || !tri.is_plane_embedding() {
        return Err(Error::NotTriangulation(
            "graph is disconnected or the rotation system is not plane".into(),
        ));
    }
    let mut is_boundary = vec![false; n];
    for &(v, r) in boundary {
        tri.check_vertex(v)?;
        if is_boundary[v] {
            return Err(param("boundary", format!("vertex {v} listed twice")));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(param("boundary", format!("radius {r} at vertex {v}")));
        }
        is_boundary[v] = true;
    }
    let (face_of, faces) = tri.dart_faces();
    let mut want: Vec<usize> = boundary.iter().map(|&(v, _)| v).collect();
    want.sort_unstable();
    let outer = faces
        .iter()
        .position(|f| {
            let mut s = f.clone();
            s.sort_unstable();
            s == want
        })
        .ok_or_else(|| Error::NotTriangulation("boundary vertices do not form a face".into()))?;
    if let Some(f) = faces.iter().enumerate().find(|&(i, f)| i != outer && f.len() != 3) {
        return Err(Error::NotTriangulation(format!(
            "face {:?} is not a triangle",
            f.1
        )));
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !is_boundary[v]).collect();
    let petals = interior
        .iter()
        .map(|&v| {
            let r = tri.neighbors(v);
            (0..r.len()).map(|i| (r[i], r[(i + 1) % r.len()])).collect()
        })
        .collect();
    Ok(Layout {
        interior,
        petals,
        face_of,
        outer,
    })
}

fn angle_sum(radii: &[f64], v: usize, petals: &[(usize, usize)]) -> f64 {
    petals
        .iter()
        .map(|&(a, b)| corner_angle(radii[v], radii[a], radii[b]))
        .sum()
}

fn max_angle_error(radii: &[f64], layout: &Layout) -> f64 {
    layout
        .interior
        .iter()
        .zip(&layout.petals)
        .map(|(&v, p)| (angle_sum(radii, v, p) - TAU).abs())
        .fold(0.0, f64::max)
}

/// One Gauss–Seidel sweep of the uniform-neighbor update.
///
/// A vertex of degree `k` with angle sum `θ` behaves like one surrounded by `k` equal
/// circles of radius `r β / (1 - β)`, `β = sin(θ / 2k)`; the new radius is the one that
/// gives that flower angle sum `2π`.
fn sweep(radii: &mut [f64], layout: &Layout) {
    for (&v, p) in layout.interior.iter().zip(&layout.petals) {
        let k = p.len() as f64;
        let theta = angle_sum(radii, v, p);
        let beta = (theta / (2.0 * k)).sin();
        let delta = (PI / k).sin();
        let neighbor = radii[v] * beta / (1.0 - beta);
        radii[v] = neighbor * (1.0 - delta) / delta;
    }
}

/// Solves for interior radii, then lays out the circles.
///
/// `boundary` lists the vertices of the outer face with their radii; every other face
/// must be a triangle.
pub fn pack_triangulation(tri: &PlanarGraph, boundary: &[(usize, f64)]) -> Result<CirclePacking> {
    pack_triangulation_with(tri, boundary, PackOptions::default())
}

pub fn pack_triangulation_with(
    tri: &PlanarGraph,
    boundary: &[(usize, f64)],
    opts: PackOptions,
) -> Result<CirclePacking> {
    let layout = analyse(tri, boundary)?;
    let n = tri.vertex_count();
    let mean = boundary.iter().map(|b| b.1).sum::<f64>() / boundary.len() as f64;
    let mut radii = vec![mean; n];
    for &(v, r) in boundary {
        radii[v] = r;
    }

    let mut error = max_angle_error(&radii, &layout);
    let mut iterations = 0;
    let mut previous_step: Option<Vec<f64>> = None;
    while error > opts.tolerance {
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual: error,
            });
        }
        let before: Vec<f64> = layout.interior.iter().map(|&v| radii[v].ln()).collect();
        sweep(&mut radii, &layout);
        iterations += 1;
        let step: Vec<f64> = layout
            .interior
            .iter()
            .zip(&before)
            .map(|(&v, b)| radii[v].ln() - b)
            .collect();
        error = max_angle_error(&radii, &layout);

        // Superstep: when successive log-radius steps point the same way and shrink
        // geometrically, jump towards the limit of the geometric series.
        if let Some(prev) = previous_step.take() {
            let dot: f64 = step.iter().zip(&prev).map(|(a, b)| a * b).sum();
            let norm = step.iter().map(|a| a * a).sum::<f64>().sqrt();
            let prev_norm = prev.iter().map(|a| a * a).sum::<f64>().sqrt();
            let lambda = norm / prev_norm;
            if norm > 0.0 && dot / (norm * prev_norm) > 0.999 && lambda < 1.0 {
                let factor = (lambda / (1.0 - lambda)).min(100.0);
                let saved: Vec<f64> = layout.interior.iter().map(|&v| radii[v]).collect();
                for (&v, s) in layout.interior.iter().zip(&step) {
                    radii[v] *= (factor * s).exp();
                }
                let jumped = max_angle_error(&radii, &layout);
                if jumped < error {
                    error = jumped;
                } else {
                    for (&v, &r) in layout.interior.iter().zip(&saved) {
                        radii[v] = r;
                    }
                    previous_step = Some(step);
                }
                continue;
            }
        }
        previous_step = Some(step);
    }

    let centers = lay_out(tri, &radii, &layout)?;
    let mut boundary: Vec<usize> = boundary.iter().map(|b| b.0).collect();
    boundary.sort_unstable();
    Ok(CirclePacking {
        centers,
        radii,
        graph: tri.clone(),
        boundary,
        iterations,
        angle_error: error,
    })
}

/// Places the circles face by face, breadth first from the first inner face.
fn lay_out(tri: &PlanarGraph, radii: &[f64], layout: &Layout) -> Result<Vec<Point>> {
    let n = tri.vertex_count();
    let rot = tri.rotation();
    let mut centers: Vec<Option<Point>> = vec![None; n];
    let pred = |y: usize, x: usize| {
        let r = &rot[y];
        let p = r.iter().position(|&t| t == x).expect("adjacent");
        r[(p + r.len() - 1) % r.len()]
    };
    // Seed: the first dart whose left face is an inner triangle.
    let (a, slot) = (0..n)
        .flat_map(|v| (0..rot[v].len()).map(move |i| (v, i)))
        .find(|&(v, i)| layout.face_of[v][i] != layout.outer)
        .ok_or_else(|| Error::NotTriangulation("no inner face".into()))?;
    let b = rot[a][slot];
    centers[a] = Some([0.0, 0.0]);
    centers[b] = Some([radii[a] + radii[b], 0.0]);
    let mut queue = VecDeque::from([a, b]);
    while let Some(x) = queue.pop_front() {
        for (i, &y) in rot[x].iter().enumerate() {
            let (Some(cx), Some(cy)) = (centers[x], centers[y]) else {
                continue;
            };
            if layout.face_of[x][i] == layout.outer {
                continue;
            }
            let w = pred(y, x);
            if centers[w].is_some() {
                continue;
            }
            let (rx, ry, rw) = (radii[x], radii[y], radii[w]);
            let alpha = corner_angle(rx, ry, rw);
            let base = (cy[1] - cx[1]).atan2(cy[0] - cx[0]);
            let d = rx + rw;
            centers[w] = Some([cx[0] + d * (base + alpha).cos(), cx[1] + d * (base + alpha).sin()]);
            queue.push_back(w);
            queue.push_back(x);
        }
    }
    centers
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::NotTriangulation(format!("vertex {v} was not placed"))))
        .collect()
}

/// Ring-Lemma audit over tangent pairs of interior circles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingAudit {
    /// `max(r_u / r_v)` over edges with both endpoints interior (1 if there are none).
    pub max_ratio: f64,
    pub max_interior_degree: usize,
}

/// Disk, annulus or disk complement around a center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Plane,
    /// Closed disk `|x - c| <= r`.
    Disk { center: Point, radius: f64 },
    /// `inner < |x - c| <= outer`.
    Annulus { center: Point, inner: f64, outer: f64 },
    /// `|x - c| > r`.
    ComplementDisk { center: Point, radius: f64 },
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Region {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Region::Plane => true,
            Region::Disk { center, radius } => dist(p, center) <= radius,
            Region::Annulus {
                center,
                inner,
                outer,
            } => {
                let d = dist(p, center);
                inner < d && d <= outer
            }
            Region::ComplementDisk { center, radius } => dist(p, center) > radius,
        }
    }
}

/// Cumulative and consecutive annulus resistances around a center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusProfile {
    pub radii: Vec<f64>,
    /// `Reff(V_{B(c, r_i)} <-> V \ B(c, alpha r_i))` for every radius.
    pub consecutive: Vec<f64>,
    /// `Reff(V_{B(c, r_0)} <-> V \ B(c, r_i))` for `i >= 1`.
    pub cumulative: Vec<f64>,
}

impl CirclePacking {
    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    /// Vertices of the outer face, sorted.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.binary_search(&v).is_ok()
    }

    /// Similar copy with the root circle centered at the origin with radius 1.
    pub fn normalize_at_root(&self, root: usize) -> Result<CirclePacking> {
        self.graph.check_vertex(root)?;
        let c = self.centers[root];
        let s = 1.0 / self.radii[root];
        let mut out = self.clone();
        for p in &mut out.centers {
            *p = [(p[0] - c[0]) * s, (p[1] - c[1]) * s];
        }
        for r in &mut out.radii {
            *r *= s;
        }
        Ok(out)
    }

    /// Copy scaled by `factor` about the origin and shifted by `shift`.
    pub fn transformed(&self, factor: f64, shift: Point) -> CirclePacking {
        let mut out = self.clone();
        for p in &mut out.centers {
            *p = [p[0] * factor + shift[0], p[1] * factor + shift[1]];
        }
        for r in &mut out.radii {
            *r *= factor;
        }
        out
    }

    /// `max | |c_u - c_v| - (r_u + r_v) |` over edges.
    pub fn tangency_error(&self) -> f64 {
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                (dist(self.centers[u], self.centers[v]) - self.radii[u] - self.radii[v]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest overlap `r_u + r_v - |c_u - c_v|` over non-adjacent pairs (0 if none overlap).
    ///
    /// Sweep-and-prune on x-extents, so only pairs with overlapping bounding boxes are tested.
    pub fn overlap_error(&self) -> f64 {
        let n = self.radii.len();
        let mut order: Vec<usize> = (0..n).collect();
        let left = |v: usize| self.centers[v][0] - self.radii[v];
        order.sort_by(|&a, &b| left(a).total_cmp(&left(b)));
        let mut worst: f64 = 0.0;
        let mut active: Vec<usize> = Vec::new();
        for &v in &order {
            let lv = left(v);
            active.retain(|&u| self.centers[u][0] + self.radii[u] > lv);
            for &u in &active {
                if !self.graph.has_edge(u, v) {
                    let overlap = self.radii[u] + self.radii[v] - dist(self.centers[u], self.centers[v]);
                    worst = worst.max(overlap);
                }
            }
            active.push(v);
        }
        worst
    }

    /// Recomputes `max |angle sum - 2π|` at interior vertices from the radii.
    pub fn angle_sum_error(&self) -> f64 {
        let n = self.radii.len();
        (0..n)
            .filter(|&v| !self.is_boundary(v))
            .map(|v| {
                let r = self.graph.neighbors(v);
                let sum: f64 = (0..r.len())
                    .map(|i| corner_angle(self.radii[v], self.radii[r[i]], self.radii[r[(i + 1) % r.len()]]))
                    .sum();
                (sum - TAU).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn ring_ratio_audit(&self) -> RingAudit {
        let mut max_ratio: f64 = 1.0;
        for &(u, v) in self.graph.edges() {
            if !self.is_boundary(u) && !self.is_boundary(v) {
                let (a, b) = (self.radii[u], self.radii[v]);
                max_ratio = max_ratio.max(a / b).max(b / a);
            }
        }
        let max_interior_degree = (0..self.radii.len())
            .filter(|&v| !self.is_boundary(v))
            .map(|v| self.graph.degree(v))
            .max()
            .unwrap_or(0);
        RingAudit {
            max_ratio,
            max_interior_degree,
        }
    }

    /// Vertices whose centers lie in `region`.
    pub fn vertices_in_region(&self, region: &Region) -> Vec<usize> {
        (0..self.centers.len())
            .filter(|&v| region.contains(self.centers[v]))
            .collect()
    }

    /// Smallest `C` such that no edge joins `V_{B(c, r)}` to a center outside `B(c, C r)`.
    pub fn cut_constant(&self, center: Point, r: f64) -> f64 {
        let mut c: f64 = 1.0;
        for &(u, v) in self.graph.edges() {
            let (du, dv) = (dist(self.centers[u], center), dist(self.centers[v], center));
            if du <= r {
                c = c.max(dv / r);
            }
            if dv <= r {
                c = c.max(du / r);
            }
        }
        c
    }

    /// Resistances across disks and annuli around `center` in a network on the same graph.
    pub fn annulus_resistance_profile(
        &self,
        net: &Network,
        center: Point,
        radii: &[f64],
        alpha: f64,
    ) -> Result<AnnulusProfile> {
        if net.graph() != &self.graph {
            return Err(Error::Precondition("network and packing have different graphs".into()));
        }
        if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
            return Err(param("radii", "must be positive and strictly increasing"));
        }
        if !(alpha > 1.0) {
            return Err(param("alpha", "must exceed 1"));
        }
        let inside = |r: f64| self.vertices_in_region(&Region::Disk { center, radius: r });
        let outside = |r: f64| self.vertices_in_region(&Region::ComplementDisk { center, radius: r });
        let consecutive = radii
            .iter()
            .map(|&r| effective_resistance(net, &inside(r), &outside(alpha * r)))
            .collect::<Result<Vec<_>>>()?;
        let core = inside(radii[0]);
        let cumulative = radii[1..]
            .iter()
            .map(|&r| effective_resistance(net, &core, &outside(r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnnulusProfile {
            radii: radii.to_vec(),
            consecutive,
            cumulative,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PackingJson {
            centers: self.centers.clone(),
            radii: self.radii.clone(),
        })
        .expect("packing serializes")
    }
}

/// On-disk form of a packing.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PackingJson {
    pub centers: Vec<Point>,
    pub radii: Vec<f64>,
}

/// Radius of the circle tangent to three mutually tangent circles of radii `a, b, c`
/// inside the gap they enclose (inner Soddy circle).
pub fn inner_soddy_radius(a: f64, b: f64, c: f64) -> f64 {
    let (ka, kb, kc) = (1.0 / a, 1.0 / b, 1.0 / c);
    1.0 / (ka + kb + kc + 2.0 * (ka * kb + kb * kc + kc * ka).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{triangular_disk, triangular_disk_boundary, FlipChain};

    fn k4() -> PlanarGraph {
        PlanarGraph::from_rotation(vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]])
            .unwrap()
    }

    #[test]
    fn k4_matches_soddy() {
        let p = pack_triangulation(&k4(), &[(0, 1.0), (1, 1.0), (2, 1.0)]).unwrap();
        assert!((p.radii[3] - (2.0 / 3f64.sqrt() - 1.0)).abs() < 1e-9);
        assert!(p.tangency_error() < 1e-12);
        let q = pack_triangulation(&k4(), &[(0, 1.0), (1, 2.0), (2, 3.0)]).unwrap();
        assert!((q.radii[3] - inner_soddy_radius(1.0, 2.0, 3.0)).abs() < 1e-9);
    }

    #[test]
    fn svg_circles_and_edges() {
        let p = pack_triangulation(&k4(), &[(0, 1.0), (1, 1.0), (2, 1.0)]).unwrap();
        let with = to_svg(&p, &SvgOptions { root: Some(3), edges: true });
        assert_eq!(with.matches("<circle").count(), 4);
        assert_eq!(with.matches("<line").count(), 6);
        assert_eq!(with.matches("tomato").count(), 1);
        let without = to_svg(&p, &SvgOptions::default());
        assert_eq!(without.matches("<line").count(), 0);
        assert_eq!(without, to_svg(&p, &SvgOptions::default()));
    }

    #[test]
    fn lattice_patch_is_uniform() {
        let g = triangular_disk(5).unwrap();
        let bd: Vec<_> = triangular_disk_boundary(5).into_iter().map(|v| (v, 1.0)).collect();
        let p = pack_triangulation(&g, &bd).unwrap();
        assert!(p.radii.iter().all(|r| (r - 1.0).abs() < 1e-6));
        assert_eq!(p.ring_ratio_audit().max_interior_degree, 6);
        assert!(p.tangency_error() < 1e-9);
        assert!(p.overlap_error() < 1e-9);
    }

    #[test]
    fn random_triangulation_packs() {
        let mut chain = FlipChain::seed(120).unwrap();
        let mut rng = crate::rng::stream(1, 0);
        for _ in 0..5000 {
            chain.step(&mut rng);
        }
        let g = chain.graph();
        let outer = g.faces()[0].clone();
        let bd: Vec<_> = outer.iter().map(|&v| (v, 1.0)).collect();
        let p = pack_triangulation(&g, &bd).unwrap();
        assert!(p.angle_sum_error() <= 1e-8);
        assert!(p.tangency_error() < 1e-6, "{}", p.tangency_error());
        assert!(p.overlap_error() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        let g = triangular_disk(2).unwrap();
        assert!(matches!(
            pack_triangulation(&g, &[(0, 1.0), (1, 1.0), (2, 1.0)]),
            Err(Error::NotTriangulation(_))
        ));
        let sq = crate::generators::grid(3).unwrap();
        let bd: Vec<_> = crate::generators::grid_boundary(3).into_iter().map(|v| (v, 1.0)).collect();
        assert!(pack_triangulation(&sq, &bd).is_err());
        assert!(pack_triangulation(&k4(), &[(0, 1.0), (1, -1.0), (2, 1.0)]).is_err());
    }

    #[test]
    fn no_convergence_is_reported() {
        let g = triangular_disk(3).unwrap();
        let bd: Vec<_> = triangular_disk_boundary(3)
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, 1.0 + i as f64))
            .collect();
        let opts = PackOptions {
            tolerance: 1e-8,
            max_iterations: 1,
        };
        assert!(matches!(
            pack_triangulation_with(&g, &bd, opts),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn normalization() {
        let g = triangular_disk(3).unwrap();
        let bd: Vec<_> = triangular_disk_boundary(3)
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, 1.0 + 0.1 * i as f64))
            .collect();
        let p = pack_triangulation(&g, &bd).unwrap();
        let n1 = p.normalize_at_root(0).unwrap();
        assert_eq!(n1.centers[0], [0.0, 0.0]);
        assert!((n1.radii[0] - 1.0).abs() < 1e-15);
        let n2 = p.transformed(7.0, [3.0, -2.0]).normalize_at_root(0).unwrap();
        for v in 0..p.radii.len() {
            assert!(dist(n1.centers[v], n2.centers[v]) < 1e-9);
        }
        let (a, b) = (n1.ring_ratio_audit().max_ratio, p.ring_ratio_audit().max_ratio);
        assert!((a - b).abs() < 1e-12 * b);
    }

    #[test]
    fn regions_partition() {
        let g = triangular_disk(4).unwrap();
        let bd: Vec<_> = triangular_disk_boundary(4).into_iter().map(|v| (v, 1.0)).collect();
        let p = pack_triangulation(&g, &bd).unwrap().normalize_at_root(0).unwrap();
        assert_eq!(p.vertices_in_region(&Region::Plane).len(), g.vertex_count());
        let c = [0.0, 0.0];
        assert_eq!(p.vertices_in_region(&Region::Disk { center: c, radius: 0.5 }), vec![0]);
        let radii = [0.5, 2.5, 4.5, 9.0];
        let mut seen = vec![0; g.vertex_count()];
        for w in radii.windows(2) {
            for v in p.vertices_in_region(&Region::Annulus {
                center: c,
                inner: w[0],
                outer: w[1],
            }) {
                seen[v] += 1;
            }
        }
        assert!(seen.iter().all(|&s| s <= 1));
        assert!(p.cut_constant(c, 2.5) < 2.0);
    }

    #[test]
    fn annulus_profile_grows() {
        let g = triangular_disk(12).unwrap();
        let bd: Vec<_> = triangular_disk_boundary(12).into_iter().map(|v| (v, 1.0)).collect();
        let p = pack_triangulation(&g, &bd).unwrap().normalize_at_root(0).unwrap();
        let net = Network::unit(g);
        let prof = p
            .annulus_resistance_profile(&net, [0.0, 0.0], &[1.0, 2.0, 4.0, 8.0], 2.0)
            .unwrap();
        assert!(prof.cumulative.windows(2).all(|w| w[1] > w[0]));
        assert!(prof.consecutive.iter().all(|&r| r > 0.0 && r.is_finite()));
        // Beyond the patch nothing is outside: infinite resistance.
        let far = p.annulus_resistance_profile(&net, [0.0, 0.0], &[30.0], 2.0).unwrap();
        assert!(far.consecutive[0].is_infinite());
    }
}

//! Extending a plane graph to a triangulation with bounded degree growth.
//!
//! Each face is handled on its own. A simple face whose zigzag diagonals are
//! all new edges is cut by ears taken alternately from the two ends of its
//! boundary, starting at its smallest vertex, so every boundary vertex gains at
//! most two diagonals. Any other face (a non-simple walk, or one where a
//! diagonal already exists elsewhere) first gets a ring of new vertices
//! `u_i`, each joined to the boundary edge `w_i w_{i+1}` and to its ring
//! neighbors; the ring is a simple face of fresh vertices and is then zigzag
//! cut. Either way an original vertex of degree `d` ends with degree at most
//! `3d`.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::PlanarGraph;

/// What the triangulation added.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ZigzagReport {
    pub added_vertices: usize,
    pub added_edges: usize,
    /// Faces that needed a ring of new vertices.
    pub ring_faces: usize,
    pub max_degree_before: usize,
    pub max_degree_after: usize,
    /// `max_v deg_T(v) / deg_G(v)` over original vertices.
    pub degree_inflation: f64,
}

struct Builder {
    rot: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl Builder {
    fn has(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Inserts `new` right after `anchor` in the rotation at `v`.
    fn insert_after(&mut self, v: usize, anchor: usize, new: usize) {
        let p = self.rot[v].iter().position(|&t| t == anchor).expect("anchor present");
        self.rot[v].insert(p + 1, new);
    }

    fn note_edge(&mut self, a: usize, b: usize) {
        self.edges.insert((a.min(b), a.max(b)));
    }

    /// Zigzag diagonals of a simple face walk, starting at its smallest vertex.
    fn zigzag_diagonals(walk: &[usize]) -> Vec<(usize, usize)> {
        let start = (0..walk.len()).min_by_key(|&i| walk[i]).expect("nonempty face");
        let mut l: VecDeque<usize> = (0..walk.len()).map(|t| walk[(start + t) % walk.len()]).collect();
        let mut out = Vec::new();
        let mut front = true;
        while l.len() > 3 {
            let k = l.len();
            if front {
                out.push((l[k - 1], l[1]));
                l.pop_front();
            } else {
                out.push((l[k - 2], l[0]));
                l.pop_back();
            }
            front = !front;
        }
        out
    }

    /// Cuts a simple face (given with the face on the left) by its zigzag diagonals.
    fn zigzag(&mut self, walk: &[usize]) {
        let start = (0..walk.len()).min_by_key(|&i| walk[i]).expect("nonempty face");
        let mut l: VecDeque<usize> = (0..walk.len()).map(|t| walk[(start + t) % walk.len()]).collect();
        let mut front = true;
        while l.len() > 3 {
            let k = l.len();
            // Diagonal x - y at the corners of the current face: at a face vertex the
            // corner sits right after its successor along the walk.
            let (x, x_next, y, y_next) = if front {
                (l[k - 1], l[0], l[1], l[2])
            } else {
                (l[k - 2], l[k - 1], l[0], l[1])
            };
            self.insert_after(x, x_next, y);
            self.insert_after(y, y_next, x);
            self.note_edge(x, y);
            if front {
                l.pop_front();
            } else {
                l.pop_back();
            }
            front = !front;
        }
    }

    /// Surrounds the inside of a face walk with a ring of new vertices, then cuts the ring.
    fn ring(&mut self, walk: &[usize]) {
        let k = walk.len();
        let base = self.rot.len();
        let u = |i: usize| base + (i % k);
        for i in 0..k {
            let (w, next) = (walk[i], walk[(i + 1) % k]);
            // Corner of w: counter-clockwise from `next` come u_i, then u_{i-1}.
            self.insert_after(w, next, u(i));
            self.insert_after(w, u(i), u(i + k - 1));
        }
        for i in 0..k {
            let mut r = vec![walk[i], walk[(i + 1) % k], u(i + 1), u(i + k - 1)];
            if k == 2 {
                r.truncate(3); // u_{i+1} = u_{i-1}: the ring is a single edge.
            }
            self.rot.push(r);
            self.note_edge(u(i), walk[i]);
            self.note_edge(u(i), walk[(i + 1) % k]);
            self.note_edge(u(i), u(i + 1));
        }
        if k > 3 {
            let inner: Vec<usize> = (0..k).map(u).collect();
            self.zigzag(&inner);
        }
    }
}

/// Triangulation of the sphere containing `g`, built face by face.
pub fn triangulate_zigzag(g: &PlanarGraph) -> Result<(PlanarGraph, ZigzagReport)> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidGraph("need at least one edge".into()));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("graph is disconnected".into()));
    }
    if !g.is_plane_embedding() {
        return Err(Error::InvalidGraph("rotation system fails the Euler check".into()));
    }
    let mut b = Builder {
        rot: g.rotation().to_vec(),
        edges: g.edges().iter().copied().collect(),
    };
    let mut ring_faces = 0;
    for face in g.faces() {
        if face.len() == 3 {
            continue;
        }
        let mut seen = HashSet::new();
        let simple = face.iter().all(|v| seen.insert(*v));
        let fresh = simple && face.len() >= 4 && {
            let diagonals = Builder::zigzag_diagonals(&face);
            let distinct: HashSet<(usize, usize)> =
                diagonals.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
            distinct.len() == diagonals.len() && diagonals.iter().all(|&(x, y)| !b.has(x, y))
        };
        if fresh {
            b.zigzag(&face);
        } else {
            b.ring(&face);
            ring_faces += 1;
        }
    }
    let n = g.vertex_count();
    let t = PlanarGraph::from_rotation(b.rot)?;
    let degree_inflation = (0..n)
        .map(|v| t.degree(v) as f64 / g.degree(v) as f64)
        .fold(1.0, f64::max);
    let report = ZigzagReport {
        added_vertices: t.vertex_count() - n,
        added_edges: t.edge_count() - g.edge_count(),
        ring_faces,
        max_degree_before: g.max_degree(),
        max_degree_after: t.max_degree(),
        degree_inflation,
    };
    Ok((t, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{binary_tree, grid, path, random_planar};

    fn all_triangles(t: &PlanarGraph) -> bool {
        t.is_plane_embedding() && t.faces().iter().all(|f| f.len() == 3)
    }

    fn contains(t: &PlanarGraph, g: &PlanarGraph) -> bool {
        g.edges().iter().all(|&(u, v)| t.has_edge(u, v))
    }

    #[test]
    fn triangle_unchanged() {
        let g = PlanarGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (t, r) = triangulate_zigzag(&g).unwrap();
        assert_eq!(t, g);
        assert_eq!(r.added_edges, 0);
    }

    #[test]
    fn square_gets_one_diagonal_per_face() {
        let g = grid(2).unwrap();
        let (t, r) = triangulate_zigzag(&g).unwrap();
        // The inner square takes one diagonal; the outer face would repeat it, so it gets a ring.
        assert!(all_triangles(&t));
        assert!(contains(&t, &g));
        assert_eq!(r.ring_faces, 1);
    }

    #[test]
    fn single_edge_becomes_k4() {
        let (t, _) = triangulate_zigzag(&path(2).unwrap()).unwrap();
        assert!(t.is_sphere_triangulation());
        assert_eq!(t.vertex_count(), 4);
    }

    #[test]
    fn trees_and_grids() {
        for g in [path(7).unwrap(), binary_tree(3).unwrap(), grid(6).unwrap()] {
            let (t, r) = triangulate_zigzag(&g).unwrap();
            assert!(t.is_sphere_triangulation());
            assert!(contains(&t, &g));
            assert!(r.degree_inflation <= 3.0, "{r:?}");
        }
    }

    #[test]
    fn random_planar_graphs() {
        for seed in 0..10 {
            let g = random_planar(80, 0.5, seed).unwrap();
            let (t, r) = triangulate_zigzag(&g).unwrap();
            assert!(t.is_sphere_triangulation(), "seed {seed}");
            assert!(contains(&t, &g));
            assert!(r.degree_inflation <= 3.0);
        }
    }

    #[test]
    fn rejects_non_plane() {
        // K4 with a rotation that is not an embedding.
        let bad = PlanarGraph::from_rotation(vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]])
            .unwrap();
        assert!(triangulate_zigzag(&bad).is_err());
    }
}

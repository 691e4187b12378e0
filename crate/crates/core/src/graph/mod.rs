//! Simple graphs carrying a rotation system.
//!
//! A [`PlanarGraph`] stores, for every vertex, the cyclic order of its
//! neighbors. When that order comes from a plane drawing (counter-clockwise
//! around each vertex) the rotation system encodes the embedding, and the
//! faces can be traced combinatorially: the face to the left of the dart
//! `u -> v` continues with `v -> pred_v(u)`, where `pred_v` is the
//! predecessor in the rotation at `v`.
//!
//! Graphs are immutable. Operations that modify the structure (edge flips,
//! face triangulation) work on a raw rotation table and rebuild a graph.

mod ball;
mod canon;
pub mod io;

pub use ball::{ball, restrict, Ball, RootedGraph};
pub(crate) use ball::ball_of;
pub use canon::{
    agreement_radius, canonical_code, canonical_code_with_cap, rooted_distance, CanonicalCode,
    DEFAULT_CODE_CAP,
};

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A finite simple graph with a rotation system (cyclic neighbor order per vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarGraph {
    rot: Vec<Vec<usize>>,
    /// `slot_edge[v][i]` is the edge id of `(v, rot[v][i])`.
    slot_edge: Vec<Vec<usize>>,
    /// `twin[v][i]` is the index of `v` inside `rot[rot[v][i]]`.
    twin: Vec<Vec<usize>>,
    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    edges: Vec<(usize, usize)>,
}

impl PlanarGraph {
    /// Builds a graph from a rotation table, validating symmetry, simplicity and ranges.
    pub fn from_rotation(rot: Vec<Vec<usize>>) -> Result<Self> {
        let n = rot.len();
        for (v, nbrs) in rot.iter().enumerate() {
            for (i, &u) in nbrs.iter().enumerate() {
                if u >= n {
                    return Err(Error::VertexOutOfRange { vertex: u, count: n });
                }
                if u == v {
                    return Err(Error::InvalidGraph(format!("self-loop at vertex {v}")));
                }
                if nbrs[..i].contains(&u) {
                    return Err(Error::InvalidGraph(format!(
                        "repeated neighbor {u} in rotation of {v}"
                    )));
                }
            }
        }
        let mut edges = Vec::new();
        for (v, nbrs) in rot.iter().enumerate() {
            for &u in nbrs {
                if v < u {
                    edges.push((v, u));
                }
            }
        }
        edges.sort_unstable();

        // Position lookups; degrees are small so sorting each row is cheap.
        let mut twin = vec![Vec::new(); n];
        for v in 0..n {
            twin[v] = Vec::with_capacity(rot[v].len());
            for &u in &rot[v] {
                match rot[u].iter().position(|&x| x == v) {
                    Some(p) => twin[v].push(p),
                    None => {
                        return Err(Error::InvalidGraph(format!(
                            "asymmetric adjacency: {u} in rotation of {v} but not vice versa"
                        )))
                    }
                }
            }
        }
        let mut slot_edge = vec![Vec::new(); n];
        for v in 0..n {
            slot_edge[v] = rot[v]
                .iter()
                .map(|&u| {
                    let key = (v.min(u), v.max(u));
                    edges.binary_search(&key).expect("edge present")
                })
                .collect();
        }
        Ok(Self {
            rot,
            slot_edge,
            twin,
            edges,
        })
    }

    /// Builds a graph from an edge list; rotations list neighbors in increasing id order.
    ///
    /// Useful for abstract graphs where the embedding is irrelevant.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rot = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    count: n,
                });
            }
            rot[u].push(v);
            rot[v].push(u);
        }
        for r in &mut rot {
            r.sort_unstable();
        }
        Self::from_rotation(rot)
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rot.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbors of `v` in rotation order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    /// Edge ids aligned with [`neighbors`](Self::neighbors).
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.slot_edge[v]
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rot
    }

    pub fn into_rotation(self) -> Vec<Vec<usize>> {
        self.rot
    }

    /// All edges `(u, v)` with `u < v`, sorted; the index is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    /// The dart following `v -> rot[v][i]` along its left face, as `(vertex, slot)`.
    pub fn next_dart(&self, v: usize, i: usize) -> (usize, usize) {
        let u = self.rot[v][i];
        let back = self.twin[v][i];
        let d = self.rot[u].len();
        (u, (back + d - 1) % d)
    }

    /// Faces traced from the rotation system, each as its cyclic vertex walk.
    ///
    /// Faces are discovered in dart order (vertex id, then rotation slot), and each
    /// walk starts at the dart that discovered it.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.dart_faces().1
    }

    /// Face index of every dart (`[v][slot]`, the face to the left of `v -> rot[v][slot]`)
    /// together with the faces as returned by [`faces`](Self::faces).
    pub fn dart_faces(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut face_of: Vec<Vec<usize>> =
            self.rot.iter().map(|r| vec![usize::MAX; r.len()]).collect();
        let mut faces = Vec::new();
        for v in 0..self.vertex_count() {
            for i in 0..self.rot[v].len() {
                if face_of[v][i] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let (mut x, mut j) = (v, i);
                while face_of[x][j] == usize::MAX {
                    face_of[x][j] = id;
                    walk.push(x);
                    (x, j) = self.next_dart(x, j);
                }
                faces.push(walk);
            }
        }
        (face_of, faces)
    }

    /// Breadth-first distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            for &u in &self.rot[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Connected component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in &self.rot[v] {
                    if label[u] == usize::MAX {
                        label[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().1 == 1
    }

    /// Whether the rotation system describes a plane embedding (Euler's formula per component).
    pub fn is_plane_embedding(&self) -> bool {
        let (_, comps) = self.components();
        let isolated = (0..self.vertex_count())
            .filter(|&v| self.degree(v) == 0)
            .count();
        // Each non-trivial component contributes V - E + F = 2; isolated vertices have no darts
        // and hence no traced face, contributing V - E + F = 1.
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.faces().len() as i64;
        v - e + f == 2 * (comps as i64) - isolated as i64
    }

    /// Whether this is a triangulation of the sphere: connected, plane, every face a triangle.
    pub fn is_sphere_triangulation(&self) -> bool {
        let n = self.vertex_count();
        n >= 4
            && self.is_connected()
            && self.edge_count() == 3 * n - 6
            && self.is_plane_embedding()
            && self.faces().iter().all(|f| f.len() == 3)
    }
}

/// Rooted view of a graph used by the sampling code.
impl PlanarGraph {
    pub fn rooted(&self, root: usize) -> Result<RootedGraph> {
        RootedGraph::new(self.clone(), root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PlanarGraph {
        PlanarGraph::from_rotation(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap()
    }

    #[test]
    fn rejects_asymmetric_and_loops() {
        assert!(PlanarGraph::from_rotation(vec![vec![1], vec![]]).is_err());
        assert!(PlanarGraph::from_rotation(vec![vec![0]]).is_err());
        assert!(PlanarGraph::from_rotation(vec![vec![1, 1], vec![0]]).is_err());
        assert!(PlanarGraph::from_rotation(vec![vec![2], vec![]]).is_err());
    }

    #[test]
    fn square_has_two_faces() {
        let g = square();
        let faces = g.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 4));
        assert!(g.is_plane_embedding());
        assert!(!g.is_sphere_triangulation());
    }

    #[test]
    fn k4_is_a_triangulation() {
        // Vertex 3 in the middle of triangle 0,1,2 (counter-clockwise).
        let g = PlanarGraph::from_rotation(vec![
            vec![1, 3, 2],
            vec![2, 3, 0],
            vec![0, 3, 1],
            vec![0, 1, 2],
        ])
        .unwrap();
        assert!(g.is_sphere_triangulation());
    }

    #[test]
    fn k33_rotation_is_not_planar() {
        let g = PlanarGraph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(!g.is_plane_embedding());
    }

    #[test]
    fn tree_is_one_face() {
        let g = PlanarGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 6);
        assert!(g.is_plane_embedding());
    }

    #[test]
    fn edge_ids_are_sorted() {
        let g = square();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(g.edge_id(3, 0), Some(1));
        assert_eq!(g.incident_edges(0), &[0, 1]);
    }
}

//! Graph families used by the experiments.
//!
//! All planar families come with counter-clockwise rotation systems. Random
//! families are deterministic functions of their seed.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::electric::Network;
use crate::error::{param, Error, Result};
use crate::graph::PlanarGraph;
use crate::rng;

/// Path on `n` vertices.
pub fn path(n: usize) -> Result<PlanarGraph> {
    if n < 2 {
        return Err(param("n", "path needs n >= 2"));
    }
    let rot = (0..n)
        .map(|i| {
            let mut r = Vec::new();
            if i + 1 < n {
                r.push(i + 1);
            }
            if i > 0 {
                r.push(i - 1);
            }
            r
        })
        .collect();
    PlanarGraph::from_rotation(rot)
}

/// Cycle `C_n`.
pub fn cycle(n: usize) -> Result<PlanarGraph> {
    if n < 3 {
        return Err(param("n", "a simple cycle needs n >= 3"));
    }
    PlanarGraph::from_rotation((0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect())
}

/// `n x n` grid; vertex `i * n + j` sits at `(x, y) = (j, i)`.
pub fn grid(n: usize) -> Result<PlanarGraph> {
    if n < 2 {
        return Err(param("n", "grid needs n >= 2"));
    }
    let id = |i: usize, j: usize| i * n + j;
    let mut rot = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut r = Vec::with_capacity(4);
            if j + 1 < n {
                r.push(id(i, j + 1));
            }
            if i + 1 < n {
                r.push(id(i + 1, j));
            }
            if j > 0 {
                r.push(id(i, j - 1));
            }
            if i > 0 {
                r.push(id(i - 1, j));
            }
            rot.push(r);
        }
    }
    PlanarGraph::from_rotation(rot)
}

/// Vertices on the outer boundary of [`grid`].
pub fn grid_boundary(n: usize) -> Vec<usize> {
    (0..n * n)
        .filter(|&v| {
            let (i, j) = (v / n, v % n);
            i == 0 || j == 0 || i == n - 1 || j == n - 1
        })
        .collect()
}

/// Complete binary tree of height `h` (`2^(h+1) - 1` vertices, heap order, root 0).
pub fn binary_tree(h: usize) -> Result<PlanarGraph> {
    if h < 1 {
        return Err(param("h", "binary tree needs h >= 1"));
    }
    if h > 24 {
        return Err(param("h", "binary tree height capped at 24"));
    }
    let count = (1usize << (h + 1)) - 1;
    let rot = (0..count)
        .map(|i| {
            let mut r = Vec::with_capacity(3);
            if i > 0 {
                r.push((i - 1) / 2);
            }
            if 2 * i + 2 < count {
                r.push(2 * i + 1);
                r.push(2 * i + 2);
            }
            r
        })
        .collect();
    PlanarGraph::from_rotation(rot)
}

const HEX_DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn hex_norm(a: i64, b: i64) -> i64 {
    a.abs().max(b.abs()).max((a + b).abs())
}

/// Hexagonal patch of the triangular lattice with hex radius `r`.
///
/// Vertices are numbered ring by ring, counter-clockwise within a ring, so the
/// center is vertex 0 and the boundary ring is the last `6r` ids. Interior
/// vertices have degree 6; the outer face is the boundary hexagon.
pub fn triangular_disk(r: usize) -> Result<PlanarGraph> {
    if r < 1 {
        return Err(param("r", "triangular disk needs r >= 1"));
    }
    let ri = r as i64;
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for a in -ri..=ri {
        for b in -ri..=ri {
            if hex_norm(a, b) <= ri {
                pts.push((a, b));
            }
        }
    }
    let angle = |(a, b): (i64, i64)| {
        let (x, y) = (a as f64 + b as f64 / 2.0, b as f64 * 3f64.sqrt() / 2.0);
        y.atan2(x).rem_euclid(std::f64::consts::TAU)
    };
    pts.sort_by(|&p, &q| {
        hex_norm(p.0, p.1)
            .cmp(&hex_norm(q.0, q.1))
            .then(angle(p).total_cmp(&angle(q)))
    });
    let index: HashMap<(i64, i64), usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let rot = pts
        .iter()
        .map(|&(a, b)| {
            HEX_DIRS
                .iter()
                .filter_map(|&(da, db)| index.get(&(a + da, b + db)).copied())
                .collect()
        })
        .collect();
    PlanarGraph::from_rotation(rot)
}

/// Boundary ring of [`triangular_disk`]: the last `6r` vertex ids.
pub fn triangular_disk_boundary(r: usize) -> Vec<usize> {
    let total = 3 * r * r + 3 * r + 1;
    (total - 6 * r..total).collect()
}

/// Number of parallel 2-paths replacing a tree edge at height `k`: `ceil(k^(1/alpha))`.
pub fn sharpness_multiplicity(k: usize, alpha: f64) -> usize {
    let x = (k as f64).powf(1.0 / alpha);
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}

/// Binary tree with each edge replaced by a bundle of parallel 2-paths.
#[derive(Debug, Clone)]
pub struct SharpnessGraph {
    pub network: Network,
    /// Top of the tree.
    pub root: usize,
    /// Tree leaves (height 0).
    pub leaves: Vec<usize>,
    /// Height of every tree node, indexed by vertex id; midpoints are `None`.
    pub heights: Vec<Option<usize>>,
}

const SHARPNESS_CAP: usize = 5_000_000;

/// Exact vertex count of `sharpness_graph(h, alpha)`.
pub fn sharpness_vertex_count(h: usize, alpha: f64) -> u128 {
    let tree = (1u128 << (h + 1)) - 1;
    let mids: u128 = (1..=h)
        .map(|k| (1u128 << (h - k + 1)) * sharpness_multiplicity(k, alpha) as u128)
        .sum();
    tree + mids
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(param("alpha", format!("{alpha} not in (0, 1)")));
    }
    Ok(())
}

/// Binary tree of height `h` whose edges at height `k` (counted from the leaves)
/// become `ceil(k^(1/alpha))` parallel paths of length 2. Unit resistances.
pub fn sharpness_graph(h: usize, alpha: f64) -> Result<SharpnessGraph> {
    if h < 1 {
        return Err(param("h", "needs h >= 1"));
    }
    check_alpha(alpha)?;
    let size = sharpness_vertex_count(h, alpha);
    if size > SHARPNESS_CAP as u128 {
        return Err(Error::SizeCap {
            size: size.min(usize::MAX as u128) as usize,
            cap: SHARPNESS_CAP,
        });
    }
    let tree = (1usize << (h + 1)) - 1;
    let depth = |i: usize| (usize::BITS - 1 - (i + 1).leading_zeros()) as usize;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); tree];
    let mut heights: Vec<Option<usize>> = (0..tree).map(|i| Some(h - depth(i))).collect();
    // Child bundles are attached in left-right order; parent bundles in reverse so the
    // drawing with children below their parent is plane.
    for i in 1..tree {
        let parent = (i - 1) / 2;
        let k = h - depth(parent);
        let m = sharpness_multiplicity(k, alpha);
        let first = rot.len();
        for t in 0..m {
            rot.push(vec![parent, i]);
            heights.push(None);
            rot[parent].push(first + t);
        }
        let mids: Vec<usize> = (first..first + m).rev().collect();
        // Parent bundle goes first at the child, before its own child bundles.
        let mut r = mids;
        r.append(&mut rot[i]);
        rot[i] = r;
    }
    let graph = PlanarGraph::from_rotation(rot)?;
    let leaves = (0..tree).filter(|&i| 2 * i + 1 >= tree).collect();
    Ok(SharpnessGraph {
        network: Network::unit(graph),
        root: 0,
        leaves,
        heights,
    })
}

/// Leaf-to-top path of [`sharpness_graph`] with its bundles: tree node at height `k`
/// is vertex `k`. The rest of the tree hangs off this path as dead ends, so
/// resistances between path vertices agree with the full graph.
pub fn sharpness_spine(h: usize, alpha: f64) -> Result<(Network, usize, usize)> {
    if h < 1 {
        return Err(param("h", "needs h >= 1"));
    }
    check_alpha(alpha)?;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); h + 1];
    for k in 1..=h {
        let m = sharpness_multiplicity(k, alpha);
        let first = rot.len();
        for t in 0..m {
            rot.push(vec![k - 1, k]);
            rot[k - 1].push(first + t);
        }
        rot[k].extend((first..first + m).rev());
    }
    Ok((Network::unit(PlanarGraph::from_rotation(rot)?), 0, h))
}

/// Degree census of [`sharpness_graph`] without building it: `(degree, count)` pairs
/// in increasing degree order, with `m_k` the multiplicity at height `k`.
///
/// Leaves have degree `m_1`; a tree node at height `1 <= j < h` has `m_{j+1} + 2 m_j`;
/// the top has `2 m_h`; each of the `sum_k 2^(h-k+1) m_k` midpoints has degree 2.
pub fn sharpness_degree_census(h: usize, alpha: f64) -> Result<Vec<(usize, u64)>> {
    if !(1..=40).contains(&h) {
        return Err(param("h", "needs 1 <= h <= 40"));
    }
    check_alpha(alpha)?;
    if sharpness_vertex_count(h, alpha) > u64::MAX as u128 {
        return Err(param("alpha", "vertex count overflows 64 bits"));
    }
    let m = |k: usize| sharpness_multiplicity(k, alpha);
    let mut census = std::collections::BTreeMap::new();
    let mut add = |d: usize, c: u64| *census.entry(d).or_insert(0u64) += c;
    add(m(1), 1 << h);
    for j in 1..h {
        add(m(j + 1) + 2 * m(j), 1 << (h - j));
    }
    add(2 * m(h), 1);
    add(2, (1..=h).map(|k| (1u64 << (h - k + 1)) * m(k) as u64).sum());
    Ok(census.into_iter().collect())
}

/// Edge-flip Markov chain on simple triangulations of the sphere.
///
/// Proposals pick a uniform edge; flips that would create a multi-edge (or exceed
/// the degree cap) are rejected, so the chain is symmetric and its stationary law is
/// uniform on the reachable triangulations.
#[derive(Debug, Clone)]
pub struct FlipChain {
    rot: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    degree_cap: Option<usize>,
}

impl FlipChain {
    /// Deterministic seed triangulation on `n >= 4` vertices: K4 grown by inserting each
    /// new vertex into the face whose largest degree is smallest.
    pub fn seed(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(param("n", "triangulation needs n >= 4"));
        }
        let mut rot = vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
        for x in 4..n {
            let mut best: Option<((usize, usize), (usize, usize, usize))> = None;
            for u in 0..rot.len() {
                for &v in &rot[u] {
                    let w = pred(&rot[v], u);
                    if u < v && u < w {
                        let key = (
                            rot[u].len().max(rot[v].len()).max(rot[w].len()),
                            rot[u].len() + rot[v].len() + rot[w].len(),
                        );
                        if best.is_none_or(|(k, _)| key < k) {
                            best = Some((key, (u, v, w)));
                        }
                    }
                }
            }
            let (_, (u, v, w)) = best.expect("triangulation has faces");
            insert_before(&mut rot[u], w, x);
            insert_before(&mut rot[v], u, x);
            insert_before(&mut rot[w], v, x);
            rot.push(vec![u, v, w]);
        }
        let mut edges = Vec::new();
        for (u, r) in rot.iter().enumerate() {
            for &v in r {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();
        Ok(Self {
            rot,
            edges,
            degree_cap: None,
        })
    }

    pub fn with_degree_cap(mut self, cap: Option<usize>) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    /// One Metropolis step; returns whether the flip was accepted.
    pub fn step<R: Rng>(&mut self, rng: &mut R) -> bool {
        let i = rng.gen_range(0..self.edges.len());
        let (u, v) = self.edges[i];
        let x = pred(&self.rot[v], u);
        let y = pred(&self.rot[u], v);
        if x == y || self.rot[x].contains(&y) || self.rot[u].len() <= 3 || self.rot[v].len() <= 3 {
            return false;
        }
        if let Some(cap) = self.degree_cap {
            if self.rot[x].len() + 1 > cap || self.rot[y].len() + 1 > cap {
                return false;
            }
        }
        self.rot[u].retain(|&t| t != v);
        self.rot[v].retain(|&t| t != u);
        insert_before(&mut self.rot[x], v, y);
        insert_before(&mut self.rot[y], u, x);
        self.edges[i] = (x.min(y), x.max(y));
        true
    }

    pub fn max_degree(&self) -> usize {
        self.rot.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn graph(&self) -> PlanarGraph {
        PlanarGraph::from_rotation(self.rot.clone()).expect("flip chain keeps a valid rotation")
    }
}

/// Predecessor of `x` in the cyclic order `r`.
fn pred(r: &[usize], x: usize) -> usize {
    let p = r.iter().position(|&t| t == x).expect("neighbor present");
    r[(p + r.len() - 1) % r.len()]
}

/// Inserts `new` immediately before `anchor` in the cyclic order.
fn insert_before(r: &mut Vec<usize>, anchor: usize, new: usize) {
    let p = r.iter().position(|&t| t == anchor).expect("anchor present");
    r.insert(p, new);
}

/// Simple sphere triangulation after `steps` flip proposals from the seed.
pub fn flip_mcmc_triangulation(n: usize, steps: u64, seed: u64) -> Result<PlanarGraph> {
    flip_mcmc_triangulation_capped(n, steps, seed, None)
}

/// As [`flip_mcmc_triangulation`], rejecting flips that push a degree above `cap`.
pub fn flip_mcmc_triangulation_capped(
    n: usize,
    steps: u64,
    seed: u64,
    cap: Option<usize>,
) -> Result<PlanarGraph> {
    if let Some(c) = cap {
        if c < 6 {
            return Err(param("degree_cap", "cap must be at least 6"));
        }
    }
    let mut chain = FlipChain::seed(n)?.with_degree_cap(cap);
    let mut rng = rng::stream(seed, 0);
    for _ in 0..steps {
        chain.step(&mut rng);
    }
    Ok(chain.graph())
}

/// Random connected plane graph: a flip-chain triangulation with edges deleted at
/// random (probability `1 - keep`) whenever the graph stays connected.
pub fn random_planar(n: usize, keep: f64, seed: u64) -> Result<PlanarGraph> {
    if !(0.0..=1.0).contains(&keep) {
        return Err(param("keep", "must lie in [0, 1]"));
    }
    if n < 4 {
        return path(n.max(2));
    }
    let tri = flip_mcmc_triangulation(n, 20 * n as u64, seed)?;
    let mut rng = rng::stream(seed, 1);
    let mut rot = tri.into_rotation();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (u, r) in rot.iter().enumerate() {
        edges.extend(r.iter().filter(|&&v| u < v).map(|&v| (u, v)));
    }
    edges.shuffle(&mut rng);
    for (u, v) in edges {
        if rng.gen::<f64>() < keep {
            continue;
        }
        let (saved_u, saved_v) = (rot[u].clone(), rot[v].clone());
        rot[u].retain(|&t| t != v);
        rot[v].retain(|&t| t != u);
        if !connected_rot(&rot) {
            rot[u] = saved_u;
            rot[v] = saved_v;
        }
    }
    PlanarGraph::from_rotation(rot)
}

fn connected_rot(rot: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; rot.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &rot[v] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == rot.len()
}

/// Random connected network on `n` vertices: a random spanning tree plus each other
/// pair with probability `p`, resistances log-uniform in `[0.2, 5]`.
pub fn random_network(n: usize, p: f64, seed: u64) -> Result<Network> {
    if n < 2 {
        return Err(param("n", "needs n >= 2"));
    }
    let mut rng = rng::stream(seed, 0);
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.insert((u, v));
            }
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let graph = PlanarGraph::from_edges(n, &edges)?;
    let resistances = (0..graph.edge_count())
        .map(|_| (rng.gen_range(0.2f64.ln()..5f64.ln())).exp())
        .collect();
    Network::from_resistances(graph, resistances)
}

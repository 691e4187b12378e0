//! Canonical codes for rooted graphs.
//!
//! Colour refinement seeded with the distance to the root, followed by an
//! individualisation-refinement search over the first non-singleton cell.
//! Every leaf of the search tree yields a relabelling; the code is the
//! lexicographically smallest adjacency encoding among the leaves. Leaves
//! pruned away are images of explored leaves under automorphisms found along
//! the way, so the minimum is exact.

use std::cmp::Ordering;
use std::fmt;

use super::ball::{ball_of, Ball, RootedGraph};
use super::PlanarGraph;
use crate::error::{Error, Result};

/// Largest ball accepted by [`canonical_code`].
pub const DEFAULT_CODE_CAP: usize = 10_000;

/// Opaque canonical form; equal codes iff rooted-isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::Parse("odd-length hex string".into()));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&s[i..i + 2], 16)
                    .map_err(|e| Error::Parse(format!("bad hex: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Vertex count encoded in the code.
    pub fn vertex_count(&self) -> usize {
        u32::from_le_bytes(self.0[..4].try_into().expect("code header")) as usize
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn canonical_code(b: &Ball) -> Result<CanonicalCode> {
    canonical_code_with_cap(&b.graph, b.root(), DEFAULT_CODE_CAP)
}

pub fn canonical_code_with_cap(g: &PlanarGraph, root: usize, cap: usize) -> Result<CanonicalCode> {
    g.check_vertex(root)?;
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::SizeCap { size: n, cap });
    }
    let adj: Vec<Vec<usize>> = g.rotation().to_vec();
    let dist = g.bfs_distances(root);
    // Initial colouring: (distance to root, degree); unreachable vertices last.
    let keys: Vec<(usize, usize)> = (0..n).map(|v| (dist[v], adj[v].len())).collect();
    let colors = colors_from_keys(&keys);
    let mut search = Search {
        adj: &adj,
        first_path: Vec::new(),
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    let mut path = Vec::new();
    let refined = refine(&adj, colors);
    search.explore(refined, &mut path);
    let (code, _) = search.best.expect("search reaches at least one leaf");
    let mut bytes = Vec::with_capacity(code.len() * 4);
    for x in code {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    Ok(CanonicalCode(bytes))
}

/// Assigns each vertex the position of the first vertex with its key in key order.
fn colors_from_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let n = keys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut colors = vec![0; n];
    let mut start = 0;
    for i in 0..n {
        if i > 0 && keys[order[i]] != keys[order[i - 1]] {
            start = i;
        }
        colors[order[i]] = start;
    }
    colors
}

/// Equitable refinement: split cells by the multiset of neighbor colours until stable.
fn refine(adj: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    let n = adj.len();
    let mut cells = count_cells(&colors);
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = colors_from_keys(&keys);
        let next_cells = count_cells(&next);
        colors = next;
        if next_cells == cells {
            return colors;
        }
        cells = next_cells;
    }
}

fn count_cells(colors: &[usize]) -> usize {
    let mut seen = vec![false; colors.len()];
    let mut c = 0;
    for &x in colors {
        if !seen[x] {
            seen[x] = true;
            c += 1;
        }
    }
    c
}

type Code = Vec<u32>;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    first_path: Vec<usize>,
    /// Code and vertex order of the first leaf.
    first: Option<(Code, Vec<usize>)>,
    best: Option<(Code, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

enum Outcome {
    Continue,
    /// Unwind to the node at this depth.
    JumpTo(usize),
}

impl Search<'_> {
    fn explore(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) -> Outcome {
        let n = colors.len();
        let Some(cell_start) = first_nonsingleton(&colors) else {
            return self.leaf(&colors, path);
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == cell_start).collect();
        let depth = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for &x in &cell {
            if !explored.is_empty() && self.same_orbit_as_explored(x, &explored, path) {
                continue;
            }
            explored.push(x);
            let mut child = colors.clone();
            for &y in &cell {
                if y != x {
                    child[y] = cell_start + 1;
                }
            }
            let child = refine(self.adj, child);
            path.push(x);
            let outcome = self.explore(child, path);
            path.pop();
            if let Outcome::JumpTo(d) = outcome {
                if d < depth {
                    return outcome;
                }
            }
        }
        Outcome::Continue
    }

    fn leaf(&mut self, colors: &[usize], path: &[usize]) -> Outcome {
        let n = colors.len();
        let mut order = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let code = encode(self.adj, colors, &order);
        match &self.first {
            None => {
                self.first = Some((code.clone(), order.clone()));
                self.best = Some((code, order));
                self.first_path = path.to_vec();
                Outcome::Continue
            }
            Some((first_code, first_order)) => {
                if &code == first_code {
                    let auto = automorphism(&order, first_order);
                    self.automorphisms.push(auto);
                    let div = path
                        .iter()
                        .zip(&self.first_path)
                        .position(|(a, b)| a != b)
                        .unwrap_or(path.len());
                    return Outcome::JumpTo(div);
                }
                let (best_code, best_order) = self.best.as_ref().expect("best set with first");
                match code.cmp(best_code) {
                    Ordering::Less => self.best = Some((code, order)),
                    Ordering::Equal => {
                        let auto = automorphism(&order, best_order);
                        self.automorphisms.push(auto);
                    }
                    Ordering::Greater => {}
                }
                Outcome::Continue
            }
        }
    }

    /// Orbit test under the automorphisms found so far that fix every vertex of `path`.
    fn same_orbit_as_explored(&self, x: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.adj.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut any = false;
        for auto in &self.automorphisms {
            if path.iter().any(|&v| auto[v] != v) {
                continue;
            }
            any = true;
            for v in 0..n {
                let (a, b) = (find(&mut parent, v), find(&mut parent, auto[v]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&y| find(&mut parent, y) == rx)
    }
}

fn first_nonsingleton(colors: &[usize]) -> Option<usize> {
    let n = colors.len();
    let mut size = vec![0usize; n];
    for &c in colors {
        size[c] += 1;
    }
    (0..n).find(|&c| size[c] > 1)
}

/// Maps `order[i] -> target[i]` for every position `i`.
fn automorphism(order: &[usize], target: &[usize]) -> Vec<usize> {
    let mut auto = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        auto[v] = target[i];
    }
    auto
}

fn encode(adj: &[Vec<usize>], pos: &[usize], order: &[usize]) -> Code {
    let n = adj.len();
    let mut code = Vec::with_capacity(1 + n + 2 * adj.iter().map(Vec::len).sum::<usize>());
    code.push(n as u32);
    for &v in order {
        let mut nb: Vec<u32> = adj[v].iter().map(|&u| pos[u] as u32).collect();
        nb.sort_unstable();
        code.push(nb.len() as u32);
        code.extend(nb);
    }
    code
}

/// Largest `r` such that the `r`-balls around the two roots are rooted-isomorphic;
/// `None` if they agree at every radius.
pub fn agreement_radius(a: &RootedGraph, b: &RootedGraph) -> Result<Option<usize>> {
    let mut r = 0;
    loop {
        let ba = ball_of(&a.graph, a.root, r);
        let bb = ball_of(&b.graph, b.root, r);
        if canonical_code(&ba)? != canonical_code(&bb)? {
            // r = 0 balls are single vertices, so the loop never fails there.
            return Ok(Some(r - 1));
        }
        let next_a = ball_of(&a.graph, a.root, r + 1);
        let next_b = ball_of(&b.graph, b.root, r + 1);
        if next_a.vertex_count() == ba.vertex_count()
            && next_b.vertex_count() == bb.vertex_count()
            && next_a.graph.edge_count() == ba.graph.edge_count()
            && next_b.graph.edge_count() == bb.graph.edge_count()
        {
            return Ok(None);
        }
        r += 1;
    }
}

/// Local distance `1 / (alpha + 1)` where `alpha` is the agreement radius; 0 if the
/// rooted graphs agree at every radius.
pub fn rooted_distance(a: &RootedGraph, b: &RootedGraph) -> Result<f64> {
    Ok(match agreement_radius(a, b)? {
        Some(alpha) => 1.0 / (alpha as f64 + 1.0),
        None => 0.0,
    })
}

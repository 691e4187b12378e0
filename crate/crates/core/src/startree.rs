//! The star-tree transform `G†` and the lift of flows from `G` to `G†`.
//!
//! Every edge `e = (u, v)` is subdivided by a vertex `w_e`; then each vertex
//! `v` together with its star is replaced by a balanced binary tree `T_v`
//! whose leaves are the `w_e` of the edges at `v`. The result has maximum
//! degree 3. Tree edges of `T_v` carry the marking `deg(v)` and resistance
//! `1 / deg(v)`.
//!
//! Trees use the complete-binary-tree heap layout: `T_v` with `k >= 2` leaves
//! has `2k - 1` nodes, node `i` has children `2i + 1` and `2i + 2`, and the
//! leaves are nodes `k - 1 ..= 2k - 2` (at depth `h` or `h - 1`,
//! `h = ceil(log2 k)`). Leaves are taken in depth-first left-to-right order
//! and matched with the rotation at `v` starting from its smallest neighbor,
//! which keeps a plane embedding plane. A degree-1 vertex gets a root joined
//! to its single leaf; an isolated vertex gets a lone root.

use crate::electric::{Flow, Network};
use crate::error::{Error, Result};
use crate::graph::io::GraphJson;
use crate::graph::PlanarGraph;

/// `G'`: every edge of `G` subdivided once.
#[derive(Debug, Clone)]
pub struct Subdivision {
    /// Original vertices keep their ids; `w_e` is vertex `n + e`.
    pub graph: PlanarGraph,
    pub edge_vertex: Vec<usize>,
}

pub fn subdivide(g: &PlanarGraph) -> Subdivision {
    let n = g.vertex_count();
    let mut rot: Vec<Vec<usize>> = (0..n)
        .map(|v| g.incident_edges(v).iter().map(|&e| n + e).collect())
        .collect();
    rot.extend(g.edges().iter().map(|&(u, v)| vec![u, v]));
    Subdivision {
        graph: PlanarGraph::from_rotation(rot).expect("subdivision of a simple graph is simple"),
        edge_vertex: (0..g.edge_count()).map(|e| n + e).collect(),
    }
}

/// The transformed graph with its provenance.
#[derive(Debug, Clone)]
pub struct StarTreeGraph {
    /// `G†` with resistance `1 / deg(v)` on the edges of `T_v`.
    pub network: Network,
    /// `w_e` for each edge of `G` (vertex id `e` in `G†`).
    pub edge_vertex: Vec<usize>,
    /// `w_v`, the root of `T_v`.
    pub root: Vec<usize>,
    /// All vertices of `T_v` in heap order (internal nodes, then leaves).
    pub tree_vertices: Vec<Vec<usize>>,
    /// Leaves of `T_v` in left-to-right order, as `(neighbor of v in G, w_e)`.
    pub leaves: Vec<Vec<(usize, usize)>>,
    /// Original vertex whose tree contains each edge of `G†`.
    pub owner: Vec<usize>,
    /// Root-to-edge turn string of each edge of `G†` (`0` left, `1` right).
    pub code: Vec<String>,
    /// Marking `M(e) = deg(owner)`.
    pub marking: Vec<usize>,
    /// Heap index of the lower endpoint of each edge of `G†` within its tree.
    lower_node: Vec<usize>,
    /// Heap layout of every tree: vertex id of each heap node.
    heap: Vec<Vec<usize>>,
}

fn heap_code(mut i: usize) -> String {
    let mut bits = Vec::new();
    while i > 0 {
        bits.push(if i % 2 == 1 { '0' } else { '1' });
        i = (i - 1) / 2;
    }
    bits.iter().rev().collect()
}

/// Rotation at `v` read from its smallest neighbor, as edge ids.
fn leaf_order(g: &PlanarGraph, v: usize) -> Vec<usize> {
    let nbrs = g.neighbors(v);
    let edges = g.incident_edges(v);
    let Some(start) = (0..nbrs.len()).min_by_key(|&i| nbrs[i]) else {
        return Vec::new();
    };
    (0..nbrs.len())
        .map(|t| edges[(start + t) % nbrs.len()])
        .collect()
}

pub fn star_tree_transform(g: &PlanarGraph) -> StarTreeGraph {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut next = m;
    let mut heap = Vec::with_capacity(n);
    let mut leaves = Vec::with_capacity(n);
    for v in 0..n {
        let order = leaf_order(g, v);
        let k = order.len();
        let internal = if k >= 2 { k - 1 } else { 1 };
        let mut nodes: Vec<usize> = (next..next + internal).collect();
        next += internal;
        nodes.extend(order.iter().copied());
        leaves.push(
            order
                .iter()
                .map(|&e| {
                    let (a, b) = g.edge(e);
                    (if a == v { b } else { a }, e)
                })
                .collect::<Vec<_>>(),
        );
        heap.push(nodes);
    }

    // Rotation: internal nodes [parent, left, right]; leaves w_e list their two parents.
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); next];
    let mut tree_edges: Vec<(usize, usize, usize, usize)> = Vec::new(); // (lower, upper, owner, heap idx)
    for (v, nodes) in heap.iter().enumerate() {
        let k = g.degree(v);
        let parent_of = |i: usize| -> Option<usize> {
            match (k, i) {
                (_, 0) => None,
                (1, 1) => Some(0),
                _ => Some((i - 1) / 2),
            }
        };
        for (i, &x) in nodes.iter().enumerate() {
            if let Some(p) = parent_of(i) {
                rot[x].push(nodes[p]);
                tree_edges.push((x, nodes[p], v, i));
            }
            let is_leaf = x < m;
            if !is_leaf {
                if k == 1 {
                    rot[x].push(nodes[1]);
                } else if k >= 2 {
                    rot[x].push(nodes[2 * i + 1]);
                    rot[x].push(nodes[2 * i + 2]);
                }
            }
        }
    }
    let graph = PlanarGraph::from_rotation(rot).expect("star-tree transform yields a simple graph");
    let count = graph.edge_count();
    let mut owner = vec![0; count];
    let mut code = vec![String::new(); count];
    let mut marking = vec![0; count];
    let mut lower_node = vec![0; count];
    let mut conductance = vec![0.0; count];
    for &(x, p, v, i) in &tree_edges {
        let e = graph.edge_id(x, p).expect("tree edge present");
        owner[e] = v;
        code[e] = heap_code(i);
        marking[e] = g.degree(v);
        lower_node[e] = i;
        conductance[e] = g.degree(v) as f64;
    }
    let network = Network::from_conductances(graph, conductance).expect("positive conductances");
    StarTreeGraph {
        network,
        edge_vertex: (0..m).collect(),
        root: heap.iter().map(|nodes| nodes[0]).collect(),
        tree_vertices: heap.clone(),
        leaves,
        owner,
        code,
        marking,
        lower_node,
        heap,
    }
}

impl StarTreeGraph {
    pub fn graph(&self) -> &PlanarGraph {
        self.network.graph()
    }

    /// Height of `T_v` (`ceil(log2 deg v)`, or 1 for a degree-1 vertex).
    pub fn tree_height(&self, v: usize) -> usize {
        let k = self.leaves[v].len();
        match k {
            0 => 0,
            1 => 1,
            _ => (usize::BITS - (k - 1).leading_zeros()) as usize,
        }
    }

    /// Checks the structural invariants; returns a description of the first failure.
    pub fn audit(&self, g: &PlanarGraph) -> std::result::Result<(), String> {
        let d = self.graph();
        if d.max_degree() > 3 {
            return Err(format!("max degree {} > 3", d.max_degree()));
        }
        for v in 0..g.vertex_count() {
            if self.leaves[v].len() != g.degree(v) {
                return Err(format!("T_{v} has {} leaves", self.leaves[v].len()));
            }
        }
        for (e, &w) in self.edge_vertex.iter().enumerate() {
            let (a, b) = g.edge(e);
            let owners: Vec<usize> = d.incident_edges(w).iter().map(|&f| self.owner[f]).collect();
            let mut sorted = owners.clone();
            sorted.sort_unstable();
            if d.degree(w) != 2 || sorted != vec![a, b] {
                return Err(format!("w_{e} is not shared by T_{a} and T_{b}"));
            }
        }
        for (f, &(x, y)) in d.edges().iter().enumerate() {
            let v = self.owner[f];
            let depth = self.code[f].len();
            if depth == 0 || depth > self.tree_height(v) {
                return Err(format!("edge ({x},{y}) has code length {depth}"));
            }
            if self.marking[f] != g.degree(v) {
                return Err(format!("edge ({x},{y}) has marking {}", self.marking[f]));
            }
            // Prefix consistency: the parent edge's code is this code minus its last turn.
            let i = self.lower_node[f];
            let parent = (i - 1) / 2;
            if parent > 0 && g.degree(v) >= 2 {
                let up = self.heap[v][parent];
                let grand = self.heap[v][(parent - 1) / 2];
                let pe = d.edge_id(up, grand).expect("parent edge");
                if !self.code[f].starts_with(&self.code[pe]) || self.code[pe].len() + 1 != depth {
                    return Err(format!("code of ({x},{y}) is not prefix-consistent"));
                }
            }
        }
        if g.is_plane_embedding() && !d.is_plane_embedding() {
            return Err("planarity lost".into());
        }
        Ok(())
    }

    /// Vertex marks: the largest mark on an incident edge (0 for an isolated vertex).
    pub fn vertex_marking(&self) -> Vec<usize> {
        let d = self.graph();
        (0..d.vertex_count())
            .map(|x| d.incident_edges(x).iter().map(|&f| self.marking[f]).max().unwrap_or(0))
            .collect()
    }

    /// Network JSON of `G†` extended with the provenance maps.
    pub fn to_json(&self) -> String {
        let doc = StarTreeJson {
            network: GraphJson::from_network(&self.network, None),
            edge_vertex: &self.edge_vertex,
            tree_root: &self.root,
            owner: &self.owner,
            code: &self.code,
            marking: &self.marking,
            vertex_marking: self.vertex_marking(),
        };
        serde_json::to_string(&doc).expect("star-tree graph serializes")
    }

    /// Probability of each vertex of `G†` under the root obtained by drawing `v` from the
    /// stationary law of `G` and then a uniform vertex of `T_v`.
    pub fn tree_root_law(&self, g: &PlanarGraph) -> Vec<f64> {
        let two_e = 2.0 * g.edge_count() as f64;
        let mut p = vec![0.0; self.graph().vertex_count()];
        for v in 0..g.vertex_count() {
            let size = self.heap[v].len() as f64;
            let weight = g.degree(v) as f64 / two_e;
            for &x in &self.heap[v] {
                p[x] += weight / size;
            }
        }
        p
    }

    /// `(min, max)` of `|V†| P(x)` over vertices, for the tree-root law and for the
    /// stationary law of `G†`.
    pub fn root_reweighting(&self, g: &PlanarGraph) -> RootReweighting {
        let d = self.graph();
        let size = d.vertex_count() as f64;
        let two_e = 2.0 * d.edge_count() as f64;
        let range = |it: &mut dyn Iterator<Item = f64>| {
            it.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let tree = self.tree_root_law(g);
        RootReweighting {
            tree_root: range(&mut tree.iter().map(|p| p * size)),
            stationary: range(&mut (0..d.vertex_count()).map(|x| d.degree(x) as f64 / two_e * size)),
        }
    }
}

#[derive(serde::Serialize)]
struct StarTreeJson<'a> {
    #[serde(flatten)]
    network: GraphJson,
    edge_vertex: &'a [usize],
    tree_root: &'a [usize],
    owner: &'a [usize],
    code: &'a [String],
    marking: &'a [usize],
    vertex_marking: Vec<usize>,
}

/// Ratios of root laws on `G†` to the uniform law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReweighting {
    pub tree_root: (f64, f64),
    pub stationary: (f64, f64),
}

impl RootReweighting {
    /// Both laws lie within a factor `c` of uniform.
    pub fn within(&self, c: f64) -> bool {
        [self.tree_root, self.stationary]
            .iter()
            .all(|&(lo, hi)| lo >= 1.0 / c && hi <= c)
    }
}

/// The flows produced by [`lift_flow`], with the divergence audit.
#[derive(Debug, Clone)]
pub struct LiftedFlow {
    /// `theta'` on the subdivision.
    pub subdivided: Flow,
    /// `theta†` on `G†`.
    pub lifted: Flow,
    /// `E(theta)` with unit resistances on `G`.
    pub energy: f64,
    /// `E(theta')` with unit resistances on `G'`.
    pub energy_subdivided: f64,
    /// `E(theta†)` with resistances `1 / deg(v)` on `G†`.
    pub energy_lifted: f64,
    /// Leaves and internal tree nodes conserve flow exactly (bitwise).
    pub exact_conservation: bool,
    /// Largest `|div theta†(w_v) - div theta(v)|` over roots.
    pub root_divergence_error: f64,
}

const FLOW_TOLERANCE: f64 = 1e-9;

/// Lifts a flow `theta` on `G` (unit resistances) to `G†`.
///
/// `theta'(x, w_e) = theta'(w_e, y) = theta(x, y)`; then each tree edge pointing towards
/// `w_v` carries the sum of `theta'(v_j, v)` over the leaves `v_j` below it.
pub fn lift_flow(g: &PlanarGraph, theta: &Flow, st: &StarTreeGraph) -> Result<LiftedFlow> {
    let m = g.edge_count();
    if theta.values.len() != m {
        return Err(Error::NotAFlow(format!(
            "{} values for {} edges",
            theta.values.len(),
            m
        )));
    }
    if let Some(x) = theta.values.iter().find(|x| !x.is_finite()) {
        return Err(Error::NotAFlow(format!("non-finite value {x}")));
    }
    let scale = theta.values.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let interior = theta.interior_divergence(g);
    if interior > FLOW_TOLERANCE * scale {
        return Err(Error::NotAFlow(format!(
            "divergence {interior:e} off the sources and sinks"
        )));
    }
    let n = g.vertex_count();

    // theta' on the subdivision; its edges (u, n+e) are sorted with u < n + e.
    let sub = subdivide(g);
    let sg = &sub.graph;
    let mut sub_values = vec![0.0; sg.edge_count()];
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        let w = n + e;
        let t = theta.values[e];
        sub_values[sg.edge_id(x, w).expect("subdivided edge")] = t; // x -> w_e
        sub_values[sg.edge_id(y, w).expect("subdivided edge")] = -t; // y -> w_e
    }
    let subdivided = Flow::new(sub_values, theta.sources.clone(), theta.sinks.clone());

    let d = st.graph();
    let mut lifted = vec![0.0; d.edge_count()];
    let mut exact = true;
    let mut root_error: f64 = 0.0;
    let div = theta.divergence(g);
    for v in 0..n {
        let nodes = &st.heap[v];
        let k = st.leaves[v].len();
        // up[i]: flow from heap node i towards its parent.
        let mut up = vec![0.0; nodes.len()];
        for (j, &(u, _)) in st.leaves[v].iter().enumerate() {
            // theta'(w_e, v) = theta(u, v).
            up[nodes.len() - k + j] = theta.value(g, u, v);
        }
        if k >= 2 {
            for i in (1..k - 1).rev() {
                let s = up[2 * i + 1] + up[2 * i + 2];
                up[i] = s;
                if up[i] != up[2 * i + 1] + up[2 * i + 2] {
                    exact = false;
                }
            }
        }
        let inflow: f64 = match k {
            0 => 0.0,
            1 => up[1],
            _ => up[1] + up[2],
        };
        // Net outflow of theta at v equals net outflow of theta† at w_v.
        root_error = root_error.max((-inflow - div[v]).abs());
        for (i, &x) in nodes.iter().enumerate().skip(1) {
            let p = if k == 1 { nodes[0] } else { nodes[(i - 1) / 2] };
            let f = d.edge_id(x, p).expect("tree edge");
            lifted[f] = if x < p { up[i] } else { -up[i] };
        }
    }
    // Leaves: the two tree edges at w_e carry theta(v, u) and theta(u, v).
    for &w in &st.edge_vertex {
        let out: f64 = d
            .neighbors(w)
            .iter()
            .map(|&p| {
                let f = d.edge_id(w, p).expect("leaf edge");
                if w < p {
                    lifted[f]
                } else {
                    -lifted[f]
                }
            })
            .sum();
        if out != 0.0 {
            exact = false;
        }
    }
    let lifted = Flow::new(
        lifted,
        theta.sources.iter().map(|&s| st.root[s]).collect(),
        theta.sinks.iter().map(|&s| st.root[s]).collect(),
    );
    let energy = theta.unit_energy();
    let energy_subdivided: f64 = theta.values.iter().map(|t| t * t + t * t).sum();
    let energy_lifted = lifted.energy(&st.network);
    Ok(LiftedFlow {
        subdivided,
        lifted,
        energy,
        energy_subdivided,
        energy_lifted,
        exact_conservation: exact,
        root_divergence_error: root_error,
    })
}

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use super::PlanarGraph;
use crate::error::{Error, Result};

/// A graph with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: PlanarGraph,
    pub root: usize,
}

impl RootedGraph {
    pub fn new(graph: PlanarGraph, root: usize) -> Result<Self> {
        graph.check_vertex(root)?;
        Ok(Self { graph, root })
    }
}

/// Induced subgraph on the vertices within graph distance `radius` of the root.
///
/// The root of the ball is always vertex 0; `parent_ids[i]` is the id in the
/// parent graph of ball vertex `i`. Vertices are numbered in BFS order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub graph: PlanarGraph,
    pub radius: usize,
    pub parent_ids: Vec<usize>,
}

impl Ball {
    pub fn root(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn as_rooted(&self) -> RootedGraph {
        RootedGraph {
            graph: self.graph.clone(),
            root: 0,
        }
    }
}

/// `B_G(root, r)`: the induced subgraph on vertices at distance at most `r` from the root.
///
/// Rotation order is inherited from the parent, restricted to ball vertices.
pub fn ball(g: &RootedGraph, r: usize) -> Ball {
    ball_of(&g.graph, g.root, r)
}

pub(crate) fn ball_of(graph: &PlanarGraph, root: usize, r: usize) -> Ball {
    // Local maps keep the cost proportional to the ball, not the whole graph.
    let mut local: HashMap<usize, (usize, usize)> = HashMap::from([(root, (0, 0))]);
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = local[&v].1;
        if d == r {
            continue;
        }
        for &u in graph.neighbors(v) {
            if let Entry::Vacant(slot) = local.entry(u) {
                slot.insert((order.len(), d + 1));
                order.push(u);
                queue.push_back(u);
            }
        }
    }
    let rot = order
        .iter()
        .map(|&v| {
            graph
                .neighbors(v)
                .iter()
                .filter_map(|u| local.get(u).map(|&(i, _)| i))
                .collect()
        })
        .collect();
    Ball {
        graph: PlanarGraph::from_rotation(rot).expect("induced subgraph of a valid graph"),
        radius: r,
        parent_ids: order,
    }
}

/// Ball of a ball: re-truncates at a smaller radius.
pub fn restrict(b: &Ball, r: usize) -> Result<Ball> {
    if r > b.radius {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("cannot grow a radius-{} ball to radius {r}", b.radius),
        });
    }
    let mut inner = ball_of(&b.graph, 0, r);
    inner.parent_ids = inner.parent_ids.iter().map(|&i| b.parent_ids[i]).collect();
    Ok(inner)
}

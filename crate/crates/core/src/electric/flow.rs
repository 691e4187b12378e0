use super::Network;
use crate::graph::PlanarGraph;

/// Antisymmetric edge function stored once per edge: `values[e]` is the flow along
/// `u -> v` for the edge `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Flow {
    pub values: Vec<f64>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

impl Flow {
    pub fn new(values: Vec<f64>, sources: Vec<usize>, sinks: Vec<usize>) -> Self {
        Self {
            values,
            sources,
            sinks,
        }
    }

    /// `theta(x -> y)`; zero if `x` and `y` are not adjacent.
    pub fn value(&self, g: &PlanarGraph, x: usize, y: usize) -> f64 {
        match g.edge_id(x, y) {
            Some(e) if x < y => self.values[e],
            Some(e) => -self.values[e],
            None => 0.0,
        }
    }

    /// Net outflow at every vertex.
    pub fn divergence(&self, g: &PlanarGraph) -> Vec<f64> {
        let mut div = vec![0.0; g.vertex_count()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            div[u] += self.values[e];
            div[v] -= self.values[e];
        }
        div
    }

    /// Total outflow of the sources.
    pub fn strength(&self, g: &PlanarGraph) -> f64 {
        let div = self.divergence(g);
        self.sources.iter().map(|&s| div[s]).sum()
    }

    /// Largest `|div|` off the sources and sinks.
    pub fn interior_divergence(&self, g: &PlanarGraph) -> f64 {
        let mut terminal = vec![false; g.vertex_count()];
        for &v in self.sources.iter().chain(&self.sinks) {
            terminal[v] = true;
        }
        self.divergence(g)
            .iter()
            .enumerate()
            .filter(|(v, _)| !terminal[*v])
            .map(|(_, d)| d.abs())
            .fold(0.0, f64::max)
    }

    /// `E(theta) = sum R_e theta_e^2`; infinite if flow crosses an open edge.
    pub fn energy(&self, net: &Network) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(e, &t)| {
                if t == 0.0 {
                    0.0
                } else {
                    net.resistance(e) * t * t
                }
            })
            .sum()
    }

    /// Energy with every resistance equal to 1.
    pub fn unit_energy(&self) -> f64 {
        self.values.iter().map(|t| t * t).sum()
    }
}

//! Electrical networks: effective resistance, unit current flows, Dirichlet
//! energy, escape probabilities, commute times and flow splicing.
//!
//! Infinite resistances are stored as zero conductance; the solver never sees
//! an infinite value.

mod flow;
mod harmonic;
mod oracle;

pub use flow::Flow;
pub use harmonic::{expected_hitting_times, HarmonicSolution};
pub(crate) use harmonic::{first_step_expected_time, first_step_hitting};
pub use oracle::{reff_matrix_tree_oracle, ORACLE_CAP};

use crate::error::{Error, Result};
use crate::graph::PlanarGraph;

/// A graph with a resistance on every edge (positive, possibly infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    graph: PlanarGraph,
    conductance: Vec<f64>,
}

impl Network {
    /// Every edge has resistance 1.
    pub fn unit(graph: PlanarGraph) -> Self {
        let m = graph.edge_count();
        Self {
            graph,
            conductance: vec![1.0; m],
        }
    }

    /// Resistances indexed by edge id; `f64::INFINITY` marks an open edge.
    pub fn from_resistances(graph: PlanarGraph, resistances: Vec<f64>) -> Result<Self> {
        if resistances.len() != graph.edge_count() {
            return Err(Error::InvalidParameter {
                name: "R",
                reason: format!(
                    "{} resistances for {} edges",
                    resistances.len(),
                    graph.edge_count()
                ),
            });
        }
        let conductance = resistances
            .iter()
            .enumerate()
            .map(|(e, &r)| {
                if r.is_nan() || r <= 0.0 {
                    Err(Error::InvalidParameter {
                        name: "R",
                        reason: format!("edge {e} has resistance {r}; must be > 0"),
                    })
                } else if r.is_infinite() {
                    Ok(0.0)
                } else {
                    Ok(1.0 / r)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { graph, conductance })
    }

    /// Conductances indexed by edge id; zero means infinite resistance.
    pub fn from_conductances(graph: PlanarGraph, conductance: Vec<f64>) -> Result<Self> {
        if conductance.len() != graph.edge_count() {
            return Err(Error::InvalidParameter {
                name: "c",
                reason: format!(
                    "{} conductances for {} edges",
                    conductance.len(),
                    graph.edge_count()
                ),
            });
        }
        if let Some(e) = conductance.iter().position(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidParameter {
                name: "c",
                reason: format!("edge {e} has conductance {}", conductance[e]),
            });
        }
        Ok(Self { graph, conductance })
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn conductance(&self, e: usize) -> f64 {
        self.conductance[e]
    }

    pub fn conductances(&self) -> &[f64] {
        &self.conductance
    }

    pub fn resistance(&self, e: usize) -> f64 {
        let c = self.conductance[e];
        if c == 0.0 {
            f64::INFINITY
        } else {
            1.0 / c
        }
    }

    /// `pi(v) = sum of conductances at v`.
    pub fn vertex_weight(&self, v: usize) -> f64 {
        self.graph
            .incident_edges(v)
            .iter()
            .map(|&e| self.conductance[e])
            .sum()
    }

    pub fn total_conductance(&self) -> f64 {
        self.conductance.iter().sum()
    }

    /// Copy with one edge's resistance replaced.
    pub fn with_resistance(&self, e: usize, r: f64) -> Result<Self> {
        let mut rs: Vec<f64> = (0..self.conductance.len())
            .map(|i| self.resistance(i))
            .collect();
        rs[e] = r;
        Self::from_resistances(self.graph.clone(), rs)
    }

    /// `R^A`: keeps resistances of edges with both endpoints in `set`, opens all others.
    pub fn restricted_to(&self, set: &[usize]) -> Self {
        let mut member = vec![false; self.graph.vertex_count()];
        for &v in set {
            member[v] = true;
        }
        let conductance = self
            .graph
            .edges()
            .iter()
            .zip(&self.conductance)
            .map(|(&(u, v), &c)| if member[u] && member[v] { c } else { 0.0 })
            .collect();
        Self {
            graph: self.graph.clone(),
            conductance,
        }
    }

    /// The network obtained by merging each of the given groups into a single vertex.
    ///
    /// Returns the contracted network and the map from old to new vertex ids. Edges
    /// inside a group disappear; parallel edges are merged by adding conductances.
    pub fn contract(&self, groups: &[&[usize]]) -> Result<(Network, Vec<usize>)> {
        let n = self.graph.vertex_count();
        let mut map = vec![usize::MAX; n];
        for (gi, group) in groups.iter().enumerate() {
            for &v in *group {
                self.graph.check_vertex(v)?;
                if map[v] != usize::MAX {
                    return Err(Error::OverlappingSets(v));
                }
                map[v] = gi;
            }
        }
        let mut next = groups.len();
        for m in map.iter_mut() {
            if *m == usize::MAX {
                *m = next;
                next += 1;
            }
        }
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let (a, b) = (map[u], map[v]);
            if a != b {
                *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += self.conductance[e];
            }
        }
        let edges: Vec<(usize, usize)> = merged.keys().copied().collect();
        let graph = PlanarGraph::from_edges(next, &edges)?;
        let conductance = graph.edges().iter().map(|k| merged[k]).collect();
        Ok((Network { graph, conductance }, map))
    }
}

/// Potential on the vertices with boundary values `g|A = 0`, `g|Z = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub values: Vec<f64>,
    pub zero_set: Vec<usize>,
    pub one_set: Vec<usize>,
}

impl Potential {
    pub fn new(values: Vec<f64>, zero_set: Vec<usize>, one_set: Vec<usize>) -> Result<Self> {
        for &a in &zero_set {
            if values.get(a) != Some(&0.0) {
                return Err(Error::Precondition(format!("potential at {a} is not 0")));
            }
        }
        for &z in &one_set {
            if values.get(z) != Some(&1.0) {
                return Err(Error::Precondition(format!("potential at {z} is not 1")));
            }
        }
        Ok(Self {
            values,
            zero_set,
            one_set,
        })
    }
}

fn check_sets(net: &Network, a: &[usize], z: &[usize]) -> Result<()> {
    let n = net.graph.vertex_count();
    let mut member = vec![false; n];
    for &v in a {
        net.graph.check_vertex(v)?;
        member[v] = true;
    }
    for &v in z {
        net.graph.check_vertex(v)?;
        if member[v] {
            return Err(Error::OverlappingSets(v));
        }
    }
    Ok(())
}

/// `Reff(A <-> Z)` by contracting `A` and `Z` and solving for the harmonic potential.
///
/// Empty `A` or `Z`, or no connecting path of finite resistance, gives `+inf`.
pub fn effective_resistance(net: &Network, a: &[usize], z: &[usize]) -> Result<f64> {
    check_sets(net, a, z)?;
    if a.is_empty() || z.is_empty() {
        return Ok(f64::INFINITY);
    }
    let sol = harmonic::solve_potential(net, a, z)?;
    Ok(sol.resistance())
}

/// The harmonic potential with `g|A = 0`, `g|Z = 1` (the Dirichlet minimiser).
///
/// Vertices with no finite-resistance path to `A ∪ Z` get potential 0.
pub fn harmonic_potential(net: &Network, a: &[usize], z: &[usize]) -> Result<Potential> {
    check_sets(net, a, z)?;
    if a.is_empty() || z.is_empty() {
        return Err(Error::Precondition("boundary sets must be nonempty".into()));
    }
    let sol = harmonic::solve_potential(net, a, z)?;
    Potential::new(sol.values, a.to_vec(), z.to_vec())
}

/// Unit current flow from `A` to `Z`; its energy is `Reff(A <-> Z)`.
pub fn unit_current_flow(net: &Network, a: &[usize], z: &[usize]) -> Result<Flow> {
    check_sets(net, a, z)?;
    if a.is_empty() || z.is_empty() {
        return Err(Error::Disconnected("empty source or sink set".into()));
    }
    let sol = harmonic::solve_potential(net, a, z)?;
    let reff = sol.resistance();
    if !reff.is_finite() {
        return Err(Error::Disconnected(format!(
            "no finite-resistance path between {a:?} and {z:?}"
        )));
    }
    let values = net
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| net.conductance[e] * (sol.values[v] - sol.values[u]) * reff)
        .collect();
    Ok(Flow::new(values, a.to_vec(), z.to_vec()))
}

/// `E(g) = sum over edges of c_e (g(x) - g(y))^2`.
pub fn dirichlet_energy(net: &Network, p: &Potential) -> f64 {
    dirichlet_energy_of(net, &p.values)
}

pub fn dirichlet_energy_of(net: &Network, values: &[f64]) -> f64 {
    net.graph
        .edges()
        .iter()
        .zip(&net.conductance)
        .map(|(&(u, v), &c)| {
            let d = values[u] - values[v];
            c * d * d
        })
        .sum()
}

/// `P_a(X_tau = z)` with `tau = min{n >= 1 : X_n in {a, z}}`, from the hitting-probability system.
pub fn escape_probability(net: &Network, a: usize, z: usize) -> Result<f64> {
    net.graph.check_vertex(a)?;
    net.graph.check_vertex(z)?;
    if a == z {
        return Err(Error::Precondition("a and z must differ".into()));
    }
    let probs = harmonic::first_step_hitting(net, a, &[a, z])?;
    Ok(probs[1])
}

/// Expected hitting times `(E_a tau_z, E_z tau_a)`.
pub fn commute_time(net: &Network, a: usize, z: usize) -> Result<(f64, f64)> {
    net.graph.check_vertex(a)?;
    net.graph.check_vertex(z)?;
    if a == z {
        return Err(Error::Precondition("a and z must differ".into()));
    }
    let (labels, count) = net.graph.components();
    if count != 1 || labels[a] != labels[z] {
        return Err(Error::Disconnected("commute time needs a connected network".into()));
    }
    let to_z = harmonic::expected_hitting_times(net, &[z])?;
    let to_a = harmonic::expected_hitting_times(net, &[a])?;
    Ok((to_z[a], to_a[z]))
}

/// Result of splicing flows inside a vertex set `A`.
#[derive(Debug, Clone)]
pub struct SplicedFlow {
    /// Unit flow from `a` to `z`.
    pub flow: Flow,
    /// `Reff(A <-> z) + max_v Reff(a <-> v; R^A)`.
    pub bound: f64,
    pub reff_set_to_z: f64,
    pub max_internal: f64,
    /// `E(flow)` under the original resistances.
    pub energy: f64,
}

/// Builds the spliced unit flow from `a` to `z`: the current flow from `A` outside `A`,
/// and inside `A` the `alpha`-weighted mixture of unit current flows from `a` to each `v`
/// in the restricted network `R^A`.
pub fn splice_flow(net: &Network, set: &[usize], a: usize, z: usize) -> Result<SplicedFlow> {
    net.graph.check_vertex(a)?;
    net.graph.check_vertex(z)?;
    if !set.contains(&a) {
        return Err(Error::Precondition(format!("{a} is not in the splice set")));
    }
    if set.contains(&z) {
        return Err(Error::Precondition(format!("{z} is in the splice set")));
    }
    let n = net.graph.vertex_count();
    let mut member = vec![false; n];
    for &v in set {
        net.graph.check_vertex(v)?;
        member[v] = true;
    }
    let outer = unit_current_flow(net, set, &[z])?;
    let reff_set_to_z = outer.energy(net);
    let restricted = net.restricted_to(set);

    let mut values = outer.values.clone();
    for (e, &(u, v)) in net.graph.edges().iter().enumerate() {
        if member[u] && member[v] {
            values[e] = 0.0;
        }
    }
    let mut max_internal: f64 = 0.0;
    for &v in set {
        if v == a {
            continue;
        }
        // alpha_v: current leaving A through v.
        let alpha: f64 = net
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&u| !member[u])
            .map(|&u| outer.value(net.graph(), v, u))
            .sum();
        let inner = unit_current_flow(&restricted, &[a], &[v])
            .map_err(|_| Error::InfiniteInternalResistance(a, v))?;
        max_internal = max_internal.max(inner.energy(&restricted));
        if alpha != 0.0 {
            for (e, &(x, y)) in net.graph.edges().iter().enumerate() {
                if member[x] && member[y] {
                    values[e] += alpha * inner.values[e];
                }
            }
        }
    }
    let flow = Flow::new(values, vec![a], vec![z]);
    let energy = flow.energy(net);
    Ok(SplicedFlow {
        flow,
        bound: reff_set_to_z + max_internal,
        reff_set_to_z,
        max_internal,
        energy,
    })
}

#[cfg(test)]
mod tests;

//! JSON interchange for graphs and networks.
//!
//! Graph: `{"n": 4, "rot": [[1,3],[2,0],[3,1],[0,2]], "root": 0}` where `rot[v]`
//! lists the neighbors of `v` in cyclic order and `root` is optional.
//! Network: the same object with `"R": [...]`, one resistance per edge in
//! sorted edge order (`(u, v)` with `u < v`, lexicographic), each a positive
//! number or the string `"inf"`.

use serde::{Deserialize, Serialize};

use super::PlanarGraph;
use crate::electric::Network;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub rot: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub resistances: Option<Vec<ResistanceJson>>,
}

/// A resistance value: a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResistanceJson {
    Finite(f64),
    Symbol(InfSymbol),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InfSymbol {
    #[serde(rename = "inf")]
    Inf,
}

impl ResistanceJson {
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(x) => x,
            Self::Symbol(InfSymbol::Inf) => f64::INFINITY,
        }
    }

    pub fn from_value(x: f64) -> Self {
        if x.is_infinite() {
            Self::Symbol(InfSymbol::Inf)
        } else {
            Self::Finite(x)
        }
    }
}

impl GraphJson {
    pub fn from_graph(g: &PlanarGraph, root: Option<usize>) -> Self {
        Self {
            n: g.vertex_count(),
            rot: g.rotation().to_vec(),
            root,
            resistances: None,
        }
    }

    pub fn from_network(net: &Network, root: Option<usize>) -> Self {
        let mut json = Self::from_graph(net.graph(), root);
        json.resistances = Some(
            (0..net.graph().edge_count())
                .map(|e| ResistanceJson::from_value(net.resistance(e)))
                .collect(),
        );
        json
    }

    pub fn to_graph(&self) -> Result<PlanarGraph> {
        if self.rot.len() != self.n {
            return Err(Error::Parse(format!(
                "n = {} but rot has {} rows",
                self.n,
                self.rot.len()
            )));
        }
        let g = PlanarGraph::from_rotation(self.rot.clone())?;
        if let Some(r) = self.root {
            g.check_vertex(r)?;
        }
        Ok(g)
    }

    /// Network with the listed resistances, or unit resistances when `R` is absent.
    pub fn to_network(&self) -> Result<Network> {
        let g = self.to_graph()?;
        match &self.resistances {
            None => Ok(Network::unit(g)),
            Some(rs) => Network::from_resistances(g, rs.iter().map(|r| r.value()).collect()),
        }
    }
}

pub fn graph_from_json(s: &str) -> Result<(PlanarGraph, Option<usize>)> {
    let json: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((json.to_graph()?, json.root))
}

pub fn network_from_json(s: &str) -> Result<(Network, Option<usize>)> {
    let json: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((json.to_network()?, json.root))
}

pub fn graph_to_json(g: &PlanarGraph, root: Option<usize>) -> String {
    serde_json::to_string(&GraphJson::from_graph(g, root)).expect("serializable")
}

pub fn network_to_json(net: &Network, root: Option<usize>) -> String {
    serde_json::to_string(&GraphJson::from_network(net, root)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_graph_with_root() {
        let (g, root) =
            graph_from_json(r#"{"n": 3, "rot": [[1], [0, 2], [1]], "root": 1}"#).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(root, Some(1));
    }

    #[test]
    fn parses_network_with_inf() {
        let (net, _) =
            network_from_json(r#"{"n": 3, "rot": [[1, 2], [0, 2], [0, 1]], "R": [1.0, "inf", 2]}"#)
                .unwrap();
        assert_eq!(net.resistance(0), 1.0);
        assert!(net.resistance(1).is_infinite());
        assert_eq!(net.conductance(1), 0.0);
        assert_eq!(net.resistance(2), 2.0);
        let back = network_to_json(&net, None);
        assert!(back.contains("\"inf\""));
        let (again, _) = network_from_json(&back).unwrap();
        assert_eq!(again.conductances(), net.conductances());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(graph_from_json(r#"{"n": 2, "rot": [[1]]}"#).is_err());
        assert!(graph_from_json(r#"{"n": 2, "rot": [[1], [0]], "root": 5}"#).is_err());
        assert!(network_from_json(r#"{"n": 2, "rot": [[1], [0]], "R": [-1]}"#).is_err());
        assert!(network_from_json(r#"{"n": 2, "rot": [[1], [0]], "R": [1, 2]}"#).is_err());
    }
}

//! Gauge transformations: sign changes of spins and incident edge weights
//! that leave the Ising energy untouched.
//!
//! A gauge is a ±1 generator per node. Applying it maps `W(u,v) → W·t_u·t_v`
//! and `s_u → s_u·t_u`; choosing `t = s` resets any configuration to
//! all-plus, which is what lets a fixed-start solver resume from its own
//! incumbent.

use crate::error::{Error, Result};
use crate::graph::{check_len, SpinConfiguration, WeightedGraph};

/// Per-node ±1 generators. Stored as signed bytes so composition is literal
/// multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeVector {
    generators: Vec<i8>,
}

impl GaugeVector {
    pub fn new(generators: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = generators.iter().find(|&&t| t != 1 && t != -1) {
            return Err(Error::InvalidInput(format!(
                "gauge generator {bad} is not ±1"
            )));
        }
        Ok(GaugeVector { generators })
    }

    pub fn identity(n: usize) -> Self {
        GaugeVector {
            generators: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[i8] {
        &self.generators
    }

    pub fn get(&self, v: usize) -> i8 {
        self.generators[v]
    }
}

/// The gauge that maps `s` to the all-plus configuration: `t_u = s_u`.
pub fn gauge_to_plus(s: &SpinConfiguration) -> GaugeVector {
    GaugeVector {
        generators: s.spins().to_vec(),
    }
}

/// Applies the gauge to both the graph and the configuration, returning the
/// transformed pair. Topology and edge order are preserved; only weight
/// signs and spins change.
pub fn apply_gauge(
    g: &WeightedGraph,
    s: &SpinConfiguration,
    t: &GaugeVector,
) -> Result<(WeightedGraph, SpinConfiguration)> {
    check_len(g.node_count(), s.len(), "spin configuration")?;
    check_len(g.node_count(), t.len(), "gauge vector")?;
    let gen = t.generators();
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.w * f64::from(gen[e.u] * gen[e.v])))
        .collect();
    let graph = WeightedGraph::new(g.node_count(), edges)?;
    let spins = SpinConfiguration::new(
        s.spins()
            .iter()
            .zip(gen)
            .map(|(spin, t)| spin * t)
            .collect(),
    )?;
    Ok((graph, spins))
}

/// Regauges only the graph; used when no configuration travels with it.
pub fn apply_gauge_to_graph(g: &WeightedGraph, t: &GaugeVector) -> Result<WeightedGraph> {
    check_len(g.node_count(), t.len(), "gauge vector")?;
    let gen = t.generators();
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.w * f64::from(gen[e.u] * gen[e.v])))
        .collect();
    WeightedGraph::new(g.node_count(), edges)
}

/// Elementwise product: applying `t2` after `t1` equals applying
/// `compose_gauge(t1, t2)` once.
pub fn compose_gauge(t1: &GaugeVector, t2: &GaugeVector) -> Result<GaugeVector> {
    if t1.len() != t2.len() {
        return Err(Error::InvalidInput(format!(
            "gauge lengths differ: {} vs {}",
            t1.len(),
            t2.len()
        )));
    }
    Ok(GaugeVector {
        generators: t1
            .generators()
            .iter()
            .zip(t2.generators())
            .map(|(a, b)| a * b)
            .collect(),
    })
}

//! Seeded synthetic-instance generation.
//!
//! Every instance is a pure function of `(base_seed, index)`. The
//! per-instance stream is xoshiro256++ seeded with
//! `splitmix64(base_seed ^ index)`, and draws happen in a fixed order:
//!
//! 1. node count, uniform in `[n_min, n_max]`;
//! 2. topology edges (per-kind order documented on each builder);
//! 3. edge weights, i.i.d. in canonical `(u, v)`-ascending edge order.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{splitmix64, Rng};
use std::collections::HashSet;

/// Random-graph family plus the node-count range instances are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    kind: TopologyKind,
    n_min: usize,
    n_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopologyKind {
    /// Each unordered pair is an edge independently with probability `p`.
    Er { p: f64 },
    /// Preferential attachment adding `m_attach` edges per new node.
    Ba { m_attach: usize },
    /// Ring lattice with `k` neighbors per node, each edge rewired with
    /// probability `p_rewire`.
    Ws { k: usize, p_rewire: f64 },
}

impl TopologySpec {
    pub fn er(p: f64, n_min: usize, n_max: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Config(format!("ER probability {p} not in (0, 1)")));
        }
        Self::with_kind(TopologyKind::Er { p }, n_min, n_max)
    }

    pub fn ba(m_attach: usize, n_min: usize, n_max: usize) -> Result<Self> {
        if m_attach < 1 {
            return Err(Error::Config("BA attachment count must be ≥ 1".into()));
        }
        if n_min < 2 {
            return Err(Error::Config("BA graphs need at least 2 nodes".into()));
        }
        Self::with_kind(TopologyKind::Ba { m_attach }, n_min, n_max)
    }

    pub fn ws(k: usize, p_rewire: f64, n_min: usize, n_max: usize) -> Result<Self> {
        if k < 2 || k % 2 != 0 {
            return Err(Error::Config(format!("WS ring degree {k} must be even and ≥ 2")));
        }
        if k >= n_min {
            return Err(Error::Config(format!(
                "WS ring degree {k} must be smaller than n_min {n_min}"
            )));
        }
        if !(0.0..=1.0).contains(&p_rewire) {
            return Err(Error::Config(format!(
                "WS rewiring probability {p_rewire} not in [0, 1]"
            )));
        }
        Self::with_kind(TopologyKind::Ws { k, p_rewire }, n_min, n_max)
    }

    fn with_kind(kind: TopologyKind, n_min: usize, n_max: usize) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::Config(format!(
                "node range [{n_min}, {n_max}] is empty"
            )));
        }
        Ok(TopologySpec { kind, n_min, n_max })
    }

    pub fn kind(&self) -> &TopologyKind {
        &self.kind
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

/// Edge-weight law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightDistribution {
    /// Uniform on `[0, 1)`.
    Uniform01,
    /// Standard normal, unclipped.
    Normal01,
    /// Uniform over `{0, +1, −1}`; values are exactly representable.
    DiscreteUniform,
}

impl WeightDistribution {
    fn sample(&self, rng: &mut Rng) -> f64 {
        match self {
            WeightDistribution::Uniform01 => rng.next_f64(),
            WeightDistribution::Normal01 => rng.next_normal(),
            WeightDistribution::DiscreteUniform => match rng.next_below(3) {
                0 => 0.0,
                1 => 1.0,
                _ => -1.0,
            },
        }
    }

    /// Whether all sampled weights are exact integers (so cut comparisons
    /// need no tolerance).
    pub fn is_integer_valued(&self) -> bool {
        matches!(self, WeightDistribution::DiscreteUniform)
    }
}

/// A family of instances: topology × weight law × count, under one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub topology: TopologySpec,
    pub weights: WeightDistribution,
    pub count: usize,
    pub base_seed: u64,
}

impl InstanceSpec {
    /// Generates instance `index`; deterministic in `(base_seed, index)` and
    /// independent of any other index.
    pub fn generate(&self, index: usize) -> Result<WeightedGraph> {
        if self.count < 1 {
            return Err(Error::Config("instance count must be ≥ 1".into()));
        }
        if index >= self.count {
            return Err(Error::Config(format!(
                "instance index {index} out of range for count {}",
                self.count
            )));
        }
        let mut rng = Rng::from_seed(splitmix64(self.base_seed ^ index as u64));
        let n = rng.next_range(self.topology.n_min as u64, self.topology.n_max as u64) as usize;
        let mut pairs = match self.topology.kind {
            TopologyKind::Er { p } => er_edges(&mut rng, n, p),
            TopologyKind::Ba { m_attach } => ba_edges(&mut rng, n, m_attach),
            TopologyKind::Ws { k, p_rewire } => {
                let mut edges = ws_ring_edges(n, k);
                ws_rewire(&mut rng, n, &mut edges, p_rewire);
                edges
            }
        };
        pairs.sort_unstable();
        let edges = pairs
            .into_iter()
            .map(|(u, v)| (u, v, self.weights.sample(&mut rng)))
            .collect();
        WeightedGraph::new(n, edges)
    }
}

pub fn generate_instance(spec: &InstanceSpec, index: usize) -> Result<WeightedGraph> {
    spec.generate(index)
}

/// Pairs visited in lexicographic `(u, v)` order, one Bernoulli draw each.
fn er_edges(rng: &mut Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.next_f64() < p {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

/// Preferential attachment. Node 1 attaches a single edge to node 0; each
/// later node `v` attaches `min(m_attach, v)` distinct targets drawn
/// proportionally to degree (uniform draws from the repeated-endpoint list,
/// rejecting duplicates).
fn ba_edges(rng: &mut Rng, n: usize, m_attach: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    if n < 2 {
        return pairs;
    }
    // Every edge contributes both endpoints; sampling an entry uniformly is
    // degree-proportional sampling.
    let mut endpoints: Vec<usize> = vec![0, 1];
    pairs.push((0, 1));
    for v in 2..n {
        let m = m_attach.min(v);
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let pick = endpoints[rng.next_below(endpoints.len() as u64) as usize];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            pairs.push((t.min(v), t.max(v)));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    pairs
}

/// Ring lattice: for each offset `j = 1..=k/2`, edges `(u, u+j mod n)` for
/// every `u`. Requires `k < n`, which keeps the pairs distinct.
pub(crate) fn ws_ring_edges(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for j in 1..=(k / 2) {
        for u in 0..n {
            let v = (u + j) % n;
            pairs.push((u.min(v), u.max(v)));
        }
    }
    pairs
}

/// Watts–Strogatz rewiring, ring by ring in the construction order: each
/// edge `(u, u+j)` is replaced, with probability `p_rewire`, by `(u, w)`
/// for a uniform `w` avoiding self-loops and existing edges. A saturated
/// node keeps its edge. Edge count is preserved.
fn ws_rewire(rng: &mut Rng, n: usize, edges: &mut [(usize, usize)], p_rewire: f64) {
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut degree = vec![0usize; n];
    for &(u, v) in edges.iter() {
        degree[u] += 1;
        degree[v] += 1;
    }
    for i in 0..edges.len() {
        if rng.next_f64() >= p_rewire {
            continue;
        }
        let (u, old_v) = edges[i];
        if degree[u] == n - 1 {
            continue;
        }
        let new_v = loop {
            let w = rng.next_below(n as u64) as usize;
            if w != u && !present.contains(&(u.min(w), u.max(w))) {
                break w;
            }
        };
        present.remove(&(u, old_v));
        present.insert((u.min(new_v), u.max(new_v)));
        degree[old_v] -= 1;
        degree[new_v] += 1;
        edges[i] = (u.min(new_v), u.max(new_v));
    }
}

//! Cut values, the Ising-form rewrite, and incremental flip deltas.
//!
//! The cut objective and the Ising energy are two views of the same number:
//! with couplings `J(u,v) = −W(u,v)/2` and offset `W′ = Σ W(u,v)/2`,
//!
//! ```text
//! cut(s) = −E(s) + W′,   E(s) = −Σ J(u,v)·s_u·s_v.
//! ```
//!
//! Solvers never recompute cuts from scratch per move; they use
//! [`delta_cut_flip`], which costs `O(deg(v))`.

use crate::error::{Error, Result};
use crate::graph::{check_len, SpinConfiguration, WeightedGraph};

/// Total weight of edges whose endpoints carry opposite spins.
pub fn cut_value(g: &WeightedGraph, s: &SpinConfiguration) -> Result<f64> {
    check_len(g.node_count(), s.len(), "spin configuration")?;
    let spins = s.spins();
    let mut total = 0.0;
    for e in g.edges() {
        if spins[e.u] != spins[e.v] {
            total += e.w;
        }
    }
    Ok(total)
}

/// Pairwise couplings and the constant offset of the Ising rewrite.
#[derive(Debug, Clone)]
pub struct IsingView {
    couplings: Vec<(usize, usize, f64)>,
    offset: f64,
    node_count: usize,
}

impl IsingView {
    /// `(u, v, J)` triples, one per graph edge.
    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.couplings
    }

    /// The constant `W′ = Σ W(u,v)/2`.
    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// Derives `J(u,v) = −W(u,v)/2` per edge and `W′ = Σ W(u,v)/2`.
pub fn ising_view(g: &WeightedGraph) -> IsingView {
    let mut couplings = Vec::with_capacity(g.edge_count());
    let mut offset = 0.0;
    for e in g.edges() {
        couplings.push((e.u, e.v, -e.w / 2.0));
        offset += e.w / 2.0;
    }
    IsingView {
        couplings,
        offset,
        node_count: g.node_count(),
    }
}

/// Ising energy `E = −Σ J(u,v)·s_u·s_v`.
pub fn energy(view: &IsingView, s: &SpinConfiguration) -> Result<f64> {
    check_len(view.node_count, s.len(), "spin configuration")?;
    let spins = s.spins();
    let mut e = 0.0;
    for &(u, v, j) in &view.couplings {
        e -= j * f64::from(spins[u] * spins[v]);
    }
    Ok(e)
}

/// Energy model with interactions over one or more spins each.
#[derive(Debug, Clone)]
pub struct HyperEnergyModel {
    node_count: usize,
    interactions: Vec<(f64, Vec<usize>)>,
}

impl HyperEnergyModel {
    pub fn new(node_count: usize, interactions: Vec<(f64, Vec<usize>)>) -> Result<Self> {
        for (coupling, members) in &interactions {
            if members.is_empty() {
                return Err(Error::InvalidInput(
                    "interaction must involve at least one spin".into(),
                ));
            }
            if !coupling.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite coupling {coupling}"
                )));
            }
            if let Some(&bad) = members.iter().find(|&&m| m >= node_count) {
                return Err(Error::InvalidInput(format!(
                    "interaction member {bad} out of range for {node_count} nodes"
                )));
            }
        }
        Ok(HyperEnergyModel {
            node_count,
            interactions,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn interactions(&self) -> &[(f64, Vec<usize>)] {
        &self.interactions
    }

    /// Model with every coupling multiplied by the product of its members'
    /// gauge generators; the many-spin analogue of regauging edge weights.
    pub fn gauged(&self, generators: &[i8]) -> Result<HyperEnergyModel> {
        check_len(self.node_count, generators.len(), "gauge generators")?;
        let interactions = self
            .interactions
            .iter()
            .map(|(j, members)| {
                let sign: i8 = members.iter().map(|&m| generators[m]).product();
                (j * f64::from(sign), members.clone())
            })
            .collect();
        Ok(HyperEnergyModel {
            node_count: self.node_count,
            interactions,
        })
    }
}

/// Energy `−Σ_a J_a · Π s_m` over all interactions.
pub fn hyper_energy(model: &HyperEnergyModel, s: &SpinConfiguration) -> Result<f64> {
    check_len(model.node_count, s.len(), "spin configuration")?;
    let spins = s.spins();
    let mut e = 0.0;
    for (j, members) in &model.interactions {
        let prod: i8 = members.iter().map(|&m| spins[m]).product();
        e -= j * f64::from(prod);
    }
    Ok(e)
}

/// Change in cut value from negating `s_v`, in `O(deg(v))`:
/// `Σ_{u ∈ N(v)} W(u,v)·s_u·s_v`.
pub fn delta_cut_flip(g: &WeightedGraph, s: &SpinConfiguration, v: usize) -> Result<f64> {
    check_len(g.node_count(), s.len(), "spin configuration")?;
    if v >= g.node_count() {
        return Err(Error::InvalidInput(format!(
            "node {v} out of range for {} nodes",
            g.node_count()
        )));
    }
    let spins = s.spins();
    let sv = f64::from(spins[v]);
    let mut delta = 0.0;
    for &(u, w) in g.neighbors(v) {
        delta += w * f64::from(spins[u]) * sv;
    }
    Ok(delta)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::generate::{InstanceSpec, TopologySpec, WeightDistribution};
    use crate::rng::Rng;

    /// Independent from-scratch enumeration of every configuration; the
    /// oracle the Gray-code solver is checked against.
    pub fn naive_best_cut(g: &WeightedGraph) -> f64 {
        let n = g.node_count();
        assert!(n <= 20, "naive enumeration capped for tests");
        let mut best = f64::NEG_INFINITY;
        for mask in 0u64..(1 << n) {
            let spins: Vec<i8> = (0..n)
                .map(|v| if mask >> v & 1 == 0 { 1 } else { -1 })
                .collect();
            let s = SpinConfiguration::new(spins).unwrap();
            let c = cut_value(g, &s).unwrap();
            if c > best {
                best = c;
            }
        }
        if n == 0 {
            best = 0.0;
        }
        best
    }

    pub fn random_graph(rng: &mut Rng, n: usize, weights: WeightDistribution) -> WeightedGraph {
        let spec = InstanceSpec {
            topology: TopologySpec::er(0.4, n.max(1), n.max(1)).unwrap(),
            weights,
            count: 1,
            base_seed: rng.next_u64(),
        };
        spec.generate(0).unwrap()
    }

    pub fn random_spins(rng: &mut Rng, n: usize) -> SpinConfiguration {
        SpinConfiguration::new((0..n).map(|_| rng.next_sign()).collect()).unwrap()
    }
}

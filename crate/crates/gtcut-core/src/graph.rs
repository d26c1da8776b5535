//! Problem instances: undirected weighted graphs and ±1 spin configurations.

use crate::error::{Error, Result};
use std::collections::HashSet;

/// One undirected edge with a real weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// An undirected graph with real edge weights, immutable after construction.
///
/// Node indices are dense `0..node_count`. Endpoints are stored normalized
/// (`u < v`); the edge list keeps insertion order, and the adjacency lists
/// are derived once at construction.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Builds and validates a graph. Rejects self-loops, out-of-range
    /// endpoints, duplicate unordered pairs, and non-finite weights.
    pub fn new(node_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
            if !w.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite weight {w} on edge ({u}, {v})"
                )));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(Error::InvalidInput(format!("duplicate edge ({a}, {b})")));
            }
            normalized.push(Edge { u: a, v: b, w });
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for e in &normalized {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        Ok(WeightedGraph {
            node_count,
            edges: normalized,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` with the connecting edge weight.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Sum of |w| over all edges; a scale for cut-value tolerances.
    pub fn total_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w.abs()).sum()
    }

    /// Same topology with edges in canonical `(u, v)` ascending order.
    pub fn canonicalized(&self) -> WeightedGraph {
        let mut edges = self.edges.clone();
        edges.sort_by(|a, b| (a.u, a.v).cmp(&(b.u, b.v)));
        let mut adjacency = vec![Vec::new(); self.node_count];
        for e in &edges {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        WeightedGraph {
            node_count: self.node_count,
            edges,
            adjacency,
        }
    }
}

/// Per-node spins in {+1, −1}; `−1` marks membership in the cut set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfiguration {
    spins: Vec<i8>,
}

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!("spin value {bad} is not ±1")));
        }
        Ok(SpinConfiguration { spins })
    }

    pub fn all_plus(n: usize) -> Self {
        SpinConfiguration { spins: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn get(&self, v: usize) -> i8 {
        self.spins[v]
    }

    pub fn flip(&mut self, v: usize) {
        self.spins[v] = -self.spins[v];
    }

    /// The globally flipped configuration `−s`.
    pub fn negated(&self) -> Self {
        SpinConfiguration {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }

    pub fn is_all_plus(&self) -> bool {
        self.spins.iter().all(|&s| s == 1)
    }

    /// Compact ± string, e.g. `+-+`.
    pub fn to_signs(&self) -> String {
        self.spins
            .iter()
            .map(|&s| if s == 1 { '+' } else { '-' })
            .collect()
    }
}

pub(crate) fn check_len(expected: usize, got: usize, what: &str) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidInput(format!(
            "{what} length {got} does not match node count {expected}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loop() {
        let err = WeightedGraph::new(3, vec![(1, 1, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(WeightedGraph::new(2, vec![(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn rejects_duplicate_unordered_pair() {
        assert!(WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn rejects_non_finite_weight() {
        assert!(WeightedGraph::new(2, vec![(0, 1, f64::NAN)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 1, f64::INFINITY)]).is_err());
    }

    #[test]
    fn adjacency_matches_edges() {
        let g = WeightedGraph::new(4, vec![(0, 1, 1.5), (2, 1, -2.0), (3, 0, 0.0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        // Every edge appears in both endpoint lists with the same weight.
        for e in g.edges() {
            assert!(g.neighbors(e.u).iter().any(|&(n, w)| n == e.v && w == e.w));
            assert!(g.neighbors(e.v).iter().any(|&(n, w)| n == e.u && w == e.w));
        }
        assert_eq!(g.degree(1), 2);
        // Zero-weight edges are kept.
        assert!(g.edges().iter().any(|e| e.w == 0.0));
    }

    #[test]
    fn spins_must_be_unit() {
        assert!(SpinConfiguration::new(vec![1, -1, 0]).is_err());
        assert!(SpinConfiguration::new(vec![1, -1, 1]).is_ok());
    }

    #[test]
    fn all_plus_and_negate() {
        let s = SpinConfiguration::all_plus(3);
        assert!(s.is_all_plus());
        let n = s.negated();
        assert_eq!(n.spins(), &[-1, -1, -1]);
    }
}

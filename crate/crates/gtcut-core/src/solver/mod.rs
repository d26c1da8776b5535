//! The solver contract and its built-in implementations.
//!
//! Every solver guarantees `cut(result) ≥ cut(s0)` for the start `s0` it was
//! given; the gauge-restart loop's monotone improvement rests entirely on
//! this. Results carry the cut recomputed from scratch for the returned
//! configuration, never a solver-internal running value.

mod exact;
mod mca;

pub use exact::{exact_brute_force, ExactBruteForce, DEFAULT_NODE_LIMIT};
pub use mca::{mca, Mca};

use crate::error::Result;
use crate::graph::{SpinConfiguration, WeightedGraph};
use crate::ising::cut_value;
use crate::rng::Rng;
use std::time::Duration;

/// Outcome of one solve call, in the frame of the graph it was solved on.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub configuration: SpinConfiguration,
    /// Recomputed as `cut_value(graph, configuration)` at construction.
    pub cut: f64,
    /// Solver-specific work counter (flips or configurations examined).
    pub node_flips_examined: u64,
    pub wall_time: Duration,
    pub method_id: String,
}

impl SolveResult {
    pub fn new(
        g: &WeightedGraph,
        configuration: SpinConfiguration,
        node_flips_examined: u64,
        wall_time: Duration,
        method_id: impl Into<String>,
    ) -> Result<Self> {
        let cut = cut_value(g, &configuration)?;
        Ok(SolveResult {
            configuration,
            cut,
            node_flips_examined,
            wall_time,
            method_id: method_id.into(),
        })
    }
}

/// An improvement-respecting solver.
pub trait Solver {
    /// Must return a configuration with `cut ≥ cut_value(g, s0)`.
    fn solve(&self, g: &WeightedGraph, s0: &SpinConfiguration) -> Result<SolveResult>;

    fn method_id(&self) -> &str;
}

/// Independent ±1 spins, deterministic in `seed`.
pub fn random_config(n: usize, seed: u64) -> SpinConfiguration {
    let mut rng = Rng::from_seed(seed);
    SpinConfiguration::new((0..n).map(|_| rng.next_sign()).collect())
        .expect("signs are always ±1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::WeightDistribution;
    use crate::ising::test_support::{naive_best_cut, random_graph, random_spins};
    use crate::rng::Rng;

    #[test]
    fn random_config_basics() {
        assert_eq!(random_config(0, 1).len(), 0);
        let a = random_config(50, 123);
        let b = random_config(50, 123);
        assert_eq!(a, b);
        let c = random_config(50, 124);
        assert_ne!(a, c);
    }

    #[test]
    fn random_config_is_balanced() {
        let mut plus = 0usize;
        let n = 100_000;
        for seed in 0..n {
            if random_config(1, seed as u64).get(0) == 1 {
                plus += 1;
            }
        }
        let frac = plus as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "fraction of +1 was {frac}");
    }

    #[test]
    fn all_solvers_respect_the_contract() {
        // 500 random (graph, start) pairs per solver.
        let mut rng = Rng::from_seed(77);
        let solvers: Vec<Box<dyn Solver>> = vec![
            Box::new(Mca::default()),
            Box::new(ExactBruteForce::default()),
        ];
        for trial in 0..500 {
            let n = 2 + rng.next_below(12) as usize;
            let g = random_graph(&mut rng, n, WeightDistribution::Normal01);
            let s0 = random_spins(&mut rng, n);
            let start_cut = cut_value(&g, &s0).unwrap();
            let solver = &solvers[trial % solvers.len()];
            let result = solver.solve(&g, &s0).unwrap();
            assert!(
                result.cut >= start_cut - 1e-9 * (1.0 + start_cut.abs()),
                "{} broke the contract: {} < {start_cut}",
                solver.method_id(),
                result.cut
            );
        }
    }

    #[test]
    fn no_solver_beats_the_oracle() {
        let mut rng = Rng::from_seed(99);
        for _ in 0..50 {
            let n = 2 + rng.next_below(15) as usize;
            let g = random_graph(&mut rng, n, WeightDistribution::Normal01);
            let best = naive_best_cut(&g);
            let s0 = random_spins(&mut rng, n);
            let greedy = Mca::default().solve(&g, &s0).unwrap();
            assert!(greedy.cut <= best + 1e-9 * (1.0 + best.abs()));
            let exact = exact_brute_force(&g).unwrap();
            assert!(exact.cut <= best + 1e-9 * (1.0 + best.abs()));
        }
    }
}

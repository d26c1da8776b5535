//! MaxCut optimization toolkit built around gauge-transformation restarts.
//!
//! A gauge transformation flips the signs of chosen spins together with the
//! weights of their incident edges, leaving the Ising energy of every
//! configuration unchanged. Choosing the generators equal to the incumbent
//! configuration rewrites the problem so that incumbent becomes all-plus,
//! which lets any fixed-start, improvement-respecting solver resume from
//! its own best answer. [`gt::gt_solve`] iterates that trick until the cut
//! stops improving.
//!
//! The crate also ships everything needed to measure the effect: seeded
//! instance generators ([`generate`]), an instance file format
//! ([`instance_io`]), an exact Gray-code oracle and a greedy baseline
//! ([`solver`]), a message-passing Q-learning agent trained with
//! hand-derived gradients ([`agent`]), and a deterministic benchmark
//! harness with Wilcoxon significance tests ([`harness`], [`stats`]).

pub mod agent;
pub mod error;
pub mod gauge;
pub mod generate;
pub mod graph;
pub mod gt;
pub mod harness;
pub mod instance_io;
pub mod ising;
pub mod rng;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
pub use gauge::{apply_gauge, compose_gauge, gauge_to_plus, GaugeVector};
pub use generate::{InstanceSpec, TopologySpec, WeightDistribution};
pub use graph::{Edge, SpinConfiguration, WeightedGraph};
pub use gt::{gt_solve, multi_init_solve, GtConfig, GtTrace};
pub use ising::{cut_value, delta_cut_flip, energy, hyper_energy, ising_view, HyperEnergyModel, IsingView};
pub use solver::{exact_brute_force, mca, random_config, SolveResult, Solver};

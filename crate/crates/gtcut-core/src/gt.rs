//! Gauge-restart loop: wraps any [`Solver`] so it can keep improving its own
//! best answer.
//!
//! Each iteration regauges the working graph so the incumbent becomes the
//! all-plus configuration, reruns the base solver from that fixed start,
//! maps the output back through the accumulated gauge, and keeps it if the
//! original-frame cut improved. Because the energy is gauge-invariant and
//! the base solver never returns a worse cut than its start, the incumbent's
//! cut is nondecreasing across iterations.

use crate::error::{Error, Result};
use crate::gauge::{apply_gauge_to_graph, compose_gauge, gauge_to_plus, GaugeVector};
use crate::graph::{SpinConfiguration, WeightedGraph};
use crate::ising::cut_value;
use crate::rng::splitmix64;
use crate::solver::{random_config, SolveResult, Solver};
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct GtConfig {
    /// Safety bound on restarts; typical runs stop after a handful.
    pub max_iterations: usize,
    /// Minimum cut gain counted as an improvement. Use `0.0` for
    /// integer-weighted instances.
    pub improvement_epsilon: f64,
    /// Number of initial configurations for [`multi_init_solve`].
    pub m_init: usize,
}

impl Default for GtConfig {
    fn default() -> Self {
        GtConfig {
            max_iterations: 50,
            improvement_epsilon: 1e-9,
            m_init: 1,
        }
    }
}

impl GtConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be ≥ 1".into()));
        }
        if self.improvement_epsilon < 0.0 {
            return Err(Error::Config("improvement epsilon must be ≥ 0".into()));
        }
        if self.m_init < 1 {
            return Err(Error::Config("m_init must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Per-iteration record of one gauge-restart run.
#[derive(Debug, Clone)]
pub struct GtTrace {
    /// Original-frame cut of each iteration's candidate; nondecreasing.
    pub cut_sequence: Vec<f64>,
    pub gt_iterations: usize,
    /// Product of all gauges applied; maps original-frame spins into the
    /// final working frame and back.
    pub cumulative_gauge: GaugeVector,
    pub iteration_times: Vec<Duration>,
}

/// Runs `base` under gauge restarts until the original-frame cut stops
/// improving. The result configuration is in the original frame.
pub fn gt_solve(
    g: &WeightedGraph,
    base: &dyn Solver,
    s0: &SpinConfiguration,
    cfg: &GtConfig,
) -> Result<(SolveResult, GtTrace)> {
    cfg.validate()?;
    let n = g.node_count();
    crate::graph::check_len(n, s0.len(), "spin configuration")?;

    let started = Instant::now();
    let mut best_original = s0.clone();
    let mut best_cut = cut_value(g, s0)?;
    // Spins of the incumbent expressed in the current working frame.
    let mut best_in_frame = s0.clone();
    let mut frame = g.clone();
    let mut cumulative = GaugeVector::identity(n);

    let mut cut_sequence = Vec::new();
    let mut iteration_times = Vec::new();
    let mut flips_examined: u64 = 0;
    let contract_slack = 1e-9 * (1.0 + g.total_abs_weight());

    for _ in 0..cfg.max_iterations {
        let iter_started = Instant::now();

        // Regauge so the incumbent reads all-plus in the working frame.
        let t = gauge_to_plus(&best_in_frame);
        frame = apply_gauge_to_graph(&frame, &t)?;
        cumulative = compose_gauge(&cumulative, &t)?;

        let all_plus = SpinConfiguration::all_plus(n);
        let candidate = base.solve(&frame, &all_plus)?;
        flips_examined += candidate.node_flips_examined;
        // cut_value(frame, all_plus) is exactly 0: no edge crosses.
        if candidate.cut < -contract_slack {
            return Err(Error::ContractViolation {
                solver: base.method_id().to_string(),
                detail: format!(
                    "returned frame cut {} from an all-plus start worth 0",
                    candidate.cut
                ),
            });
        }

        // Map back: the accumulated gauge is an involution.
        let mapped = SpinConfiguration::new(
            candidate
                .configuration
                .spins()
                .iter()
                .zip(cumulative.generators())
                .map(|(s, t)| s * t)
                .collect(),
        )?;
        let mapped_cut = cut_value(g, &mapped)?;
        cut_sequence.push(mapped_cut);
        iteration_times.push(iter_started.elapsed());

        if mapped_cut > best_cut + cfg.improvement_epsilon {
            best_cut = mapped_cut;
            best_original = mapped;
            best_in_frame = candidate.configuration;
        } else {
            break;
        }
    }

    let gt_iterations = cut_sequence.len();
    let trace = GtTrace {
        cut_sequence,
        gt_iterations,
        cumulative_gauge: cumulative,
        iteration_times,
    };
    let result = SolveResult::new(
        g,
        best_original,
        flips_examined,
        started.elapsed(),
        format!("{}-gt", base.method_id()),
    )?;
    Ok((result, trace))
}

/// Gauge-restart solve from `cfg.m_init` starts: start 0 is all-plus, the
/// rest are random configurations seeded by `splitmix64(seed ^ index)`, so
/// a larger `m_init` evaluates a superset of a smaller one's starts. Ties
/// resolve to the lowest start index.
pub fn multi_init_solve(
    g: &WeightedGraph,
    base: &dyn Solver,
    cfg: &GtConfig,
    seed: u64,
) -> Result<(SolveResult, GtTrace)> {
    cfg.validate()?;
    let n = g.node_count();
    let mut best: Option<(SolveResult, GtTrace)> = None;
    for index in 0..cfg.m_init {
        let s0 = if index == 0 {
            SpinConfiguration::all_plus(n)
        } else {
            random_config(n, splitmix64(seed ^ index as u64))
        };
        let (result, trace) = gt_solve(g, base, &s0, cfg)?;
        let better = match &best {
            None => true,
            Some((incumbent, _)) => result.cut > incumbent.cut,
        };
        if better {
            best = Some((result, trace));
        }
    }
    Ok(best.expect("m_init ≥ 1"))
}

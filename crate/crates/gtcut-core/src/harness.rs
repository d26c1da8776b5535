//! Benchmark harness: runs method × instance grids, scores approximation
//! ratios against an exact or best-known reference, and emits a
//! deterministic CSV plus per-method summaries and paired significance
//! tests.
//!
//! Determinism: the per-instance seed is `splitmix64(run_seed ^ index)`, so
//! every method sees identical random starts on an instance and results do
//! not depend on scheduling; rows are sorted by (instance, method order).
//! Wall times are always measured and reported in the summary, but the CSV
//! column carries them only when explicitly requested, keeping the default
//! CSV byte-identical across reruns.

use crate::agent::{greedy_construct, AgentParams, GreedyPolicy};
use crate::error::{Error, Result};
use crate::graph::{SpinConfiguration, WeightedGraph};
use crate::gt::{multi_init_solve, GtConfig};
use crate::instance_io::read_instance_file;
use crate::rng::splitmix64;
use crate::solver::{ExactBruteForce, Mca, SolveResult, DEFAULT_NODE_LIMIT};
use crate::stats::{approx_ratio, mean_and_se, wilcoxon_signed_rank, WilcoxonResult};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

pub const CSV_HEADER: &str = "instance,method,n,m,cut,c_opt,best_known,ar,gt_iterations,wall_time_ms,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodId {
    Mca,
    McaGt,
    S2v,
    S2vGt,
    Exact,
}

impl MethodId {
    pub fn needs_model(&self) -> bool {
        matches!(self, MethodId::S2v | MethodId::S2vGt)
    }

    pub fn uses_gt(&self) -> bool {
        matches!(self, MethodId::McaGt | MethodId::S2vGt)
    }

    pub const ALL: [MethodId; 5] = [
        MethodId::Mca,
        MethodId::McaGt,
        MethodId::S2v,
        MethodId::S2vGt,
        MethodId::Exact,
    ];
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MethodId::Mca => "mca",
            MethodId::McaGt => "mca-gt",
            MethodId::S2v => "s2v",
            MethodId::S2vGt => "s2v-gt",
            MethodId::Exact => "exact",
        };
        f.write_str(s)
    }
}

impl FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mca" => Ok(MethodId::Mca),
            "mca-gt" => Ok(MethodId::McaGt),
            "s2v" => Ok(MethodId::S2v),
            "s2v-gt" => Ok(MethodId::S2vGt),
            "exact" => Ok(MethodId::Exact),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected mca, mca-gt, s2v, s2v-gt, exact)"
            ))),
        }
    }
}

/// Where the reference optimum comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptSource {
    /// Brute force; instances must fit the node limit.
    Exact,
    /// Best cut seen across all methods plus a 100-start MCA-GT sweep;
    /// ratios are then against a lower bound on the optimum.
    BestKnown,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<MethodId>,
    pub opt_source: OptSource,
    pub seed: u64,
    pub gt: GtConfig,
    pub model: Option<Arc<AgentParams>>,
    /// Worker threads; 1 runs serially.
    pub jobs: usize,
    /// Write measured wall times into the CSV (breaks byte-determinism).
    pub timing_in_csv: bool,
    pub exact_limit: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            methods: vec![MethodId::Mca, MethodId::McaGt],
            opt_source: OptSource::Exact,
            seed: 0,
            gt: GtConfig::default(),
            model: None,
            jobs: 1,
            timing_in_csv: false,
            exact_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub method: MethodId,
    pub n: usize,
    pub m: usize,
    pub cut: f64,
    pub c_opt: f64,
    pub best_known: bool,
    pub ar: Option<f64>,
    pub gt_iterations: usize,
    pub wall_time_ms: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub method: MethodId,
    pub instances: usize,
    pub mean_ar: f64,
    pub se_ar: f64,
    pub mean_gt_iterations: f64,
    pub mean_wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct PairedTest {
    pub method_a: MethodId,
    pub method_b: MethodId,
    pub outcome: std::result::Result<WilcoxonResult, String>,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<MethodSummary>,
    pub paired_tests: Vec<PairedTest>,
    /// Per-item failures; the run continues past them.
    pub errors: Vec<String>,
}

/// Loads every `*.mc` file in `dir`, sorted by file name. Unreadable files
/// become recorded errors, not aborts.
pub fn load_dataset(dir: &Path) -> Result<(Vec<(String, WeightedGraph)>, Vec<String>)> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "mc").unwrap_or(false))
        .collect();
    paths.sort();
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for path in paths {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        match read_instance_file(&path) {
            Ok(g) => instances.push((name, g)),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    Ok((instances, errors))
}

fn run_method(
    method: MethodId,
    g: &WeightedGraph,
    cfg: &BenchConfig,
    instance_seed: u64,
) -> Result<(SolveResult, usize)> {
    match method {
        MethodId::Exact => {
            let r = ExactBruteForce::with_limit(cfg.exact_limit).run(g)?;
            Ok((r, 0))
        }
        MethodId::Mca => {
            let r = Mca.run(g, &SpinConfiguration::all_plus(g.node_count()))?;
            Ok((r, 0))
        }
        MethodId::McaGt => {
            let (r, trace) = multi_init_solve(g, &Mca, &cfg.gt, instance_seed)?;
            Ok((r, trace.gt_iterations))
        }
        MethodId::S2v => {
            let model = cfg.model.as_ref().expect("model checked upfront");
            let r = greedy_construct(g, model)?;
            Ok((r, 0))
        }
        MethodId::S2vGt => {
            let model = cfg.model.as_ref().expect("model checked upfront");
            let policy = GreedyPolicy::new(Arc::clone(model));
            let (r, trace) = multi_init_solve(g, &policy, &cfg.gt, instance_seed)?;
            Ok((r, trace.gt_iterations))
        }
    }
}

fn bench_instance(
    index: usize,
    name: &str,
    g: &WeightedGraph,
    methods: &[MethodId],
    cfg: &BenchConfig,
) -> std::result::Result<Vec<BenchRow>, String> {
    let instance_seed = splitmix64(cfg.seed ^ index as u64);

    let mut results = Vec::with_capacity(methods.len());
    for &method in methods {
        match run_method(method, g, cfg, instance_seed) {
            Ok(r) => results.push((method, r)),
            Err(e) => return Err(format!("{name}/{method}: {e}")),
        }
    }

    let (c_opt, best_known) = match cfg.opt_source {
        OptSource::Exact => {
            let exact = ExactBruteForce::with_limit(cfg.exact_limit)
                .run(g)
                .map_err(|e| format!("{name}: {e}"))?;
            (exact.cut, false)
        }
        OptSource::BestKnown => {
            let sweep = GtConfig {
                m_init: 100,
                ..cfg.gt.clone()
            };
            let (mca_sweep, _) = multi_init_solve(g, &Mca, &sweep, instance_seed)
                .map_err(|e| format!("{name}: {e}"))?;
            let best = results
                .iter()
                .map(|(_, (r, _))| r.cut)
                .fold(mca_sweep.cut, f64::max);
            (best, true)
        }
    };

    Ok(results
        .into_iter()
        .map(|(method, (r, gt_iterations))| BenchRow {
            instance: name.to_string(),
            method,
            n: g.node_count(),
            m: g.edge_count(),
            cut: r.cut,
            c_opt,
            best_known,
            ar: approx_ratio(r.cut, c_opt).ok(),
            gt_iterations,
            wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
            seed: instance_seed,
        })
        .collect())
}

/// Runs every requested method on every instance. Per-item failures are
/// recorded in the report and the remaining grid still runs.
pub fn run_benchmark(
    instances: &[(String, WeightedGraph)],
    cfg: &BenchConfig,
) -> Result<BenchReport> {
    if instances.is_empty() {
        return Err(Error::Config("dataset contains no instances".into()));
    }
    let mut errors = Vec::new();
    let mut methods = cfg.methods.clone();
    if cfg.model.is_none() {
        for m in &cfg.methods {
            if m.needs_model() {
                errors.push(format!("{m}: no model file supplied; method skipped"));
            }
        }
        methods.retain(|m| !m.needs_model());
    }
    if methods.is_empty() {
        return Err(Error::Config("no runnable methods".into()));
    }

    let cell = |(index, (name, g)): (usize, &(String, WeightedGraph))| {
        bench_instance(index, name, g, &methods, cfg)
    };
    let outcomes: Vec<std::result::Result<Vec<BenchRow>, String>> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            instances.par_iter().enumerate().map(cell).collect()
        })
    } else {
        instances.iter().enumerate().map(cell).collect()
    };

    let mut rows = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => errors.push(e),
        }
    }

    let summaries = summarize(&rows, &methods);
    let paired_tests = paired_wilcoxon(&rows, &methods);
    Ok(BenchReport {
        rows,
        summaries,
        paired_tests,
        errors,
    })
}

fn summarize(rows: &[BenchRow], methods: &[MethodId]) -> Vec<MethodSummary> {
    methods
        .iter()
        .map(|&method| {
            let ars: Vec<f64> = rows
                .iter()
                .filter(|r| r.method == method)
                .filter_map(|r| r.ar)
                .collect();
            let iters: Vec<f64> = rows
                .iter()
                .filter(|r| r.method == method)
                .map(|r| r.gt_iterations as f64)
                .collect();
            let walls: Vec<f64> = rows
                .iter()
                .filter(|r| r.method == method)
                .map(|r| r.wall_time_ms)
                .collect();
            let (mean_ar, se_ar) = mean_and_se(&ars);
            MethodSummary {
                method,
                instances: iters.len(),
                mean_ar,
                se_ar,
                mean_gt_iterations: mean_and_se(&iters).0,
                mean_wall_time_ms: mean_and_se(&walls).0,
            }
        })
        .collect()
}

fn paired_wilcoxon(rows: &[BenchRow], methods: &[MethodId]) -> Vec<PairedTest> {
    let mut tests = Vec::new();
    for (i, &a) in methods.iter().enumerate() {
        for &b in &methods[i + 1..] {
            let cuts = |m: MethodId| -> Vec<(&str, f64)> {
                rows.iter()
                    .filter(|r| r.method == m)
                    .map(|r| (r.instance.as_str(), r.cut))
                    .collect()
            };
            let ca = cuts(a);
            let cb = cuts(b);
            let pairs: Vec<(f64, f64)> = ca
                .iter()
                .filter_map(|(name, x)| {
                    cb.iter()
                        .find(|(n2, _)| n2 == name)
                        .map(|(_, y)| (*x, *y))
                })
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let outcome = wilcoxon_signed_rank(&pairs).map_err(|e| e.to_string());
            tests.push(PairedTest {
                method_a: a,
                method_b: b,
                outcome,
            });
        }
    }
    tests
}

impl BenchReport {
    /// CSV with the fixed schema; rows already hold the deterministic
    /// order. `timing` controls whether measured wall times appear.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let ar = r.ar.map(|a| a.to_string()).unwrap_or_default();
            let wall = if timing {
                r.wall_time_ms.to_string()
            } else {
                "0".to_string()
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.instance,
                r.method,
                r.n,
                r.m,
                r.cut,
                r.c_opt,
                r.best_known,
                ar,
                r.gt_iterations,
                wall,
                r.seed
            ));
        }
        out
    }

    /// Human-readable per-method table and significance tests.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        out.push_str("method      instances  mean_ar    se_ar      gt_iters  wall_ms\n");
        for s in &self.summaries {
            out.push_str(&format!(
                "{:<11} {:<10} {:<10.6} {:<10.6} {:<9.3} {:.3}\n",
                s.method.to_string(),
                s.instances,
                s.mean_ar,
                s.se_ar,
                s.mean_gt_iterations,
                s.mean_wall_time_ms
            ));
        }
        for t in &self.paired_tests {
            match &t.outcome {
                Ok(w) => out.push_str(&format!(
                    "wilcoxon {} vs {}: W+={} p_one={:.6e} p_two={:.6e} n={}{}\n",
                    t.method_a,
                    t.method_b,
                    w.w_plus,
                    w.p_one_sided,
                    w.p_two_sided,
                    w.n_used,
                    if w.exact { " (exact)" } else { " (normal approx)" }
                )),
                Err(msg) => out.push_str(&format!(
                    "wilcoxon {} vs {}: {msg}\n",
                    t.method_a, t.method_b
                )),
            }
        }
        if !self.errors.is_empty() {
            out.push_str(&format!("errors: {}\n", self.errors.len()));
            for e in &self.errors {
                out.push_str(&format!("  {e}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{InstanceSpec, TopologySpec, WeightDistribution};

    fn small_dataset(count: usize, seed: u64) -> Vec<(String, WeightedGraph)> {
        let spec = InstanceSpec {
            topology: TopologySpec::ba(2, 8, 12).unwrap(),
            weights: WeightDistribution::Normal01,
            count,
            base_seed: seed,
        };
        (0..count)
            .map(|i| (format!("inst_{i:03}"), spec.generate(i).unwrap()))
            .collect()
    }

    #[test]
    fn exact_method_scores_ratio_one() {
        let data = small_dataset(5, 3);
        let cfg = BenchConfig {
            methods: vec![MethodId::Exact],
            ..BenchConfig::default()
        };
        let report = run_benchmark(&data, &cfg).unwrap();
        assert_eq!(report.rows.len(), 5);
        assert!(report.rows.iter().all(|r| r.ar == Some(1.0)));
        assert!(report.errors.is_empty());
    }

    #[test]
    fn gt_dominates_plain_mca_per_instance() {
        let data = small_dataset(20, 9);
        let cfg = BenchConfig::default();
        let report = run_benchmark(&data, &cfg).unwrap();
        for (name, _) in &data {
            let plain = report
                .rows
                .iter()
                .find(|r| &r.instance == name && r.method == MethodId::Mca)
                .unwrap();
            let wrapped = report
                .rows
                .iter()
                .find(|r| &r.instance == name && r.method == MethodId::McaGt)
                .unwrap();
            assert!(wrapped.cut >= plain.cut);
            assert!(wrapped.ar.unwrap() >= plain.ar.unwrap());
            assert!(wrapped.ar.unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn csv_is_deterministic_and_parallel_matches_serial() {
        let data = small_dataset(12, 21);
        let mut cfg = BenchConfig::default();
        cfg.methods = vec![MethodId::Mca, MethodId::McaGt, MethodId::Exact];
        let a = run_benchmark(&data, &cfg).unwrap().to_csv(false);
        let b = run_benchmark(&data, &cfg).unwrap().to_csv(false);
        assert_eq!(a, b);
        cfg.jobs = 4;
        let c = run_benchmark(&data, &cfg).unwrap().to_csv(false);
        assert_eq!(a, c, "parallel run must byte-match serial run");
        assert!(a.starts_with(CSV_HEADER));
    }

    #[test]
    fn summary_matches_naive_recomputation_from_rows() {
        let data = small_dataset(10, 5);
        let report = run_benchmark(&data, &BenchConfig::default()).unwrap();
        for s in &report.summaries {
            let ars: Vec<f64> = report
                .rows
                .iter()
                .filter(|r| r.method == s.method)
                .filter_map(|r| r.ar)
                .collect();
            let (mean, se) = mean_and_se(&ars);
            assert_eq!(s.mean_ar, mean);
            assert_eq!(s.se_ar, se);
        }
    }

    #[test]
    fn model_methods_without_model_are_recorded_errors() {
        let data = small_dataset(3, 8);
        let cfg = BenchConfig {
            methods: vec![MethodId::Mca, MethodId::S2v],
            ..BenchConfig::default()
        };
        let report = run_benchmark(&data, &cfg).unwrap();
        assert_eq!(report.errors.len(), 1);
        assert!(report.rows.iter().all(|r| r.method == MethodId::Mca));
    }

    #[test]
    fn oversize_instance_in_exact_mode_is_recorded() {
        let mut data = small_dataset(2, 4);
        let big = InstanceSpec {
            topology: TopologySpec::ba(2, 30, 30).unwrap(),
            weights: WeightDistribution::Normal01,
            count: 1,
            base_seed: 0,
        }
        .generate(0)
        .unwrap();
        data.push(("inst_big".into(), big));
        let cfg = BenchConfig::default();
        let report = run_benchmark(&data, &cfg).unwrap();
        assert_eq!(report.errors.len(), 1, "{:?}", report.errors);
        assert!(report.errors[0].contains("inst_big"));
        // The small instances still produced rows.
        assert_eq!(report.rows.len(), 2 * 2);
    }

    #[test]
    fn best_known_mode_flags_rows_and_caps_ratio() {
        let data = small_dataset(5, 77);
        let cfg = BenchConfig {
            opt_source: OptSource::BestKnown,
            ..BenchConfig::default()
        };
        let report = run_benchmark(&data, &cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.best_known));
        for r in &report.rows {
            if let Some(ar) = r.ar {
                assert!(ar <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn method_id_round_trips() {
        for m in MethodId::ALL {
            assert_eq!(m.to_string().parse::<MethodId>().unwrap(), m);
        }
        assert!("nope".parse::<MethodId>().is_err());
    }
}

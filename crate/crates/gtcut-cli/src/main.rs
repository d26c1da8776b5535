//! `gtcut`: generate MaxCut instances, solve them exactly or heuristically,
//! train the learned heuristic, and benchmark everything into CSV reports.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gtcut_core::agent::{greedy_construct, train, AgentParams, GreedyPolicy, TrainConfig};
use gtcut_core::harness::{
    load_dataset, run_benchmark, BenchConfig, MethodId, OptSource,
};
use gtcut_core::rng::splitmix64;
use gtcut_core::solver::{ExactBruteForce, Mca, DEFAULT_NODE_LIMIT};
use gtcut_core::{
    gt_solve, instance_io, multi_init_solve, GtConfig, InstanceSpec, Result, SpinConfiguration,
    TopologySpec, WeightDistribution,
};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "gtcut", version, about = "MaxCut solvers with gauge-transformation restarts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic instances into a directory
    Generate(GenerateArgs),
    /// Solve instances exactly by branch-free enumeration
    Exact(ExactArgs),
    /// Run one method on one instance
    Solve(SolveArgs),
    /// Train the learned heuristic and write a model file
    Train(TrainArgs),
    /// Benchmark methods over a dataset and write a CSV report
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Ba,
    Er,
    Ws,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Uniform,
    Normal,
    Du,
}

impl WeightsArg {
    fn distribution(self) -> WeightDistribution {
        match self {
            WeightsArg::Uniform => WeightDistribution::Uniform01,
            WeightsArg::Normal => WeightDistribution::Normal01,
            WeightsArg::Du => WeightDistribution::DiscreteUniform,
        }
    }
}

/// Topology flags shared by `generate` and `train`.
#[derive(Args)]
struct TopologyFlags {
    /// Graph family
    #[arg(long = "type", value_enum)]
    kind: TopologyArg,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    /// BA: target average degree (attachment count = degree / 2)
    #[arg(long, conflicts_with = "m_attach")]
    avg_degree: Option<usize>,
    /// BA: edges attached per new node
    #[arg(long)]
    m_attach: Option<usize>,
    /// ER: independent edge probability
    #[arg(long, default_value_t = 0.15)]
    edge_prob: f64,
    /// WS: ring neighbors per node (even)
    #[arg(long, default_value_t = 4)]
    ws_k: usize,
    /// WS: rewiring probability
    #[arg(long, default_value_t = 0.1)]
    ws_rewire: f64,
}

impl TopologyFlags {
    fn build(&self) -> Result<TopologySpec> {
        match self.kind {
            TopologyArg::Ba => {
                let m_attach = match (self.m_attach, self.avg_degree) {
                    (Some(m), _) => m,
                    (None, Some(d)) => (d / 2).max(1),
                    (None, None) => 2,
                };
                TopologySpec::ba(m_attach, self.n_min, self.n_max)
            }
            TopologyArg::Er => TopologySpec::er(self.edge_prob, self.n_min, self.n_max),
            TopologyArg::Ws => {
                TopologySpec::ws(self.ws_k, self.ws_rewire, self.n_min, self.n_max)
            }
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    topology: TopologyFlags,
    #[arg(long, value_enum)]
    weights: WeightsArg,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExactArgs {
    /// Instance files
    #[arg(long = "instance", num_args = 1..)]
    instances: Vec<PathBuf>,
    /// Or: a directory of *.mc files
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Brute-force node limit
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    limit: usize,
    /// Also print the optimal configuration as a ± string
    #[arg(long)]
    show_config: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    method: String,
    #[arg(long)]
    instance: PathBuf,
    /// Model file for s2v / s2v-gt
    #[arg(long)]
    model: Option<PathBuf>,
    /// Initial configurations for gt methods (start 0 is all-plus)
    #[arg(long, default_value_t = 1)]
    m_init: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    max_iterations: usize,
    /// Improvement threshold; use 0 for integer-weighted instances
    #[arg(long, default_value_t = 1e-9)]
    gt_epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    limit: usize,
    #[arg(long)]
    show_config: bool,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    topology: TopologyFlags,
    #[arg(long, value_enum)]
    weights: WeightsArg,
    /// Discount factor (default per weight distribution: uniform 0.90, normal/du 0.99)
    #[arg(long)]
    gamma: Option<f64>,
    /// Message-passing rounds (default per distribution: uniform 3, normal/du 5)
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long, default_value_t = 1)]
    n_step: usize,
    #[arg(long, default_value_t = 1000)]
    episodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Embedding width
    #[arg(long, default_value_t = 64)]
    width: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long, default_value_t = 10_000)]
    replay_capacity: usize,
    /// Fraction of episodes over which ε anneals from 1.0 to 0.05
    #[arg(long, default_value_t = 0.5)]
    eps_fraction: f64,
    /// Output model file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated methods: mca,mca-gt,s2v,s2v-gt,exact
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long)]
    dataset: PathBuf,
    /// Reference optimum: exact | best-known
    #[arg(long, default_value = "exact")]
    opt: String,
    /// CSV output path
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    model: Option<PathBuf>,
    /// Worker threads for instance-level parallelism
    #[arg(long, env = "GTCUT_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 1)]
    m_init: usize,
    #[arg(long, default_value_t = 50)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    gt_epsilon: f64,
    /// Write measured wall times into the CSV (the column is 0 otherwise,
    /// keeping reruns byte-identical)
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    exact_limit: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Train(args) => cmd_train(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let spec = InstanceSpec {
        topology: args.topology.build()?,
        weights: args.weights.distribution(),
        count: args.count,
        base_seed: args.seed,
    };
    std::fs::create_dir_all(&args.out)?;
    let digits = args.count.saturating_sub(1).to_string().len().max(3);
    for i in 0..args.count {
        let g = spec.generate(i)?;
        let path = args.out.join(format!("inst_{i:0digits$}.mc"));
        instance_io::write_instance_file(&g, &path)?;
    }
    println!("wrote {} instances to {}", args.count, args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(args: ExactArgs) -> Result<ExitCode> {
    let mut items: Vec<(String, gtcut_core::WeightedGraph)> = Vec::new();
    let mut errors = Vec::new();
    for path in &args.instances {
        match instance_io::read_instance_file(path) {
            Ok(g) => items.push((path.display().to_string(), g)),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    if let Some(dir) = &args.dataset {
        let (loaded, mut errs) = load_dataset(dir)?;
        items.extend(loaded);
        errors.append(&mut errs);
    }
    let solver = ExactBruteForce::with_limit(args.limit);
    for (name, g) in &items {
        match solver.run(g) {
            Ok(r) => {
                if args.show_config {
                    println!(
                        "{name} n={} m={} cut={} config={}",
                        g.node_count(),
                        g.edge_count(),
                        r.cut,
                        r.configuration.to_signs()
                    );
                } else {
                    println!("{name} n={} m={} cut={}", g.node_count(), g.edge_count(), r.cut);
                }
            }
            Err(e) => errors.push(format!("{name}: {e}")),
        }
    }
    for e in &errors {
        eprintln!("error: {e}");
    }
    Ok(if errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let method = MethodId::from_str(&args.method)?;
    let g = instance_io::read_instance_file(&args.instance)?;
    let gt = GtConfig {
        max_iterations: args.max_iterations,
        improvement_epsilon: args.gt_epsilon,
        m_init: args.m_init,
    };
    let model = match &args.model {
        Some(path) => Some(Arc::new(AgentParams::load_file(path)?)),
        None => None,
    };
    if method.needs_model() && model.is_none() {
        return Err(gtcut_core::Error::Config(format!(
            "method {method} requires --model"
        )));
    }

    let all_plus = SpinConfiguration::all_plus(g.node_count());
    let (result, gt_iterations) = match method {
        MethodId::Exact => (ExactBruteForce::with_limit(args.limit).run(&g)?, 0),
        MethodId::Mca => (Mca.run(&g, &all_plus)?, 0),
        MethodId::McaGt => {
            if args.m_init > 1 {
                let (r, t) = multi_init_solve(&g, &Mca, &gt, args.seed)?;
                (r, t.gt_iterations)
            } else {
                let (r, t) = gt_solve(&g, &Mca, &all_plus, &gt)?;
                (r, t.gt_iterations)
            }
        }
        MethodId::S2v => (greedy_construct(&g, model.as_ref().unwrap())?, 0),
        MethodId::S2vGt => {
            let policy = GreedyPolicy::new(model.clone().unwrap());
            if args.m_init > 1 {
                let (r, t) = multi_init_solve(&g, &policy, &gt, args.seed)?;
                (r, t.gt_iterations)
            } else {
                let (r, t) = gt_solve(&g, &policy, &all_plus, &gt)?;
                (r, t.gt_iterations)
            }
        }
    };
    println!(
        "method={} n={} m={} cut={} gt_iterations={} wall_ms={:.3}",
        method,
        g.node_count(),
        g.edge_count(),
        result.cut,
        gt_iterations,
        result.wall_time.as_secs_f64() * 1e3
    );
    if args.show_config {
        println!("config={}", result.configuration.to_signs());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_train(args: TrainArgs) -> Result<ExitCode> {
    // Per-distribution defaults: U(0,1) trains shallower and with stronger
    // discounting than N(0,1)/DU.
    let (default_layers, default_gamma) = match args.weights {
        WeightsArg::Uniform => (3, 0.90),
        WeightsArg::Normal | WeightsArg::Du => (5, 0.99),
    };
    let config = TrainConfig {
        gamma: args.gamma.unwrap_or(default_gamma),
        n_step: args.n_step,
        episodes: args.episodes,
        learning_rate: args.lr,
        batch_size: args.batch_size,
        replay_capacity: args.replay_capacity,
        embedding_dim: args.width,
        rounds: args.layers.unwrap_or(default_layers),
        epsilon_anneal_fraction: args.eps_fraction,
        seed: args.seed,
        ..TrainConfig::default()
    };
    // Sub-streams 1..3 of the seed belong to the trainer; the episode
    // instance stream takes tag 4.
    let spec = InstanceSpec {
        topology: args.topology.build()?,
        weights: args.weights.distribution(),
        count: args.episodes,
        base_seed: splitmix64(args.seed ^ 4),
    };
    let params = train(&config, |episode| spec.generate(episode))?;
    params.save_file(&args.out)?;
    println!(
        "trained {} episodes (p={} T={} gamma={}); model written to {}",
        args.episodes,
        config.embedding_dim,
        config.rounds,
        config.gamma,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let methods = args
        .methods
        .iter()
        .map(|m| MethodId::from_str(m))
        .collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        return Err(gtcut_core::Error::Config("no methods requested".into()));
    }
    let opt_source = match args.opt.as_str() {
        "exact" => OptSource::Exact,
        "best-known" => OptSource::BestKnown,
        other => {
            return Err(gtcut_core::Error::Config(format!(
                "unknown opt source `{other}` (expected exact | best-known)"
            )))
        }
    };
    let model = match &args.model {
        Some(path) => Some(Arc::new(AgentParams::load_file(path)?)),
        None => None,
    };
    let (instances, mut load_errors) = load_dataset(&args.dataset)?;
    let cfg = BenchConfig {
        methods,
        opt_source,
        seed: args.seed,
        gt: GtConfig {
            max_iterations: args.max_iterations,
            improvement_epsilon: args.gt_epsilon,
            m_init: args.m_init,
        },
        model,
        jobs: args.jobs.max(1),
        timing_in_csv: args.timing,
        exact_limit: args.exact_limit,
    };
    let mut report = run_benchmark(&instances, &cfg)?;
    report.errors.append(&mut load_errors);

    std::fs::write(&args.report, report.to_csv(cfg.timing_in_csv))?;
    print!("{}", report.summary_text());
    println!("report written to {}", args.report.display());
    Ok(if report.errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

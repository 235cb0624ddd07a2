//! `qroute` — command-line front end for the entanglement routing engine.
//!
//! Exit codes: 0 on success, 1 when every request was denied, 2 on
//! configuration or usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use qroute_core::experiments::{
    run_algorithm, run_sweep, runtime_csv, save_csv, time_algorithms, to_csv, Algorithm,
    ExperimentConfig, TopologySource,
};
use qroute_core::topology::{generate_waxman, load_topology, us_backbone, TopologyConfig};
use qroute_core::{AllocationResult, NetworkGraph, RoutingRequest};

#[derive(Parser)]
#[command(
    name = "qroute",
    version,
    about = "Fidelity-guaranteed entanglement routing for simulated quantum networks",
    long_about = "Routes entanglement requests over capacitated network graphs with per-edge \
purification scheduling.\n\nOutput formats: `route-single` prints one JSON object per routing \
solution (JSON lines); `route-multi` prints one JSON summary of the allocation; `sweep` and \
`bench` write CSV tables.\n\nThe QROUTE_THREADS environment variable caps the sweep worker count."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Waxman random topology and write it as a topology file.
    GenTopology(GenTopologyArgs),
    /// Route one source-destination request; prints solutions as JSON lines.
    RouteSingle(RouteSingleArgs),
    /// Allocate resources for multiple requests described by a config file.
    RouteMulti(RouteMultiArgs),
    /// Run a Monte-Carlo sweep from a config file and write the CSV table.
    Sweep(SweepArgs),
    /// Time the single-pair algorithms on Waxman graphs of growing size.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenTopologyArgs {
    /// Number of nodes.
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    /// Waxman connection-probability scale, in (0, 1].
    #[arg(long, default_value_t = 0.8)]
    kappa: f64,
    /// Waxman distance decay, in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Side of the placement square in km.
    #[arg(long, default_value_t = 2000.0)]
    area: f64,
    /// Channel capacity of every edge.
    #[arg(long, default_value_t = 50)]
    capacity: u32,
    /// Mean of the initial-fidelity distribution.
    #[arg(long, default_value_t = 0.8)]
    fid_mean: f64,
    /// Standard deviation of the initial-fidelity distribution.
    #[arg(long, default_value_t = 0.1)]
    fid_std: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output topology file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RouteSingleArgs {
    /// Topology file to route on.
    #[arg(long, conflicts_with = "backbone")]
    topology: Option<PathBuf>,
    /// Use the bundled US-backbone-style topology.
    #[arg(long)]
    backbone: bool,
    #[arg(long)]
    src: usize,
    #[arg(long)]
    dst: usize,
    /// End-to-end fidelity threshold, in [0.5, 1).
    #[arg(long)]
    threshold: f64,
    /// Connections requested.
    #[arg(long, default_value_t = 1)]
    demand: u32,
    /// q-path | q-leap | alg3-path | alg3-leap | baseline | random
    #[arg(long, default_value = "q-path")]
    algo: String,
    /// Override every edge capacity.
    #[arg(long)]
    capacity: Option<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the JSON lines here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RouteMultiArgs {
    /// JSON config describing topology, requests and the algorithm.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's algorithm.
    #[arg(long)]
    algo: Option<String>,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config mirroring the experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', default_value = "100,200,300")]
    scales: Vec<usize>,
    #[arg(long, default_value_t = 0.6)]
    threshold: f64,
    #[arg(long, default_value_t = 10)]
    capacity: u32,
    #[arg(long, default_value_t = 50)]
    demand: u32,
    /// Source-destination pairs timed per scale.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the runtime CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Config file for `route-multi`.
#[derive(serde::Deserialize)]
#[serde(default)]
struct MultiRunConfig {
    topology: TopologySource,
    requests: Vec<RoutingRequest>,
    algorithm: Algorithm,
    alpha_star: f64,
    beta_star: f64,
    /// Overrides every edge capacity when set.
    capacity: Option<u32>,
    seed: u64,
    k_per_hop_class: usize,
}

impl Default for MultiRunConfig {
    fn default() -> Self {
        Self {
            topology: TopologySource::Backbone,
            requests: Vec::new(),
            algorithm: Algorithm::Alg3Path,
            alpha_star: 0.5,
            beta_star: 0.5,
            capacity: None,
            seed: 1,
            k_per_hop_class: 64,
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::GenTopology(args) => gen_topology(args),
        Command::RouteSingle(args) => route_single(args),
        Command::RouteMulti(args) => route_multi(args),
        Command::Sweep(args) => sweep(args),
        Command::Bench(args) => bench(args),
    }
}

fn gen_topology(args: GenTopologyArgs) -> anyhow::Result<ExitCode> {
    let config = TopologyConfig {
        node_count: args.nodes,
        kappa: args.kappa,
        gamma: args.gamma,
        area_side_km: args.area,
        capacity: args.capacity,
        fidelity_mean: args.fid_mean,
        fidelity_stddev: args.fid_std,
        rng_seed: args.seed,
    };
    let graph = generate_waxman(&config)?;
    graph
        .save(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "wrote {} ({} nodes, {} edges)",
        args.out.display(),
        graph.node_count(),
        graph.edge_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn resolve_topology(source: &TopologySource, capacity: Option<u32>) -> anyhow::Result<NetworkGraph> {
    let graph = match source {
        TopologySource::Waxman(config) => generate_waxman(config)?,
        TopologySource::File { path } => load_topology(path)?,
        TopologySource::Backbone => us_backbone(),
    };
    Ok(match capacity {
        Some(capacity) => graph.with_uniform_capacity(capacity),
        None => graph,
    })
}

fn parse_algorithm(label: &str) -> anyhow::Result<Algorithm> {
    Algorithm::parse(label).with_context(|| {
        format!("unknown algorithm `{label}` (expected q-path, q-leap, alg3-path, alg3-leap, baseline or random)")
    })
}

fn write_output(out: Option<&PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn route_single(args: RouteSingleArgs) -> anyhow::Result<ExitCode> {
    let source = match (&args.topology, args.backbone) {
        (Some(path), _) => TopologySource::File { path: path.clone() },
        (None, true) => TopologySource::Backbone,
        (None, false) => bail!("pass --topology <file> or --backbone"),
    };
    let graph = resolve_topology(&source, args.capacity)?;
    let node_count = graph.node_count();
    if args.src >= node_count || args.dst >= node_count {
        bail!("node ids must be below {node_count}");
    }
    if args.src == args.dst {
        bail!("source and destination must differ");
    }
    let algorithm = parse_algorithm(&args.algo)?;
    let request = RoutingRequest::new(args.src, args.dst, args.demand, args.threshold);
    let config = ExperimentConfig {
        algorithms: vec![algorithm],
        ..ExperimentConfig::default()
    };
    let result = run_algorithm(algorithm, &graph, &[request], &config, args.seed);

    let mut lines = String::new();
    for outcome in &result.outcomes {
        for solution in &outcome.solutions {
            lines.push_str(&serde_json::to_string(solution)?);
            lines.push('\n');
        }
    }
    write_output(args.out.as_ref(), &lines)?;
    if result.outcomes.iter().all(|o| o.denied()) {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn route_multi(args: RouteMultiArgs) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut config: MultiRunConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(algo) = &args.algo {
        config.algorithm = parse_algorithm(algo)?;
    }
    if config.requests.is_empty() {
        bail!("config lists no requests");
    }
    let graph = resolve_topology(&config.topology, config.capacity)?;
    let experiment = ExperimentConfig {
        algorithms: vec![config.algorithm],
        alpha_star: config.alpha_star,
        beta_star: config.beta_star,
        k_per_hop_class: config.k_per_hop_class,
        ..ExperimentConfig::default()
    };
    let result = run_algorithm(
        config.algorithm,
        &graph,
        &config.requests,
        &experiment,
        config.seed,
    );
    let summary = summarize(config.algorithm, &result);
    write_output(args.out.as_ref(), &format!("{summary:#}\n"))?;
    if result.outcomes.iter().all(|o| o.denied()) {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn summarize(algorithm: Algorithm, result: &AllocationResult) -> serde_json::Value {
    serde_json::json!({
        "algorithm": algorithm.label(),
        "total_throughput": result.total_throughput(),
        "satisfied_connections": result.total_satisfied(),
        "violations": result.total_violations(),
        "mean_fidelity": result.mean_fidelity(),
        "utilization": result.utilization(),
        "denial_rate": result.denial_rate(),
        "requests": result.outcomes,
    })
}

fn sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    let rows = run_sweep(&config)?;
    save_csv(&rows, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    eprint!("{}", to_csv(&rows));
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    if args.scales.is_empty() {
        bail!("pass at least one scale");
    }
    let rows = time_algorithms(
        &args.scales,
        args.threshold,
        args.capacity,
        args.demand,
        args.reps,
        args.seed,
    )?;
    write_output(args.out.as_ref(), &runtime_csv(&rows))?;
    Ok(ExitCode::SUCCESS)
}

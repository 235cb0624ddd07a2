//! Trial runner, metric aggregation and CSV emission.
//!
//! A sweep crosses one varying dimension (threshold, capacity or pair count)
//! with a number of Monte-Carlo trials. Within a trial every enabled
//! algorithm sees identical inputs — same graph, same sampled pairs, same
//! fidelity draws — so per-trial differences are attributable to the
//! algorithms alone, and trial `t` always derives its randomness from
//! `rng_seed ^ t`, which also pairs the draws across sweep points.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multipair::{
    allocate, allocate_random, allocate_sequential, baseline_advance_purification,
    AllocationConfig, AllocationResult,
};
use crate::routing::{RouterKind, RoutingRequest, DEFAULT_K_PER_HOP_CLASS};
use crate::topology::{generate_waxman, load_topology, us_backbone, NetworkGraph, TopologyConfig};

/// Where a sweep gets its graphs from.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TopologySource {
    /// A fresh Waxman graph per trial.
    Waxman(TopologyConfig),
    /// Fixed geometry from a topology file; fidelities redrawn per trial.
    File { path: PathBuf },
    /// The bundled US-backbone-style topology.
    Backbone,
}

/// Algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Cost-optimal single-pair router, applied to requests back to back.
    QPath,
    /// Low-complexity single-pair router, applied to requests back to back.
    QLeap,
    /// Utility-ordered allocation backed by the cost-optimal router.
    Alg3Path,
    /// Utility-ordered allocation backed by the low-complexity router.
    Alg3Leap,
    /// Purify-before-route with proportional sharing.
    Baseline,
    /// Random-order allocation backed by the cost-optimal router.
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::QPath,
        Algorithm::QLeap,
        Algorithm::Alg3Path,
        Algorithm::Alg3Leap,
        Algorithm::Baseline,
        Algorithm::Random,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::QPath => "q-path",
            Algorithm::QLeap => "q-leap",
            Algorithm::Alg3Path => "alg3-path",
            Algorithm::Alg3Leap => "alg3-leap",
            Algorithm::Baseline => "baseline",
            Algorithm::Random => "random",
        }
    }

    pub fn parse(label: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.label() == label)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Full description of a sweep run.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub topology: TopologySource,
    pub thresholds: Vec<f64>,
    pub capacities: Vec<u32>,
    pub pair_counts: Vec<usize>,
    pub demand_per_pair: u32,
    pub trials: u32,
    pub rng_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub alpha_star: f64,
    pub beta_star: f64,
    pub fidelity_mean: f64,
    pub fidelity_stddev: f64,
    pub k_per_hop_class: usize,
    /// Slot length of the synchronized network; recorded for provenance,
    /// never used in any metric.
    pub sync_timestep_ms: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            topology: TopologySource::Backbone,
            thresholds: vec![0.7],
            capacities: vec![50],
            pair_counts: vec![1],
            demand_per_pair: 50,
            trials: 1000,
            rng_seed: 1,
            algorithms: vec![Algorithm::QPath, Algorithm::QLeap, Algorithm::Baseline],
            alpha_star: 0.5,
            beta_star: 0.5,
            fidelity_mean: 0.8,
            fidelity_stddev: 0.1,
            k_per_hop_class: DEFAULT_K_PER_HOP_CLASS,
            sync_timestep_ms: 500,
        }
    }
}

/// One point of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub threshold: f64,
    pub capacity: u32,
    pub pair_count: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() || self.capacities.is_empty() || self.pair_counts.is_empty()
        {
            return Err(Error::Config("sweep lists must be non-empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.demand_per_pair == 0 {
            return Err(Error::Config("demand_per_pair must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms enabled".into()));
        }
        for &threshold in &self.thresholds {
            if !(0.5..1.0).contains(&threshold) {
                return Err(Error::Config(format!("threshold {threshold} outside [0.5, 1)")));
            }
        }
        if self.capacities.iter().any(|&c| c == 0) {
            return Err(Error::Config("capacities must be at least 1".into()));
        }
        if self.pair_counts.iter().any(|&p| p == 0) {
            return Err(Error::Config("pair counts must be at least 1".into()));
        }
        let varying = [
            self.thresholds.len() > 1,
            self.capacities.len() > 1,
            self.pair_counts.len() > 1,
        ]
        .iter()
        .filter(|&&v| v)
        .count();
        if varying > 1 {
            return Err(Error::Config(
                "only one of thresholds/capacities/pair_counts may sweep".into(),
            ));
        }
        Ok(())
    }

    /// Name and extractor of the varying dimension.
    fn sweep_param(&self) -> &'static str {
        if self.capacities.len() > 1 {
            "capacity"
        } else if self.pair_counts.len() > 1 {
            "pairs"
        } else {
            "threshold"
        }
    }

    fn sweep_points(&self) -> Vec<SweepPoint> {
        let mut points = Vec::new();
        for &threshold in &self.thresholds {
            for &capacity in &self.capacities {
                for &pair_count in &self.pair_counts {
                    points.push(SweepPoint {
                        threshold,
                        capacity,
                        pair_count,
                    });
                }
            }
        }
        points
    }

    fn sweep_value(&self, point: &SweepPoint) -> f64 {
        match self.sweep_param() {
            "capacity" => point.capacity as f64,
            "pairs" => point.pair_count as f64,
            _ => point.threshold,
        }
    }

    /// The fixed base graph for file-backed topologies; `None` for Waxman
    /// sources, which regenerate per trial.
    fn base_graph(&self) -> Result<Option<NetworkGraph>> {
        match &self.topology {
            TopologySource::Waxman(config) => {
                config.validate()?;
                Ok(None)
            }
            TopologySource::File { path } => Ok(Some(load_topology(path)?)),
            TopologySource::Backbone => Ok(Some(us_backbone())),
        }
    }
}

/// Metrics of one algorithm in one trial.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrialMetrics {
    pub throughput: f64,
    pub fidelity_weight: f64,
    pub satisfied_connections: u64,
    pub utilization: f64,
    pub denial_rate: f64,
    pub violations: u64,
    pub runtime_ms: f64,
}

impl TrialMetrics {
    fn from_result(result: &AllocationResult, runtime_ms: f64) -> Self {
        Self {
            throughput: result.total_throughput(),
            fidelity_weight: result.outcomes.iter().map(|o| o.fidelity_weight).sum(),
            satisfied_connections: result.total_satisfied() as u64,
            utilization: result.utilization(),
            denial_rate: result.denial_rate(),
            violations: result.total_violations() as u64,
            runtime_ms,
        }
    }

    /// Equality over everything but the wall clock.
    pub fn same_outcome(&self, other: &TrialMetrics) -> bool {
        self.throughput == other.throughput
            && self.fidelity_weight == other.fidelity_weight
            && self.satisfied_connections == other.satisfied_connections
            && self.utilization == other.utilization
            && self.denial_rate == other.denial_rate
            && self.violations == other.violations
    }
}

/// Aggregated metrics of one algorithm at one sweep point.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MetricsRow {
    pub algorithm: Algorithm,
    pub sweep_param: String,
    pub sweep_value: f64,
    pub throughput_mean: f64,
    pub throughput_se: f64,
    pub fidelity_mean: f64,
    pub utilization_mean: f64,
    pub denial_rate: f64,
    pub runtime_ms: f64,
}

pub const CSV_HEADER: &str = "algorithm,sweep_param,sweep_value,throughput_mean,throughput_se,\
fidelity_mean,utilization_mean,denial_rate,runtime_ms";

impl MetricsRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.3}",
            self.algorithm,
            self.sweep_param,
            self.sweep_value,
            self.throughput_mean,
            self.throughput_se,
            self.fidelity_mean,
            self.utilization_mean,
            self.denial_rate,
            self.runtime_ms
        )
    }
}

/// Renders rows as the CSV table, header included.
pub fn to_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

pub fn save_csv(rows: &[MetricsRow], path: impl AsRef<FsPath>) -> Result<()> {
    std::fs::write(path, to_csv(rows))?;
    Ok(())
}

/// Uniform sample of `pair_count` unordered node pairs without replacement.
pub fn sample_pairs(
    rng: &mut ChaCha8Rng,
    node_count: usize,
    pair_count: usize,
) -> Result<Vec<(usize, usize)>> {
    let available = node_count * (node_count - 1) / 2;
    if pair_count > available {
        return Err(Error::Config(format!(
            "{pair_count} pairs requested but only {available} distinct pairs exist"
        )));
    }
    let mut chosen = HashSet::new();
    let mut pairs = Vec::with_capacity(pair_count);
    while pairs.len() < pair_count {
        let u = rng.random_range(0..node_count);
        let v = rng.random_range(0..node_count);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if chosen.insert(pair) {
            pairs.push(pair);
        }
    }
    Ok(pairs)
}

/// Builds the trial inputs: the graph sample and the request list, both
/// derived deterministically from `trial_seed`.
pub fn prepare_trial(
    base: Option<&NetworkGraph>,
    point: &SweepPoint,
    config: &ExperimentConfig,
    trial_seed: u64,
) -> Result<(NetworkGraph, Vec<RoutingRequest>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let graph = match (&config.topology, base) {
        (TopologySource::Waxman(waxman), _) => generate_waxman(&TopologyConfig {
            capacity: point.capacity,
            rng_seed: trial_seed,
            fidelity_mean: config.fidelity_mean,
            fidelity_stddev: config.fidelity_stddev,
            ..*waxman
        })?,
        (_, Some(base)) => base.with_uniform_capacity(point.capacity).with_random_fidelities(
            &mut rng,
            config.fidelity_mean,
            config.fidelity_stddev,
        ),
        (_, None) => unreachable!("file topologies carry a base graph"),
    };
    let pairs = sample_pairs(&mut rng, graph.node_count(), point.pair_count)?;
    let requests = pairs
        .into_iter()
        .map(|(source, destination)| {
            RoutingRequest::new(source, destination, config.demand_per_pair, point.threshold)
        })
        .collect();
    Ok((graph, requests))
}

/// Runs every enabled algorithm on one prepared trial, timing each.
pub fn run_trial(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    config: &ExperimentConfig,
    trial_seed: u64,
) -> Vec<(Algorithm, TrialMetrics)> {
    config
        .algorithms
        .iter()
        .map(|&algorithm| {
            let start = Instant::now();
            let result = run_algorithm(algorithm, graph, requests, config, trial_seed);
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            (algorithm, TrialMetrics::from_result(&result, runtime_ms))
        })
        .collect()
}

fn allocation_config(
    graph: &NetworkGraph,
    router: RouterKind,
    config: &ExperimentConfig,
) -> AllocationConfig {
    AllocationConfig {
        alpha_star: config.alpha_star,
        beta_star: config.beta_star,
        router,
        edge_count: graph.edge_count(),
        channel_capacity: graph.max_capacity().max(1),
        k_per_hop_class: config.k_per_hop_class,
    }
}

/// Seed stream for the random allocation order, decoupled from the fidelity
/// and pair draws of the same trial.
fn random_order_seed(trial_seed: u64) -> u64 {
    trial_seed ^ 0xA5A5_5A5A_DEAD_BEEF
}

pub fn run_algorithm(
    algorithm: Algorithm,
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    config: &ExperimentConfig,
    trial_seed: u64,
) -> AllocationResult {
    match algorithm {
        Algorithm::QPath => {
            allocate_sequential(graph, requests, RouterKind::QPath, config.k_per_hop_class)
        }
        Algorithm::QLeap => {
            allocate_sequential(graph, requests, RouterKind::QLeap, config.k_per_hop_class)
        }
        Algorithm::Alg3Path => allocate(
            graph,
            requests,
            &allocation_config(graph, RouterKind::QPath, config),
        ),
        Algorithm::Alg3Leap => allocate(
            graph,
            requests,
            &allocation_config(graph, RouterKind::QLeap, config),
        ),
        Algorithm::Baseline => baseline_advance_purification(graph, requests),
        Algorithm::Random => allocate_random(
            graph,
            requests,
            &allocation_config(graph, RouterKind::QPath, config),
            random_order_seed(trial_seed),
        ),
    }
}

/// Worker pool sized by the `QROUTE_THREADS` environment variable when set.
fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = std::env::var("QROUTE_THREADS")
        .ok()
        .and_then(|value| value.parse::<usize>().ok())
        .filter(|&threads| threads >= 1)
    {
        builder = builder.num_threads(threads);
    }
    builder.build().expect("worker pool")
}

/// Runs the whole sweep: every sweep point × every trial × every algorithm,
/// trials in parallel, aggregation in trial order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<MetricsRow>> {
    config.validate()?;
    let base = config.base_graph()?;
    let points = config.sweep_points();
    let pool = thread_pool();
    let mut rows = Vec::new();
    for point in &points {
        let trials: Vec<Vec<(Algorithm, TrialMetrics)>> =
            pool.install(|| {
                (0..config.trials)
                    .into_par_iter()
                    .map(|trial| {
                        let trial_seed = config.rng_seed ^ trial as u64;
                        let (graph, requests) =
                            prepare_trial(base.as_ref(), point, config, trial_seed)?;
                        Ok(run_trial(&graph, &requests, config, trial_seed))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
        for (slot, &algorithm) in config.algorithms.iter().enumerate() {
            let per_trial: Vec<&TrialMetrics> =
                trials.iter().map(|metrics| &metrics[slot].1).collect();
            debug_assert!(trials
                .iter()
                .all(|metrics| metrics[slot].0 == algorithm));
            rows.push(aggregate(algorithm, config, point, &per_trial));
        }
    }
    Ok(rows)
}

fn aggregate(
    algorithm: Algorithm,
    config: &ExperimentConfig,
    point: &SweepPoint,
    per_trial: &[&TrialMetrics],
) -> MetricsRow {
    let n = per_trial.len() as f64;
    let throughput_mean = per_trial.iter().map(|m| m.throughput).sum::<f64>() / n;
    let variance = per_trial
        .iter()
        .map(|m| (m.throughput - throughput_mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let throughput_se = (variance / n).sqrt();
    let connections: u64 = per_trial.iter().map(|m| m.satisfied_connections).sum();
    let fidelity_mean = if connections == 0 {
        0.0
    } else {
        per_trial.iter().map(|m| m.fidelity_weight).sum::<f64>() / connections as f64
    };
    MetricsRow {
        algorithm,
        sweep_param: config.sweep_param().to_string(),
        sweep_value: config.sweep_value(point),
        throughput_mean,
        throughput_se,
        fidelity_mean,
        utilization_mean: per_trial.iter().map(|m| m.utilization).sum::<f64>() / n,
        denial_rate: per_trial.iter().map(|m| m.denial_rate).sum::<f64>() / n,
        runtime_ms: per_trial.iter().map(|m| m.runtime_ms).sum::<f64>() / n,
    }
}

/// Per-scale mean runtime of one single-pair invocation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RuntimeRow {
    pub nodes: usize,
    pub algorithm: Algorithm,
    pub mean_ms: f64,
}

pub const RUNTIME_CSV_HEADER: &str = "nodes,algorithm,mean_ms";

pub fn runtime_csv(rows: &[RuntimeRow]) -> String {
    let mut out = String::from(RUNTIME_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{},{},{:.3}\n", row.nodes, row.algorithm, row.mean_ms));
    }
    out
}

/// Times the single-pair algorithms on Waxman graphs of the given sizes.
/// Every algorithm sees the same graphs and the same sampled pairs.
pub fn time_algorithms(
    scales: &[usize],
    threshold: f64,
    capacity: u32,
    demand: u32,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<RuntimeRow>> {
    let algorithms = [Algorithm::QPath, Algorithm::QLeap, Algorithm::Baseline];
    let mut rows = Vec::new();
    for &nodes in scales {
        let graph = generate_waxman(&TopologyConfig {
            node_count: nodes,
            capacity,
            rng_seed: seed,
            ..TopologyConfig::default()
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ nodes as u64);
        let pairs = sample_pairs(&mut rng, nodes, repetitions.min(nodes * (nodes - 1) / 2))?;
        let requests: Vec<RoutingRequest> = pairs
            .into_iter()
            .map(|(source, destination)| {
                RoutingRequest::new(source, destination, demand, threshold)
            })
            .collect();
        for algorithm in algorithms {
            let start = Instant::now();
            for request in &requests {
                let config = ExperimentConfig {
                    algorithms: vec![algorithm],
                    ..ExperimentConfig::default()
                };
                run_algorithm(algorithm, &graph, std::slice::from_ref(request), &config, seed);
            }
            let mean_ms = start.elapsed().as_secs_f64() * 1e3 / requests.len() as f64;
            rows.push(RuntimeRow {
                nodes,
                algorithm,
                mean_ms,
            });
        }
    }
    Ok(rows)
}

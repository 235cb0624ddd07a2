use qroute_core::experiments::{prepare_trial, ExperimentConfig, SweepPoint, TopologySource, Algorithm};
use qroute_core::multipair::{allocate, allocate_random, AllocationConfig};
use qroute_core::routing::RouterKind;
use qroute_core::topology::us_backbone;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let capacity: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let pairs: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    let trials: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200);
    let graph_file: Option<String> = args.get(4).cloned();

    let base = match &graph_file {
        Some(path) => qroute_core::topology::load_topology(path).unwrap(),
        None => us_backbone(),
    };
    let config = ExperimentConfig {
        topology: TopologySource::Backbone,
        demand_per_pair: 50,
        algorithms: vec![Algorithm::Alg3Path],
        ..ExperimentConfig::default()
    };
    let point = SweepPoint { threshold: 0.7, capacity, pair_count: pairs };
    let (mut asc, mut rnd, mut g_only, mut s_only) = (0.0, 0.0, 0.0, 0.0);
    for t in 0..trials {
        let seed = 1u64 ^ t;
        let (graph, requests) = prepare_trial(Some(&base), &point, &config, seed).unwrap();
        let mut cfg = AllocationConfig::for_graph(&graph, RouterKind::QPath);
        asc += allocate(&graph, &requests, &cfg).total_throughput();
        rnd += allocate_random(&graph, &requests, &cfg, seed ^ 0xA5A5).total_throughput();
        cfg.alpha_star = 1.0; cfg.beta_star = 0.0;
        g_only += allocate(&graph, &requests, &cfg).total_throughput();
        cfg.alpha_star = 0.0; cfg.beta_star = 1.0;
        s_only += allocate(&graph, &requests, &cfg).total_throughput();
    }
    let n = trials as f64;
    println!("cap={capacity} pairs={pairs} trials={trials}  ascending={:.3} g_only={:.3} s_only={:.3} random={:.3}  ratio={:.4} ratio_g={:.4} ratio_s={:.4}",
        asc/n, g_only/n, s_only/n, rnd/n, asc/rnd, g_only/rnd, s_only/rnd);
}

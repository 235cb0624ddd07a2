use qroute_core::experiments::{prepare_trial, ExperimentConfig, SweepPoint, Algorithm};
use qroute_core::multipair::{allocate, allocate_random, AllocationConfig};
use qroute_core::routing::RouterKind;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let trials: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let file: Option<String> = args.get(2).cloned();
    let base = match &file {
        Some(path) => qroute_core::topology::load_topology(path).unwrap(),
        None => qroute_core::topology::us_backbone(),
    };
    let config = ExperimentConfig { demand_per_pair: 50, algorithms: vec![Algorithm::Alg3Leap], ..ExperimentConfig::default() };
    let point = SweepPoint { threshold: 0.7, capacity: 2, pair_count: 10 };
    for router in [RouterKind::QPath, RouterKind::QLeap] {
        let (mut asc, mut rnd) = (0.0, 0.0);
        for t in 0..trials {
            let seed = 1u64 ^ t;
            let (graph, requests) = prepare_trial(Some(&base), &point, &config, seed).unwrap();
            let cfg = AllocationConfig { router, ..AllocationConfig::for_graph(&graph, router) };
            asc += allocate(&graph, &requests, &cfg).total_throughput();
            rnd += allocate_random(&graph, &requests, &cfg, seed ^ 0xA5A5).total_throughput();
        }
        println!("router={router:?} ascending={:.3} random={:.3} ratio={:.4}", asc/trials as f64, rnd/trials as f64, asc/rnd);
    }
}

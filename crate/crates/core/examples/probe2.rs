use qroute_core::experiments::{prepare_trial, ExperimentConfig, SweepPoint, Algorithm};
use qroute_core::multipair::{allocate, allocate_random, AllocationConfig};
use qroute_core::routing::RouterKind;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let trials: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let base = qroute_core::topology::us_backbone();
    let config = ExperimentConfig {
        demand_per_pair: 50,
        algorithms: vec![Algorithm::Alg3Path],
        ..ExperimentConfig::default()
    };
    let point = SweepPoint { threshold: 0.7, capacity: 2, pair_count: 10 };
    let (mut asc, mut rnd_mean, mut rnd_best, mut rnd_worst) = (0.0, 0.0, 0.0, 0.0);
    for t in 0..trials {
        let seed = 1u64 ^ t;
        let (graph, requests) = prepare_trial(Some(&base), &point, &config, seed).unwrap();
        let cfg = AllocationConfig::for_graph(&graph, RouterKind::QPath);
        asc += allocate(&graph, &requests, &cfg).total_throughput();
        let mut best = f64::MIN; let mut worst = f64::MAX; let mut sum = 0.0;
        for k in 0..50u64 {
            let x = allocate_random(&graph, &requests, &cfg, seed ^ (k*7919+13)).total_throughput();
            best = best.max(x); worst = worst.min(x); sum += x;
        }
        rnd_mean += sum / 50.0; rnd_best += best; rnd_worst += worst;
    }
    let n = trials as f64;
    println!("ascending={:.3}  random_mean={:.3} random_best50={:.3} random_worst50={:.3}",
        asc/n, rnd_mean/n, rnd_best/n, rnd_worst/n);
}

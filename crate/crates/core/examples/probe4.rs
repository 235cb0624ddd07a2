use qroute_core::experiments::{prepare_trial, ExperimentConfig, SweepPoint, Algorithm};
use qroute_core::multipair::{allocate, allocate_random, AllocationConfig};
use qroute_core::routing::RouterKind;

fn se(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let trials: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let file: Option<String> = args.get(2).cloned();
    let base = match &file {
        Some(path) => qroute_core::topology::load_topology(path).unwrap(),
        None => qroute_core::topology::us_backbone(),
    };
    let config = ExperimentConfig { demand_per_pair: 50, algorithms: vec![Algorithm::Alg3Path], ..ExperimentConfig::default() };
    let point = SweepPoint { threshold: 0.7, capacity: 2, pair_count: 10 };
    let (mut dual, mut gons, mut sons, mut rnd) = (vec![], vec![], vec![], vec![]);
    for t in 0..trials {
        let seed = 1u64 ^ t;
        let (graph, requests) = prepare_trial(Some(&base), &point, &config, seed).unwrap();
        let mut cfg = AllocationConfig::for_graph(&graph, RouterKind::QPath);
        dual.push(allocate(&graph, &requests, &cfg).total_throughput());
        rnd.push(allocate_random(&graph, &requests, &cfg, seed ^ 0xA5A5).total_throughput());
        cfg.alpha_star = 1.0; cfg.beta_star = 0.0;
        gons.push(allocate(&graph, &requests, &cfg).total_throughput());
        cfg.alpha_star = 0.0; cfg.beta_star = 1.0;
        sons.push(allocate(&graph, &requests, &cfg).total_throughput());
    }
    let n = trials as f64;
    let m = |xs: &Vec<f64>| xs.iter().sum::<f64>() / n;
    println!("trials={trials} dual={:.3}±{:.3} g={:.3}±{:.3} s={:.3}±{:.3} rnd={:.3}±{:.3}",
        m(&dual), se(&dual), m(&gons), se(&gons), m(&sons), se(&sons), m(&rnd), se(&rnd));
    println!("ratio={:.4}  dual-g={:.3}  dual-s={:.3}  (clause2 needs dual >= single - 1se)",
        m(&dual)/m(&rnd), m(&dual)-m(&gons), m(&dual)-m(&sons));
}

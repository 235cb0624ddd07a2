//! Single-pair routers.
//!
//! `q_path` searches solutions in order of entangled-pair cost: it enumerates
//! paths hop class by hop class, assigns each one a greedy purification
//! decision, and releases queued solutions once the cost bound catches up
//! with them, so the first emitted solution carries the minimum possible
//! per-connection cost. `q_leap` instead repeatedly takes the path with the
//! least fidelity degradation and purifies each edge up to the geometric
//! average the threshold demands, which is much cheaper to compute.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::pathfinding::{best_fidelity_path, min_hops, paths_with_hops, Path};
use crate::purification::{
    cumulative_success_probability, greedy_purification_decision, pumped_fidelity,
    CostTable, PurificationDecision, build_cost_table,
};
use crate::topology::{NetworkGraph, NodeId};

/// Paths enumerated per hop class in `q_path`.
pub const DEFAULT_K_PER_HOP_CLASS: usize = 64;

/// One source-destination demand.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RoutingRequest {
    pub source: NodeId,
    pub destination: NodeId,
    /// Connections requested.
    pub demand: u32,
    /// End-to-end fidelity the connections must reach.
    pub threshold: f64,
}

impl RoutingRequest {
    pub fn new(source: NodeId, destination: NodeId, demand: u32, threshold: f64) -> Self {
        let request = Self {
            source,
            destination,
            demand,
            threshold,
        };
        request.validate();
        request
    }

    fn validate(&self) {
        assert_ne!(self.source, self.destination, "source equals destination");
        assert!(self.demand >= 1, "demand must be at least 1");
        assert!(
            (0.5..1.0).contains(&self.threshold),
            "threshold {} outside [0.5, 1)",
            self.threshold
        );
    }
}

/// Mutable remaining-capacity overlay over an immutable graph.
#[derive(Debug, Clone)]
pub struct ResidualGraph<'g> {
    base: &'g NetworkGraph,
    remaining: Vec<u32>,
}

impl<'g> ResidualGraph<'g> {
    pub fn new(base: &'g NetworkGraph) -> Self {
        Self {
            base,
            remaining: base.edges().iter().map(|e| e.capacity).collect(),
        }
    }

    pub fn base(&self) -> &'g NetworkGraph {
        self.base
    }

    pub fn remaining(&self, edge_index: usize) -> u32 {
        self.remaining[edge_index]
    }

    pub fn subtract(&mut self, edge_index: usize, pairs: u32) {
        assert!(
            pairs <= self.remaining[edge_index],
            "edge {edge_index}: subtracting {pairs} from {}",
            self.remaining[edge_index]
        );
        self.remaining[edge_index] -= pairs;
    }

    /// Entangled pairs consumed so far.
    pub fn consumed(&self) -> u64 {
        self.base
            .edges()
            .iter()
            .zip(&self.remaining)
            .map(|(edge, &rem)| (edge.capacity - rem) as u64)
            .sum()
    }

    /// Subgraph of the edges that still hold at least one pair, with
    /// capacities set to the remaining counts.
    pub fn live_subgraph(&self) -> NetworkGraph {
        let edges: Vec<(NodeId, NodeId, u32, f64)> = self
            .base
            .edges()
            .iter()
            .zip(&self.remaining)
            .filter_map(|(edge, &rem)| (rem >= 1).then_some((edge.u, edge.v, rem, edge.fidelity)))
            .collect();
        NetworkGraph::from_edges(self.base.node_count(), &edges)
            .expect("residual subgraph inherits validity from the base graph")
    }

    /// Subgraph containing the edges that still hold pairs and whose best
    /// reachable fidelity (pumping all remaining pairs) meets `threshold`.
    /// Edge capacities in the returned graph are the remaining counts.
    pub fn feasible_subgraph(&self, threshold: f64) -> NetworkGraph {
        let edges: Vec<(NodeId, NodeId, u32, f64)> = self
            .base
            .edges()
            .iter()
            .zip(&self.remaining)
            .filter_map(|(edge, &rem)| {
                if rem >= 1 && pumped_fidelity(edge.fidelity, rem - 1) >= threshold {
                    Some((edge.u, edge.v, rem, edge.fidelity))
                } else {
                    None
                }
            })
            .collect();
        NetworkGraph::from_edges(self.base.node_count(), &edges)
            .expect("residual subgraph inherits validity from the base graph")
    }
}

/// A routed path with its purification decision and derived quantities.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RoutingSolution {
    pub path: Path,
    /// Purification rounds per path edge.
    pub rounds: PurificationDecision,
    /// Connections served: the path width capped by the residual demand.
    pub served: u32,
    /// End-to-end fidelity after purification.
    pub fidelity: f64,
    /// Expected surviving connections per edge (success probability × served).
    pub per_edge_throughput: Vec<f64>,
    /// Minimum of the per-edge expected throughputs.
    pub expected_throughput: f64,
    /// Entangled pairs consumed per connection.
    pub pair_cost: u32,
}

/// Width of a path under a purification decision: how many end-to-end
/// connections the remaining capacities support.
pub fn solution_width(
    path: &Path,
    decision: &PurificationDecision,
    residual: &ResidualGraph,
) -> u32 {
    let indices = path.edge_indices(residual.base());
    assert_eq!(indices.len(), decision.len());
    indices
        .iter()
        .zip(decision.rounds())
        .map(|(&index, &rounds)| residual.remaining(index) / (rounds + 1))
        .min()
        .expect("path has at least one edge")
}

/// Per-edge and total expected throughput for `served` connections.
pub fn expected_throughput(
    path: &Path,
    decision: &PurificationDecision,
    served: u32,
    graph: &NetworkGraph,
) -> (Vec<f64>, f64) {
    let per_edge: Vec<f64> = path
        .edge_indices(graph)
        .iter()
        .zip(decision.rounds())
        .map(|(&index, &rounds)| {
            cumulative_success_probability(graph.edge(index).fidelity, rounds) * served as f64
        })
        .collect();
    let total = per_edge.iter().copied().fold(f64::INFINITY, f64::min);
    (per_edge, total)
}

/// End-to-end fidelity of a path in `graph` under `decision`.
pub fn path_fidelity(path: &Path, decision: &PurificationDecision, graph: &NetworkGraph) -> f64 {
    path.edge_indices(graph)
        .iter()
        .zip(decision.rounds())
        .map(|(&index, &rounds)| pumped_fidelity(graph.edge(index).fidelity, rounds))
        .product()
}

/// `(initial fidelity, remaining capacity)` per path edge.
fn path_edge_states(
    path: &Path,
    residual: &ResidualGraph,
) -> Vec<(f64, u32)> {
    path.edge_indices(residual.base())
        .iter()
        .map(|&index| (residual.base().edge(index).fidelity, residual.remaining(index)))
        .collect()
}

/// Demand still unserved, charging already-emitted expected throughput
/// rounded up so resources are never over-allocated.
pub(crate) fn residual_demand(demand: u32, throughput_sum: f64) -> u32 {
    demand.saturating_sub(throughput_sum.ceil() as u32)
}

/// Serves a (path, decision) candidate on the residual graph: computes the
/// width, subtracts the consumed pairs and builds the solution record.
/// Returns `None` when the width is zero.
pub(crate) fn serve(
    path: Path,
    decision: PurificationDecision,
    residual: &mut ResidualGraph,
    threshold: f64,
    demand_left: u32,
) -> Option<RoutingSolution> {
    let width = solution_width(&path, &decision, residual);
    if width == 0 || demand_left == 0 {
        return None;
    }
    let served = width.min(demand_left);
    for (&index, &rounds) in path
        .edge_indices(residual.base())
        .iter()
        .zip(decision.rounds())
    {
        residual.subtract(index, served * (rounds + 1));
    }
    let fidelity = path_fidelity(&path, &decision, residual.base());
    assert!(
        fidelity >= threshold,
        "emitted solution violates the fidelity guarantee: {fidelity} < {threshold}"
    );
    let (per_edge_throughput, expected) = expected_throughput(&path, &decision, served, residual.base());
    let pair_cost = decision.pair_cost();
    Some(RoutingSolution {
        path,
        rounds: decision,
        served,
        fidelity,
        per_edge_throughput,
        expected_throughput: expected,
        pair_cost,
    })
}

/// Iterative minimum-cost router. Emits fidelity-guaranteed solutions in
/// non-decreasing per-connection pair cost until the demand is covered or
/// no path remains; the first solution has the minimum achievable cost.
pub fn q_path(
    request: &RoutingRequest,
    residual: &mut ResidualGraph,
    k_per_hop_class: usize,
) -> Vec<RoutingSolution> {
    request.validate();
    let base = residual.base();
    let mut emitted: Vec<RoutingSolution> = Vec::new();
    let mut throughput_sum = 0.0;

    // Queued candidates pop in (pair cost, hops, node sequence) order.
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Candidate {
        cost: u32,
        hops: usize,
        nodes: Vec<NodeId>,
        rounds: Vec<u32>,
    }
    let mut queue: BinaryHeap<Reverse<Candidate>> = BinaryHeap::new();

    let subgraph = residual.feasible_subgraph(request.threshold);
    let Some(min_hop_count) = min_hops(&subgraph, request.source, request.destination) else {
        return emitted;
    };

    let cost_bound = (base.edge_count() as u64) * base.max_capacity() as u64;
    let class_bound = (base.node_count() as u64 - 1).min(cost_bound);

    let pop_and_serve = |queue: &mut BinaryHeap<Reverse<Candidate>>,
                             residual: &mut ResidualGraph,
                             cost_cap: Option<u32>,
                             emitted: &mut Vec<RoutingSolution>,
                             throughput_sum: &mut f64|
     -> bool {
        while queue
            .peek()
            .is_some_and(|Reverse(c)| cost_cap.is_none_or(|cap| c.cost <= cap))
        {
            let Reverse(candidate) = queue.pop().unwrap();
            let demand_left = residual_demand(request.demand, *throughput_sum);
            if demand_left == 0 {
                return true;
            }
            let solution = serve(
                Path::new(candidate.nodes),
                PurificationDecision::new(candidate.rounds),
                residual,
                request.threshold,
                demand_left,
            );
            if let Some(solution) = solution {
                *throughput_sum += solution.expected_throughput;
                emitted.push(solution);
                if residual_demand(request.demand, *throughput_sum) == 0 {
                    return true;
                }
            }
            // Width 0: the queued candidate went stale; drop it.
        }
        false
    };

    for min_cost in min_hop_count as u64..=class_bound {
        let current = residual.feasible_subgraph(request.threshold);
        let class = paths_with_hops(
            &current,
            request.source,
            request.destination,
            min_cost as usize,
            k_per_hop_class,
        );
        for path in &class.paths {
            let states = path_edge_states(path, residual);
            if let Some(decision) = greedy_purification_decision(&states, request.threshold) {
                queue.push(Reverse(Candidate {
                    cost: decision.pair_cost(),
                    hops: path.hop_count(),
                    nodes: path.nodes().to_vec(),
                    rounds: decision.rounds().to_vec(),
                }));
            }
        }
        if pop_and_serve(
            &mut queue,
            residual,
            Some(min_cost as u32),
            &mut emitted,
            &mut throughput_sum,
        ) {
            return emitted;
        }
        if !class.reachable {
            break; // the pair is cut off; only queued candidates remain
        }
    }
    // Hop classes are exhausted; release whatever is still queued in cost
    // order.
    pop_and_serve(&mut queue, residual, None, &mut emitted, &mut throughput_sum);
    emitted
}

/// Q-LEAP Step 3: purify each edge of the path up to the geometric average
/// `threshold^(1/hops)`. Edges that cannot reach the average are pinned at
/// their round limit and the average is re-derived over the rest until it
/// stabilizes. `None` when even that cannot meet the threshold.
fn average_fidelity_decision(
    edges: &[(f64, u32)],
    threshold: f64,
) -> Option<PurificationDecision> {
    let tables: Vec<CostTable> = edges
        .iter()
        .map(|&(f0, capacity)| build_cost_table(f0, capacity))
        .collect();
    let mut pinned = vec![false; edges.len()];
    loop {
        let pinned_product: f64 = tables
            .iter()
            .zip(&pinned)
            .filter(|(_, &p)| p)
            .map(|(table, _)| table.max_fidelity())
            .product();
        let unpinned = pinned.iter().filter(|&&p| !p).count();
        if unpinned == 0 {
            if pinned_product >= threshold {
                break;
            }
            return None;
        }
        let required = (threshold / pinned_product).powf(1.0 / unpinned as f64);
        if required >= 1.0 {
            return None;
        }
        let mut progressed = false;
        for (index, table) in tables.iter().enumerate() {
            if !pinned[index] && table.max_fidelity() < required {
                pinned[index] = true;
                progressed = true;
            }
        }
        if !progressed {
            let rounds = tables
                .iter()
                .zip(&pinned)
                .map(|(table, &is_pinned)| {
                    if is_pinned {
                        table.max_round()
                    } else {
                        (0..=table.max_round())
                            .find(|&round| table.fidelity(round) >= required)
                            .expect("unpinned edge reaches the required average")
                    }
                })
                .collect();
            return Some(PurificationDecision::new(rounds));
        }
    }
    // Every edge pinned at its limit and the product still clears the bar.
    let rounds = tables.iter().map(CostTable::max_round).collect();
    Some(PurificationDecision::new(rounds))
}

/// Low-complexity router: per iteration, route over the best-quality path on
/// the live residual subgraph and purify each edge up to the average the
/// threshold implies.
pub fn q_leap(request: &RoutingRequest, residual: &mut ResidualGraph) -> Vec<RoutingSolution> {
    request.validate();
    let mut emitted: Vec<RoutingSolution> = Vec::new();
    let mut throughput_sum = 0.0;
    for _ in 0..request.demand {
        let demand_left = residual_demand(request.demand, throughput_sum);
        if demand_left == 0 {
            break;
        }
        let current = residual.feasible_subgraph(request.threshold);
        let Some(path) = best_fidelity_path(&current, request.source, request.destination) else {
            break;
        };
        let states = path_edge_states(&path, residual);
        let Some(decision) = average_fidelity_decision(&states, request.threshold) else {
            break;
        };
        match serve(path, decision, residual, request.threshold, demand_left) {
            Some(solution) => {
                throughput_sum += solution.expected_throughput;
                emitted.push(solution);
            }
            None => break,
        }
    }
    emitted
}

/// Which single-pair router drives a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouterKind {
    QPath,
    QLeap,
}

impl RouterKind {
    pub fn run(
        self,
        request: &RoutingRequest,
        residual: &mut ResidualGraph,
        k_per_hop_class: usize,
    ) -> Vec<RoutingSolution> {
        match self {
            RouterKind::QPath => q_path(request, residual, k_per_hop_class),
            RouterKind::QLeap => q_leap(request, residual),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathfinding::all_simple_paths;
    use crate::purification::brute_force_purification_decision;
    use crate::topology::{generate_waxman, TopologyConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_route_graph() -> NetworkGraph {
        // 0─2─1 (2 hops), 0─3─4─1 (strong 3 hops), 0─5─6─1 (weak 3 hops)
        NetworkGraph::from_edges(
            7,
            &[
                (0, 2, 5, 0.9),
                (2, 1, 5, 0.85),
                (0, 3, 5, 0.95),
                (3, 4, 5, 0.95),
                (4, 1, 5, 0.95),
                (0, 5, 5, 0.9),
                (5, 6, 5, 0.9),
                (6, 1, 5, 0.78),
            ],
        )
        .unwrap()
    }

    #[test]
    fn width_uses_remaining_capacity() {
        let graph = NetworkGraph::from_edges(
            4,
            &[(0, 1, 5, 0.9), (1, 2, 4, 0.9), (2, 3, 6, 0.9)],
        )
        .unwrap();
        let residual = ResidualGraph::new(&graph);
        let path = Path::new(vec![0, 1, 2, 3]);
        let decision = PurificationDecision::new(vec![1, 0, 2]);
        assert_eq!(solution_width(&path, &decision, &residual), 2);
        let zeros = PurificationDecision::zeros(3);
        assert_eq!(solution_width(&path, &zeros, &residual), 4);
        let mut drained = ResidualGraph::new(&graph);
        drained.subtract(0, 4);
        let decision = PurificationDecision::new(vec![1, 0, 0]);
        assert_eq!(solution_width(&path, &decision, &drained), 0);
    }

    #[test]
    fn expected_throughput_examples() {
        let graph = NetworkGraph::from_edges(2, &[(0, 1, 5, 0.8)]).unwrap();
        let path = Path::new(vec![0, 1]);
        let (per_edge, total) =
            expected_throughput(&path, &PurificationDecision::new(vec![1]), 2, &graph);
        assert!((per_edge[0] - 1.36).abs() < 1e-12);
        assert!((total - 1.36).abs() < 1e-12);
        let (_, total) = expected_throughput(&path, &PurificationDecision::zeros(1), 3, &graph);
        assert_eq!(total, 3.0);

        let chain = NetworkGraph::from_edges(3, &[(0, 1, 9, 0.8), (1, 2, 9, 0.8)]).unwrap();
        let path = Path::new(vec![0, 1, 2]);
        let (_, total) =
            expected_throughput(&path, &PurificationDecision::new(vec![1, 2]), 1, &chain);
        assert!((total - 0.52).abs() < 1e-12);
    }

    #[test]
    fn q_path_emits_in_cost_order_and_reproduces_walkthrough() {
        let graph = two_route_graph();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 1, 1000, 0.8);
        let solutions = q_path(&request, &mut residual, 64);
        assert_eq!(solutions.len(), 3);

        // The 2-hop path needs one purification round (cost 3) and must not
        // surface before the clean 3-hop path (also cost 3) is discovered.
        assert_eq!(solutions[0].path.nodes(), &[0, 2, 1]);
        assert_eq!(solutions[0].rounds.rounds(), &[0, 1]);
        assert_eq!(solutions[0].pair_cost, 3);
        assert_eq!(solutions[0].served, 2);
        assert_eq!(solutions[1].path.nodes(), &[0, 3, 4, 1]);
        assert_eq!(solutions[1].pair_cost, 3);
        assert_eq!(solutions[1].served, 5);
        assert_eq!(solutions[2].path.nodes(), &[0, 5, 6, 1]);
        assert_eq!(solutions[2].pair_cost, 5);

        let mut last = 0;
        for solution in &solutions {
            assert!(solution.pair_cost >= last);
            last = solution.pair_cost;
            assert!(solution.fidelity >= 0.8);
        }
    }

    #[test]
    fn q_path_stops_once_demand_is_met() {
        let graph = two_route_graph();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 1, 1, 0.8);
        let solutions = q_path(&request, &mut residual, 64);
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].served, 1);
    }

    #[test]
    fn q_path_returns_empty_when_infeasible() {
        let graph = NetworkGraph::from_edges(2, &[(0, 1, 1, 0.75)]).unwrap();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 1, 1, 0.8);
        assert!(q_path(&request, &mut residual, 64).is_empty());
    }

    #[test]
    fn q_path_conserves_capacity() {
        let graph = two_route_graph();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 1, 1000, 0.8);
        let solutions = q_path(&request, &mut residual, 64);
        let mut consumed = vec![0u64; graph.edge_count()];
        for solution in &solutions {
            for (&index, &rounds) in solution
                .path
                .edge_indices(&graph)
                .iter()
                .zip(solution.rounds.rounds())
            {
                consumed[index] += (solution.served * (rounds + 1)) as u64;
            }
        }
        for (index, edge) in graph.edges().iter().enumerate() {
            assert_eq!(
                (edge.capacity - residual.remaining(index)) as u64,
                consumed[index]
            );
        }
    }

    /// Exhaustive minimum pair cost over every (simple path, round vector)
    /// combination meeting the threshold.
    fn brute_force_min_cost(graph: &NetworkGraph, request: &RoutingRequest) -> Option<u32> {
        let mut best: Option<u32> = None;
        for path in all_simple_paths(graph, request.source, request.destination, graph.node_count())
        {
            let states: Vec<(f64, u32)> = path
                .edge_indices(graph)
                .iter()
                .map(|&index| {
                    let edge = graph.edge(index);
                    (edge.fidelity, edge.capacity)
                })
                .collect();
            if let Some(decision) =
                brute_force_purification_decision(&states, request.threshold).unwrap()
            {
                let cost = decision.pair_cost();
                if best.is_none_or(|b| cost < b) {
                    best = Some(cost);
                }
            }
        }
        best
    }

    #[test]
    fn q_path_first_solution_matches_brute_force_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut feasible = 0;
        for seed in 0..40 {
            let config = TopologyConfig {
                node_count: rng.random_range(4..=8),
                capacity: rng.random_range(1..=4),
                rng_seed: 1000 + seed,
                fidelity_mean: 0.85,
                fidelity_stddev: 0.05,
                ..TopologyConfig::default()
            };
            let graph = generate_waxman(&config).unwrap();
            let graph = graph.filter_edges(|_, e| e.fidelity >= 0.743);
            if graph.edge_between(0, 1).is_some() && graph.node_count() < 2 {
                continue;
            }
            let request = RoutingRequest::new(0, graph.node_count() - 1, 1, 0.82);
            let oracle = brute_force_min_cost(&graph, &request);
            let mut residual = ResidualGraph::new(&graph);
            let solutions = q_path(&request, &mut residual, 1024);
            match oracle {
                Some(cost) => {
                    assert!(!solutions.is_empty(), "seed {seed}: router missed a solution");
                    assert_eq!(solutions[0].pair_cost, cost, "seed {seed}");
                    feasible += 1;
                }
                None => assert!(solutions.is_empty(), "seed {seed}"),
            }
        }
        assert!(feasible > 10, "too few feasible instances: {feasible}");
    }

    #[test]
    fn q_leap_purifies_only_edges_below_average() {
        let graph = NetworkGraph::from_edges(3, &[(0, 1, 4, 0.85), (1, 2, 4, 0.95)]).unwrap();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 2, 1, 0.8);
        let solutions = q_leap(&request, &mut residual);
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].rounds.rounds(), &[1, 0]);
        let expected = pumped_fidelity(0.85, 1) * 0.95;
        assert!((solutions[0].fidelity - expected).abs() < 1e-12);
        assert!(solutions[0].fidelity >= 0.8);
    }

    #[test]
    fn q_leap_zero_rounds_when_average_already_met() {
        let graph = NetworkGraph::from_edges(3, &[(0, 1, 4, 0.95), (1, 2, 4, 0.96)]).unwrap();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 2, 1, 0.85);
        let solutions = q_leap(&request, &mut residual);
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].rounds.rounds(), &[0, 0]);
    }

    #[test]
    fn q_leap_moves_to_next_best_path_as_capacity_drains() {
        let graph = NetworkGraph::from_edges(
            4,
            &[
                (0, 2, 1, 0.95),
                (2, 1, 1, 0.95),
                (0, 3, 1, 0.9),
                (3, 1, 1, 0.9),
            ],
        )
        .unwrap();
        let mut residual = ResidualGraph::new(&graph);
        let request = RoutingRequest::new(0, 1, 2, 0.7);
        let solutions = q_leap(&request, &mut residual);
        assert_eq!(solutions.len(), 2);
        assert_eq!(solutions[0].path.nodes(), &[0, 2, 1]);
        assert_eq!(solutions[1].path.nodes(), &[0, 3, 1]);
        for solution in &solutions {
            assert!(solution.fidelity >= 0.7);
        }
    }

    #[test]
    fn q_leap_solution_count_bounded_by_demand() {
        let config = TopologyConfig {
            node_count: 12,
            capacity: 3,
            rng_seed: 5,
            ..TopologyConfig::default()
        };
        let graph = generate_waxman(&config).unwrap();
        let request = RoutingRequest::new(0, 11, 4, 0.7);
        let mut residual = ResidualGraph::new(&graph);
        let solutions = q_leap(&request, &mut residual);
        assert!(solutions.len() <= 4);
    }

    #[test]
    fn average_decision_pins_weak_edges() {
        // 0.72 with capacity 2 tops out at pumped(0.72, 1) ≈ 0.869, below the
        // plain average for a 0.8 threshold over two hops (0.894); the other
        // edge must absorb the slack.
        let decision = average_fidelity_decision(&[(0.72, 2), (0.9, 6)], 0.8).unwrap();
        let pinned = pumped_fidelity(0.72, decision.rounds()[0]);
        let partner = pumped_fidelity(0.9, decision.rounds()[1]);
        assert_eq!(decision.rounds()[0], 1);
        assert!(pinned * partner >= 0.8);
        // Infeasible when both edges are capped too low.
        assert!(average_fidelity_decision(&[(0.72, 2), (0.72, 2)], 0.9).is_none());
    }
}

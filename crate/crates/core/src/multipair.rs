//! Orchestration for multiple source-destination pairs.
//!
//! Every request is first routed on the pristine graph; the candidate
//! solutions then compete for resources through a priority queue ordered by
//! ascending utility, so low-flexibility low-consumption solutions are
//! allocated first. Candidates whose path has lost its capacity trigger a
//! re-route on the residual graph. A seeded random allocation order and the
//! advance-purification baseline serve as comparators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pathfinding::{shortest_path, Path};
use crate::purification::{
    cumulative_success_probability, pumped_fidelity, PurificationDecision,
};
use crate::routing::{
    residual_demand, serve, solution_width, RouterKind, RoutingRequest, RoutingSolution,
    ResidualGraph, DEFAULT_K_PER_HOP_CLASS,
};
use crate::topology::{NetworkGraph, NodeId};

/// Weights and normalization context for utility-ordered allocation.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct AllocationConfig {
    /// Raw weight of the degree-of-freedom term.
    pub alpha_star: f64,
    /// Raw weight of the resource-consumption term.
    pub beta_star: f64,
    pub router: RouterKind,
    /// |E| used for normalization.
    pub edge_count: usize,
    /// Channel capacity used for normalization.
    pub channel_capacity: u32,
    pub k_per_hop_class: usize,
}

impl AllocationConfig {
    /// Config with the default weights (0.5 each), normalized against the
    /// given graph.
    pub fn for_graph(graph: &NetworkGraph, router: RouterKind) -> Self {
        Self {
            alpha_star: 0.5,
            beta_star: 0.5,
            router,
            edge_count: graph.edge_count(),
            channel_capacity: graph.max_capacity().max(1),
            k_per_hop_class: DEFAULT_K_PER_HOP_CLASS,
        }
    }

    /// α = α* / (2|E|)
    pub fn alpha(&self) -> f64 {
        self.alpha_star / (2.0 * self.edge_count as f64)
    }

    /// β = β* / (|E|·C_channel)
    pub fn beta(&self) -> f64 {
        self.beta_star / (self.edge_count as f64 * self.channel_capacity as f64)
    }
}

/// Degree of freedom of a path: the summed neighbor counts of every node on
/// it, endpoints included. A proxy for how re-routable the connection is.
pub fn degree_of_freedom(path: &Path, graph: &NetworkGraph) -> usize {
    path.nodes().iter().map(|&node| graph.degree(node)).sum()
}

/// Entangled pairs one connection along the path consumes: one per edge plus
/// one per purification round.
pub fn resource_consumption(path: &Path, decision: &PurificationDecision) -> u32 {
    assert_eq!(path.hop_count(), decision.len());
    decision.pair_cost()
}

/// Utility of a candidate solution: α·G + β·S with normalized weights.
/// Lower utility is allocated earlier.
pub fn utility(
    path: &Path,
    decision: &PurificationDecision,
    graph: &NetworkGraph,
    config: &AllocationConfig,
) -> f64 {
    config.alpha() * degree_of_freedom(path, graph) as f64
        + config.beta() * resource_consumption(path, decision) as f64
}

/// Per-request outcome of an allocation run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RequestOutcome {
    pub request: RoutingRequest,
    pub solutions: Vec<RoutingSolution>,
    /// Expected throughput credited to the request; only connections meeting
    /// the fidelity threshold count.
    pub throughput: f64,
    /// Connections established with fidelity at or above the threshold.
    pub satisfied_connections: u32,
    /// Σ fidelity × connections over the satisfying solutions.
    pub fidelity_weight: f64,
    /// Connections established below the threshold. Always zero for the
    /// utility-ordered allocator; the baseline reports its failures here.
    pub violations: u32,
}

impl RequestOutcome {
    fn empty(request: RoutingRequest) -> Self {
        Self {
            request,
            solutions: Vec::new(),
            throughput: 0.0,
            satisfied_connections: 0,
            fidelity_weight: 0.0,
            violations: 0,
        }
    }

    /// A request that ended up with no satisfying connection.
    pub fn denied(&self) -> bool {
        self.satisfied_connections == 0
    }
}

/// Result of one allocation run over all requests.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AllocationResult {
    pub outcomes: Vec<RequestOutcome>,
    /// Entangled pairs consumed, including purification overhead.
    pub consumed_pairs: u64,
    /// Entangled pairs the network held at the start.
    pub total_pairs: u64,
}

impl AllocationResult {
    pub fn total_throughput(&self) -> f64 {
        self.outcomes.iter().map(|o| o.throughput).sum()
    }

    pub fn total_satisfied(&self) -> u32 {
        self.outcomes.iter().map(|o| o.satisfied_connections).sum()
    }

    pub fn total_violations(&self) -> u32 {
        self.outcomes.iter().map(|o| o.violations).sum()
    }

    /// Consumed share of the network's entangled pairs.
    pub fn utilization(&self) -> f64 {
        if self.total_pairs == 0 {
            0.0
        } else {
            self.consumed_pairs as f64 / self.total_pairs as f64
        }
    }

    /// Mean end-to-end fidelity weighted by satisfied connections, `None`
    /// when nothing was served.
    pub fn mean_fidelity(&self) -> Option<f64> {
        let connections = self.total_satisfied();
        if connections == 0 {
            return None;
        }
        let weight: f64 = self.outcomes.iter().map(|o| o.fidelity_weight).sum();
        Some(weight / connections as f64)
    }

    pub fn denial_rate(&self) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        let denied = self.outcomes.iter().filter(|o| o.denied()).count();
        denied as f64 / self.outcomes.len() as f64
    }
}

/// How the allocation queue ranks candidates.
enum QueueOrder {
    AscendingUtility,
    // Exercised by tests to demonstrate order sensitivity.
    #[allow(dead_code)]
    DescendingUtility,
    Random(Box<ChaCha8Rng>),
}

impl QueueOrder {
    fn priority(&mut self, utility_value: f64) -> f64 {
        match self {
            QueueOrder::AscendingUtility => utility_value,
            QueueOrder::DescendingUtility => -utility_value,
            QueueOrder::Random(rng) => rng.random::<f64>(),
        }
    }
}

struct QueueEntry {
    priority: f64,
    sequence: u64,
    request_index: usize,
    path: Path,
    rounds: PurificationDecision,
}

/// Utility-ordered greedy allocation across all requests.
pub fn allocate(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    config: &AllocationConfig,
) -> AllocationResult {
    allocate_ordered(graph, requests, config, QueueOrder::AscendingUtility)
}

/// Same machinery with a uniformly random allocation order; the performance
/// benchmark the utility ordering is measured against.
pub fn allocate_random(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    config: &AllocationConfig,
    seed: u64,
) -> AllocationResult {
    allocate_ordered(
        graph,
        requests,
        config,
        QueueOrder::Random(Box::new(ChaCha8Rng::seed_from_u64(seed))),
    )
}

#[cfg(test)]
fn allocate_inverted(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    config: &AllocationConfig,
) -> AllocationResult {
    allocate_ordered(graph, requests, config, QueueOrder::DescendingUtility)
}

fn allocate_ordered(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    config: &AllocationConfig,
    mut order: QueueOrder,
) -> AllocationResult {
    // Min-heap on (priority, sequence); sequence keeps pops deterministic.
    let mut queue: std::collections::BinaryHeap<std::cmp::Reverse<OrderedEntry>> =
        std::collections::BinaryHeap::new();
    let mut sequence = 0u64;
    let mut push = |queue: &mut std::collections::BinaryHeap<std::cmp::Reverse<OrderedEntry>>,
                    order: &mut QueueOrder,
                    request_index: usize,
                    path: Path,
                    rounds: PurificationDecision,
                    utility_graph: &NetworkGraph| {
        let value = utility(&path, &rounds, utility_graph, config);
        queue.push(std::cmp::Reverse(OrderedEntry(QueueEntry {
            priority: order.priority(value),
            sequence,
            request_index,
            path,
            rounds,
        })));
        sequence += 1;
    };

    // Routing path predetermination on the pristine graph, request by request.
    for (index, request) in requests.iter().enumerate() {
        let mut scratch = ResidualGraph::new(graph);
        for solution in config
            .router
            .run(request, &mut scratch, config.k_per_hop_class)
        {
            push(
                &mut queue,
                &mut order,
                index,
                solution.path,
                solution.rounds,
                graph,
            );
        }
    }

    let mut residual = ResidualGraph::new(graph);
    let mut outcomes: Vec<RequestOutcome> = requests
        .iter()
        .map(|&request| RequestOutcome::empty(request))
        .collect();
    let mut satisfied = vec![false; requests.len()];
    // Each request may re-route at most `demand` times.
    let mut reroutes_left: Vec<u32> = requests.iter().map(|r| r.demand).collect();

    while let Some(std::cmp::Reverse(OrderedEntry(entry))) = queue.pop() {
        let index = entry.request_index;
        if satisfied[index] {
            continue;
        }
        let request = &requests[index];
        let demand_left = residual_demand(request.demand, outcomes[index].throughput);
        if demand_left == 0 {
            satisfied[index] = true;
            continue;
        }
        let width = solution_width(&entry.path, &entry.rounds, &residual);
        if width >= 1 {
            let solution = serve(
                entry.path,
                entry.rounds,
                &mut residual,
                request.threshold,
                demand_left,
            )
            .expect("positive width serves at least one connection");
            let outcome = &mut outcomes[index];
            outcome.throughput += solution.expected_throughput;
            outcome.satisfied_connections += solution.served;
            outcome.fidelity_weight += solution.fidelity * solution.served as f64;
            outcome.solutions.push(solution);
            if residual_demand(request.demand, outcome.throughput) == 0 {
                satisfied[index] = true;
            }
        } else {
            // The queued path lost its capacity; try a fresh route on the
            // residual graph and drop the stale entry.
            if reroutes_left[index] == 0 {
                continue;
            }
            reroutes_left[index] -= 1;
            let remaining_request = RoutingRequest {
                demand: demand_left,
                ..*request
            };
            let mut scratch = residual.clone();
            let rerouted = config
                .router
                .run(&remaining_request, &mut scratch, config.k_per_hop_class);
            if let Some(first) = rerouted.into_iter().next() {
                if first.path != entry.path {
                    let live = residual.live_subgraph();
                    push(&mut queue, &mut order, index, first.path, first.rounds, &live);
                }
            }
        }
    }

    AllocationResult {
        outcomes,
        consumed_pairs: residual.consumed(),
        total_pairs: graph.total_pairs(),
    }
}

struct OrderedEntry(QueueEntry);

impl PartialEq for OrderedEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for OrderedEntry {}
impl PartialOrd for OrderedEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrderedEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .priority
            .total_cmp(&other.0.priority)
            .then(self.0.sequence.cmp(&other.0.sequence))
    }
}

/// Routes each request in turn on a shared residual graph with no
/// cross-request coordination: how the single-pair routers behave when handed
/// several requests back to back.
pub fn allocate_sequential(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
    router: RouterKind,
    k_per_hop_class: usize,
) -> AllocationResult {
    let mut residual = ResidualGraph::new(graph);
    let outcomes = requests
        .iter()
        .map(|request| {
            let mut outcome = RequestOutcome::empty(*request);
            for solution in router.run(request, &mut residual, k_per_hop_class) {
                outcome.throughput += solution.expected_throughput;
                outcome.satisfied_connections += solution.served;
                outcome.fidelity_weight += solution.fidelity * solution.served as f64;
                outcome.solutions.push(solution);
            }
            outcome
        })
        .collect();
    AllocationResult {
        outcomes,
        consumed_pairs: residual.consumed(),
        total_pairs: graph.total_pairs(),
    }
}

/// The comparison scheme that purifies before routing: every edge is pumped
/// up-front to the highest threshold any request carries, shrinking its
/// capacity; requests are then routed by plain minimum-hop search and share
/// contended edges proportionally to their demands. End-to-end fidelity is
/// only checked after the fact, so connections may violate their threshold;
/// those are reported as failures.
pub fn baseline_advance_purification(
    graph: &NetworkGraph,
    requests: &[RoutingRequest],
) -> AllocationResult {
    assert!(!requests.is_empty());
    let target = requests
        .iter()
        .map(|r| r.threshold)
        .fold(f64::MIN, f64::max);

    // Advance purification over the whole network.
    struct PurifiedEdge {
        rounds: u32,
        blocks: u32,
        fidelity: f64,
    }
    let mut purified: Vec<Option<PurifiedEdge>> = Vec::with_capacity(graph.edge_count());
    let mut overhead = 0u64;
    let mut survivors: Vec<(NodeId, NodeId, u32, f64)> = Vec::new();
    for edge in graph.edges() {
        let rounds = (0..edge.capacity).find(|&n| pumped_fidelity(edge.fidelity, n) >= target);
        match rounds {
            Some(rounds) => {
                let blocks = edge.capacity / (rounds + 1);
                let fidelity = pumped_fidelity(edge.fidelity, rounds);
                overhead += (blocks * rounds) as u64;
                survivors.push((edge.u, edge.v, blocks, fidelity));
                purified.push(Some(PurifiedEdge {
                    rounds,
                    blocks,
                    fidelity,
                }));
            }
            None => purified.push(None),
        }
    }
    let routed_graph = NetworkGraph::from_edges(graph.node_count(), &survivors)
        .expect("purified edges stay valid");

    // Minimum-hop route per request on the purified graph.
    let paths: Vec<Option<Path>> = requests
        .iter()
        .map(|request| shortest_path(&routed_graph, request.source, request.destination))
        .collect();

    // Proportional share of each contended edge: floors by demand, then the
    // remainder round-robin in descending demand order.
    let mut share_by_edge: Vec<Vec<(usize, u32)>> = vec![Vec::new(); graph.edge_count()];
    let mut users_by_edge: Vec<Vec<usize>> = vec![Vec::new(); graph.edge_count()];
    for (index, path) in paths.iter().enumerate() {
        if let Some(path) = path {
            for &edge_index in &path.edge_indices(graph) {
                users_by_edge[edge_index].push(index);
            }
        }
    }
    for (edge_index, users) in users_by_edge.iter().enumerate() {
        if users.is_empty() {
            continue;
        }
        let blocks = purified[edge_index]
            .as_ref()
            .expect("a routed path only crosses surviving edges")
            .blocks;
        let total_demand: u64 = users.iter().map(|&i| requests[i].demand as u64).sum();
        let mut shares: Vec<(usize, u32)> = users
            .iter()
            .map(|&i| {
                let share = (blocks as u64 * requests[i].demand as u64 / total_demand) as u32;
                (i, share)
            })
            .collect();
        let mut remainder = blocks - shares.iter().map(|&(_, s)| s).sum::<u32>();
        let mut order: Vec<usize> = (0..shares.len()).collect();
        order.sort_by_key(|&slot| (std::cmp::Reverse(requests[shares[slot].0].demand), shares[slot].0));
        let mut cursor = 0;
        while remainder > 0 {
            shares[order[cursor % order.len()]].1 += 1;
            remainder -= 1;
            cursor += 1;
        }
        share_by_edge[edge_index] = shares;
    }

    let mut consumed = overhead;
    let mut outcomes: Vec<RequestOutcome> = requests
        .iter()
        .map(|&request| RequestOutcome::empty(request))
        .collect();
    for (index, path) in paths.iter().enumerate() {
        let Some(path) = path else { continue };
        let request = &requests[index];
        let edge_indices = path.edge_indices(graph);
        let served = edge_indices
            .iter()
            .map(|&edge_index| {
                share_by_edge[edge_index]
                    .iter()
                    .find(|&&(user, _)| user == index)
                    .map(|&(_, share)| share)
                    .unwrap_or(0)
            })
            .min()
            .unwrap_or(0)
            .min(request.demand);
        if served == 0 {
            continue;
        }
        let rounds: Vec<u32> = edge_indices
            .iter()
            .map(|&edge_index| purified[edge_index].as_ref().unwrap().rounds)
            .collect();
        let fidelity: f64 = edge_indices
            .iter()
            .map(|&edge_index| purified[edge_index].as_ref().unwrap().fidelity)
            .product();
        // One purified pair per edge per connection; the pumping overhead was
        // charged network-wide already.
        consumed += (served as u64) * edge_indices.len() as u64;
        let per_edge_throughput: Vec<f64> = edge_indices
            .iter()
            .zip(&rounds)
            .map(|(&edge_index, &rounds)| {
                cumulative_success_probability(graph.edge(edge_index).fidelity, rounds)
                    * served as f64
            })
            .collect();
        let expected = per_edge_throughput
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let outcome = &mut outcomes[index];
        outcome.solutions.push(RoutingSolution {
            path: path.clone(),
            rounds: PurificationDecision::new(rounds),
            served,
            fidelity,
            per_edge_throughput,
            expected_throughput: expected,
            pair_cost: edge_indices.len() as u32,
        });
        if fidelity >= request.threshold {
            outcome.throughput += expected;
            outcome.satisfied_connections += served;
            outcome.fidelity_weight += fidelity * served as f64;
        } else {
            outcome.violations += served;
        }
    }

    AllocationResult {
        outcomes,
        consumed_pairs: consumed,
        total_pairs: graph.total_pairs(),
    }
}

//! Graph-search primitives used by the routers: BFS hop counts, an extended
//! Dijkstra for the multiplicative fidelity metric, and Yen-style enumeration
//! of fixed-hop simple paths.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::topology::{NetworkGraph, NodeId};

/// A simple path, stored as its node sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        assert!(nodes.len() >= 2, "a path joins at least two nodes");
        Self { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    pub fn hop_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Edge indices of the path within `graph`, in path order. Panics if a
    /// hop has no corresponding edge.
    pub fn edge_indices(&self, graph: &NetworkGraph) -> Vec<usize> {
        self.nodes
            .windows(2)
            .map(|pair| {
                graph
                    .edge_between(pair[0], pair[1])
                    .unwrap_or_else(|| panic!("no edge between {} and {}", pair[0], pair[1]))
            })
            .collect()
    }

    /// Product of the initial edge fidelities along the path.
    pub fn fidelity_product(&self, graph: &NetworkGraph) -> f64 {
        self.edge_indices(graph)
            .iter()
            .map(|&index| graph.edge(index).fidelity)
            .product()
    }
}

/// Minimum hop count between two nodes, or `None` when unreachable.
pub fn min_hops(graph: &NetworkGraph, source: NodeId, destination: NodeId) -> Option<usize> {
    assert_ne!(source, destination);
    let mut distance = vec![usize::MAX; graph.node_count()];
    distance[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(node) = queue.pop_front() {
        if node == destination {
            return Some(distance[node]);
        }
        for &(next, _) in graph.neighbors(node) {
            if distance[next] == usize::MAX {
                distance[next] = distance[node] + 1;
                queue.push_back(next);
            }
        }
    }
    None
}

/// Path maximizing the product of edge fidelities between `source` and
/// `destination`.
///
/// Runs Dijkstra over log-transformed weights (maximizing a product of
/// values in (0, 1) equals minimizing the sum of their negated logs; the
/// metric is monotone, so greedy settlement is exact). Ties are broken by
/// fewer hops, then by smaller predecessor id.
pub fn best_fidelity_path(
    graph: &NetworkGraph,
    source: NodeId,
    destination: NodeId,
) -> Option<Path> {
    assert_ne!(source, destination);
    let n = graph.node_count();
    // Per node: (neg-log cost, hops, predecessor).
    let mut label: Vec<Option<(f64, usize, NodeId)>> = vec![None; n];
    label[source] = Some((0.0, 0, source));

    struct Item {
        cost: f64,
        hops: usize,
        node: NodeId,
    }
    impl PartialEq for Item {
        fn eq(&self, other: &Self) -> bool {
            self.cmp(other).is_eq()
        }
    }
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.cost
                .total_cmp(&other.cost)
                .then(self.hops.cmp(&other.hops))
                .then(self.node.cmp(&other.node))
        }
    }

    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Item {
        cost: 0.0,
        hops: 0,
        node: source,
    }));
    while let Some(Reverse(item)) = heap.pop() {
        let (cost, hops, _) = label[item.node].unwrap();
        if item.cost > cost || (item.cost == cost && item.hops > hops) {
            continue; // stale entry
        }
        if item.node == destination {
            break;
        }
        for &(next, edge_index) in graph.neighbors(item.node) {
            let weight = -graph.edge(edge_index).fidelity.ln();
            let candidate = (item.cost + weight, item.hops + 1, item.node);
            let improves = match label[next] {
                None => true,
                Some((c, h, p)) => {
                    candidate.0 < c
                        || (candidate.0 == c
                            && (candidate.1 < h || (candidate.1 == h && candidate.2 < p)))
                }
            };
            if improves {
                label[next] = Some(candidate);
                heap.push(Reverse(Item {
                    cost: candidate.0,
                    hops: candidate.1,
                    node: next,
                }));
            }
        }
    }

    label[destination]?;
    let mut nodes = vec![destination];
    let mut node = destination;
    while node != source {
        node = label[node].unwrap().2;
        nodes.push(node);
    }
    nodes.reverse();
    Some(Path::new(nodes))
}

/// Result of a fixed-hop-count enumeration.
#[derive(Debug, Clone)]
pub struct HopPaths {
    /// Simple paths with exactly the requested hop count, in lexicographic
    /// node order, truncated at the limit.
    pub paths: Vec<Path>,
    /// False when the destination cannot be reached at all, i.e. no simple
    /// path of any length exists.
    pub reachable: bool,
}

/// Enumerates simple paths with exactly `hops` hops, lexicographically, up
/// to `limit` paths.
///
/// Depth-first search pruned by the BFS distance to the destination; a
/// branch is abandoned as soon as the target length becomes unreachable.
/// A step budget proportional to `limit` bounds the work on dense graphs,
/// so a truncated result may miss paths beyond the budget.
pub fn paths_with_hops(
    graph: &NetworkGraph,
    source: NodeId,
    destination: NodeId,
    hops: usize,
    limit: usize,
) -> HopPaths {
    assert!(hops >= 1 && limit >= 1);
    assert_ne!(source, destination);
    let distance = bfs_distances(graph, destination);
    if distance[source] == usize::MAX {
        return HopPaths {
            paths: Vec::new(),
            reachable: false,
        };
    }
    let mut paths = Vec::new();
    if distance[source] <= hops {
        let mut on_path = vec![false; graph.node_count()];
        on_path[source] = true;
        let mut stack = vec![source];
        let mut steps = limit.saturating_mul(256).max(4096);
        dfs_exact_length(
            graph,
            destination,
            hops,
            limit,
            &distance,
            &mut stack,
            &mut on_path,
            &mut steps,
            &mut paths,
        );
    }
    HopPaths {
        paths,
        reachable: true,
    }
}

/// Returns false when the search was cut short (limit or budget).
#[allow(clippy::too_many_arguments)]
fn dfs_exact_length(
    graph: &NetworkGraph,
    destination: NodeId,
    hops: usize,
    limit: usize,
    distance: &[usize],
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
    steps: &mut usize,
    paths: &mut Vec<Path>,
) -> bool {
    let node = *stack.last().unwrap();
    if node == destination {
        paths.push(Path::new(stack.clone()));
        return paths.len() < limit;
    }
    let next_hops = stack.len(); // hop count after one more step
    for &(next, _) in graph.neighbors(node) {
        if on_path[next] || next_hops + distance[next] > hops {
            continue;
        }
        if next == destination && next_hops != hops {
            continue; // would end the path short of the target length
        }
        if *steps == 0 {
            return false;
        }
        *steps -= 1;
        stack.push(next);
        on_path[next] = true;
        let keep_going =
            dfs_exact_length(graph, destination, hops, limit, distance, stack, on_path, steps, paths);
        stack.pop();
        on_path[next] = false;
        if !keep_going {
            return false;
        }
    }
    true
}

/// BFS hop distances from every node to `target`.
fn bfs_distances(graph: &NetworkGraph, target: NodeId) -> Vec<usize> {
    let mut distance = vec![usize::MAX; graph.node_count()];
    distance[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(node) = queue.pop_front() {
        for &(next, _) in graph.neighbors(node) {
            if distance[next] == usize::MAX {
                distance[next] = distance[node] + 1;
                queue.push_back(next);
            }
        }
    }
    distance
}

/// Deterministic BFS minimum-hop path, or `None` when unreachable.
pub fn shortest_path(graph: &NetworkGraph, source: NodeId, destination: NodeId) -> Option<Path> {
    assert_ne!(source, destination);
    let mut parent: Vec<Option<NodeId>> = vec![None; graph.node_count()];
    parent[source] = Some(source);
    let mut queue = VecDeque::from([source]);
    while let Some(node) = queue.pop_front() {
        if node == destination {
            let mut nodes = vec![destination];
            let mut step = destination;
            while step != source {
                step = parent[step].unwrap();
                nodes.push(step);
            }
            nodes.reverse();
            return Some(Path::new(nodes));
        }
        for &(next, _) in graph.neighbors(node) {
            if parent[next].is_none() {
                parent[next] = Some(node);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Exhaustively enumerates every simple path from `source` to `destination`
/// with at most `max_hops` hops, in lexicographic order. Plain DFS; intended
/// for small graphs and as an independent check of the search routines above.
pub fn all_simple_paths(
    graph: &NetworkGraph,
    source: NodeId,
    destination: NodeId,
    max_hops: usize,
) -> Vec<Path> {
    assert_ne!(source, destination);
    let mut found = Vec::new();
    let mut on_path = vec![false; graph.node_count()];
    let mut stack = vec![source];
    on_path[source] = true;
    dfs_paths(graph, destination, max_hops, &mut stack, &mut on_path, &mut found);
    found
}

fn dfs_paths(
    graph: &NetworkGraph,
    destination: NodeId,
    max_hops: usize,
    stack: &mut Vec<NodeId>,
    on_path: &mut Vec<bool>,
    found: &mut Vec<Path>,
) {
    let node = *stack.last().unwrap();
    if node == destination {
        found.push(Path::new(stack.clone()));
        return;
    }
    if stack.len() > max_hops {
        return;
    }
    for &(next, _) in graph.neighbors(node) {
        if on_path[next] {
            continue;
        }
        stack.push(next);
        on_path[next] = true;
        dfs_paths(graph, destination, max_hops, stack, on_path, found);
        stack.pop();
        on_path[next] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{generate_waxman, TopologyConfig};

    fn line_graph(fidelity: f64) -> NetworkGraph {
        NetworkGraph::from_edges(
            4,
            &[
                (0, 1, 2, fidelity),
                (1, 2, 2, fidelity),
                (2, 3, 2, fidelity),
            ],
        )
        .unwrap()
    }

    #[test]
    fn min_hops_basics() {
        let triangle =
            NetworkGraph::from_edges(3, &[(0, 1, 1, 0.8), (1, 2, 1, 0.8), (0, 2, 1, 0.8)]).unwrap();
        assert_eq!(min_hops(&triangle, 0, 1), Some(1));
        let line = line_graph(0.8);
        assert_eq!(min_hops(&line, 0, 3), Some(3));
        let split = NetworkGraph::from_edges(4, &[(0, 1, 1, 0.8), (2, 3, 1, 0.8)]).unwrap();
        assert_eq!(min_hops(&split, 0, 3), None);
    }

    #[test]
    fn best_fidelity_prefers_higher_product() {
        // 0-2-1 carries 0.9·0.9 = 0.81, 0-3-1 carries 0.95·0.8 = 0.76.
        let graph = NetworkGraph::from_edges(
            4,
            &[
                (0, 2, 1, 0.9),
                (2, 1, 1, 0.9),
                (0, 3, 1, 0.95),
                (3, 1, 1, 0.8),
            ],
        )
        .unwrap();
        let path = best_fidelity_path(&graph, 0, 1).unwrap();
        assert_eq!(path.nodes(), &[0, 2, 1]);
        assert!((path.fidelity_product(&graph) - 0.81).abs() < 1e-12);
    }

    #[test]
    fn best_fidelity_single_route() {
        let line = line_graph(0.9);
        let path = best_fidelity_path(&line, 0, 3).unwrap();
        assert_eq!(path.nodes(), &[0, 1, 2, 3]);
        assert!(best_fidelity_path(&line_graph(0.9), 3, 0).is_some());
        let split = NetworkGraph::from_edges(4, &[(0, 1, 1, 0.8), (2, 3, 1, 0.8)]).unwrap();
        assert!(best_fidelity_path(&split, 0, 3).is_none());
    }

    #[test]
    fn best_fidelity_matches_enumeration_on_random_graphs() {
        for seed in 0..20 {
            let config = TopologyConfig {
                node_count: 6,
                rng_seed: seed,
                capacity: 3,
                ..TopologyConfig::default()
            };
            let graph = generate_waxman(&config).unwrap();
            let best = best_fidelity_path(&graph, 0, 5).unwrap();
            let oracle = all_simple_paths(&graph, 0, 5, graph.node_count())
                .iter()
                .map(|p| p.fidelity_product(&graph))
                .fold(f64::MIN, f64::max);
            let product = best.fidelity_product(&graph);
            assert!(
                ((product - oracle) / oracle).abs() < 1e-12,
                "seed {seed}: {product} vs {oracle}"
            );
        }
    }

    #[test]
    fn hop_paths_on_line() {
        let graph = NetworkGraph::from_edges(3, &[(0, 1, 1, 0.8), (1, 2, 1, 0.8)]).unwrap();
        let result = paths_with_hops(&graph, 0, 2, 2, 16);
        assert_eq!(result.paths.len(), 1);
        assert_eq!(result.paths[0].nodes(), &[0, 1, 2]);
        assert!(result.reachable);
    }

    #[test]
    fn hop_paths_on_cycle() {
        let graph = NetworkGraph::from_edges(
            4,
            &[
                (0, 1, 1, 0.8),
                (1, 2, 1, 0.8),
                (2, 3, 1, 0.8),
                (0, 3, 1, 0.8),
            ],
        )
        .unwrap();
        let result = paths_with_hops(&graph, 0, 2, 2, 16);
        let nodes: Vec<&[usize]> = result.paths.iter().map(Path::nodes).collect();
        assert_eq!(nodes, vec![&[0, 1, 2], &[0, 3, 2]]);
        // No path of one hop, but longer ones exist.
        let shorter = paths_with_hops(&graph, 0, 2, 1, 16);
        assert!(shorter.paths.is_empty());
        assert!(shorter.reachable);
        // Disconnected pairs report unreachability.
        let split = NetworkGraph::from_edges(4, &[(0, 1, 1, 0.8), (2, 3, 1, 0.8)]).unwrap();
        assert!(!paths_with_hops(&split, 0, 3, 2, 16).reachable);
    }

    #[test]
    fn hop_paths_match_dfs_enumeration() {
        for seed in 0..15 {
            let config = TopologyConfig {
                node_count: 7,
                rng_seed: 100 + seed,
                capacity: 3,
                ..TopologyConfig::default()
            };
            let graph = generate_waxman(&config).unwrap();
            for hops in 1..=4 {
                let yen = paths_with_hops(&graph, 0, 6, hops, 10_000);
                let mut oracle: Vec<Path> = all_simple_paths(&graph, 0, 6, hops)
                    .into_iter()
                    .filter(|p| p.hop_count() == hops)
                    .collect();
                oracle.sort_unstable();
                assert_eq!(yen.paths, oracle, "seed {seed}, hops {hops}");
            }
        }
    }

    #[test]
    fn min_hops_agrees_with_first_nonempty_class() {
        let config = TopologyConfig {
            node_count: 8,
            rng_seed: 9,
            capacity: 3,
            ..TopologyConfig::default()
        };
        let graph = generate_waxman(&config).unwrap();
        let shortest = min_hops(&graph, 0, 7).unwrap();
        for hops in 1..shortest {
            assert!(paths_with_hops(&graph, 0, 7, hops, 64).paths.is_empty());
        }
        assert!(!paths_with_hops(&graph, 0, 7, shortest, 64).paths.is_empty());
    }
}

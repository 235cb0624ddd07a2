//! Network graph model, random/backbone topology construction and file I/O.
//!
//! A topology is an undirected capacitated graph. Each edge carries the
//! number of entangled pairs available per routing epoch and the initial
//! fidelity those pairs are generated with.
//!
//! Topology file format (UTF-8, `#` comments, whitespace-separated):
//!
//! ```text
//! N <id> [<x_km> <y_km>]
//! E <u> <v> <capacity> <fidelity>
//! ```
//!
//! Node ids must be the contiguous range `0..|V|`. Fidelities are written
//! with at least six decimal digits and survive a load/save/load round trip
//! bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::purification::pumped_fidelity;

/// Dense node index, contiguous `0..|V|` within a graph.
pub type NodeId = usize;

/// Upper clamp for generated fidelities; 1.0 is physically degenerate.
pub const FIDELITY_CLAMP_MAX: f64 = 0.99;

/// Bound on regeneration attempts for disconnected random topologies.
pub const MAX_GENERATION_ATTEMPTS: u32 = 100;

/// Undirected edge between two nodes. Endpoints are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    /// Entangled pairs available per epoch.
    pub capacity: u32,
    /// Fidelity of freshly generated pairs, in [0.5, 1).
    pub fidelity: f64,
}

impl Edge {
    /// The endpoint that is not `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable undirected capacitated graph with per-edge initial fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGraph {
    node_count: usize,
    coords: Option<Vec<(f64, f64)>>,
    edges: Vec<Edge>,
    /// Per node: (neighbor, edge index), sorted by neighbor id.
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl NetworkGraph {
    /// Builds a graph from an edge list, validating every structural
    /// invariant (no self-loops, no duplicate edges, capacities ≥ 1,
    /// fidelities in [0.5, 1)).
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId, u32, f64)]) -> Result<Self> {
        Self::build(node_count, None, edges)
    }

    /// Same as [`from_edges`](Self::from_edges) with planar coordinates (km).
    pub fn with_coords(
        node_count: usize,
        coords: Vec<(f64, f64)>,
        edges: &[(NodeId, NodeId, u32, f64)],
    ) -> Result<Self> {
        if coords.len() != node_count {
            return Err(Error::Config(format!(
                "{} coordinates for {node_count} nodes",
                coords.len()
            )));
        }
        Self::build(node_count, Some(coords), edges)
    }

    fn build(
        node_count: usize,
        coords: Option<Vec<(f64, f64)>>,
        edges: &[(NodeId, NodeId, u32, f64)],
    ) -> Result<Self> {
        let mut graph = Self {
            node_count,
            coords,
            edges: Vec::with_capacity(edges.len()),
            adjacency: vec![Vec::new(); node_count],
        };
        for &(u, v, capacity, fidelity) in edges {
            graph.push_edge(u, v, capacity, fidelity).map_err(|msg| Error::Config(msg))?;
        }
        graph.sort_adjacency();
        Ok(graph)
    }

    fn push_edge(&mut self, u: NodeId, v: NodeId, capacity: u32, fidelity: f64) -> std::result::Result<(), String> {
        if u >= self.node_count || v >= self.node_count {
            return Err(format!("edge ({u},{v}) references a node outside 0..{}", self.node_count));
        }
        if u == v {
            return Err(format!("self-loop on node {u}"));
        }
        if capacity == 0 {
            return Err(format!("edge ({u},{v}) has zero capacity"));
        }
        if !(0.5..1.0).contains(&fidelity) {
            return Err(format!("edge ({u},{v}) fidelity {fidelity} outside [0.5, 1)"));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.adjacency[a].iter().any(|&(n, _)| n == b) {
            return Err(format!("duplicate edge ({a},{b})"));
        }
        let index = self.edges.len();
        self.edges.push(Edge {
            u: a,
            v: b,
            capacity,
            fidelity,
        });
        self.adjacency[a].push((b, index));
        self.adjacency[b].push((a, index));
        Ok(())
    }

    fn sort_adjacency(&mut self) {
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    /// `(neighbor, edge index)` pairs for `node`, sorted by neighbor id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Index of the edge joining `u` and `v`, if present.
    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.adjacency[u]
            .binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|slot| self.adjacency[u][slot].1)
    }

    /// Total entangled pairs in the network (sum of capacities).
    pub fn total_pairs(&self) -> u64 {
        self.edges.iter().map(|e| e.capacity as u64).sum()
    }

    pub fn max_capacity(&self) -> u32 {
        self.edges.iter().map(|e| e.capacity).max().unwrap_or(0)
    }

    /// True when every node reaches every other node.
    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(node) = stack.pop() {
            for &(next, _) in &self.adjacency[node] {
                if !seen[next] {
                    seen[next] = true;
                    reached += 1;
                    stack.push(next);
                }
            }
        }
        reached == self.node_count
    }

    /// Copy of the graph keeping only edges accepted by `keep`. Nodes and
    /// coordinates are preserved, so node ids remain stable.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, &Edge) -> bool) -> Self {
        let mut graph = Self {
            node_count: self.node_count,
            coords: self.coords.clone(),
            edges: Vec::new(),
            adjacency: vec![Vec::new(); self.node_count],
        };
        for (index, edge) in self.edges.iter().enumerate() {
            if keep(index, edge) {
                graph
                    .push_edge(edge.u, edge.v, edge.capacity, edge.fidelity)
                    .expect("filtered edge is valid in the source graph");
            }
        }
        graph.sort_adjacency();
        graph
    }

    /// Copy with every edge capacity set to `capacity`.
    pub fn with_uniform_capacity(&self, capacity: u32) -> Self {
        assert!(capacity >= 1);
        let mut graph = self.clone();
        for edge in &mut graph.edges {
            edge.capacity = capacity;
        }
        graph
    }

    /// Copy with fresh initial fidelities drawn from the clamped normal
    /// distribution, one per edge in edge order.
    pub fn with_random_fidelities(
        &self,
        rng: &mut ChaCha8Rng,
        mean: f64,
        stddev: f64,
    ) -> Self {
        let mut graph = self.clone();
        for edge in &mut graph.edges {
            edge.fidelity = clamped_normal_fidelity(rng, mean, stddev);
        }
        graph
    }

    /// Serializes the graph in the topology file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} nodes, {} edges", self.node_count, self.edges.len());
        for id in 0..self.node_count {
            match &self.coords {
                Some(coords) => {
                    let (x, y) = coords[id];
                    let _ = writeln!(out, "N {id} {} {}", format_float(x, 3), format_float(y, 3));
                }
                None => {
                    let _ = writeln!(out, "N {id}");
                }
            }
        }
        for edge in &self.edges {
            let _ = writeln!(
                out,
                "E {} {} {} {}",
                edge.u,
                edge.v,
                edge.capacity,
                format_float(edge.fidelity, 6)
            );
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Fixed decimal places when lossless, shortest round-trip form otherwise.
fn format_float(value: f64, decimals: usize) -> String {
    let fixed = format!("{value:.decimals$}");
    if fixed.parse::<f64>() == Ok(value) {
        fixed
    } else {
        format!("{value}")
    }
}

/// One fidelity sample from N(mean, stddev) clamped into
/// [0.5, [`FIDELITY_CLAMP_MAX`]].
pub fn clamped_normal_fidelity(rng: &mut ChaCha8Rng, mean: f64, stddev: f64) -> f64 {
    let normal = Normal::new(mean, stddev).expect("valid normal parameters");
    normal.sample(rng).clamp(0.5, FIDELITY_CLAMP_MAX)
}

/// Parameters for Waxman random topology generation.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct TopologyConfig {
    pub node_count: usize,
    /// Waxman κ: scales every connection probability.
    pub kappa: f64,
    /// Waxman γ: larger values favour long edges.
    pub gamma: f64,
    pub area_side_km: f64,
    /// Uniform channel capacity assigned to every edge.
    pub capacity: u32,
    pub fidelity_mean: f64,
    pub fidelity_stddev: f64,
    pub rng_seed: u64,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        Self {
            node_count: 100,
            kappa: 0.8,
            gamma: 0.5,
            area_side_km: 2000.0,
            capacity: 50,
            fidelity_mean: 0.8,
            fidelity_stddev: 0.1,
            rng_seed: 1,
        }
    }
}

impl TopologyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(Error::Config("node_count must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.kappa) || self.kappa == 0.0 {
            return Err(Error::Config(format!("kappa {} outside (0, 1]", self.kappa)));
        }
        if !(0.0..=1.0).contains(&self.gamma) || self.gamma == 0.0 {
            return Err(Error::Config(format!("gamma {} outside (0, 1]", self.gamma)));
        }
        if self.area_side_km < 0.0 {
            return Err(Error::Config("area_side_km must be non-negative".into()));
        }
        if self.capacity == 0 {
            return Err(Error::Config("capacity must be at least 1".into()));
        }
        if !(0.5..=FIDELITY_CLAMP_MAX).contains(&self.fidelity_mean) {
            return Err(Error::Config(format!(
                "fidelity_mean {} outside [0.5, {FIDELITY_CLAMP_MAX}]",
                self.fidelity_mean
            )));
        }
        if self.fidelity_stddev < 0.0 {
            return Err(Error::Config("fidelity_stddev must be non-negative".into()));
        }
        Ok(())
    }
}

/// Generates a connected Waxman random graph: nodes placed uniformly in a
/// square, each pair connected independently with probability
/// κ·exp(−d(u,v) / (L·γ)) where L is the largest pairwise distance.
/// Disconnected draws are retried with derived seeds, bounded by
/// [`MAX_GENERATION_ATTEMPTS`].
pub fn generate_waxman(config: &TopologyConfig) -> Result<NetworkGraph> {
    config.validate()?;
    let n = config.node_count;
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed.wrapping_add(attempt as u64));
        let coords: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                (
                    rng.random::<f64>() * config.area_side_km,
                    rng.random::<f64>() * config.area_side_km,
                )
            })
            .collect();
        let mut max_distance = 0.0_f64;
        for u in 0..n {
            for v in (u + 1)..n {
                max_distance = max_distance.max(distance(coords[u], coords[v]));
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let d = distance(coords[u], coords[v]);
                // d = 0 (and the all-coincident L = 0 case) connect with
                // probability κ.
                let probability = if d <= 0.0 || max_distance <= 0.0 {
                    config.kappa
                } else {
                    config.kappa * (-d / (max_distance * config.gamma)).exp()
                };
                if rng.random::<f64>() < probability {
                    let fidelity =
                        clamped_normal_fidelity(&mut rng, config.fidelity_mean, config.fidelity_stddev);
                    edges.push((u, v, config.capacity, fidelity));
                }
            }
        }
        let graph = NetworkGraph::with_coords(n, coords, &edges)?;
        if graph.is_connected() {
            return Ok(graph);
        }
    }
    Err(Error::Disconnected {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Parses the topology file format from a string; `origin` names the source
/// in errors.
pub fn parse_topology(text: &str, origin: &str) -> Result<NetworkGraph> {
    let mut node_ids: Vec<NodeId> = Vec::new();
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut edges: Vec<(NodeId, NodeId, u32, f64, usize)> = Vec::new();

    let fail = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };

    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "N" => {
                if fields.len() != 2 && fields.len() != 4 {
                    return Err(fail(line, "node line needs `N <id>` or `N <id> <x> <y>`".into()));
                }
                let id: NodeId = fields[1]
                    .parse()
                    .map_err(|_| fail(line, format!("invalid node id `{}`", fields[1])))?;
                let coord = if fields.len() == 4 {
                    let x: f64 = fields[2]
                        .parse()
                        .map_err(|_| fail(line, format!("invalid coordinate `{}`", fields[2])))?;
                    let y: f64 = fields[3]
                        .parse()
                        .map_err(|_| fail(line, format!("invalid coordinate `{}`", fields[3])))?;
                    Some((x, y))
                } else {
                    None
                };
                node_ids.push(id);
                coords.push(coord);
            }
            "E" => {
                if fields.len() != 5 {
                    return Err(fail(line, "edge line needs `E <u> <v> <capacity> <fidelity>`".into()));
                }
                let u: NodeId = fields[1]
                    .parse()
                    .map_err(|_| fail(line, format!("invalid node id `{}`", fields[1])))?;
                let v: NodeId = fields[2]
                    .parse()
                    .map_err(|_| fail(line, format!("invalid node id `{}`", fields[2])))?;
                let capacity: u32 = fields[3]
                    .parse()
                    .map_err(|_| fail(line, format!("invalid capacity `{}`", fields[3])))?;
                let fidelity: f64 = fields[4]
                    .parse()
                    .map_err(|_| fail(line, format!("invalid fidelity `{}`", fields[4])))?;
                edges.push((u, v, capacity, fidelity, line));
            }
            other => {
                return Err(fail(line, format!("unknown record type `{other}`")));
            }
        }
    }

    let node_count = node_ids.len();
    let mut seen = vec![false; node_count];
    for &id in &node_ids {
        if id >= node_count || seen[id] {
            return Err(fail(0, format!("node ids must be the contiguous range 0..{node_count}")));
        }
        seen[id] = true;
    }
    let with_geometry = coords.iter().filter(|c| c.is_some()).count();
    let geometry = if with_geometry == node_count && node_count > 0 {
        let mut ordered = vec![(0.0, 0.0); node_count];
        for (&id, coord) in node_ids.iter().zip(&coords) {
            ordered[id] = coord.unwrap();
        }
        Some(ordered)
    } else if with_geometry == 0 {
        None
    } else {
        return Err(fail(0, "either all or no node lines may carry coordinates".into()));
    };

    let mut graph = NetworkGraph {
        node_count,
        coords: geometry,
        edges: Vec::with_capacity(edges.len()),
        adjacency: vec![Vec::new(); node_count],
    };
    for (u, v, capacity, fidelity, line) in edges {
        graph
            .push_edge(u, v, capacity, fidelity)
            .map_err(|msg| fail(line, msg))?;
    }
    graph.sort_adjacency();
    Ok(graph)
}

/// Loads a topology from a file.
pub fn load_topology(path: impl AsRef<Path>) -> Result<NetworkGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_topology(&text, &path.display().to_string())
}

/// The bundled US-backbone-style topology (122 edges) used by the default
/// experiment configurations.
pub fn us_backbone() -> NetworkGraph {
    parse_topology(include_str!("../data/us_backbone.txt"), "us_backbone.txt")
        .expect("bundled backbone topology is valid")
}

/// Copy of `graph` keeping exactly the edges whose best reachable fidelity
/// (all capacity spent on pumping) meets `threshold`. May disconnect parts of
/// the graph; routing layers treat that as unreachability.
pub fn prune_infeasible_edges(graph: &NetworkGraph, threshold: f64) -> NetworkGraph {
    graph.filter_edges(|_, edge| pumped_fidelity(edge.fidelity, edge.capacity - 1) >= threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn triangle() -> NetworkGraph {
        NetworkGraph::from_edges(
            3,
            &[
                (0, 1, 5, 0.8),
                (1, 2, 5, 0.8),
                (0, 2, 5, 0.8),
            ],
        )
        .unwrap()
    }

    #[test]
    fn from_edges_builds_adjacency() {
        let graph = triangle();
        assert_eq!(graph.node_count(), 3);
        assert_eq!(graph.edge_count(), 3);
        assert_eq!(graph.degree(1), 2);
        assert_eq!(graph.neighbors(0), &[(1, 0), (2, 2)]);
        assert_eq!(graph.edge_between(2, 1), Some(1));
        assert_eq!(graph.edge_between(0, 0), None);
        assert!(graph.is_connected());
    }

    #[test]
    fn invalid_edges_rejected() {
        assert!(NetworkGraph::from_edges(2, &[(0, 0, 1, 0.8)]).is_err());
        assert!(NetworkGraph::from_edges(2, &[(0, 1, 0, 0.8)]).is_err());
        assert!(NetworkGraph::from_edges(2, &[(0, 1, 1, 0.4)]).is_err());
        assert!(NetworkGraph::from_edges(2, &[(0, 1, 1, 1.0)]).is_err());
        assert!(NetworkGraph::from_edges(2, &[(0, 1, 1, 0.8), (1, 0, 1, 0.8)]).is_err());
        assert!(NetworkGraph::from_edges(2, &[(0, 3, 1, 0.8)]).is_err());
    }

    #[test]
    fn waxman_coincident_nodes_always_connect() {
        let config = TopologyConfig {
            node_count: 2,
            kappa: 1.0,
            gamma: 1.0,
            area_side_km: 0.0,
            ..TopologyConfig::default()
        };
        let graph = generate_waxman(&config).unwrap();
        assert_eq!(graph.edge_count(), 1);
    }

    #[test]
    fn waxman_is_deterministic_per_seed() {
        let config = TopologyConfig {
            node_count: 30,
            rng_seed: 11,
            ..TopologyConfig::default()
        };
        let a = generate_waxman(&config).unwrap();
        let b = generate_waxman(&config).unwrap();
        assert_eq!(a, b);
        assert!(a.is_connected());
        assert!(a
            .edges()
            .iter()
            .all(|e| (0.5..=FIDELITY_CLAMP_MAX).contains(&e.fidelity)));
    }

    #[test]
    fn clamped_fidelity_mean_stays_close_to_nominal() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let samples = 100_000;
        let mut sum = 0.0;
        for _ in 0..samples {
            let x = clamped_normal_fidelity(&mut rng, 0.8, 0.1);
            assert!((0.5..=FIDELITY_CLAMP_MAX).contains(&x));
            sum += x;
        }
        let mean = sum / samples as f64;
        assert!((mean - 0.8).abs() < 0.01, "clamped mean {mean}");
    }

    #[test]
    fn parse_round_trip_is_exact() {
        let text = "# triangle\nN 0 0.0 0.0\nN 1 100.0 0.0\nN 2 50.0 80.0\nE 0 1 5 0.8\nE 1 2 5 0.812345\nE 0 2 5 0.85\n";
        let first = parse_topology(text, "test").unwrap();
        assert_eq!(first.node_count(), 3);
        assert_eq!(first.edge_count(), 3);
        let second = parse_topology(&first.to_text(), "round-trip").unwrap();
        assert_eq!(first, second);
        let third = parse_topology(&second.to_text(), "round-trip").unwrap();
        assert_eq!(second, third);
        assert_eq!(second.to_text(), third.to_text());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "N 0\nN 1\nE 0 1 5 0.4\n";
        match parse_topology(text, "bad") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_topology("N 0\nN 1\nE 0 0 5 0.8\n", "loop").is_err());
        assert!(parse_topology("N 0\nN 1\nE 0 1 5 0.8\nE 1 0 5 0.8\n", "dup").is_err());
    }

    #[test]
    fn save_and_load_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("topo.txt");
        let graph = triangle();
        graph.save(&path).unwrap();
        let loaded = load_topology(&path).unwrap();
        assert_eq!(graph, loaded);
    }

    #[test]
    fn bundled_backbone_has_122_edges() {
        let graph = us_backbone();
        assert_eq!(graph.edge_count(), 122);
        assert!(graph.is_connected());
        assert!(graph.coords().is_some());
    }

    #[test]
    fn prune_keeps_reachable_edges() {
        // 0.75 with capacity 5 reaches 0.9959, so it survives a 0.99 bar.
        let graph = NetworkGraph::from_edges(3, &[(0, 1, 5, 0.75), (1, 2, 1, 0.75)]).unwrap();
        let pruned = prune_infeasible_edges(&graph, 0.99);
        assert_eq!(pruned.edge_count(), 1);
        assert!(pruned.edge_between(0, 1).is_some());
        // capacity 1 cannot purify at all
        let pruned = prune_infeasible_edges(&graph, 0.8);
        assert!(pruned.edge_between(1, 2).is_none());
        // 0.5 keeps everything
        let pruned = prune_infeasible_edges(&graph, 0.5);
        assert_eq!(pruned.edge_count(), graph.edge_count());
    }

    #[test]
    fn prune_is_idempotent() {
        let config = TopologyConfig {
            node_count: 25,
            rng_seed: 3,
            capacity: 4,
            ..TopologyConfig::default()
        };
        let graph = generate_waxman(&config).unwrap();
        let once = prune_infeasible_edges(&graph, 0.92);
        let twice = prune_infeasible_edges(&once, 0.92);
        assert_eq!(once, twice);
    }

    #[test]
    fn uniform_capacity_and_fidelity_redraws() {
        let graph = triangle();
        let scaled = graph.with_uniform_capacity(7);
        assert!(scaled.edges().iter().all(|e| e.capacity == 7));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let redrawn = graph.with_random_fidelities(&mut rng, 0.8, 0.1);
        assert_eq!(redrawn.edge_count(), graph.edge_count());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let again = graph.with_random_fidelities(&mut rng, 0.8, 0.1);
        assert_eq!(redrawn, again);
    }
}

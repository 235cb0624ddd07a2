//! Fidelity algebra for entanglement purification.
//!
//! An edge holds entangled pairs of some initial fidelity. Recurrence pumping
//! combines one fresh pair with the pair purified so far, trading pairs for
//! fidelity. Everything here is a pure function of its inputs: pairwise
//! purification, the pumping recursion, per-edge cost tables, success
//! probabilities, and the per-path round-allocation strategies built on top.

use crate::error::{Error, Result};

/// Below this value purification cannot improve a pair, so it is the floor of
/// every fidelity in the system.
pub const MIN_FIDELITY: f64 = 0.5;

/// Numerical ceiling for purified fidelities. Many pumping rounds converge
/// towards 1 and would otherwise round to exactly 1.0 in f64, leaving the
/// [0.5, 1) domain.
pub const MAX_FIDELITY: f64 = 1.0 - 1e-12;

/// Round vectors beyond this many combinations are refused by the exhaustive
/// search.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

fn check_fidelity(x: f64) {
    assert!(
        (MIN_FIDELITY..1.0).contains(&x),
        "fidelity {x} outside [0.5, 1)"
    );
}

/// Fidelity of the pair obtained by purifying a pair of fidelity `x1` with one
/// of fidelity `x2` (bit-flip error model).
///
/// Panics if either input lies outside `[0.5, 1)`.
pub fn purify_pair(x1: f64, x2: f64) -> f64 {
    check_fidelity(x1);
    check_fidelity(x2);
    let keep = x1 * x2;
    (keep / (keep + (1.0 - x1) * (1.0 - x2))).min(MAX_FIDELITY)
}

/// Probability that a single purification of pairs with fidelities `x1`, `x2`
/// succeeds.
pub fn success_probability(x1: f64, x2: f64) -> f64 {
    check_fidelity(x1);
    check_fidelity(x2);
    x1 * x2 + (1.0 - x1) * (1.0 - x2)
}

/// Fidelity after `rounds` pumping rounds starting from `f0`. Each round
/// merges one fresh pair of fidelity `f0` into the pair purified so far.
pub fn pumped_fidelity(f0: f64, rounds: u32) -> f64 {
    check_fidelity(f0);
    let mut fidelity = f0;
    for _ in 0..rounds {
        fidelity = purify_pair(f0, fidelity);
    }
    fidelity
}

/// Probability that `rounds` consecutive pumping rounds on a pair of initial
/// fidelity `f0` all succeed. Zero rounds always succeed.
pub fn cumulative_success_probability(f0: f64, rounds: u32) -> f64 {
    let mut probability = 1.0;
    let mut fidelity = f0;
    for _ in 0..rounds {
        probability *= success_probability(f0, fidelity);
        fidelity = purify_pair(f0, fidelity);
    }
    probability
}

/// One row of a purification cost table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostEntry {
    pub round: u32,
    pub fidelity: f64,
    /// Fidelity gained over the previous round; zero for round 0.
    pub improvement: f64,
}

/// Per-edge lookup of purification round to resulting fidelity and marginal
/// improvement. An edge of capacity `c` supports at most `c - 1` rounds.
#[derive(Debug, Clone)]
pub struct CostTable {
    entries: Vec<CostEntry>,
}

impl CostTable {
    pub fn entries(&self) -> &[CostEntry] {
        &self.entries
    }

    /// Highest round the edge capacity allows (capacity − 1).
    pub fn max_round(&self) -> u32 {
        (self.entries.len() - 1) as u32
    }

    pub fn fidelity(&self, round: u32) -> f64 {
        self.entries[round as usize].fidelity
    }

    /// Best fidelity the edge can reach, at `max_round`.
    pub fn max_fidelity(&self) -> f64 {
        self.entries.last().unwrap().fidelity
    }

    /// Fidelity gained by stepping from `round` to `round + 1`, or `None`
    /// when the edge is already at its round limit.
    pub fn next_improvement(&self, round: u32) -> Option<f64> {
        self.entries
            .get(round as usize + 1)
            .map(|entry| entry.improvement)
    }
}

/// Builds the cost table for an edge with initial fidelity `f0` and
/// `capacity` entangled pairs.
pub fn build_cost_table(f0: f64, capacity: u32) -> CostTable {
    assert!(capacity >= 1, "edge capacity must be at least 1");
    check_fidelity(f0);
    let mut entries = Vec::with_capacity(capacity as usize);
    let mut fidelity = f0;
    for round in 0..capacity {
        let improvement = if round == 0 {
            0.0
        } else {
            let next = purify_pair(f0, fidelity);
            let gain = next - fidelity;
            fidelity = next;
            gain
        };
        entries.push(CostEntry {
            round,
            fidelity,
            improvement,
        });
    }
    CostTable { entries }
}

/// Purification rounds assigned to each edge of one path, in path order.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct PurificationDecision {
    rounds: Vec<u32>,
}

impl PurificationDecision {
    pub fn new(rounds: Vec<u32>) -> Self {
        Self { rounds }
    }

    pub fn zeros(edge_count: usize) -> Self {
        Self {
            rounds: vec![0; edge_count],
        }
    }

    pub fn rounds(&self) -> &[u32] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Total purification operations across the path.
    pub fn total_rounds(&self) -> u32 {
        self.rounds.iter().sum()
    }

    /// Entangled pairs consumed per end-to-end connection: one base pair plus
    /// one per purification round on every edge.
    pub fn pair_cost(&self) -> u32 {
        self.rounds.iter().map(|&n| n + 1).sum()
    }
}

/// End-to-end fidelity of a path whose edges are given as
/// `(initial fidelity, capacity)` pairs, under `decision`.
pub fn end_to_end_fidelity(edges: &[(f64, u32)], decision: &PurificationDecision) -> f64 {
    assert_eq!(edges.len(), decision.rounds.len());
    edges
        .iter()
        .zip(decision.rounds())
        .map(|(&(f0, _), &rounds)| pumped_fidelity(f0, rounds))
        .product()
}

/// Greedy round allocation: repeatedly grant one more round to the edge whose
/// cost table promises the largest next improvement (ties to the earliest
/// edge on the path), until the end-to-end product reaches `threshold`.
///
/// Returns `None` when every edge is at its round limit and the product is
/// still short of the threshold.
pub fn greedy_purification_decision(
    edges: &[(f64, u32)],
    threshold: f64,
) -> Option<PurificationDecision> {
    assert!(!edges.is_empty(), "path must have at least one edge");
    assert!(
        (MIN_FIDELITY..1.0).contains(&threshold),
        "threshold {threshold} outside [0.5, 1)"
    );
    let tables: Vec<CostTable> = edges
        .iter()
        .map(|&(f0, capacity)| build_cost_table(f0, capacity))
        .collect();
    let mut rounds = vec![0u32; edges.len()];
    let mut fidelities: Vec<f64> = edges.iter().map(|&(f0, _)| f0).collect();
    loop {
        let product: f64 = fidelities.iter().product();
        if product >= threshold {
            return Some(PurificationDecision::new(rounds));
        }
        let mut best: Option<(usize, f64)> = None;
        for (index, table) in tables.iter().enumerate() {
            if let Some(gain) = table.next_improvement(rounds[index]) {
                let better = match best {
                    Some((_, incumbent)) => gain > incumbent,
                    None => true,
                };
                if better {
                    best = Some((index, gain));
                }
            }
        }
        let (index, _) = best?;
        rounds[index] += 1;
        fidelities[index] = tables[index].fidelity(rounds[index]);
    }
}

/// Exhaustive round allocation: enumerates every round vector and returns one
/// minimizing total rounds subject to the end-to-end threshold
/// (lexicographically smallest among ties). Exists as an independent check of
/// the greedy allocation; refuses spaces above [`ENUMERATION_GUARD`].
pub fn brute_force_purification_decision(
    edges: &[(f64, u32)],
    threshold: f64,
) -> Result<Option<PurificationDecision>> {
    assert!(!edges.is_empty(), "path must have at least one edge");
    let space: u128 = edges.iter().map(|&(_, capacity)| capacity as u128).product();
    if space > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard {
            size: space,
            limit: ENUMERATION_GUARD,
        });
    }
    let tables: Vec<CostTable> = edges
        .iter()
        .map(|&(f0, capacity)| build_cost_table(f0, capacity))
        .collect();
    let limits: Vec<u32> = tables.iter().map(CostTable::max_round).collect();

    let mut best: Option<Vec<u32>> = None;
    let mut best_total = u32::MAX;
    let mut current = vec![0u32; edges.len()];
    loop {
        let product: f64 = current
            .iter()
            .zip(&tables)
            .map(|(&round, table)| table.fidelity(round))
            .product();
        if product >= threshold {
            let total: u32 = current.iter().sum();
            if total < best_total {
                best_total = total;
                best = Some(current.clone());
            }
        }
        // Odometer step over the round vectors.
        let mut position = current.len();
        loop {
            if position == 0 {
                return Ok(best.map(PurificationDecision::new));
            }
            position -= 1;
            if current[position] < limits[position] {
                current[position] += 1;
                for slot in current.iter_mut().skip(position + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Derivative of the symmetric pumping map f(x) = x² / (x² + (1−x)²).
fn symmetric_gain_slope(x: f64) -> f64 {
    let denominator = 4.0 * x.powi(4) - 8.0 * x.powi(3) + 8.0 * x * x - 4.0 * x + 1.0;
    (-2.0 * x * x + 2.0 * x) / denominator
}

/// Fidelity at which one symmetric purification round yields its largest
/// improvement: the root of f'(x) = 1 on [0.5, 1), ≈ 0.743. Above this value
/// the greedy allocation is provably cost-optimal.
pub fn critical_fidelity() -> f64 {
    let mut lo = MIN_FIDELITY;
    let mut hi = 1.0 - 1e-9;
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if symmetric_gain_slope(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn purify_pair_matches_worked_values() {
        assert!((purify_pair(0.75, 0.75) - 0.9).abs() < TOL);
        let purified = purify_pair(0.95, 0.95);
        assert!((purified - 0.9972375690607734).abs() < TOL);
        assert!((purified - 0.95 - 0.0472).abs() < 1e-4);
    }

    #[test]
    fn purify_pair_with_half_is_identity() {
        for x in [0.5, 0.6, 0.75, 0.9, 0.99] {
            assert!((purify_pair(0.5, x) - x).abs() < TOL);
        }
    }

    #[test]
    #[should_panic(expected = "outside")]
    fn purify_pair_rejects_out_of_domain() {
        purify_pair(0.4, 0.8);
    }

    #[test]
    fn pumped_fidelity_matches_worked_values() {
        assert!((pumped_fidelity(0.8, 2) - 0.9846153846153847).abs() < TOL);
        assert!((pumped_fidelity(0.8, 2) - 0.9846).abs() < 1e-4);
        assert!((pumped_fidelity(0.75, 4) - 0.9959).abs() < 1e-4);
        assert_eq!(pumped_fidelity(0.9, 0), 0.9);
    }

    #[test]
    fn cost_table_for_worked_example() {
        let table = build_cost_table(0.75, 5);
        assert_eq!(table.max_round(), 4);
        let expected = [0.75, 0.9, 0.9642, 0.9878, 0.9959];
        for (entry, want) in table.entries().iter().zip(expected) {
            assert!(
                (entry.fidelity - want).abs() < 1e-4,
                "round {}: {} vs {}",
                entry.round,
                entry.fidelity,
                want
            );
        }
        assert_eq!(table.entries()[0].improvement, 0.0);
        assert!((table.entries()[1].improvement - 0.15).abs() < 1e-4);
        assert!((table.entries()[2].improvement - 0.0642).abs() < 1e-3);
        // Diminishing returns along the table.
        for pair in table.entries().windows(2).skip(1) {
            assert!(pair[1].improvement < pair[0].improvement);
        }
    }

    #[test]
    fn cost_table_capacity_one_has_single_row() {
        let table = build_cost_table(0.8, 1);
        assert_eq!(table.entries().len(), 1);
        assert_eq!(table.max_round(), 0);
        assert_eq!(table.fidelity(0), 0.8);
        assert_eq!(table.next_improvement(0), None);
    }

    #[test]
    fn success_probability_values() {
        assert!((success_probability(0.8, 0.8) - 0.68).abs() < TOL);
        assert!((success_probability(0.5, 0.5) - 0.5).abs() < TOL);
        assert!(success_probability(0.99, 0.99) >= 0.98);
    }

    #[test]
    fn cumulative_success_probability_values() {
        assert_eq!(cumulative_success_probability(0.8, 0), 1.0);
        assert!((cumulative_success_probability(0.8, 1) - 0.68).abs() < TOL);
        assert!((cumulative_success_probability(0.8, 2) - 0.52).abs() < TOL);
        // Independent route: 0.68 × (0.8·F1 + 0.2·(1−F1)).
        let f1 = pumped_fidelity(0.8, 1);
        let direct = 0.68 * (0.8 * f1 + 0.2 * (1.0 - f1));
        assert!((cumulative_success_probability(0.8, 2) - direct).abs() < TOL);
        let mut last = 1.0;
        for rounds in 0..6 {
            let p = cumulative_success_probability(0.8, rounds);
            assert!(p <= last + TOL);
            last = p;
        }
    }

    #[test]
    fn greedy_single_edge() {
        let decision = greedy_purification_decision(&[(0.8, 5)], 0.95).unwrap();
        assert_eq!(decision.rounds(), &[2]);
        assert!(pumped_fidelity(0.8, 1) < 0.95);
        assert!(pumped_fidelity(0.8, 2) >= 0.95);
    }

    #[test]
    fn greedy_noop_when_already_satisfied() {
        let decision = greedy_purification_decision(&[(0.9, 5), (0.95, 5)], 0.8).unwrap();
        assert_eq!(decision.rounds(), &[0, 0]);
    }

    #[test]
    fn greedy_prefers_largest_improvement_first() {
        // First increment must land on the 0.75 edge (gain 0.15 vs 0.0878).
        let decision = greedy_purification_decision(&[(0.75, 5), (0.9, 5)], 0.8).unwrap();
        assert_eq!(decision.rounds(), &[1, 0]);
        let decision = greedy_purification_decision(&[(0.75, 5), (0.9, 5)], 0.9).unwrap();
        assert_eq!(decision.rounds(), &[2, 1]);
        let brute = brute_force_purification_decision(&[(0.75, 5), (0.9, 5)], 0.9)
            .unwrap()
            .unwrap();
        assert_eq!(brute.total_rounds(), decision.total_rounds());
    }

    #[test]
    fn greedy_reports_infeasible_as_value() {
        // One pair at 0.75 cannot be purified at all.
        assert!(greedy_purification_decision(&[(0.75, 1)], 0.8).is_none());
        assert!(brute_force_purification_decision(&[(0.75, 1)], 0.8)
            .unwrap()
            .is_none());
    }

    #[test]
    fn brute_force_matches_greedy_on_single_edge() {
        let brute = brute_force_purification_decision(&[(0.8, 5)], 0.95)
            .unwrap()
            .unwrap();
        assert_eq!(brute.rounds(), &[2]);
    }

    #[test]
    fn brute_force_zero_when_threshold_below_bare_product() {
        let brute = brute_force_purification_decision(&[(0.9, 4), (0.9, 4)], 0.8)
            .unwrap()
            .unwrap();
        assert_eq!(brute.rounds(), &[0, 0]);
    }

    #[test]
    fn brute_force_guard_trips() {
        let edges = vec![(0.8, 50); 12];
        match brute_force_purification_decision(&edges, 0.9) {
            Err(Error::EnumerationGuard { .. }) => {}
            other => panic!("expected guard error, got {other:?}"),
        }
    }

    #[test]
    fn critical_fidelity_bracketed() {
        let x = critical_fidelity();
        assert!((0.742..=0.744).contains(&x), "x* = {x}");
        assert!((symmetric_gain_slope(x) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn gain_slope_endpoints() {
        assert!((symmetric_gain_slope(0.5) - 2.0).abs() < TOL);
        assert!(symmetric_gain_slope(0.999999) < 1e-4);
    }

    #[test]
    fn decision_costs() {
        let decision = PurificationDecision::new(vec![1, 0, 2]);
        assert_eq!(decision.total_rounds(), 3);
        assert_eq!(decision.pair_cost(), 6);
    }
}

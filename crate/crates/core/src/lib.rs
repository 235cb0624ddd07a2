//! Entanglement routing engine for simulated quantum networks.
//!
//! Models a quantum network as a capacitated graph whose edges hold
//! entangled pairs of some initial fidelity, and computes routing paths plus
//! per-edge purification schedules that guarantee a requested end-to-end
//! fidelity. Ships two single-pair routers (cost-optimal iterative search and
//! a low-complexity best-quality-path heuristic), a utility-ordered greedy
//! allocator for multiple source-destination pairs, the advance-purification
//! baseline they are compared against, and a trial harness that sweeps
//! thresholds, capacities and pair counts over random or file-backed
//! topologies.

pub mod error;
pub mod experiments;
pub mod multipair;
pub mod pathfinding;
pub mod purification;
pub mod routing;
pub mod topology;

pub use error::{Error, Result};
pub use multipair::{AllocationConfig, AllocationResult};
pub use pathfinding::Path;
pub use purification::{CostTable, PurificationDecision};
pub use routing::{ResidualGraph, RouterKind, RoutingRequest, RoutingSolution};
pub use topology::{NetworkGraph, TopologyConfig};

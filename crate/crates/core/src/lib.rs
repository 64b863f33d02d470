//! Deterministic simulator and analytical toolkit for cluster-head election
//! protocols in wireless sensor networks.
//!
//! The crate has two halves that share one radio-energy model:
//!
//! * a round-based network simulator ([`sim`]) that runs LEACH, SEP, DEEC and
//!   a TEEN-style reactive variant over a field of battery-powered nodes, and
//! * an analytical model ([`markov`]) of the cluster-head count as a
//!   bi-dimensional Markov chain, with a Monte-Carlo cross-check.
//!
//! Everything downstream of a seed is reproducible: the same configuration
//! and seed produce bit-identical histories on every platform (see [`rng`]
//! for the draw protocol that makes this auditable).

pub mod energy;
pub mod error;
pub mod markov;
pub mod network;
pub mod protocols;
pub mod rng;
pub mod sim;

pub use energy::RadioEnergyParams;
pub use error::{Error, Result};
pub use markov::{ChCountDistribution, MarkovModel};
pub use network::{Network, NetworkConfig, Node, NodeClass, NodeId};
pub use protocols::{ProtocolConfig, ProtocolKind, TeenParams};
pub use rng::SimRng;
pub use sim::{
    run_simulation, run_simulation_with, ClusterAssignment, RoundMetrics, RoundTrace, SimParams,
    Simulation, SimulationResult,
};

//! Round-based simulation engine.
//!
//! Each round executes, in order: epoch reset → election → cluster
//! formation → steady-state data transfer (energy debit) → death marking →
//! metrics snapshot, then increments the round counter. Deaths are
//! evaluated once, after all debits, so a round is a pure batch step: a CH
//! that exhausts its battery mid-round still serves that round.
//!
//! Steady-state costs per round, with `l = packet_bits`:
//!
//! * each cluster member transmits one packet to its CH: `tx(l, d_member→CH)`;
//! * each CH receives its members' packets (`k·rx(l)`), aggregates them
//!   together with its own reading (`agg(l, k+1)` signals) and uplinks one
//!   packet: `tx(l, d_CH→BS)`;
//! * nodes with no CH available transmit straight to the base station:
//!   `tx(l, d→BS)`.
//!
//! Under TEEN, a member whose sensed value fails the hard/soft reporting
//! gate skips its transmission entirely — the CH neither receives nor
//! aggregates that packet (`k` counts delivered packets only). CH uplinks
//! and direct-to-BS transmissions are never gated: a CH always reports its
//! aggregate, and a node acting as its own relay has no CH to filter for
//! it. Cluster-size metrics stay structural (assigned members), so
//! suppression shows up in energy and packet counts, not in cluster shape.

use std::collections::BTreeMap;

use crate::energy::RadioEnergyParams;
use crate::error::{Error, Result};
use crate::network::{Network, NetworkConfig, NodeId};
use crate::protocols::{
    elect_cluster_heads, epoch_reset, teen_should_report, ProtocolConfig, ProtocolKind,
};
use serde::{Deserialize, Serialize};

/// Engine parameters shared by every protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub radio: RadioEnergyParams,
    /// Data packet size (bits); one packet per member per round.
    pub packet_bits: u32,
    /// Optional cluster join radius (m): members farther than this from
    /// every CH fall back to direct-to-BS transmission. `None` (default)
    /// means unlimited — every node joins its nearest CH.
    pub max_join_radius: Option<f64>,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            radio: RadioEnergyParams::default(),
            packet_bits: 4000,
            max_join_radius: None,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        self.radio.validate()?;
        if self.packet_bits == 0 {
            return Err(Error::Config("packet_bits: must be >= 1, got 0".into()));
        }
        if let Some(r) = self.max_join_radius {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::Config(format!(
                    "max_join_radius: must be finite and > 0, got {r}"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of cluster formation for one round.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClusterAssignment {
    /// member id → CH id, for every alive non-CH node that joined a cluster.
    pub members: BTreeMap<NodeId, NodeId>,
    /// Alive non-CH nodes with no reachable CH; they uplink directly.
    pub direct_to_bs: Vec<NodeId>,
}

/// Per-round observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundMetrics {
    /// Round index r of the executed round (0-based).
    pub round: u32,
    /// Alive nodes after this round's deaths.
    pub n_alive: u32,
    /// Cluster heads elected this round.
    pub n_ch: u32,
    /// Total residual energy over all nodes after debits (J).
    pub total_residual: f64,
    /// Mean cluster size (members + CH) over clusters; 0 when no CHs.
    pub mean_cluster_size: f64,
    pub min_cluster_size: u32,
    pub max_cluster_size: u32,
    /// Packets delivered to the BS this round (CH uplinks + direct).
    pub packets_to_bs: u32,
}

/// Full per-round election and assignment record, for audits and
/// energy-ledger replay.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub round: u32,
    /// Elected CHs, ascending id order.
    pub ch_ids: Vec<NodeId>,
    pub assignment: ClusterAssignment,
    /// Members whose transmission was suppressed by the reporting gate
    /// (TEEN only; always empty otherwise). Ascending id order.
    pub suppressed: Vec<NodeId>,
}

/// Result of a complete run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub per_round: Vec<RoundMetrics>,
    /// Round at which the first node died (start of the instability
    /// period), if any node died.
    pub first_death_round: Option<u32>,
    /// First round with at most half the deployed nodes alive.
    pub half_death_round: Option<u32>,
    /// First round with no alive nodes.
    pub last_death_round: Option<u32>,
    pub network_config: NetworkConfig,
    pub protocol: ProtocolConfig,
    pub params: SimParams,
    /// Seed echo (same value as `network_config.seed`).
    pub seed: u64,
}

impl SimulationResult {
    /// Rounds actually executed.
    pub fn rounds_simulated(&self) -> u32 {
        self.per_round.len() as u32
    }
}

/// Assigns every alive non-CH node to its Euclidean-nearest CH (ties to
/// the lowest CH id). Nodes farther than `max_join_radius` from every CH —
/// or all alive nodes, when `chs` is empty — go to `direct_to_bs`.
pub fn form_clusters(
    network: &Network,
    chs: &[NodeId],
    max_join_radius: Option<f64>,
) -> ClusterAssignment {
    let mut sorted_chs: Vec<NodeId> = chs.to_vec();
    sorted_chs.sort_unstable();
    let mut is_ch = vec![false; network.nodes.len()];
    for &ch in &sorted_chs {
        is_ch[ch as usize] = true;
    }
    let mut assignment = ClusterAssignment::default();
    for node in network.nodes.iter().filter(|n| n.alive) {
        if is_ch[node.id as usize] {
            continue;
        }
        let mut nearest: Option<(NodeId, f64)> = None;
        for &ch in &sorted_chs {
            let d = node.distance_to(&network.nodes[ch as usize]);
            // Strict comparison keeps the lowest-id CH on exact ties.
            if nearest.is_none_or(|(_, best)| d < best) {
                nearest = Some((ch, d));
            }
        }
        match nearest {
            Some((ch, d)) if max_join_radius.is_none_or(|r| d <= r) => {
                assignment.members.insert(node.id, ch);
            }
            _ => assignment.direct_to_bs.push(node.id),
        }
    }
    assignment
}

/// One simulation run: a deployed network plus protocol and engine
/// parameters. Strictly sequential; independent runs may execute in
/// parallel freely.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub network: Network,
    pub protocol: ProtocolConfig,
    pub params: SimParams,
}

impl Simulation {
    /// Deploys and validates a run with default engine parameters.
    pub fn new(net_config: &NetworkConfig, protocol: ProtocolConfig) -> Result<Self> {
        Self::with_params(net_config, protocol, SimParams::default())
    }

    /// Deploys and validates a run with explicit engine parameters.
    pub fn with_params(
        net_config: &NetworkConfig,
        protocol: ProtocolConfig,
        params: SimParams,
    ) -> Result<Self> {
        protocol.validate()?;
        params.validate()?;
        Ok(Self {
            network: Network::deploy(net_config)?,
            protocol,
            params,
        })
    }

    /// Executes one round, returning its metrics, or `None` once no alive
    /// nodes remain (clean completion, not an error).
    pub fn step(&mut self) -> Option<RoundMetrics> {
        self.step_traced().map(|(metrics, _)| metrics)
    }

    /// Executes one round and also returns the election/assignment trace.
    pub fn step_traced(&mut self) -> Option<(RoundMetrics, RoundTrace)> {
        if self.network.alive_count() == 0 {
            return None;
        }
        let round = self.network.round;
        epoch_reset(&mut self.network, &self.protocol, round);
        let ch_ids = elect_cluster_heads(&mut self.network, &self.protocol, round)
            .expect("election cannot fail on a network with alive nodes");
        let assignment = form_clusters(&self.network, &ch_ids, self.params.max_join_radius);
        let suppressed = self.apply_reporting_gate(&assignment);

        // Accumulate the round's debits per node, then apply them once.
        let bits = self.params.packet_bits;
        let radio = self.params.radio;
        let mut cost = vec![0.0f64; self.network.nodes.len()];
        let mut delivered: BTreeMap<NodeId, u32> = ch_ids.iter().map(|&ch| (ch, 0)).collect();
        for (&member, &ch) in &assignment.members {
            if suppressed.binary_search(&member).is_ok() {
                continue;
            }
            let d =
                self.network.nodes[member as usize].distance_to(&self.network.nodes[ch as usize]);
            cost[member as usize] += radio
                .tx_energy(bits, d)
                .expect("node geometry yields finite non-negative distances");
            *delivered
                .get_mut(&ch)
                .expect("every member maps to an elected CH") += 1;
        }
        for &ch in &ch_ids {
            let k = delivered[&ch];
            let d_bs = self.network.distance_to_bs(ch);
            cost[ch as usize] += k as f64 * radio.rx_energy(bits)
                + radio.aggregation_energy(bits, k + 1)
                + radio
                    .tx_energy(bits, d_bs)
                    .expect("BS distance is finite and non-negative");
        }
        for &id in &assignment.direct_to_bs {
            let d_bs = self.network.distance_to_bs(id);
            cost[id as usize] += radio
                .tx_energy(bits, d_bs)
                .expect("BS distance is finite and non-negative");
        }
        for (id, &c) in cost.iter().enumerate() {
            if c > 0.0 {
                let node = &mut self.network.nodes[id];
                node.e_residual -= c;
                if node.e_residual <= 0.0 {
                    node.e_residual = 0.0;
                    node.alive = false;
                }
            }
        }

        // Metrics snapshot (post-debit, post-death). Cluster sizes are
        // structural: assigned members + the CH itself.
        let n_ch = ch_ids.len() as u32;
        let mut sizes: BTreeMap<NodeId, u32> = ch_ids.iter().map(|&ch| (ch, 1)).collect();
        for &ch in assignment.members.values() {
            *sizes
                .get_mut(&ch)
                .expect("assignment maps onto elected CHs") += 1;
        }
        let (mean, min, max) = if n_ch == 0 {
            (0.0, 0, 0)
        } else {
            let total: u32 = sizes.values().sum();
            (
                total as f64 / n_ch as f64,
                *sizes.values().min().expect("at least one cluster"),
                *sizes.values().max().expect("at least one cluster"),
            )
        };
        let metrics = RoundMetrics {
            round,
            n_alive: self.network.alive_count(),
            n_ch,
            total_residual: self.network.total_residual_energy(),
            mean_cluster_size: mean,
            min_cluster_size: min,
            max_cluster_size: max,
            packets_to_bs: n_ch + assignment.direct_to_bs.len() as u32,
        };
        self.network.round = round + 1;
        let trace = RoundTrace {
            round,
            ch_ids,
            assignment,
            suppressed,
        };
        Some((metrics, trace))
    }

    /// TEEN reporting gate: synthesizes one sensed value per cluster member
    /// (ascending id order, one RNG draw each) and returns the members
    /// whose transmission is suppressed this round. Non-TEEN protocols
    /// return an empty list and consume no draws.
    fn apply_reporting_gate(&mut self, assignment: &ClusterAssignment) -> Vec<NodeId> {
        let ProtocolKind::Teen = self.protocol.kind else {
            return Vec::new();
        };
        let teen = self
            .protocol
            .teen
            .expect("validated TEEN config carries thresholds");
        let mut suppressed = Vec::new();
        for &member in assignment.members.keys() {
            let sensed = self.network.rng.uniform_in(teen.sense_lo, teen.sense_hi);
            let node = &mut self.network.nodes[member as usize];
            if teen_should_report(sensed, node.last_transmitted, teen.hard, teen.soft) {
                node.last_transmitted = Some(sensed);
            } else {
                suppressed.push(member);
            }
        }
        suppressed
    }

    /// Runs rounds until the configured budget is exhausted or every node
    /// is dead, then summarizes death milestones.
    pub fn run(mut self) -> SimulationResult {
        let n0 = self.network.config.n_nodes;
        let max_rounds = self.network.config.max_rounds;
        let mut per_round = Vec::new();
        while self.network.round < max_rounds {
            match self.step() {
                Some(metrics) => per_round.push(metrics),
                None => break,
            }
        }
        let first_death_round = per_round.iter().find(|m| m.n_alive < n0).map(|m| m.round);
        let half_death_round = per_round
            .iter()
            .find(|m| m.n_alive <= n0 / 2)
            .map(|m| m.round);
        let last_death_round = per_round.iter().find(|m| m.n_alive == 0).map(|m| m.round);
        SimulationResult {
            per_round,
            first_death_round,
            half_death_round,
            last_death_round,
            network_config: self.network.config.clone(),
            protocol: self.protocol.clone(),
            params: self.params.clone(),
            seed: self.network.config.seed,
        }
    }
}

/// Deploys and runs one simulation with default engine parameters.
pub fn run_simulation(
    net_config: &NetworkConfig,
    protocol: &ProtocolConfig,
) -> Result<SimulationResult> {
    run_simulation_with(net_config, protocol, SimParams::default())
}

/// Deploys and runs one simulation with explicit engine parameters.
pub fn run_simulation_with(
    net_config: &NetworkConfig,
    protocol: &ProtocolConfig,
    params: SimParams,
) -> Result<SimulationResult> {
    Ok(Simulation::with_params(net_config, protocol.clone(), params)?.run())
}

//! Network and node state: deployment, energy bookkeeping, liveness.
//!
//! A [`Network`] is deployed once from a [`NetworkConfig`] and then owned by
//! a single simulation run. Node positions are static; only energy,
//! liveness and election bookkeeping change across rounds.
//!
//! Heterogeneity follows the two-class model: a fraction `m_fraction` of
//! nodes is provisioned as *advanced* with `(1 + a_advanced)` times the
//! normal initial energy. The advanced nodes are the first
//! `round(m_fraction · n_nodes)` ids, which keeps deployment a pure
//! function of (config, seed) without a second RNG pass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Node identifier; ids are dense, unique and stable (`0..n_nodes`).
pub type NodeId = u32;

/// Energy provisioning class of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeClass {
    /// Baseline node with `e0` initial energy.
    Normal,
    /// Node provisioned with `e0·(1 + a)` initial energy (`a > 0`).
    Advanced,
}

/// One sensor node.
///
/// Invariants maintained by the simulator:
/// * `e_residual ≤ e_initial` at all times (energy is only spent);
/// * `alive = false` implies `e_residual = 0`, and a dead node never
///   revives or spends energy again;
/// * `node_class == Advanced` iff `hetero_factor > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    /// Position (m), fixed at deployment.
    pub x: f64,
    pub y: f64,
    /// Energy provisioned at deployment (J).
    pub e_initial: f64,
    /// Energy remaining (J); clamped at zero on death.
    pub e_residual: f64,
    /// Extra-energy factor `a_i` (0 for normal nodes).
    pub hetero_factor: f64,
    pub node_class: NodeClass,
    pub alive: bool,
    /// Membership in the eligible set G: true until elected CH, restored by
    /// the protocol's epoch reset.
    pub eligible: bool,
    /// Total rounds this node has served as CH.
    pub rounds_as_ch: u32,
    /// Round at which eligibility is restored (per-node epochs only; `None`
    /// when eligible or under a global epoch scheme).
    pub eligible_again_at: Option<u32>,
    /// Round the node's current election epoch began (per-node epochs
    /// measure their threshold phase from this anchor).
    pub epoch_start: u32,
    /// Last sensed value actually transmitted (reactive reporting only).
    pub last_transmitted: Option<f64>,
}

impl Node {
    /// Euclidean distance to another node (m).
    pub fn distance_to(&self, other: &Node) -> f64 {
        self.distance_to_point(other.x, other.y)
    }

    /// Euclidean distance to an arbitrary point (m).
    pub fn distance_to_point(&self, x: f64, y: f64) -> f64 {
        let dx = self.x - x;
        let dy = self.y - y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Deployment-time parameters of a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Number of nodes N.
    pub n_nodes: u32,
    /// Field width (m); positions are drawn over `[0, field_w) × [0, field_h)`.
    pub field_w: f64,
    /// Field height (m).
    pub field_h: f64,
    /// Base-station x position (m); may lie outside the field.
    pub bs_x: f64,
    /// Base-station y position (m).
    pub bs_y: f64,
    /// Fraction of advanced nodes, `m ∈ [0, 1]`.
    pub m_fraction: f64,
    /// Extra-energy factor for advanced nodes, `a ≥ 0`.
    pub a_advanced: f64,
    /// Normal-node initial energy (J).
    pub e0: f64,
    /// RNG seed; fixes deployment and every later draw of the run.
    pub seed: u64,
    /// Round budget for a simulation run.
    pub max_rounds: u32,
}

impl Default for NetworkConfig {
    /// 100 nodes on a 100×100 m field, base station at the center,
    /// homogeneous 0.5 J nodes.
    fn default() -> Self {
        Self {
            n_nodes: 100,
            field_w: 100.0,
            field_h: 100.0,
            bs_x: 50.0,
            bs_y: 50.0,
            m_fraction: 0.0,
            a_advanced: 0.0,
            e0: 0.5,
            seed: 1,
            max_rounds: 2000,
        }
    }
}

impl NetworkConfig {
    /// Checks all field-level invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::Config("n_nodes: must be >= 1, got 0".into()));
        }
        for (name, value) in [("field_w", self.field_w), ("field_h", self.field_h)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Config(format!(
                    "{name}: must be finite and > 0, got {value}"
                )));
            }
        }
        for (name, value) in [("bs_x", self.bs_x), ("bs_y", self.bs_y)] {
            if !value.is_finite() {
                return Err(Error::Config(format!(
                    "{name}: must be finite, got {value}"
                )));
            }
        }
        if !self.m_fraction.is_finite() || !(0.0..=1.0).contains(&self.m_fraction) {
            return Err(Error::Config(format!(
                "m_fraction: must lie in [0, 1], got {}",
                self.m_fraction
            )));
        }
        if !self.a_advanced.is_finite() || self.a_advanced < 0.0 {
            return Err(Error::Config(format!(
                "a_advanced: must be finite and >= 0, got {}",
                self.a_advanced
            )));
        }
        if !self.e0.is_finite() || self.e0 <= 0.0 {
            return Err(Error::Config(format!(
                "e0: must be finite and > 0, got {}",
                self.e0
            )));
        }
        Ok(())
    }

    /// Number of advanced nodes this config deploys.
    pub fn n_advanced(&self) -> u32 {
        if self.a_advanced > 0.0 {
            (self.m_fraction * self.n_nodes as f64).round() as u32
        } else {
            // With a = 0 an "advanced" node would carry no extra energy;
            // treat the network as homogeneous so class ⇔ factor holds.
            0
        }
    }
}

/// A deployed network: node table plus the run's RNG stream and round
/// counter. Single-run, single-threaded; distinct instances may run in
/// parallel freely.
#[derive(Debug, Clone)]
pub struct Network {
    pub nodes: Vec<Node>,
    pub config: NetworkConfig,
    /// Current round index r; incremented exactly once per simulated round.
    pub round: u32,
    pub(crate) rng: SimRng,
}

impl Network {
    /// Deploys `config.n_nodes` nodes with positions drawn uniformly over
    /// the field (two draws per node — x then y — in ascending id order,
    /// consuming exactly `2N` draws; see the rng module for the protocol).
    /// The first `round(m·N)` ids become advanced nodes.
    pub fn deploy(config: &NetworkConfig) -> Result<Network> {
        config.validate()?;
        let mut rng = SimRng::new(config.seed);
        let n_adv = config.n_advanced();
        let nodes = (0..config.n_nodes)
            .map(|id| {
                let x = rng.uniform() * config.field_w;
                let y = rng.uniform() * config.field_h;
                let advanced = id < n_adv;
                let hetero_factor = if advanced { config.a_advanced } else { 0.0 };
                let e_initial = config.e0 * (1.0 + hetero_factor);
                Node {
                    id,
                    x,
                    y,
                    e_initial,
                    e_residual: e_initial,
                    hetero_factor,
                    node_class: if advanced {
                        NodeClass::Advanced
                    } else {
                        NodeClass::Normal
                    },
                    alive: true,
                    eligible: true,
                    rounds_as_ch: 0,
                    eligible_again_at: None,
                    epoch_start: 0,
                    last_transmitted: None,
                }
            })
            .collect();
        Ok(Network {
            nodes,
            config: config.clone(),
            round: 0,
            rng,
        })
    }

    /// Total provisioned energy Σ e_initial (J); equals
    /// `e0·(N + Σ a_i)`, i.e. `N·e0·(1 + a·m)` for the two-class case.
    pub fn total_initial_energy(&self) -> f64 {
        self.nodes.iter().map(|n| n.e_initial).sum()
    }

    /// Total residual energy over all nodes (J).
    pub fn total_residual_energy(&self) -> f64 {
        self.nodes.iter().map(|n| n.e_residual).sum()
    }

    /// Mean residual energy over alive nodes (J).
    ///
    /// Fails with [`Error::EmptyNetwork`] once every node is dead.
    pub fn average_energy(&self) -> Result<f64> {
        let (sum, count) = self
            .nodes
            .iter()
            .filter(|n| n.alive)
            .fold((0.0, 0u32), |(s, c), n| (s + n.e_residual, c + 1));
        if count == 0 {
            return Err(Error::EmptyNetwork);
        }
        Ok(sum / count as f64)
    }

    /// Number of alive nodes.
    pub fn alive_count(&self) -> u32 {
        self.nodes.iter().filter(|n| n.alive).count() as u32
    }

    /// Sum of hetero factors over all deployed nodes (Σ a_i, static).
    pub fn sum_hetero_factors(&self) -> f64 {
        self.nodes.iter().map(|n| n.hetero_factor).sum()
    }

    /// Distance from a node to the base station (m).
    pub fn distance_to_bs(&self, id: NodeId) -> f64 {
        self.nodes[id as usize].distance_to_point(self.config.bs_x, self.config.bs_y)
    }
}

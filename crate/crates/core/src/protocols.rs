//! Cluster-head election: LEACH, SEP, DEEC and the TEEN reactive variant,
//! plus the standalone optimal-cluster-count and root-weight formulas.
//!
//! All four protocols share one election mechanism: each alive, eligible
//! node draws `u ~ Uniform[0,1)` and becomes CH iff `u < T`, where the
//! threshold
//!
//! ```text
//! T = p / (1 − p·(phase mod round(1/p)))
//! ```
//!
//! rises over an epoch of `round(1/p)` rounds so that every node serves
//! exactly once per epoch (the denominator reaches `p` at the final phase,
//! forcing `T = 1`). The protocols differ in how `p` is chosen per node and
//! in how eligibility (membership in the set G) is restored:
//!
//! * **LEACH / TEEN** — constant `p = p_opt`; one global epoch, all nodes
//!   restored at every multiple of `round(1/p_opt)` rounds.
//! * **SEP** — two-class weighted probabilities (normal vs advanced), each
//!   class restored on its own global epoch boundary.
//! * **DEEC** — per-node probability from the energy ratio and hetero
//!   weighting; eligibility restored per node, `round(1/p_i)` rounds after
//!   its election, with `p_i` evaluated at election time.
//!
//! DEEC's threshold phase is measured from the node's own epoch start
//! (rounds since it last became eligible), not the global round. With
//! per-node eligibility windows a global phase would drag every node onto
//! the epoch-final forcing phase (`T = 1`) and collapse the election into
//! one burst per epoch; the per-node clock realizes the rotating epoch the
//! scheme intends, and keeps per-round CH counts near `N·p_opt`.
//!
//! TEEN elects exactly like LEACH; its distinguishing hard/soft reporting
//! thresholds ([`teen_should_report`]) gate member transmissions in the
//! steady-state phase, not the election.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, NodeClass, NodeId};

/// Protocol discriminator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Leach,
    Sep,
    Deec,
    Teen,
}

impl std::fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ProtocolKind::Leach => "LEACH",
            ProtocolKind::Sep => "SEP",
            ProtocolKind::Deec => "DEEC",
            ProtocolKind::Teen => "TEEN",
        };
        f.write_str(name)
    }
}

/// Hard/soft reporting thresholds for the TEEN variant, together with the
/// range over which member sensed values are synthesized each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeenParams {
    /// Hard threshold H_T: a member reports only when its sensed value
    /// reaches this level (sensor units).
    pub hard: f64,
    /// Soft threshold S_T: minimum change from the last transmitted value
    /// that justifies a new report.
    pub soft: f64,
    /// Lower bound of the synthesized sensed-value range.
    pub sense_lo: f64,
    /// Upper bound of the synthesized sensed-value range.
    pub sense_hi: f64,
}

impl Default for TeenParams {
    fn default() -> Self {
        Self {
            hard: 50.0,
            soft: 2.0,
            sense_lo: 0.0,
            sense_hi: 100.0,
        }
    }
}

impl TeenParams {
    fn validate(&self) -> Result<()> {
        if !self.hard.is_finite() {
            return Err(Error::Config(format!(
                "teen_hard: must be finite, got {}",
                self.hard
            )));
        }
        if !self.soft.is_finite() || self.soft < 0.0 {
            return Err(Error::Config(format!(
                "teen_soft: must be finite and >= 0, got {}",
                self.soft
            )));
        }
        if !(self.sense_lo.is_finite() && self.sense_hi.is_finite())
            || self.sense_lo >= self.sense_hi
        {
            return Err(Error::Config(format!(
                "teen sense range: must satisfy sense_lo < sense_hi, got [{}, {}]",
                self.sense_lo, self.sense_hi
            )));
        }
        Ok(())
    }
}

/// Protocol selection plus its parameters. TEEN parameters are present iff
/// the kind is TEEN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    /// Target per-round CH fraction, `p_opt ∈ (0, 1]`.
    pub p_opt: f64,
    /// Reporting thresholds; `Some` iff `kind == Teen`.
    pub teen: Option<TeenParams>,
}

impl ProtocolConfig {
    pub fn leach(p_opt: f64) -> Result<Self> {
        Self::build(ProtocolKind::Leach, p_opt, None)
    }

    pub fn sep(p_opt: f64) -> Result<Self> {
        Self::build(ProtocolKind::Sep, p_opt, None)
    }

    pub fn deec(p_opt: f64) -> Result<Self> {
        Self::build(ProtocolKind::Deec, p_opt, None)
    }

    pub fn teen(p_opt: f64, params: TeenParams) -> Result<Self> {
        Self::build(ProtocolKind::Teen, p_opt, Some(params))
    }

    /// Builds and validates a config; TEEN defaults are filled in when the
    /// kind is TEEN and no parameters were supplied.
    pub fn build(kind: ProtocolKind, p_opt: f64, teen: Option<TeenParams>) -> Result<Self> {
        let teen = match (kind, teen) {
            (ProtocolKind::Teen, Some(t)) => Some(t),
            (ProtocolKind::Teen, None) => Some(TeenParams::default()),
            (_, Some(_)) => {
                return Err(Error::Config(format!(
                    "teen: thresholds are only valid for the teen protocol, not {kind}"
                )))
            }
            (_, None) => None,
        };
        let config = Self { kind, p_opt, teen };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_opt.is_finite() || !(self.p_opt > 0.0 && self.p_opt <= 1.0) {
            return Err(Error::Config(format!(
                "p_opt: must lie in (0, 1], got {}",
                self.p_opt
            )));
        }
        match (self.kind, &self.teen) {
            (ProtocolKind::Teen, Some(t)) => t.validate(),
            (ProtocolKind::Teen, None) => Err(Error::Config(
                "teen: thresholds missing for teen protocol".into(),
            )),
            (_, Some(_)) => Err(Error::Config(
                "teen: thresholds are only valid for the teen protocol".into(),
            )),
            (_, None) => Ok(()),
        }
    }
}

/// Per-node election state for one round, exposed for audit and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectionContext {
    pub node: NodeId,
    /// Election probability p_i for this round.
    pub p_i: f64,
    /// Threshold T the node's uniform draw is compared against.
    pub threshold: f64,
    /// Epoch length n_i = round(1/p_i) (1 when p_i = 0, by convention).
    pub epoch: u32,
}

/// Epoch length `round(1/p)` for `p ∈ (0, 1]`; at least 1.
pub(crate) fn epoch_length(p: f64) -> u32 {
    let e = (1.0 / p).round();
    if e < 1.0 {
        1
    } else if e >= u32::MAX as f64 {
        u32::MAX
    } else {
        e as u32
    }
}

/// Classic LEACH threshold `p / (1 − p·(round mod round(1/p)))` for an
/// eligible node, 0 for an ineligible one.
///
/// The denominator stays strictly positive for every `p ∈ (0, 1]` (the
/// phase never exceeds `round(1/p) − 1`), so the returned threshold always
/// lies in `[0, 1]`; it is clamped defensively anyway.
pub fn leach_threshold(p: f64, round: u32, eligible: bool) -> Result<f64> {
    if !p.is_finite() || !(p > 0.0 && p <= 1.0) {
        return Err(Error::Argument(format!("p: must lie in (0, 1], got {p}")));
    }
    Ok(threshold_from_probability(p, round, eligible))
}

/// Threshold with the same functional form as [`leach_threshold`] for an
/// arbitrary per-node probability `p_i ∈ [0, 1]`; `p_i = 0` yields 0,
/// `p_i = 1` yields 1 regardless of round.
pub fn threshold_from_probability(p_i: f64, round: u32, eligible: bool) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p_i), "p_i out of range: {p_i}");
    if !eligible || p_i <= 0.0 {
        return 0.0;
    }
    let p = p_i.min(1.0);
    let phase = (round % epoch_length(p)) as f64;
    let denom = 1.0 - p * phase;
    if denom <= 0.0 {
        return 1.0;
    }
    (p / denom).min(1.0)
}

/// SEP weighted probabilities `(p_nrm, p_adv)` for normal and advanced
/// nodes: `p_nrm = p_opt/(1+a·m)`, `p_adv = p_opt·(1+a)/(1+a·m)`.
pub fn sep_probabilities(p_opt: f64, a: f64, m: f64) -> Result<(f64, f64)> {
    if !p_opt.is_finite() || !(p_opt > 0.0 && p_opt <= 1.0) {
        return Err(Error::Argument(format!(
            "p_opt: must lie in (0, 1], got {p_opt}"
        )));
    }
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Argument(format!("a: must be >= 0, got {a}")));
    }
    if !m.is_finite() || !(0.0..=1.0).contains(&m) {
        return Err(Error::Argument(format!("m: must lie in [0, 1], got {m}")));
    }
    let denom = 1.0 + a * m;
    Ok((p_opt / denom, p_opt * (1.0 + a) / denom))
}

/// DEEC energy-ratio probability `p_opt·e_i/ē`, clamped to ≤ 1.
pub fn deec_probability(p_opt: f64, e_i: f64, e_bar: f64) -> Result<f64> {
    if !e_bar.is_finite() || e_bar <= 0.0 {
        return Err(Error::Argument(format!("e_bar: must be > 0, got {e_bar}")));
    }
    if !e_i.is_finite() || e_i < 0.0 {
        return Err(Error::Argument(format!("e_i: must be >= 0, got {e_i}")));
    }
    Ok((p_opt * e_i / e_bar).min(1.0))
}

/// DEEC probability with heterogeneity weighting:
/// `p_opt·N·(1+a_i)/(N+Σa) · e_i/ē`, clamped to ≤ 1.
pub fn deec_weighted_probability(
    p_opt: f64,
    a_i: f64,
    sum_a: f64,
    n: u32,
    e_i: f64,
    e_bar: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("n: must be >= 1, got 0".into()));
    }
    if !e_bar.is_finite() || e_bar <= 0.0 {
        return Err(Error::Argument(format!("e_bar: must be > 0, got {e_bar}")));
    }
    if !e_i.is_finite() || e_i < 0.0 {
        return Err(Error::Argument(format!("e_i: must be >= 0, got {e_i}")));
    }
    let n = n as f64;
    let weighted = p_opt * n * (1.0 + a_i) / (n + sum_a);
    Ok((weighted * e_i / e_bar).min(1.0))
}

/// Computes the per-node election context (probability, threshold, epoch)
/// for every alive eligible node, in ascending id order, without consuming
/// any RNG draws. Exactly these nodes draw in [`elect_cluster_heads`].
pub fn election_context(
    network: &Network,
    config: &ProtocolConfig,
    round: u32,
) -> Result<Vec<ElectionContext>> {
    if network.alive_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    let sep = match config.kind {
        ProtocolKind::Sep => Some(sep_probabilities(
            config.p_opt,
            network.config.a_advanced,
            network.config.m_fraction,
        )?),
        _ => None,
    };
    let deec = match config.kind {
        ProtocolKind::Deec => Some((
            network.average_energy()?,
            network.sum_hetero_factors(),
            network.config.n_nodes,
        )),
        _ => None,
    };
    let mut contexts = Vec::new();
    for node in network.nodes.iter().filter(|n| n.alive && n.eligible) {
        let p_i = match config.kind {
            ProtocolKind::Leach | ProtocolKind::Teen => config.p_opt,
            ProtocolKind::Sep => {
                let (p_nrm, p_adv) = sep.unwrap();
                match node.node_class {
                    NodeClass::Normal => p_nrm,
                    NodeClass::Advanced => p_adv,
                }
            }
            ProtocolKind::Deec => {
                let (e_bar, sum_a, n) = deec.unwrap();
                deec_weighted_probability(
                    config.p_opt,
                    node.hetero_factor,
                    sum_a,
                    n,
                    node.e_residual,
                    e_bar,
                )?
            }
        };
        // DEEC epochs are per node, so the threshold phase is the node's
        // rounds-since-eligibility; the others share the global round.
        let phase_round = match config.kind {
            ProtocolKind::Deec => round.saturating_sub(node.epoch_start),
            _ => round,
        };
        contexts.push(ElectionContext {
            node: node.id,
            p_i,
            threshold: threshold_from_probability(p_i, phase_round, true),
            epoch: if p_i > 0.0 { epoch_length(p_i) } else { 1 },
        });
    }
    Ok(contexts)
}

/// Runs one election: every alive eligible node draws `u ~ Uniform[0,1)`
/// from the network's RNG in ascending id order and becomes CH iff
/// `u < T`. Elected nodes leave the eligible set; under DEEC they also
/// record when their personal epoch restores them.
///
/// Returns the elected ids in ascending order (possibly empty).
pub fn elect_cluster_heads(
    network: &mut Network,
    config: &ProtocolConfig,
    round: u32,
) -> Result<Vec<NodeId>> {
    let contexts = election_context(network, config, round)?;
    let mut heads = Vec::new();
    for ctx in &contexts {
        let u = network.rng.uniform();
        if u < ctx.threshold {
            let node = &mut network.nodes[ctx.node as usize];
            node.eligible = false;
            node.rounds_as_ch += 1;
            if config.kind == ProtocolKind::Deec {
                node.eligible_again_at = Some(round.saturating_add(ctx.epoch));
            }
            heads.push(ctx.node);
        }
    }
    Ok(heads)
}

/// Restores eligibility per the protocol's epoch scheme. Runs at the start
/// of every round, before the election.
///
/// * LEACH/TEEN: all alive nodes restored when `round mod round(1/p_opt) = 0`.
/// * SEP: each class restored on its own boundary (`round(1/p_class)`).
/// * DEEC: each node restored once the round reaches its recorded
///   `eligible_again_at`, re-anchoring its personal epoch clock.
pub fn epoch_reset(network: &mut Network, config: &ProtocolConfig, round: u32) {
    match config.kind {
        ProtocolKind::Leach | ProtocolKind::Teen => {
            if round % epoch_length(config.p_opt) == 0 {
                for node in network.nodes.iter_mut().filter(|n| n.alive) {
                    node.eligible = true;
                    node.epoch_start = round;
                }
            }
        }
        ProtocolKind::Sep => {
            // Config invariants were validated at deployment, so the
            // weighted probabilities exist.
            let (p_nrm, p_adv) = sep_probabilities(
                config.p_opt,
                network.config.a_advanced,
                network.config.m_fraction,
            )
            .unwrap_or((config.p_opt, config.p_opt));
            let (n_nrm, n_adv) = (epoch_length(p_nrm), epoch_length(p_adv));
            for node in network.nodes.iter_mut().filter(|n| n.alive) {
                let epoch = match node.node_class {
                    NodeClass::Normal => n_nrm,
                    NodeClass::Advanced => n_adv,
                };
                if round % epoch == 0 {
                    node.eligible = true;
                    node.epoch_start = round;
                }
            }
        }
        ProtocolKind::Deec => {
            for node in network.nodes.iter_mut().filter(|n| n.alive) {
                if let Some(at) = node.eligible_again_at {
                    if round >= at {
                        node.eligible = true;
                        node.eligible_again_at = None;
                        node.epoch_start = round;
                    }
                }
            }
        }
    }
}

/// TEEN reporting rule: transmit iff the sensed value reaches the hard
/// threshold and has moved by at least the soft threshold since the last
/// transmitted value (a first reading always passes the soft gate).
pub fn teen_should_report(
    sensed: f64,
    last_transmitted: Option<f64>,
    hard: f64,
    soft: f64,
) -> bool {
    sensed >= hard
        && match last_transmitted {
            None => true,
            Some(last) => (sensed - last).abs() >= soft,
        }
}

/// Optimal cluster count
/// `k_opt = sqrt(0.5855·N·eps_fs·field_side² / (eps_mp·d_to_bs⁴ − e_elec))`.
///
/// Fails with a domain error when the denominator is not positive (the
/// formula has no real value there); never silently clamps.
pub fn optimal_cluster_count(
    n: u32,
    eps_fs: f64,
    eps_mp: f64,
    field_side: f64,
    d_to_bs: f64,
    e_elec: f64,
) -> Result<f64> {
    for (name, value) in [
        ("eps_fs", eps_fs),
        ("eps_mp", eps_mp),
        ("field_side", field_side),
        ("d_to_bs", d_to_bs),
        ("e_elec", e_elec),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Argument(format!(
                "{name}: must be finite and >= 0, got {value}"
            )));
        }
    }
    if n == 0 {
        return Ok(0.0);
    }
    let denom = eps_mp * d_to_bs.powi(4) - e_elec;
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "optimal cluster count undefined: eps_mp*d^4 - e_elec = {denom:e} (must be > 0)"
        )));
    }
    let numer = 0.5855 * n as f64 * eps_fs * field_side * field_side;
    Ok((numer / denom).sqrt())
}

/// Root-node weight `α = q^τ1 · (overlap/coverage)^τ2 · (1/d_to_bs)`.
pub fn echr_root_weight(
    q_i: f64,
    overlap_count: u32,
    coverage_count: u32,
    d_to_bs: f64,
    tau1: f64,
    tau2: f64,
) -> Result<f64> {
    if !q_i.is_finite() || q_i < 0.0 {
        return Err(Error::Argument(format!(
            "q_i: must be finite and >= 0, got {q_i}"
        )));
    }
    for (name, value) in [("tau1", tau1), ("tau2", tau2)] {
        if !value.is_finite() {
            return Err(Error::Argument(format!(
                "{name}: must be finite, got {value}"
            )));
        }
    }
    if coverage_count == 0 {
        return Err(Error::Domain(
            "root weight undefined: coverage_count must be > 0".into(),
        ));
    }
    if !d_to_bs.is_finite() || d_to_bs <= 0.0 {
        return Err(Error::Domain(format!(
            "root weight undefined: d_to_bs must be > 0, got {d_to_bs}"
        )));
    }
    let ratio = overlap_count as f64 / coverage_count as f64;
    Ok(q_i.powf(tau1) * ratio.powf(tau2) / d_to_bs)
}

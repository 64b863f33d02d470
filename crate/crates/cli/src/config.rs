//! Experiment configuration: a single TOML document with `[network]`,
//! `[radio]`, `[experiment]`, `[teen]`, and `[emit]` tables, every key
//! optional. Missing keys fall back to the standard defaults (100 nodes on
//! a 100×100 m field, 0.5 J nodes, p_opt 0.1, LEACH); unknown keys are
//! hard errors naming the offending key. The full key reference lives in
//! `docs/config-schema.toml`.

use std::path::PathBuf;

use clustersim_core::{
    NetworkConfig, ProtocolConfig, ProtocolKind, RadioEnergyParams, SimParams, TeenParams,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Which artifacts an experiment writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmitFlags {
    /// One per-round CSV per (protocol, p_opt, seed) run.
    pub csv: bool,
    /// One `summary.json` per experiment.
    pub json_summary: bool,
    /// Long-format `plot_data.csv` over all runs of the plot seed.
    pub plot_data: bool,
    /// Line-chart SVGs, one per metric per p_opt.
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            csv: true,
            json_summary: true,
            plot_data: false,
            svg: false,
        }
    }
}

/// One planned simulation: a point in the protocols × p_opt × seeds grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunKey {
    pub protocol: ProtocolKind,
    pub p_opt: f64,
    pub seed: u64,
}

impl RunKey {
    /// Lowercase protocol tag used in file names and CSV cells.
    pub fn protocol_slug(&self) -> &'static str {
        protocol_slug(self.protocol)
    }
}

impl std::fmt::Display for RunKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "protocol={} p_opt={} seed={}",
            self.protocol_slug(),
            self.p_opt,
            self.seed
        )
    }
}

/// Lowercase protocol tag (matches the config-file spelling).
pub fn protocol_slug(kind: ProtocolKind) -> &'static str {
    match kind {
        ProtocolKind::Leach => "leach",
        ProtocolKind::Sep => "sep",
        ProtocolKind::Deec => "deec",
        ProtocolKind::Teen => "teen",
    }
}

/// A fully validated experiment: the network/engine templates plus the
/// sweep axes and output instructions.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    /// Network template; each run replaces `seed` with its own.
    pub network: NetworkConfig,
    /// Radio constants, packet size, and join radius shared by all runs.
    pub params: SimParams,
    pub protocols: Vec<ProtocolKind>,
    /// Reporting thresholds applied to TEEN runs.
    pub teen: TeenParams,
    pub p_opt_sweep: Vec<f64>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub emit: EmitFlags,
    /// Worker-pool bound; `None` = available parallelism.
    pub workers: Option<usize>,
}

impl ExperimentSpec {
    /// The full protocols × p_opt × seeds grid, in that nesting order.
    pub fn planned_runs(&self) -> Vec<RunKey> {
        let mut runs =
            Vec::with_capacity(self.protocols.len() * self.p_opt_sweep.len() * self.seeds.len());
        for &protocol in &self.protocols {
            for &p_opt in &self.p_opt_sweep {
                for &seed in &self.seeds {
                    runs.push(RunKey {
                        protocol,
                        p_opt,
                        seed,
                    });
                }
            }
        }
        runs
    }

    /// Seed whose runs feed plot data and SVGs (first of the sweep).
    pub fn plot_seed(&self) -> u64 {
        self.seeds[0]
    }
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            params: SimParams::default(),
            protocols: vec![ProtocolKind::Leach],
            teen: TeenParams::default(),
            p_opt_sweep: vec![0.1],
            seeds: vec![1],
            output_dir: PathBuf::from("out"),
            emit: EmitFlags::default(),
            workers: None,
        }
    }
}

// ---------------------------------------------------------------------
// Raw TOML shapes: every key optional, unknown keys rejected.
// ---------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawDoc {
    network: RawNetwork,
    radio: RawRadio,
    experiment: RawExperiment,
    teen: RawTeen,
    emit: RawEmit,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawNetwork {
    n_nodes: Option<u32>,
    field_w: Option<f64>,
    field_h: Option<f64>,
    bs_x: Option<f64>,
    bs_y: Option<f64>,
    m_fraction: Option<f64>,
    a_advanced: Option<f64>,
    e0: Option<f64>,
    max_rounds: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRadio {
    e_elec: Option<f64>,
    eps_fs: Option<f64>,
    eps_mp: Option<f64>,
    e_da: Option<f64>,
    packet_bits: Option<u32>,
    max_join_radius: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawExperiment {
    protocols: Option<Vec<ProtocolKind>>,
    p_opt: Option<Vec<f64>>,
    seeds: Option<Vec<u64>>,
    output_dir: Option<PathBuf>,
    workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTeen {
    hard: Option<f64>,
    soft: Option<f64>,
    sense_lo: Option<f64>,
    sense_hi: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawEmit {
    csv: Option<bool>,
    json_summary: Option<bool>,
    plot_data: Option<bool>,
    svg: Option<bool>,
}

/// Parses and validates a TOML experiment document. An empty document
/// yields the all-defaults spec; every provided value is range-checked and
/// errors name the offending key.
pub fn parse_config(text: &str) -> CliResult<ExperimentSpec> {
    let raw: RawDoc = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let defaults = ExperimentSpec::default();

    let mut network = defaults.network.clone();
    if let Some(v) = raw.network.n_nodes {
        network.n_nodes = v;
    }
    if let Some(v) = raw.network.field_w {
        network.field_w = v;
    }
    if let Some(v) = raw.network.field_h {
        network.field_h = v;
    }
    if let Some(v) = raw.network.bs_x {
        network.bs_x = v;
    }
    if let Some(v) = raw.network.bs_y {
        network.bs_y = v;
    }
    if let Some(v) = raw.network.m_fraction {
        network.m_fraction = v;
    }
    if let Some(v) = raw.network.a_advanced {
        network.a_advanced = v;
    }
    if let Some(v) = raw.network.e0 {
        network.e0 = v;
    }
    if let Some(v) = raw.network.max_rounds {
        network.max_rounds = v;
    }
    network.validate()?;

    let base_radio = RadioEnergyParams::default();
    let radio = RadioEnergyParams::new(
        raw.radio.e_elec.unwrap_or(base_radio.e_elec),
        raw.radio.eps_fs.unwrap_or(base_radio.eps_fs),
        raw.radio.eps_mp.unwrap_or(base_radio.eps_mp),
        raw.radio.e_da.unwrap_or(base_radio.e_da),
    )?;
    let params = SimParams {
        radio,
        packet_bits: raw.radio.packet_bits.unwrap_or(defaults.params.packet_bits),
        max_join_radius: raw.radio.max_join_radius,
    };
    params.validate()?;

    let protocols = raw.experiment.protocols.unwrap_or(defaults.protocols);
    if protocols.is_empty() {
        return Err(CliError::Config(
            "protocols: at least one protocol is required".into(),
        ));
    }
    let p_opt_sweep = raw.experiment.p_opt.unwrap_or(defaults.p_opt_sweep);
    if p_opt_sweep.is_empty() {
        return Err(CliError::Config(
            "p_opt: at least one value is required".into(),
        ));
    }
    for &p in &p_opt_sweep {
        if !p.is_finite() || !(p > 0.0 && p <= 1.0) {
            return Err(CliError::Config(format!(
                "p_opt: values must lie in (0, 1], got {p}"
            )));
        }
    }
    let seeds = raw.experiment.seeds.unwrap_or(defaults.seeds);
    if seeds.is_empty() {
        return Err(CliError::Config(
            "seeds: at least one seed is required".into(),
        ));
    }
    if let Some(0) = raw.experiment.workers {
        return Err(CliError::Config("workers: must be at least 1".into()));
    }

    let base_teen = TeenParams::default();
    let teen = TeenParams {
        hard: raw.teen.hard.unwrap_or(base_teen.hard),
        soft: raw.teen.soft.unwrap_or(base_teen.soft),
        sense_lo: raw.teen.sense_lo.unwrap_or(base_teen.sense_lo),
        sense_hi: raw.teen.sense_hi.unwrap_or(base_teen.sense_hi),
    };
    // Validate the TEEN table eagerly (and p_opt against each protocol)
    // so a bad sweep fails before any run starts.
    for &p in &p_opt_sweep {
        for &kind in &protocols {
            let teen_arg = (kind == ProtocolKind::Teen).then_some(teen);
            ProtocolConfig::build(kind, p, teen_arg)?;
        }
    }

    Ok(ExperimentSpec {
        network,
        params,
        protocols,
        teen,
        p_opt_sweep,
        seeds,
        output_dir: raw.experiment.output_dir.unwrap_or(defaults.output_dir),
        emit: EmitFlags {
            csv: raw.emit.csv.unwrap_or(defaults.emit.csv),
            json_summary: raw.emit.json_summary.unwrap_or(defaults.emit.json_summary),
            plot_data: raw.emit.plot_data.unwrap_or(defaults.emit.plot_data),
            svg: raw.emit.svg.unwrap_or(defaults.emit.svg),
        },
        workers: raw.experiment.workers,
    })
}

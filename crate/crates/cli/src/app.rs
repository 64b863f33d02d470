//! Command-line surface: argument definitions, dispatch, and exit-code
//! policy (0 success, 1 run/IO failure, 2 configuration error).

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use clustersim_core::markov::{ch_count_pmf, monte_carlo_ch_distribution};
use clustersim_core::protocols::{echr_root_weight, optimal_cluster_count};
use clustersim_core::MarkovModel;

use crate::config::{parse_config, ExperimentSpec};
use crate::csvio::{atomic_write, markov_csv};
use crate::error::{CliError, CliResult};
use crate::runner;

/// Deterministic simulator and analytical toolkit for cluster-head
/// election protocols in wireless sensor networks.
#[derive(Debug, Parser)]
#[command(name = "clustersim", version, about)]
pub struct Cli {
    /// Experiment configuration file (TOML); omit for built-in defaults
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output directory (overrides config and CLUSTERSIM_OUT_DIR)
    #[arg(long, global = true, env = "CLUSTERSIM_OUT_DIR", value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Replace the configured seed list with this single seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Suppress informational output (errors still go to stderr)
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured batch of (protocol, p_opt, seed) simulations
    Simulate,

    /// Compute the analytical CH-count distribution of the election
    /// chain, optionally cross-checked by Monte-Carlo simulation
    Markov {
        /// Network size N
        #[arg(long)]
        nodes: u32,
        /// Chain period m (m-1 election stages + reset)
        #[arg(long)]
        stages: u32,
        /// Per-stage election probability
        #[arg(long)]
        p: f64,
        /// Monte-Carlo election rounds; adds a p_montecarlo column
        #[arg(long)]
        trials: Option<u64>,
    },

    /// Evaluate the optimal cluster count for a square field
    Kopt {
        /// Network size N
        #[arg(long, default_value = "100")]
        nodes: u32,
        /// Side length of the square field (m)
        #[arg(long, default_value = "100")]
        field_side: f64,
        /// Distance from cluster heads to the base station (m)
        #[arg(long)]
        d_bs: f64,
        /// Free-space amplifier energy (J/bit/m²)
        #[arg(long, default_value = "10e-12")]
        eps_fs: f64,
        /// Multipath amplifier energy (J/bit/m⁴)
        #[arg(long, default_value = "0.0013e-12")]
        eps_mp: f64,
        /// Electronics energy (J/bit)
        #[arg(long, default_value = "50e-9")]
        e_elec: f64,
    },

    /// Evaluate the root-selection weight
    /// q^tau1 · (overlap/coverage)^tau2 / d_bs
    EchrWeight {
        /// Node quality factor q
        #[arg(long)]
        q: f64,
        /// Nodes covered by this candidate and at least one other
        #[arg(long)]
        overlap: u32,
        /// Nodes covered by this candidate
        #[arg(long)]
        coverage: u32,
        /// Distance to the base station (m)
        #[arg(long)]
        d_bs: f64,
        /// Exponent on q
        #[arg(long, default_value = "1")]
        tau1: f64,
        /// Exponent on the overlap ratio
        #[arg(long, default_value = "1")]
        tau2: f64,
    },
}

fn load_spec(cli: &Cli) -> CliResult<ExperimentSpec> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut spec = parse_config(&text)?;
    if let Some(out) = &cli.out {
        spec.output_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        spec.seeds = vec![seed];
    }
    Ok(spec)
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Simulate => {
            let spec = load_spec(&cli)?;
            let total = spec.planned_runs().len();
            let report = runner::run_experiments(&spec)?;
            for (key, msg) in &report.failures {
                eprintln!("run failed: {key}: {msg}");
            }
            if !cli.quiet {
                println!(
                    "completed {}/{} runs, wrote {} files to {}",
                    report.records.len(),
                    total,
                    report.files.len(),
                    spec.output_dir.display()
                );
            }
            Ok(if report.failures.is_empty() { 0 } else { 1 })
        }
        Command::Markov {
            nodes,
            stages,
            p,
            trials,
        } => {
            let spec = load_spec(&cli)?;
            let model = MarkovModel::build(nodes, stages, p)?;
            let dist = ch_count_pmf(&model)?;
            let mc = trials
                .map(|t| monte_carlo_ch_distribution(nodes, stages, p, t, cli.seed.unwrap_or(1)))
                .transpose()?;
            let csv = markov_csv(&dist, mc.as_ref())?;
            fs::create_dir_all(&spec.output_dir).map_err(|source| CliError::Io {
                path: spec.output_dir.clone(),
                source,
            })?;
            let path = spec
                .output_dir
                .join(format!("markov_n{nodes}_m{stages}_p{p}.csv"));
            atomic_write(&path, csv.as_bytes())?;
            if !cli.quiet {
                println!("mean cluster heads: {}", dist.mean);
                if let Some(mc) = &mc {
                    println!("monte-carlo mean: {}", mc.mean);
                }
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Kopt {
            nodes,
            field_side,
            d_bs,
            eps_fs,
            eps_mp,
            e_elec,
        } => {
            let k = optimal_cluster_count(nodes, eps_fs, eps_mp, field_side, d_bs, e_elec)?;
            println!("{k}");
            Ok(0)
        }
        Command::EchrWeight {
            q,
            overlap,
            coverage,
            d_bs,
            tau1,
            tau2,
        } => {
            let w = echr_root_weight(q, overlap, coverage, d_bs, tau1, tau2)?;
            println!("{w}");
            Ok(0)
        }
    }
}

/// Parses the process arguments, runs the requested command, and returns
/// the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

//! Batch experiment driver: expands the run grid, executes independent
//! simulations on a bounded worker pool, and emits per-run CSVs, the JSON
//! summary, and plot artifacts. The output directory is created and
//! probed for writability before any simulation starts; each run's CSV is
//! written by the worker that owns the run; the summary and plot files are
//! written once, after the join point.

use std::fs;
use std::path::PathBuf;

use clustersim_core::{run_simulation_with, ProtocolKind, SimulationResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentSpec, RunKey};
use crate::csvio::{atomic_write, round_csv, round_csv_name};
use crate::error::{CliError, CliResult};
use crate::plot::{build_charts, plot_data_csv};

/// Worker result: a completed run plus its CSV path, or the failed
/// run's key and message.
type RunOutcome = Result<(RunRecord, Option<PathBuf>), (RunKey, String)>;

/// One completed run.
#[derive(Debug)]
pub struct RunRecord {
    pub key: RunKey,
    pub result: SimulationResult,
}

/// What a batch produced: completed runs, per-run failures (the batch
/// keeps going past individual failures), and every file written.
#[derive(Debug)]
pub struct BatchReport {
    pub records: Vec<RunRecord>,
    pub failures: Vec<(RunKey, String)>,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct SummaryRun<'a> {
    protocol: &'a str,
    p_opt: f64,
    seed: u64,
    first_death_round: Option<u32>,
    half_death_round: Option<u32>,
    last_death_round: Option<u32>,
    rounds_simulated: u32,
}

#[derive(Serialize)]
struct Summary<'a> {
    config_echo: &'a ExperimentSpec,
    runs: Vec<SummaryRun<'a>>,
}

fn probe_output_dir(spec: &ExperimentSpec) -> CliResult<()> {
    fs::create_dir_all(&spec.output_dir).map_err(|source| CliError::Io {
        path: spec.output_dir.clone(),
        source,
    })?;
    // Catch unwritable directories before any simulation starts.
    let probe = spec.output_dir.join(".write_probe.tmp");
    fs::write(&probe, b"").map_err(|source| CliError::Io {
        path: spec.output_dir.clone(),
        source,
    })?;
    let _ = fs::remove_file(&probe);
    Ok(())
}

fn run_one(spec: &ExperimentSpec, key: RunKey) -> Result<(RunRecord, Option<PathBuf>), String> {
    let mut net_config = spec.network.clone();
    net_config.seed = key.seed;
    let teen = (key.protocol == ProtocolKind::Teen).then_some(spec.teen);
    let protocol = clustersim_core::ProtocolConfig::build(key.protocol, key.p_opt, teen)
        .map_err(|e| e.to_string())?;
    let result = run_simulation_with(&net_config, &protocol, spec.params.clone())
        .map_err(|e| e.to_string())?;

    let csv_path = if spec.emit.csv {
        let path = spec.output_dir.join(round_csv_name(&key));
        atomic_write(&path, round_csv(&result).as_bytes()).map_err(|e| e.to_string())?;
        Some(path)
    } else {
        None
    };
    Ok((RunRecord { key, result }, csv_path))
}

/// Runs every planned (protocol, p_opt, seed) combination and writes the
/// requested artifacts. Individual run failures are collected in the
/// report rather than aborting the batch; infrastructure failures
/// (unwritable output dir, summary write errors) abort with `Err`.
pub fn run_experiments(spec: &ExperimentSpec) -> CliResult<BatchReport> {
    probe_output_dir(spec)?;

    let keys = spec.planned_runs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    let outcomes: Vec<RunOutcome> = pool.install(|| {
        keys.par_iter()
            .map(|&key| run_one(spec, key).map_err(|msg| (key, msg)))
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut files = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok((record, csv_path)) => {
                records.push(record);
                files.extend(csv_path);
            }
            Err(failure) => failures.push(failure),
        }
    }

    if spec.emit.json_summary {
        let summary = Summary {
            config_echo: spec,
            runs: records
                .iter()
                .map(|r| SummaryRun {
                    protocol: r.key.protocol_slug(),
                    p_opt: r.key.p_opt,
                    seed: r.key.seed,
                    first_death_round: r.result.first_death_round,
                    half_death_round: r.result.half_death_round,
                    last_death_round: r.result.last_death_round,
                    rounds_simulated: r.result.rounds_simulated(),
                })
                .collect(),
        };
        let json = serde_json::to_string_pretty(&summary)
            .map_err(|e| CliError::Config(format!("summary serialization: {e}")))?;
        let path = spec.output_dir.join("summary.json");
        atomic_write(&path, format!("{json}\n").as_bytes())?;
        files.push(path);
    }

    if spec.emit.plot_data || spec.emit.svg {
        // Plot artifacts use one run per (protocol, p_opt): the first seed.
        let plot_seed = spec.plot_seed();
        let plot_runs: Vec<(RunKey, &SimulationResult)> = records
            .iter()
            .filter(|r| r.key.seed == plot_seed)
            .map(|r| (r.key, &r.result))
            .collect();
        if spec.emit.plot_data {
            let path = spec.output_dir.join("plot_data.csv");
            atomic_write(&path, plot_data_csv(&plot_runs).as_bytes())?;
            files.push(path);
        }
        if spec.emit.svg {
            for (name, svg) in build_charts(&plot_runs)? {
                let path = spec.output_dir.join(name);
                atomic_write(&path, svg.as_bytes())?;
                files.push(path);
            }
        }
    }

    Ok(BatchReport {
        records,
        failures,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn temp_out(tag: &str) -> PathBuf {
        let dir =
            std::env::temp_dir().join(format!("clustersim-runner-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    fn small_spec(tag: &str, extra: &str) -> ExperimentSpec {
        let doc = format!(
            "[network]\nn_nodes = 20\ne0 = 0.02\nmax_rounds = 30\n\
             [experiment]\nprotocols = [\"leach\", \"sep\"]\np_opt = [0.1]\nseeds = [1, 2]\n{extra}"
        );
        let mut spec = parse_config(&doc).unwrap();
        spec.output_dir = temp_out(tag);
        spec
    }

    #[test]
    fn batch_writes_one_csv_per_run_and_a_summary() {
        let spec = small_spec("basic", "");
        let report = run_experiments(&spec).unwrap();
        assert!(report.failures.is_empty());
        assert_eq!(report.records.len(), 4);
        for key in spec.planned_runs() {
            assert!(spec.output_dir.join(round_csv_name(&key)).exists(), "{key}");
        }
        let summary: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(spec.output_dir.join("summary.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(summary["runs"].as_array().unwrap().len(), 4);
        assert_eq!(summary["config_echo"]["network"]["n_nodes"], 20);
        let run0 = &summary["runs"][0];
        assert_eq!(run0["protocol"], "leach");
        assert_eq!(run0["seed"], 1);
        assert!(run0["rounds_simulated"].as_u64().unwrap() <= 30);
        fs::remove_dir_all(&spec.output_dir).unwrap();
    }

    #[test]
    fn rerun_is_byte_identical() {
        let spec = small_spec("determinism", "");
        run_experiments(&spec).unwrap();
        let key = spec.planned_runs()[0];
        let first = fs::read(spec.output_dir.join(round_csv_name(&key))).unwrap();
        run_experiments(&spec).unwrap();
        let second = fs::read(spec.output_dir.join(round_csv_name(&key))).unwrap();
        assert_eq!(first, second);
        fs::remove_dir_all(&spec.output_dir).unwrap();
    }

    #[test]
    fn plot_artifacts_use_first_seed_only() {
        let spec = small_spec("plots", "[emit]\nplot_data = true\nsvg = true\n");
        let report = run_experiments(&spec).unwrap();
        let plot_csv = fs::read_to_string(spec.output_dir.join("plot_data.csv")).unwrap();
        // Two protocols at one p_opt from seed 1 only.
        assert!(plot_csv.contains("leach,0.1,0,"));
        assert!(plot_csv.contains("sep,0.1,0,"));
        assert!(spec.output_dir.join("plot_n_ch_p0.1.svg").exists());
        assert!(spec.output_dir.join("plot_n_alive_p0.1.svg").exists());
        assert!(report.files.len() >= 4 + 1 + 3);
        fs::remove_dir_all(&spec.output_dir).unwrap();
    }

    #[test]
    fn unwritable_output_dir_fails_before_running() {
        let file_in_the_way = temp_out("blocked");
        fs::create_dir_all(file_in_the_way.parent().unwrap()).unwrap();
        fs::write(&file_in_the_way, b"not a directory").unwrap();
        let mut spec = small_spec("blocked-spec", "");
        spec.output_dir = file_in_the_way.clone();
        let err = run_experiments(&spec).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        fs::remove_file(&file_in_the_way).unwrap();
    }

    #[test]
    fn emit_flags_suppress_files() {
        let spec = small_spec("quiet-emit", "[emit]\ncsv = false\njson_summary = false\n");
        let report = run_experiments(&spec).unwrap();
        assert!(report.files.is_empty());
        assert_eq!(report.records.len(), 4);
        assert!(!spec.output_dir.join("summary.json").exists());
        fs::remove_dir_all(&spec.output_dir).unwrap();
    }

    #[test]
    fn worker_bound_is_respected_and_deterministic() {
        let mut one = small_spec("w1", "");
        one.workers = Some(1);
        let mut four = small_spec("w4", "");
        four.workers = Some(4);
        run_experiments(&one).unwrap();
        run_experiments(&four).unwrap();
        for key in one.planned_runs() {
            let a = fs::read(one.output_dir.join(round_csv_name(&key))).unwrap();
            let b = fs::read(four.output_dir.join(round_csv_name(&key))).unwrap();
            assert_eq!(a, b, "{key}");
        }
        fs::remove_dir_all(&one.output_dir).unwrap();
        fs::remove_dir_all(&four.output_dir).unwrap();
    }
}

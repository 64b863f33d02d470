//! CSV emission and parse-back. All files are comma-separated, UTF-8,
//! LF-terminated, with a header row; floats are serialized with Rust's
//! shortest round-trip formatting so `parse(write(x)) == x` exactly.
//! Writes go to a sibling `.tmp` file first and are renamed into place, so
//! an emitted file is either complete or absent.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clustersim_core::{ChCountDistribution, SimulationResult};

use crate::config::{protocol_slug, RunKey};
use crate::error::{CliError, CliResult};

/// Header of every per-round CSV.
pub const ROUND_CSV_HEADER: &str =
    "round,protocol,p_opt,seed,n_alive,n_ch,total_residual_j,mean_cluster_size,packets_to_bs";

/// Writes `bytes` to `path` atomically (temp file + rename). The temp file
/// is removed on failure so no partial output is ever left behind.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other("path has no file name"),
        })?
        .to_os_string();
    let mut tmp_name = file_name;
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).map_err(|source| CliError::Io {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(|source| {
        let _ = fs::remove_file(&tmp);
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    })
}

/// Renders one run as a per-round CSV (header + one row per round).
pub fn round_csv(result: &SimulationResult) -> String {
    let slug = protocol_slug(result.protocol.kind);
    let p_opt = result.protocol.p_opt;
    let seed = result.seed;
    let mut out = String::with_capacity(64 * (result.per_round.len() + 1));
    out.push_str(ROUND_CSV_HEADER);
    out.push('\n');
    for m in &result.per_round {
        writeln!(
            out,
            "{},{slug},{p_opt},{seed},{},{},{},{},{}",
            m.round, m.n_alive, m.n_ch, m.total_residual, m.mean_cluster_size, m.packets_to_bs
        )
        .expect("writing to String cannot fail");
    }
    out
}

/// File name for one run's per-round CSV.
pub fn round_csv_name(key: &RunKey) -> String {
    format!(
        "rounds_{}_p{}_seed{}.csv",
        key.protocol_slug(),
        key.p_opt,
        key.seed
    )
}

/// One parsed row of a per-round CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundCsvRow {
    pub round: u32,
    pub protocol: String,
    pub p_opt: f64,
    pub seed: u64,
    pub n_alive: u32,
    pub n_ch: u32,
    pub total_residual_j: f64,
    pub mean_cluster_size: f64,
    pub packets_to_bs: u32,
}

fn field<'a>(parts: &mut impl Iterator<Item = &'a str>, line_no: usize) -> CliResult<&'a str> {
    parts
        .next()
        .ok_or_else(|| CliError::Config(format!("round CSV line {line_no}: too few fields")))
}

fn parse_num<T: std::str::FromStr>(raw: &str, line_no: usize, name: &str) -> CliResult<T> {
    raw.parse().map_err(|_| {
        CliError::Config(format!(
            "round CSV line {line_no}: bad {name} value {raw:?}"
        ))
    })
}

/// Parses a per-round CSV produced by [`round_csv`], validating the header
/// and field count.
pub fn parse_round_csv(text: &str) -> CliResult<Vec<RoundCsvRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("round CSV: empty file".into()))?;
    if header != ROUND_CSV_HEADER {
        return Err(CliError::Config(format!(
            "round CSV: unexpected header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let mut parts = line.split(',');
        let row = RoundCsvRow {
            round: parse_num(field(&mut parts, line_no)?, line_no, "round")?,
            protocol: field(&mut parts, line_no)?.to_string(),
            p_opt: parse_num(field(&mut parts, line_no)?, line_no, "p_opt")?,
            seed: parse_num(field(&mut parts, line_no)?, line_no, "seed")?,
            n_alive: parse_num(field(&mut parts, line_no)?, line_no, "n_alive")?,
            n_ch: parse_num(field(&mut parts, line_no)?, line_no, "n_ch")?,
            total_residual_j: parse_num(field(&mut parts, line_no)?, line_no, "total_residual_j")?,
            mean_cluster_size: parse_num(
                field(&mut parts, line_no)?,
                line_no,
                "mean_cluster_size",
            )?,
            packets_to_bs: parse_num(field(&mut parts, line_no)?, line_no, "packets_to_bs")?,
        };
        if parts.next().is_some() {
            return Err(CliError::Config(format!(
                "round CSV line {line_no}: too many fields"
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Renders a CH-count distribution as CSV: `k,p_analytical`, plus a
/// `p_montecarlo` column when a Monte-Carlo distribution is supplied. Rows
/// cover every k from 0 to N.
pub fn markov_csv(
    analytical: &ChCountDistribution,
    monte_carlo: Option<&ChCountDistribution>,
) -> CliResult<String> {
    if let Some(mc) = monte_carlo {
        if mc.pmf.len() != analytical.pmf.len() {
            return Err(CliError::Config(format!(
                "distribution lengths differ: analytical {} vs monte-carlo {}",
                analytical.pmf.len(),
                mc.pmf.len()
            )));
        }
    }
    let mut out = String::new();
    out.push_str("k,p_analytical");
    if monte_carlo.is_some() {
        out.push_str(",p_montecarlo");
    }
    out.push('\n');
    for (k, &p) in analytical.pmf.iter().enumerate() {
        match monte_carlo {
            Some(mc) => writeln!(out, "{k},{p},{}", mc.pmf[k]),
            None => writeln!(out, "{k},{p}"),
        }
        .expect("writing to String cannot fail");
    }
    Ok(out)
}

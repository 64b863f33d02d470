//! Command-line driver for the cluster-head election simulator:
//! TOML experiment configs, a parallel batch runner, CSV/JSON emission,
//! and built-in SVG plotting. The simulation and analysis logic lives in
//! `clustersim-core`; this crate is plumbing around it.

pub mod app;
pub mod config;
pub mod csvio;
pub mod error;
pub mod plot;
pub mod runner;

pub use app::run;
pub use config::{parse_config, ExperimentSpec, RunKey};
pub use error::{CliError, CliResult};

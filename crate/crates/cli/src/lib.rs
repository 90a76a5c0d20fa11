//! Front end for the soliton experiments: `key = value` configs, dispatch,
//! and CSV/SVG output with a hashed manifest.
//!
//! Exit codes: 0 when every gate passes, 1 when a gate fails, 2 for usage,
//! configuration or output errors, 3 for numerical failures.

mod commands;
mod config;
mod emit;
mod svg;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{run, GAMMA_HEADER, HISTORY_HEADER};
pub use config::{parse_config, Command, ConfigError, Key, Kind, ModelKind, RunConfig, Value};
pub use emit::{emit_report, Entry, Results, IDENTITY_FILE, MANIFEST};
pub use svg::line_plot;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read {}: {source}", path.display())]
    Input { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input { .. } | CliError::Output { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

macro_rules! numerical_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Numerical(e.to_string())
            }
        }
    )*};
}

numerical_from!(
    geom_core::GeomError,
    models::ModelError,
    surface_flow::FlowError,
    comparison_geom::CompError,
    soliton_verify::VerifyError,
    wing_solver::WingError
);

/// What a finished invocation wrote.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Results,
    pub manifest: Vec<Entry>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.results.all_pass() {
            0
        } else {
            1
        }
    }
}

/// Parse, run and emit. `config` is the path of a `key = value` file.
pub fn execute(command: Command, config: Option<&Path>, out: &Path, seed: u64) -> Result<Outcome, CliError> {
    let text = match config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Input { path: p.to_path_buf(), source: e })?,
        None => String::new(),
    };
    let cfg = parse_config(&text, command, seed)?;
    let results = run(&cfg)?;
    let manifest = emit_report(&results, out)?;
    Ok(Outcome { results, manifest })
}

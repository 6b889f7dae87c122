//! Experiment runner for the qprobe simulator: parse a declarative JSON
//! config (or a named preset), execute it, and write CSV/JSON artifacts
//! plus an echoed effective config.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

use std::fmt;

pub use config::{parse_config, Config, Experiment, UnravelingChoice};
pub use runner::{run_experiment, RunSummary};

/// Process-level failures with their exit codes: config errors exit 2,
/// numerical invariant violations exit 3, I/O errors exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numerical invariant violated: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Load a config from a file path or a preset name.
pub fn load_config(source: &str) -> Result<Config, CliError> {
    if let Some(config) = presets::find(source) {
        return Ok(config);
    }
    if std::path::Path::new(source).exists() {
        let text = std::fs::read_to_string(source)?;
        return parse_config(&text);
    }
    Err(CliError::Config(format!(
        "`{source}` is neither a readable file nor a known preset (see `presets list`)"
    )))
}

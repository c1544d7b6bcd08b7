//! JSON configuration files. Command-line flags override any value set here.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Environment variable naming a configuration file read when `--config` is absent.
pub const CONFIG_ENV: &str = "LOQC_CONFIG";

/// A grid value may be written as a JSON number or as a grid string.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GridValue {
    Number(f64),
    Text(String),
}

impl GridValue {
    pub fn to_spec(&self) -> String {
        match self {
            GridValue::Number(x) => x.to_string(),
            GridValue::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub protocol: Option<String>,
    pub input: Option<String>,
    pub l: Option<GridValue>,
    pub g: Option<GridValue>,
    pub n: Option<usize>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub verbose: Option<bool>,
    pub mode: Option<String>,
    pub n_max: Option<usize>,
    pub target: Option<f64>,
    pub log: Option<bool>,
}

impl Config {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
    }

    /// The explicit `--config` file, else the file named by `LOQC_CONFIG`,
    /// else an empty configuration.
    pub fn load(explicit: Option<&Path>) -> CliResult<Self> {
        if let Some(path) = explicit {
            return Self::from_path(path);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::from_path(Path::new(&path)),
            _ => Ok(Self::default()),
        }
    }
}

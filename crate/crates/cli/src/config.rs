use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use hyperdoc_core::context::{ContextConfig, StructureConfig};
use hyperdoc_core::measures::MeasureConfig;
use hyperdoc_core::pii::PiiConfig;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub inputs: Vec<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub docs: Vec<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub queries: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Settings shared by all subcommands. Command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub paths: Paths,
    pub format: Option<String>,
    pub context: Option<ContextConfig>,
    pub structure: Option<StructureConfig>,
    pub measures: Option<MeasureConfig>,
    pub pii: Option<PiiConfig>,
    pub weighting: Option<String>,
    pub measure: Option<String>,
    pub k: Option<usize>,
    pub eval_k: Option<usize>,
    pub raw_precision: Option<bool>,
    pub min_length: Option<usize>,
    pub min_frequency: Option<u64>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(existing(path)?)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Fails with the I/O exit code when `path` does not exist.
pub fn existing(path: &Path) -> anyhow::Result<&Path> {
    if path.exists() {
        Ok(path)
    } else {
        Err(CliError::MissingInput(path.to_path_buf()).into())
    }
}

pub fn required<T>(value: Option<T>, name: &'static str) -> anyhow::Result<T> {
    value.ok_or_else(|| CliError::MissingSetting(name).into())
}

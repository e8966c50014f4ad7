use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::constellation::ConstellationConfig;
use crate::error::{Error, Result};
use crate::scenario::{TrafficModel, DEFAULT_BASE_CAPACITY_MBPS};
use crate::selection::Algorithm;

/// Overrides `output_dir` from the config file when set.
pub const OUTPUT_DIR_ENV: &str = "LEOSEL_OUTPUT_DIR";

/// A fully resolved experiment: presets expanded, paths resolved, every
/// field validated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub constellation: ConstellationConfig,
    pub edges_file: PathBuf,
    pub base_capacity_mbps: f64,
    pub traffic: TrafficModel,
    pub epoch_offset_s: f64,
    pub sample_interval_s: f64,
    pub sample_count: usize,
    pub algorithms: Vec<Algorithm>,
    pub op_budget_s: f64,
    pub output_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ConstellationSpec {
    Preset(String),
    Custom(ConstellationConfig),
}

fn default_base_capacity() -> f64 {
    DEFAULT_BASE_CAPACITY_MBPS
}
fn default_interval() -> f64 {
    300.0
}
fn default_count() -> usize {
    100
}
fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}
fn default_budget() -> f64 {
    5.0
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    constellation: Option<ConstellationSpec>,
    edges_file: Option<PathBuf>,
    #[serde(default = "default_base_capacity")]
    base_capacity_mbps: f64,
    #[serde(default)]
    traffic: TrafficModel,
    #[serde(default)]
    epoch_offset_s: f64,
    #[serde(default = "default_interval")]
    sample_interval_s: f64,
    #[serde(default = "default_count")]
    sample_count: usize,
    #[serde(default = "default_algorithms")]
    algorithms: Vec<Algorithm>,
    #[serde(default = "default_budget")]
    op_budget_s: f64,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
}

/// Shape of `run_manifest.json`; its `config` is itself a loadable config.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest<C> {
    pub code_version: String,
    pub seed: u64,
    pub config: C,
}

pub fn code_version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

impl ExperimentConfig {
    /// Replication defaults around an edge file and constellation.
    pub fn new(constellation: ConstellationConfig, edges_file: impl Into<PathBuf>) -> Self {
        Self {
            constellation,
            edges_file: edges_file.into(),
            base_capacity_mbps: default_base_capacity(),
            traffic: TrafficModel::default(),
            epoch_offset_s: 0.0,
            sample_interval_s: default_interval(),
            sample_count: default_count(),
            algorithms: default_algorithms(),
            op_budget_s: default_budget(),
            output_dir: default_output_dir(),
        }
    }

    pub fn op_budget(&self) -> Duration {
        Duration::from_secs_f64(self.op_budget_s)
    }

    pub fn validate(&self) -> Result<()> {
        self.constellation
            .validate()
            .map_err(|e| prefix("constellation", e))?;
        self.traffic.validate()?;
        if !(self.base_capacity_mbps.is_finite() && self.base_capacity_mbps >= 0.0) {
            return Err(Error::invalid("base_capacity_mbps", format!("{} must be >= 0", self.base_capacity_mbps)));
        }
        if !(self.epoch_offset_s.is_finite() && self.epoch_offset_s >= 0.0) {
            return Err(Error::invalid("epoch_offset_s", format!("{} must be >= 0", self.epoch_offset_s)));
        }
        if !(self.sample_interval_s.is_finite() && self.sample_interval_s > 0.0) {
            return Err(Error::invalid("sample_interval_s", format!("{} must be > 0", self.sample_interval_s)));
        }
        if self.sample_count == 0 {
            return Err(Error::invalid("sample_count", "must be >= 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("algorithms", "at least one algorithm is required"));
        }
        if !(self.op_budget_s.is_finite() && self.op_budget_s > 0.0) {
            return Err(Error::invalid("op_budget_s", format!("{} must be > 0", self.op_budget_s)));
        }
        Ok(())
    }

    /// Sampled instants `epoch_offset_s + k * sample_interval_s`.
    pub fn sample_times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.sample_count).map(|k| self.epoch_offset_s + k as f64 * self.sample_interval_s)
    }
}

fn prefix(field: &str, e: Error) -> Error {
    match e {
        Error::Invalid { field: inner, reason } => Error::invalid(format!("{field}.{inner}"), reason),
        other => other,
    }
}

fn resolve(raw: RawConfig, base_dir: &Path) -> Result<ExperimentConfig> {
    let constellation = match raw.constellation {
        None => return Err(Error::invalid("constellation", "required")),
        Some(ConstellationSpec::Preset(name)) => ConstellationConfig::preset(&name).ok_or_else(|| {
            Error::invalid(
                "constellation",
                format!("unknown preset {name:?} (expected one of {:?})", ConstellationConfig::PRESET_NAMES),
            )
        })?,
        Some(ConstellationSpec::Custom(c)) => c,
    };
    let edges_file = raw.edges_file.ok_or_else(|| Error::invalid("edges_file", "required"))?;
    let edges_file = if edges_file.is_absolute() { edges_file } else { base_dir.join(edges_file) };
    if !edges_file.is_file() {
        return Err(Error::invalid("edges_file", format!("{} does not exist", edges_file.display())));
    }

    let mut algorithms = raw.algorithms;
    algorithms.sort();
    algorithms.dedup();

    let output_dir = match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None if raw.output_dir.is_absolute() => raw.output_dir,
        None => base_dir.join(raw.output_dir),
    };

    let cfg = ExperimentConfig {
        constellation,
        edges_file,
        base_capacity_mbps: raw.base_capacity_mbps,
        traffic: raw.traffic,
        epoch_offset_s: raw.epoch_offset_s,
        sample_interval_s: raw.sample_interval_s,
        sample_count: raw.sample_count,
        algorithms,
        op_budget_s: raw.op_budget_s,
        output_dir,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Parses a config (or a `run_manifest.json`, whose embedded config is
/// used). Relative paths resolve against `base_dir`.
pub fn parse_config(json: &str, base_dir: &Path) -> Result<ExperimentConfig> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| Error::json("config", e))?;
    let is_manifest = value.get("code_version").is_some() && value.get("config").is_some();
    let raw: RawConfig = if is_manifest {
        let manifest: RunManifest<RawConfig> =
            serde_json::from_value(value).map_err(|e| Error::json("manifest", e))?;
        manifest.config
    } else {
        // re-parse the text so errors carry line and column
        serde_json::from_str(json).map_err(|e| Error::json("config", e))?
    };
    resolve(raw, base_dir)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base_dir).map_err(|e| match e {
        Error::Json { context, source } => Error::Json { context: format!("{}: {context}", path.display()), source },
        other => other,
    })
}

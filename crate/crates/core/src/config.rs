//! Miner configuration: one TOML file carries every tunable.
//!
//! Every field has a default, so an empty file (or no file at all) runs the
//! pipeline with the stock settings. Unknown keys are rejected rather than
//! silently ignored — a typo in `edge_treshold` should not cost an afternoon.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::linker::LinkMode;
use crate::summarize::RankParams;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config file {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("config {field} = {value} is out of range: {reason}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinerConfig {
    /// PageRank damping factor.
    pub damping: f64,
    /// Convergence tolerance for the rank iteration.
    pub tolerance: f64,
    /// Iteration budget for the rank iteration.
    pub max_iterations: usize,
    /// Sentences kept per summary part.
    pub top_n: usize,
    /// Minimum cosine similarity for a sentence-graph edge.
    pub edge_threshold: f64,
    /// How many tokens before a sentiment word a negation can flip it from.
    pub negation_window: usize,
    /// How many preceding comments an implicit reaction checks for foreign
    /// API mentions.
    pub implicit_lookback: usize,
    /// Fraction of unparseable lines above which a snippet is rejected.
    pub max_error_line_ratio: f64,
    /// Which deductive filters the linker runs.
    pub mode: LinkMode,
    /// Worker threads for the per-thread mining phase.
    pub workers: usize,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            damping: 0.85,
            tolerance: 1e-6,
            max_iterations: 100,
            top_n: 3,
            edge_threshold: 0.05,
            negation_window: 3,
            implicit_lookback: 2,
            max_error_line_ratio: 0.5,
            mode: LinkMode::Full,
            workers: 1,
        }
    }
}

impl MinerConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let contents = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: MinerConfig =
            toml::from_str(&contents).map_err(|source| ConfigError::Parse {
                path: path.to_path_buf(),
                source,
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks: [(&'static str, f64, bool, &'static str); 4] = [
            (
                "damping",
                self.damping,
                (0.0..1.0).contains(&self.damping),
                "must be in [0, 1)",
            ),
            (
                "tolerance",
                self.tolerance,
                self.tolerance > 0.0,
                "must be positive",
            ),
            (
                "edge_threshold",
                self.edge_threshold,
                self.edge_threshold >= 0.0,
                "must be non-negative",
            ),
            (
                "max_error_line_ratio",
                self.max_error_line_ratio,
                (0.0..=1.0).contains(&self.max_error_line_ratio),
                "must be in [0, 1]",
            ),
        ];
        for (field, value, ok, reason) in checks {
            if !ok {
                return Err(ConfigError::OutOfRange {
                    field,
                    value,
                    reason,
                });
            }
        }
        Ok(())
    }

    pub fn rank_params(&self) -> RankParams {
        RankParams {
            damping: self.damping,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            top_n: self.top_n,
            edge_threshold: self.edge_threshold,
        }
    }
}

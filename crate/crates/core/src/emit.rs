//! Scenario serialization: one versioned JSON document, byte-stable.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::pipeline::{Prediction, UsageScenario};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {reason}")]
    Schema { path: PathBuf, reason: String },
}

#[derive(Serialize)]
struct ScenarioDocument<'a> {
    schema_version: u32,
    scenario_count: usize,
    scenarios: &'a [UsageScenario],
}

#[derive(Deserialize)]
struct OwnedScenarioDocument {
    schema_version: u32,
    scenario_count: usize,
    scenarios: Vec<UsageScenario>,
}

/// The full scenario document as pretty JSON. Field order is fixed and no
/// timestamps or machine details creep in, so identical scenarios give
/// identical bytes.
pub fn scenarios_to_json_string(scenarios: &[UsageScenario]) -> String {
    let document = ScenarioDocument {
        schema_version: SCHEMA_VERSION,
        scenario_count: scenarios.len(),
        scenarios,
    };
    let mut out = serde_json::to_string_pretty(&document)
        .expect("scenario serialization cannot fail");
    out.push('\n');
    out
}

pub fn emit_scenarios(scenarios: &[UsageScenario], path: &Path) -> Result<(), EmitError> {
    write_all(path, scenarios_to_json_string(scenarios).as_bytes())
}

/// Per-snippet labels as JSONL, the format `eval --pred` reads.
pub fn predictions_to_jsonl(predictions: &[Prediction]) -> String {
    let mut out = String::new();
    for p in predictions {
        out.push_str(&serde_json::to_string(p).expect("prediction serialization cannot fail"));
        out.push('\n');
    }
    out
}

pub fn emit_predictions(predictions: &[Prediction], path: &Path) -> Result<(), EmitError> {
    write_all(path, predictions_to_jsonl(predictions).as_bytes())
}

/// Read back a scenario document written by [`emit_scenarios`], checking the
/// schema version and the stated count.
pub fn load_scenarios(path: &Path) -> Result<Vec<UsageScenario>, EmitError> {
    let text = fs::read_to_string(path).map_err(|source| EmitError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let document: OwnedScenarioDocument =
        serde_json::from_str(&text).map_err(|source| EmitError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
    if document.schema_version != SCHEMA_VERSION {
        return Err(EmitError::Schema {
            path: path.to_path_buf(),
            reason: format!(
                "schema version {} not supported (expected {SCHEMA_VERSION})",
                document.schema_version
            ),
        });
    }
    if document.scenario_count != document.scenarios.len() {
        return Err(EmitError::Schema {
            path: path.to_path_buf(),
            reason: format!(
                "scenario_count says {} but {} scenarios are present",
                document.scenario_count,
                document.scenarios.len()
            ),
        });
    }
    Ok(document.scenarios)
}

fn write_all(path: &Path, bytes: &[u8]) -> Result<(), EmitError> {
    let io_err = |source| EmitError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(bytes).map_err(io_err)
}

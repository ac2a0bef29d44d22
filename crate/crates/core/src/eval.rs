//! Evaluation harness: compare predicted labels against a gold file.
//!
//! Both sides use one JSONL format — `{"snippet_id": ..., "label": ...}` —
//! where the label is an API name (or `invalid`/`undecided`) for the link
//! and validity tasks, and a list of sentence ids for the summary and
//! reactions tasks. Metrics follow the usual confusion-matrix formulas;
//! a ratio whose denominator is zero is reported as undefined rather than
//! forced to a number.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const INVALID_LABEL: &str = "invalid";
pub const UNDECIDED_LABEL: &str = "undecided";

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("cannot read label file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("label file {path} line {line}: {source}")]
    Parse {
        path: PathBuf,
        line: usize,
        source: serde_json::Error,
    },
    #[error("duplicate snippet id {0}")]
    DuplicateId(String),
    #[error("predicted ids missing from gold: {}", .0.join(", "))]
    MissingFromGold(Vec<String>),
    #[error("snippet {id}: task {task:?} needs a {expected} label")]
    LabelKind {
        id: String,
        task: EvalTask,
        expected: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalTask {
    /// Did the right API get linked?
    Link,
    /// Were invalid snippets caught? (Positive class: invalid.)
    Validity,
    /// Sentence-level overlap of summary selections.
    Summary,
    /// Sentence-level overlap of associated reactions.
    Reactions,
}

/// A label is either one name or a set of sentence ids, depending on task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Name(String),
    Ids(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub snippet_id: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub task: EvalTask,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
}

impl EvalReport {
    /// Fill the ratio fields from the four counts.
    pub fn from_counts(task: EvalTask, tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        let accuracy = ratio(tp + tn, tp + fp + tn + fn_);
        EvalReport {
            task,
            tp,
            fp,
            tn,
            fn_,
            precision,
            recall,
            f1,
            accuracy,
        }
    }
}

/// Read one JSONL label file.
pub fn load_labels(path: &Path) -> Result<Vec<LabelRecord>, EvalError> {
    let contents = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut records = Vec::new();
    for (idx, line) in contents.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|source| EvalError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            source,
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Score `predictions` against `gold` for `task`.
///
/// Metrics run over the predicted ids; every predicted id must appear in
/// gold (missing ones are fatal, listed in the error), while gold-only ids
/// are ignored. The result does not depend on input order.
pub fn evaluate(
    predictions: &[LabelRecord],
    gold: &[LabelRecord],
    task: EvalTask,
) -> Result<EvalReport, EvalError> {
    let gold_by_id = index_by_id(gold)?;
    let pred_by_id = index_by_id(predictions)?;

    let missing: Vec<String> = pred_by_id
        .keys()
        .filter(|id| !gold_by_id.contains_key(*id))
        .map(|id| id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingFromGold(missing));
    }

    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (id, pred) in &pred_by_id {
        let gold = &gold_by_id[id];
        match task {
            EvalTask::Link => {
                let pred = name_label(id, pred, task)?;
                let gold = name_label(id, gold, task)?;
                match (gold, pred) {
                    (g, p) if g == p && g != INVALID_LABEL && g != UNDECIDED_LABEL => tp += 1,
                    (INVALID_LABEL, INVALID_LABEL | UNDECIDED_LABEL) => tn += 1,
                    (INVALID_LABEL, _) => fp += 1,
                    (_, INVALID_LABEL | UNDECIDED_LABEL) => fn_ += 1,
                    (_, _) => fp += 1,
                }
            }
            EvalTask::Validity => {
                let pred = name_label(id, pred, task)? == INVALID_LABEL;
                let gold = name_label(id, gold, task)? == INVALID_LABEL;
                match (gold, pred) {
                    (true, true) => tp += 1,
                    (false, false) => tn += 1,
                    (false, true) => fp += 1,
                    (true, false) => fn_ += 1,
                }
            }
            EvalTask::Summary | EvalTask::Reactions => {
                let pred = id_set(id, pred, task)?;
                let gold = id_set(id, gold, task)?;
                tp += pred.intersection(&gold).count();
                fp += pred.difference(&gold).count();
                fn_ += gold.difference(&pred).count();
            }
        }
    }
    Ok(EvalReport::from_counts(task, tp, fp, tn, fn_))
}

fn index_by_id(records: &[LabelRecord]) -> Result<BTreeMap<&str, &Label>, EvalError> {
    let mut map = BTreeMap::new();
    for record in records {
        if map.insert(record.snippet_id.as_str(), &record.label).is_some() {
            return Err(EvalError::DuplicateId(record.snippet_id.clone()));
        }
    }
    Ok(map)
}

fn name_label<'a>(id: &str, label: &'a Label, task: EvalTask) -> Result<&'a str, EvalError> {
    match label {
        Label::Name(name) => Ok(name),
        Label::Ids(_) => Err(EvalError::LabelKind {
            id: id.to_string(),
            task,
            expected: "name",
        }),
    }
}

fn id_set(id: &str, label: &Label, task: EvalTask) -> Result<BTreeSet<String>, EvalError> {
    match label {
        Label::Ids(ids) => Ok(ids.iter().cloned().collect()),
        Label::Name(_) => Err(EvalError::LabelKind {
            id: id.to_string(),
            task,
            expected: "sentence-id list",
        }),
    }
}

//! API catalog: the universe of linkable APIs.
//!
//! A catalog is loaded from a JSON manifest listing one record per API with
//! its modules, packages, types, per-type methods, dependencies and aliases.
//! The catalog answers three questions for the rest of the pipeline: does a
//! prose token name an API (mention detection), does an API contain a given
//! type or method (deductive filters), and which of several APIs do the
//! others depend on (dependency filter).

pub mod mentions;

pub use mentions::{detect_mentions, match_name, MatchKind, Mention, MentionCandidateList};

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog manifest {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse catalog manifest {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("duplicate API name in catalog: {0}")]
    DuplicateName(String),
}

/// One API: a library identified by a dotted name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiRecord {
    pub name: String,
    #[serde(default)]
    pub modules: Vec<String>,
    #[serde(default)]
    pub packages: Vec<String>,
    /// Type names the API provides, simple ("Gson") or fully qualified
    /// ("com.google.gson.Gson").
    #[serde(default)]
    pub types: BTreeSet<String>,
    /// Methods per type name.
    #[serde(default)]
    pub methods: BTreeMap<String, BTreeSet<String>>,
    /// Names of APIs this record depends on.
    #[serde(default)]
    pub dependencies: Vec<String>,
    /// Alternative names, possibly multi-word ("google web toolkit").
    #[serde(default)]
    pub aliases: Vec<String>,
}

impl ApiRecord {
    /// True when the API provides `simple` as a type. With a resolved fully
    /// qualified name the comparison is strict; otherwise the simple name is
    /// compared against simple types and the terminal segment of qualified
    /// ones.
    pub fn has_type(&self, simple: &str, fqn: Option<&str>) -> bool {
        match fqn {
            Some(fqn) => self.types.contains(fqn),
            None => {
                self.types.contains(simple)
                    || self
                        .types
                        .iter()
                        .any(|t| t.rsplit('.').next() == Some(simple))
            }
        }
    }

    /// True when any type of the API provides `method`.
    pub fn has_method(&self, method: &str) -> bool {
        self.methods.values().any(|ms| ms.contains(method))
    }
}

/// Loaded catalog with lookup by name.
#[derive(Debug, Clone)]
pub struct ApiCatalog {
    records: Vec<ApiRecord>,
    name_index: BTreeMap<String, usize>,
    type_index: BTreeMap<String, BTreeSet<usize>>,
}

impl ApiCatalog {
    /// Build a catalog from records. Fails on duplicate names.
    pub fn new(mut records: Vec<ApiRecord>) -> Result<Self, CatalogError> {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let mut name_index = BTreeMap::new();
        for (idx, record) in records.iter().enumerate() {
            if name_index.insert(record.name.clone(), idx).is_some() {
                return Err(CatalogError::DuplicateName(record.name.clone()));
            }
        }
        let mut type_index: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (idx, record) in records.iter().enumerate() {
            for ty in &record.types {
                type_index.entry(ty.clone()).or_default().insert(idx);
                if let Some(simple) = ty.rsplit('.').next() {
                    type_index.entry(simple.to_string()).or_default().insert(idx);
                }
            }
        }
        Ok(ApiCatalog {
            records,
            name_index,
            type_index,
        })
    }

    pub fn records(&self) -> &[ApiRecord] {
        &self.records
    }

    pub fn get(&self, name: &str) -> Option<&ApiRecord> {
        self.name_index.get(name).map(|&i| &self.records[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.name_index.contains_key(name)
    }

    /// Names of APIs providing the given type name (simple or qualified).
    pub fn records_with_type(&self, ty: &str) -> Vec<&ApiRecord> {
        self.type_index
            .get(ty)
            .map(|idxs| idxs.iter().map(|&i| &self.records[i]).collect())
            .unwrap_or_default()
    }

    /// Incoming dependency-edge counts for each distinct candidate,
    /// counting only edges whose endpoints are both candidates.
    /// Preserves first-appearance order.
    pub fn dependency_incoming_counts(&self, candidates: &[String]) -> Vec<(String, usize)> {
        let mut distinct: Vec<&str> = Vec::new();
        for c in candidates {
            if !distinct.contains(&c.as_str()) {
                distinct.push(c);
            }
        }
        let mut incoming: BTreeMap<&str, usize> =
            distinct.iter().map(|&c| (c, 0usize)).collect();
        for &from in &distinct {
            let Some(record) = self.get(from) else { continue };
            for dep in &record.dependencies {
                if dep != from && distinct.contains(&dep.as_str()) {
                    *incoming.get_mut(dep.as_str()).unwrap() += 1;
                }
            }
        }
        distinct
            .into_iter()
            .map(|name| (name.to_string(), incoming[name]))
            .collect()
    }

    /// Among `candidates`, the APIs with the most incoming dependency edges,
    /// counting only edges between candidates. Ties return every maximizer;
    /// a graph without edges returns all candidates unchanged.
    pub fn dependency_max_incoming(&self, candidates: &[String]) -> Vec<String> {
        let counts = self.dependency_incoming_counts(candidates);
        let max = counts.iter().map(|&(_, n)| n).max().unwrap_or(0);
        let mut winners: Vec<String> = counts
            .into_iter()
            .filter(|&(_, n)| n == max)
            .map(|(name, _)| name)
            .collect();
        winners.sort();
        winners
    }
}

/// Result of loading a manifest: the catalog plus non-fatal warnings.
#[derive(Debug)]
pub struct CatalogLoad {
    pub catalog: ApiCatalog,
    pub warnings: Vec<String>,
}

/// Load a catalog manifest: a JSON array of API records.
///
/// Duplicate names are fatal. A record with an empty type set and a
/// dependency naming an absent record both produce warnings; the records
/// and edges are kept.
pub fn load_catalog(path: &Path) -> Result<CatalogLoad, CatalogError> {
    let contents = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let records: Vec<ApiRecord> =
        serde_json::from_str(&contents).map_err(|source| CatalogError::Parse {
            path: path.to_path_buf(),
            source,
        })?;

    let mut warnings = Vec::new();
    let names: BTreeSet<&str> = records.iter().map(|r| r.name.as_str()).collect();
    for record in &records {
        if record.types.is_empty() {
            warnings.push(format!("API {} declares no types", record.name));
        }
        for dep in &record.dependencies {
            if !names.contains(dep.as_str()) {
                warnings.push(format!(
                    "API {} depends on {dep}, which is not in the catalog",
                    record.name
                ));
            }
        }
    }
    let catalog = ApiCatalog::new(records)?;
    Ok(CatalogLoad { catalog, warnings })
}

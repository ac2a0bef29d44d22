//! Sentence-level sentiment.
//!
//! Dictionary scoring: each lexicon word contributes +1 or -1, a negation
//! in the few tokens before it flips the contribution once, and the sign
//! of the sum labels the sentence. Small, fast and predictable — exactly
//! what comment-stream classification needs.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use once_cell::sync::Lazy;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpinionError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("lexicon word `{word}` appears with conflicting polarities")]
    ConflictingEntry { word: String },
    #[error("word `{word}` is both a sentiment word and a negation")]
    NegationOverlap { word: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

#[derive(Debug, Clone)]
pub struct SentimentLexicon {
    weights: BTreeMap<String, i32>,
    negations: HashSet<String>,
}

static EMBEDDED: Lazy<SentimentLexicon> = Lazy::new(|| {
    SentimentLexicon::parse(include_str!("../data/lexicon.tsv"), default_negations())
        .expect("embedded lexicon must be well-formed")
});

fn default_negations() -> HashSet<String> {
    include_str!("../data/negation.txt")
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

impl SentimentLexicon {
    /// The lexicon compiled into the binary.
    pub fn embedded_default() -> &'static SentimentLexicon {
        &EMBEDDED
    }

    /// Load a replacement lexicon: tab-separated `word<TAB>+1|-1` lines,
    /// `#` comments allowed. The negation list stays built in.
    pub fn load(path: &Path) -> Result<SentimentLexicon, OpinionError> {
        let contents = fs::read_to_string(path).map_err(|source| OpinionError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        SentimentLexicon::parse(&contents, default_negations())
    }

    /// Like [`SentimentLexicon::load`], but with a replacement negation
    /// list too: one token per line, `#` comments allowed.
    pub fn load_with_negations(
        lexicon: &Path,
        negations: &Path,
    ) -> Result<SentimentLexicon, OpinionError> {
        let negation_text =
            fs::read_to_string(negations).map_err(|source| OpinionError::Io {
                path: negations.to_path_buf(),
                source,
            })?;
        let negation_set = negation_text
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let contents = fs::read_to_string(lexicon).map_err(|source| OpinionError::Io {
            path: lexicon.to_path_buf(),
            source,
        })?;
        SentimentLexicon::parse(&contents, negation_set)
    }

    fn parse(contents: &str, negations: HashSet<String>) -> Result<SentimentLexicon, OpinionError> {
        let mut weights = BTreeMap::new();
        for (idx, line) in contents.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (word, value) = match (parts.next(), parts.next()) {
                (Some(w), Some(v)) => (w.trim().to_ascii_lowercase(), v.trim()),
                _ => {
                    return Err(OpinionError::Parse {
                        line: idx + 1,
                        reason: "expected `word<TAB>score`".to_string(),
                    })
                }
            };
            let weight = match value {
                "+1" | "1" => 1,
                "-1" => -1,
                other => {
                    return Err(OpinionError::Parse {
                        line: idx + 1,
                        reason: format!("score must be +1 or -1, got `{other}`"),
                    })
                }
            };
            if let Some(&existing) = weights.get(&word) {
                if existing != weight {
                    return Err(OpinionError::ConflictingEntry { word });
                }
            }
            weights.insert(word, weight);
        }
        for word in weights.keys() {
            if negations.contains(word) {
                return Err(OpinionError::NegationOverlap { word: word.clone() });
            }
        }
        Ok(SentimentLexicon { weights, negations })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn is_negation(&self, token: &str) -> bool {
        self.negations.contains(token) || token.ends_with("n't")
    }

    /// Score a sentence. A sentiment word with a negation among the
    /// `negation_window` tokens before it flips its sign once.
    pub fn score_sentence(&self, text: &str, negation_window: usize) -> i32 {
        let tokens: Vec<String> = text
            .split(|c: char| !(c.is_ascii_alphanumeric() || c == '\''))
            .filter(|t| !t.is_empty())
            .map(|t| t.trim_matches('\'').to_ascii_lowercase())
            .filter(|t| !t.is_empty())
            .collect();
        let mut sum = 0;
        for (i, token) in tokens.iter().enumerate() {
            let Some(&weight) = self.weights.get(token) else {
                continue;
            };
            let window_start = i.saturating_sub(negation_window);
            let negated = tokens[window_start..i].iter().any(|t| self.is_negation(t));
            sum += if negated { -weight } else { weight };
        }
        sum
    }

    pub fn classify_sentence(&self, text: &str, negation_window: usize) -> Polarity {
        match self.score_sentence(text, negation_window) {
            s if s > 0 => Polarity::Positive,
            s if s < 0 => Polarity::Negative,
            _ => Polarity::Neutral,
        }
    }
}

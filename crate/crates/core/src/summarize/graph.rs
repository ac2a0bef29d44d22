//! Sentence similarity graph.
//!
//! Sentences become nodes; an undirected weighted edge joins two sentences
//! when the cosine similarity of their term-frequency vectors clears the
//! edge threshold. Stop words drop out before counting, except tokens that
//! look like code (dotted paths, interior capitals, underscores), which
//! always count — `Map.Entry` should never vanish the way "the" does.

use std::collections::{BTreeMap, HashSet};

/// Undirected weighted sentence graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TextGraph {
    pub nodes: usize,
    /// (i, j, weight) with i < j; at most one edge per pair.
    pub edges: Vec<(usize, usize, f64)>,
}

impl TextGraph {
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j, _)| i == node || j == node)
            .count()
    }
}

/// A token that must survive stop-word removal: identifiers and paths.
fn code_like(token: &str) -> bool {
    token.contains('.')
        || token.contains('_')
        || token.contains('$')
        || token.chars().skip(1).any(|c| c.is_ascii_uppercase())
        || token.chars().any(|c| c.is_ascii_digit())
}

/// Lowercased term frequencies with stop words removed.
pub fn term_vector(text: &str, stopwords: &HashSet<String>) -> BTreeMap<String, f64> {
    let mut tf = BTreeMap::new();
    for raw in text.split(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '$'))) {
        let raw = raw.trim_matches('.');
        if raw.is_empty() {
            continue;
        }
        let lowered = raw.to_ascii_lowercase();
        if stopwords.contains(&lowered) && !code_like(raw) {
            continue;
        }
        *tf.entry(lowered).or_insert(0.0) += 1.0;
    }
    tf
}

/// Cosine similarity of two term vectors; 0 when either is empty.
pub fn cosine(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(term, &wa)| b.get(term).map(|&wb| wa * wb))
        .sum();
    if dot == 0.0 {
        return 0.0;
    }
    let na: f64 = a.values().map(|w| w * w).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|w| w * w).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Build the sentence graph. Edges require similarity strictly above
/// `edge_threshold`.
pub fn build_text_graph(
    sentences: &[String],
    stopwords: &HashSet<String>,
    edge_threshold: f64,
) -> TextGraph {
    let vectors: Vec<_> = sentences
        .iter()
        .map(|s| term_vector(s, stopwords))
        .collect();
    let mut edges = Vec::new();
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            let w = cosine(&vectors[i], &vectors[j]);
            if w > edge_threshold {
                edges.push((i, j, w));
            }
        }
    }
    TextGraph {
        nodes: sentences.len(),
        edges,
    }
}

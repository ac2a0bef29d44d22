//! Relevant-sentence selection.
//!
//! Starting from the first sentence that names the linked API, the walk
//! extends forward through sentences that keep talking about it: repeat
//! mentions, pronouns that cannot refer to a competing API, or a shared
//! noun-phrase head. For text before the snippet the walk is bounded by
//! the snippet itself. When no sentence names the API the selection falls
//! back to the snippet's immediate neighborhood and is flagged low
//! confidence.

use std::collections::HashSet;

use crate::catalog::mentions::detect_mentions;
use crate::catalog::ApiCatalog;
use crate::corpus::{Container, Sentence};

const NOUN_SUFFIXES: &[&str] = &[
    "tion", "sion", "ment", "ness", "ity", "ance", "ence", "ing", "er", "or",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceSelection {
    /// Chosen sentences in document order.
    pub sentences: Vec<Sentence>,
    pub low_confidence: bool,
}

/// Head of the longest noun-ish token run: capitalized words and words
/// with noun suffixes clump into phrases; the last token of the longest
/// clump names what the sentence is about.
pub fn np_head(text: &str) -> Option<String> {
    let tokens: Vec<&str> = text
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|t| !t.is_empty())
        .collect();
    let nounish = |i: usize, token: &str| {
        let capitalized = token
            .chars()
            .next()
            .map_or(false, |c| c.is_ascii_uppercase());
        // A capital at the sentence head is just orthography, unless the
        // token is shaped like an identifier.
        let identifier_like = token
            .chars()
            .skip(1)
            .any(|c| c.is_ascii_uppercase() || c.is_ascii_digit());
        (capitalized && (i > 0 || identifier_like))
            || NOUN_SUFFIXES
                .iter()
                .any(|suf| token.len() > suf.len() + 1 && token.ends_with(suf))
    };
    let mut best: Option<(usize, usize)> = None; // (start, len)
    let mut run_start = 0usize;
    let mut run_len = 0usize;
    for (i, token) in tokens.iter().enumerate() {
        if nounish(i, token) {
            if run_len == 0 {
                run_start = i;
            }
            run_len += 1;
            let beat = best.map_or(true, |(_, len)| run_len > len);
            if beat {
                best = Some((run_start, run_len));
            }
        } else {
            run_len = 0;
        }
    }
    best.map(|(start, len)| tokens[start + len - 1].to_ascii_lowercase())
}

/// Does `text` contain `needle` as a whole token (case-insensitive)?
/// Dots, dollars, dashes and underscores bind to their word.
pub fn contains_token(text: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let text = text.to_ascii_lowercase();
    let needle = needle.to_ascii_lowercase();
    let boundary = |c: Option<char>| {
        c.map_or(true, |c| {
            !(c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '$' | '-'))
        })
    };
    let mut from = 0;
    while let Some(pos) = text[from..].find(&needle) {
        let start = from + pos;
        let end = start + needle.len();
        if boundary(text[..start].chars().next_back()) && boundary(text[end..].chars().next()) {
            return true;
        }
        from = start + 1;
    }
    false
}

fn block_index(sentence: &Sentence) -> Option<usize> {
    match sentence.container {
        Container::Block { block_index, .. } => Some(block_index),
        _ => None,
    }
}

/// Select the sentences describing what the snippet does with the API.
///
/// `sentences` are the post's text sentences in document order.
/// `snippet_block_index` is the snippet's block position in that post, or
/// `None` when the snippet lives in a different post.
pub fn select_relevant(
    sentences: &[Sentence],
    snippet_block_index: Option<usize>,
    mention: Option<&str>,
    api: &str,
    catalog: &ApiCatalog,
    pronouns: &HashSet<String>,
) -> RelevanceSelection {
    let has_mention: Vec<bool> = sentences
        .iter()
        .map(|s| mention.map_or(false, |m| contains_token(&s.text, m)))
        .collect();
    let has_other_api: Vec<bool> = sentences
        .iter()
        .map(|s| {
            detect_mentions(std::slice::from_ref(s), catalog)
                .iter()
                .any(|mcl| !mcl.candidates.iter().any(|(name, _)| name == api))
        })
        .collect();
    let has_pronoun: Vec<bool> = sentences
        .iter()
        .map(|s| {
            s.text
                .split(|c: char| !c.is_ascii_alphanumeric())
                .any(|t| pronouns.contains(&t.to_ascii_lowercase()))
        })
        .collect();

    let anchor = has_mention.iter().position(|&m| m);
    let Some(anchor) = anchor else {
        return neighborhood_fallback(sentences, snippet_block_index);
    };

    let anchor_before_snippet = match (snippet_block_index, block_index(&sentences[anchor])) {
        (Some(snippet_block), Some(block)) => block < snippet_block,
        _ => false,
    };

    let mut selected = vec![anchor];
    let mut heads: Vec<String> = np_head(&sentences[anchor].text).into_iter().collect();
    let mut other_seen = has_other_api[anchor];
    for i in (anchor + 1)..sentences.len() {
        if anchor_before_snippet {
            // The walk toward the snippet stops at the snippet.
            let past_snippet = match (snippet_block_index, block_index(&sentences[i])) {
                (Some(snippet_block), Some(block)) => block > snippet_block,
                _ => false,
            };
            if past_snippet {
                break;
            }
        }
        let include = if has_mention[i] {
            other_seen = false;
            true
        } else if has_pronoun[i] && !other_seen && !has_other_api[i] {
            true
        } else {
            let head = np_head(&sentences[i].text);
            head.map_or(false, |h| heads.contains(&h))
        };
        if !include {
            break;
        }
        other_seen |= has_other_api[i];
        if let Some(h) = np_head(&sentences[i].text) {
            if !heads.contains(&h) {
                heads.push(h);
            }
        }
        selected.push(i);
    }

    RelevanceSelection {
        sentences: selected.into_iter().map(|i| sentences[i].clone()).collect(),
        low_confidence: false,
    }
}

/// Up to two sentences either side of the snippet, flagged low confidence.
/// Without a snippet in the post the selection is empty.
fn neighborhood_fallback(
    sentences: &[Sentence],
    snippet_block_index: Option<usize>,
) -> RelevanceSelection {
    let Some(snippet_block) = snippet_block_index else {
        return RelevanceSelection {
            sentences: Vec::new(),
            low_confidence: true,
        };
    };
    let before: Vec<&Sentence> = sentences
        .iter()
        .filter(|s| block_index(s).map_or(false, |b| b < snippet_block))
        .collect();
    let after: Vec<&Sentence> = sentences
        .iter()
        .filter(|s| block_index(s).map_or(false, |b| b > snippet_block))
        .collect();
    let mut chosen: Vec<Sentence> = Vec::new();
    for s in before.iter().rev().take(2).rev() {
        chosen.push((*s).clone());
    }
    for s in after.iter().take(2) {
        chosen.push((*s).clone());
    }
    RelevanceSelection {
        sentences: chosen,
        low_confidence: true,
    }
}

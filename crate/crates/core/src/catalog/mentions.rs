//! API-mention detection in prose sentences.
//!
//! Every sentence token is checked against the catalog. An exact match is a
//! case-insensitive hit on an API name, a module name, or one of their dot
//! segments; a fuzzy match is a proper-substring relation between the token
//! and a name/module (or one of their segments). Tokens shorter than three
//! characters never match. Each hit yields a mention with its ordered
//! candidate list, exact candidates before fuzzy ones.

use serde::{Deserialize, Serialize};

use super::{ApiCatalog, ApiRecord};
use crate::corpus::{Container, Sentence};

/// Minimum token length considered for matching.
const MIN_TOKEN_LEN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    Exact,
    Fuzzy,
}

/// A token in prose that names (or nearly names) at least one API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mention {
    /// The matched token as written (punctuation-trimmed).
    pub token: String,
    pub container: Container,
    pub sentence_index: usize,
    /// Byte offset of the token within its sentence.
    pub char_offset: usize,
    /// Exact when at least one candidate matched exactly.
    pub kind: MatchKind,
}

/// A mention plus its ordered API candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionCandidateList {
    pub mention: Mention,
    /// Candidate API names with their match kind: exact candidates first,
    /// each group sorted lexicographically, no duplicates.
    pub candidates: Vec<(String, MatchKind)>,
}

impl MentionCandidateList {
    pub fn candidate_names(&self) -> Vec<&str> {
        self.candidates.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// Classify how `token` relates to one API record.
///
/// The token should already be lowercased and punctuation-trimmed; the
/// function lowercases defensively. Returns `None` for tokens shorter than
/// [`MIN_TOKEN_LEN`].
pub fn match_name(token: &str, record: &ApiRecord) -> Option<MatchKind> {
    let token = token.to_ascii_lowercase();
    if token.len() < MIN_TOKEN_LEN {
        return None;
    }

    let mut units: Vec<String> = Vec::new();
    units.push(record.name.to_ascii_lowercase());
    units.extend(record.modules.iter().map(|m| m.to_ascii_lowercase()));
    for alias in &record.aliases {
        if !alias.contains(' ') {
            units.push(alias.to_ascii_lowercase());
        }
    }

    let mut fuzzy = false;
    for unit in &units {
        if *unit == token {
            return Some(MatchKind::Exact);
        }
        for segment in unit.split('.') {
            if segment == token {
                return Some(MatchKind::Exact);
            }
            if substring_related(&token, segment) {
                fuzzy = true;
            }
        }
        if substring_related(&token, unit) {
            fuzzy = true;
        }
    }
    if fuzzy {
        Some(MatchKind::Fuzzy)
    } else {
        None
    }
}

/// Proper-substring relation in either direction, both sides at least
/// [`MIN_TOKEN_LEN`] characters long.
fn substring_related(a: &str, b: &str) -> bool {
    a.len() >= MIN_TOKEN_LEN
        && b.len() >= MIN_TOKEN_LEN
        && a != b
        && (a.contains(b) || b.contains(a))
}

/// Detect API mentions in `sentences`, in document order.
pub fn detect_mentions(sentences: &[Sentence], catalog: &ApiCatalog) -> Vec<MentionCandidateList> {
    let max_alias_words = catalog
        .records()
        .iter()
        .flat_map(|r| r.aliases.iter())
        .map(|a| a.split_whitespace().count())
        .max()
        .unwrap_or(1);

    let mut out = Vec::new();
    for sentence in sentences {
        let tokens = tokenize(&sentence.text);
        let consumed = detect_alias_spans(sentence, &tokens, catalog, max_alias_words, &mut out);
        for (ti, token) in tokens.iter().enumerate() {
            if consumed.contains(&ti) {
                continue;
            }
            let candidates = candidates_for(&token.text, catalog);
            if candidates.is_empty() {
                continue;
            }
            let kind = candidates[0].1;
            out.push(MentionCandidateList {
                mention: Mention {
                    token: token.text.clone(),
                    container: sentence.container,
                    sentence_index: sentence.index,
                    char_offset: token.offset,
                    kind,
                },
                candidates,
            });
        }
    }
    out.sort_by(|a, b| {
        (container_rank(a.mention.container), a.mention.sentence_index, a.mention.char_offset)
            .cmp(&(container_rank(b.mention.container), b.mention.sentence_index, b.mention.char_offset))
    });
    out
}

/// Keep mention output ordered even when callers mix containers; title
/// sentences come first, then post blocks, then comments.
fn container_rank(container: Container) -> (u8, u64, u64) {
    match container {
        Container::Title => (0, 0, 0),
        Container::Block {
            post_id,
            block_index,
        } => (1, post_id, block_index as u64),
        Container::Comment {
            post_id,
            comment_id,
        } => (2, post_id, comment_id),
    }
}

/// Multi-word aliases are matched over token windows; consumed token indices
/// are returned so the single-token pass skips them.
fn detect_alias_spans(
    sentence: &Sentence,
    tokens: &[Token],
    catalog: &ApiCatalog,
    max_words: usize,
    out: &mut Vec<MentionCandidateList>,
) -> Vec<usize> {
    let mut consumed = Vec::new();
    if max_words < 2 {
        return consumed;
    }
    let mut ti = 0;
    while ti < tokens.len() {
        let mut matched_len = 0;
        let mut matched_names: Vec<String> = Vec::new();
        for width in (2..=max_words.min(tokens.len() - ti)).rev() {
            let window: Vec<String> = tokens[ti..ti + width]
                .iter()
                .map(|t| t.text.to_ascii_lowercase())
                .collect();
            let phrase = window.join(" ");
            let mut names: Vec<String> = catalog
                .records()
                .iter()
                .filter(|r| {
                    r.aliases
                        .iter()
                        .any(|a| a.to_ascii_lowercase() == phrase)
                })
                .map(|r| r.name.clone())
                .collect();
            if !names.is_empty() {
                names.sort();
                matched_len = width;
                matched_names = names;
                break;
            }
        }
        if matched_len > 0 {
            let first = &tokens[ti];
            let last = &tokens[ti + matched_len - 1];
            let span_text =
                sentence.text[first.offset..last.offset + last.text.len()].to_string();
            out.push(MentionCandidateList {
                mention: Mention {
                    token: span_text,
                    container: sentence.container,
                    sentence_index: sentence.index,
                    char_offset: first.offset,
                    kind: MatchKind::Exact,
                },
                candidates: matched_names
                    .into_iter()
                    .map(|n| (n, MatchKind::Exact))
                    .collect(),
            });
            consumed.extend(ti..ti + matched_len);
            ti += matched_len;
        } else {
            ti += 1;
        }
    }
    consumed
}

/// Ordered candidate list for one token: exact before fuzzy, lexicographic
/// within each group.
fn candidates_for(token: &str, catalog: &ApiCatalog) -> Vec<(String, MatchKind)> {
    let lowered = token.to_ascii_lowercase();
    let mut exact = Vec::new();
    let mut fuzzy = Vec::new();
    for record in catalog.records() {
        match match_name(&lowered, record) {
            Some(MatchKind::Exact) => exact.push(record.name.clone()),
            Some(MatchKind::Fuzzy) => fuzzy.push(record.name.clone()),
            None => {}
        }
    }
    exact.sort();
    fuzzy.sort();
    exact
        .into_iter()
        .map(|n| (n, MatchKind::Exact))
        .chain(fuzzy.into_iter().map(|n| (n, MatchKind::Fuzzy)))
        .collect()
}

struct Token {
    text: String,
    offset: usize,
}

/// Split a sentence into identifier-like tokens with byte offsets. Dots and
/// hyphens are token characters (dotted API names, Maven-style module
/// names), but leading and trailing punctuation is trimmed off.
fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let is_token_char =
        |c: char| c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_' | '$');
    for (i, c) in text.char_indices() {
        if is_token_char(c) {
            if start.is_none() {
                start = Some(i);
            }
        } else if let Some(s) = start.take() {
            push_trimmed(&mut tokens, text, s, i);
        }
    }
    if let Some(s) = start {
        push_trimmed(&mut tokens, text, s, text.len());
    }
    tokens
}

fn push_trimmed(tokens: &mut Vec<Token>, text: &str, start: usize, end: usize) {
    let raw = &text[start..end];
    let trimmed_front = raw.trim_start_matches(|c: char| matches!(c, '.' | '-' | '_' | '$'));
    let front_cut = raw.len() - trimmed_front.len();
    let trimmed = trimmed_front.trim_end_matches(|c: char| matches!(c, '.' | '-' | '_' | '$'));
    if trimmed.is_empty() {
        return;
    }
    tokens.push(Token {
        text: trimmed.to_string(),
        offset: start + front_cut,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn gson_record() -> ApiRecord {
        ApiRecord {
            name: "com.google.code.gson".to_string(),
            modules: vec!["gson".to_string()],
            packages: vec!["com.google.gson".to_string()],
            types: BTreeSet::from(["Gson".to_string(), "TypeToken".to_string()]),
            methods: BTreeMap::new(),
            dependencies: vec![],
            aliases: vec![],
        }
    }

    fn easygson_record() -> ApiRecord {
        ApiRecord {
            name: "org.easygson".to_string(),
            modules: vec![],
            packages: vec![],
            types: BTreeSet::from(["JsonEntity".to_string()]),
            methods: BTreeMap::new(),
            dependencies: vec![],
            aliases: vec![],
        }
    }

    fn catalog() -> ApiCatalog {
        let mut json = ApiRecord {
            name: "org.json".to_string(),
            modules: vec![],
            packages: vec![],
            types: BTreeSet::from(["JSONObject".to_string(), "JSONArray".to_string()]),
            methods: BTreeMap::new(),
            dependencies: vec![],
            aliases: vec![],
        };
        json.aliases.push("json library".to_string());
        ApiCatalog::new(vec![gson_record(), easygson_record(), json]).unwrap()
    }

    fn sentence(text: &str) -> Sentence {
        Sentence {
            text: text.to_string(),
            index: 0,
            container: Container::Title,
        }
    }

    #[test]
    fn exact_match_on_module_name() {
        assert_eq!(match_name("gson", &gson_record()), Some(MatchKind::Exact));
    }

    #[test]
    fn fuzzy_match_on_segment_substring() {
        assert_eq!(match_name("gson", &easygson_record()), Some(MatchKind::Fuzzy));
    }

    #[test]
    fn short_tokens_never_match() {
        let record = ApiRecord {
            name: "io".to_string(),
            modules: vec!["io".to_string()],
            packages: vec![],
            types: BTreeSet::new(),
            methods: BTreeMap::new(),
            dependencies: vec![],
            aliases: vec![],
        };
        assert_eq!(match_name("io", &record), None);
    }

    #[test]
    fn full_name_and_segment_matches_are_exact() {
        assert_eq!(
            match_name("com.google.code.gson", &gson_record()),
            Some(MatchKind::Exact)
        );
        // "code" is a dot segment of the name.
        assert_eq!(match_name("code", &gson_record()), Some(MatchKind::Exact));
        assert_eq!(match_name("unrelated", &gson_record()), None);
    }

    #[test]
    fn mentions_are_ordered_and_trailing_punctuation_is_ignored() {
        let catalog = catalog();
        let with_punct = [sentence("Try Gson, it is fast.")];
        let without = [sentence("Try Gson it is fast")];
        let a = detect_mentions(&with_punct, &catalog);
        let b = detect_mentions(&without, &catalog);
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].mention.token, "Gson");
        assert_eq!(a[0].mention.kind, MatchKind::Exact);
        assert_eq!(a[0].candidate_names(), b[0].candidate_names());
        // Exact candidate before the fuzzy one, no duplicates.
        assert_eq!(
            a[0].candidates,
            vec![
                ("com.google.code.gson".to_string(), MatchKind::Exact),
                ("org.easygson".to_string(), MatchKind::Fuzzy),
            ]
        );
    }

    #[test]
    fn dotted_tokens_match_full_names() {
        let catalog = catalog();
        let out = detect_mentions(&[sentence("I switched to org.json today.")], &catalog);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].mention.token, "org.json");
        assert_eq!(out[0].candidates[0], ("org.json".to_string(), MatchKind::Exact));
    }

    #[test]
    fn multi_word_alias_is_one_mention() {
        let catalog = catalog();
        let out = detect_mentions(&[sentence("The JSON library does this well.")], &catalog);
        let alias: Vec<_> = out
            .iter()
            .filter(|m| m.mention.token == "JSON library")
            .collect();
        assert_eq!(alias.len(), 1, "mentions: {out:?}");
        assert_eq!(alias[0].candidates[0].0, "org.json");
        assert_eq!(alias[0].mention.kind, MatchKind::Exact);
    }

    #[test]
    fn char_offsets_point_at_the_token() {
        let catalog = catalog();
        let s = sentence("Use Gson here.");
        let out = detect_mentions(&[s.clone()], &catalog);
        let m = &out[0].mention;
        assert_eq!(&s.text[m.char_offset..m.char_offset + m.token.len()], "Gson");
    }

    #[test]
    fn unrelated_text_has_no_mentions() {
        let catalog = catalog();
        assert!(detect_mentions(&[sentence("Nothing to see here.")], &catalog).is_empty());
    }
}

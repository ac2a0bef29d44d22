//! Rule-based sentence splitting for forum prose.
//!
//! Terminators are `.`, `?` and `!`. A period only ends a sentence when it is
//! followed by whitespace or the end of the text, which keeps dotted
//! identifiers (`org.json`) and version numbers (`2.2.4`) intact. A short
//! abbreviation list and single-letter initials are also protected.

use super::{Container, Sentence};

/// Abbreviations whose trailing period never ends a sentence (lowercase,
/// without the final dot).
const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "etc", "vs", "cf", "mr", "mrs", "ms", "dr", "prof", "st", "fig", "al",
];

/// Split `text` into sentences, addressing each one inside `container`.
///
/// Sentence indices are dense (0-based); whitespace-only fragments are
/// dropped so every returned sentence has non-empty trimmed text.
pub fn split_sentences(text: &str, container: Container) -> Vec<Sentence> {
    let bytes = text.as_bytes();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '.' || c == '?' || c == '!' {
            // Consume the whole terminator run ("?!", "...").
            let run_start = i;
            let mut end = i + 1;
            while end < bytes.len() && matches!(bytes[end] as char, '.' | '?' | '!') {
                end += 1;
            }
            let followed_by_break = end >= bytes.len() || (bytes[end] as char).is_whitespace();
            let boundary = followed_by_break
                && !(c == '.' && end - run_start == 1 && protected_period(text, run_start));
            if boundary {
                push_sentence(&mut sentences, &text[start..end], container);
                start = end;
            }
            i = end;
        } else {
            i += 1;
        }
    }
    push_sentence(&mut sentences, &text[start..], container);
    sentences
}

fn push_sentence(out: &mut Vec<Sentence>, raw: &str, container: Container) {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return;
    }
    out.push(Sentence {
        text: trimmed.to_string(),
        index: out.len(),
        container,
    });
}

/// True when the period at byte offset `dot` belongs to an abbreviation or a
/// single-letter initial rather than ending a sentence.
fn protected_period(text: &str, dot: usize) -> bool {
    let head = &text[..dot];
    let token_start = head
        .rfind(|c: char| !(c.is_ascii_alphanumeric() || c == '.'))
        .map(|p| p + 1)
        .unwrap_or(0);
    let token = head[token_start..].trim_matches('.');
    if token.is_empty() {
        return false;
    }
    if token.len() == 1 && token.chars().next().unwrap().is_ascii_alphabetic() {
        return true; // an initial such as "J."
    }
    ABBREVIATIONS.contains(&token.to_ascii_lowercase().as_str())
}

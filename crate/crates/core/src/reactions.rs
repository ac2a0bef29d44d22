//! Developer reactions.
//!
//! Comments under a post carry follow-up experience with the snippet:
//! praise, bug reports, version caveats. Each opinionated comment sentence
//! is tied to an API three ways, strongest first: it names the API, its
//! pronoun resolves to the nearest previously named API, or — with no
//! reference at all — it falls to the post's owning snippet, provided no
//! other API was in play in the recent comments. Sentences about other
//! APIs never attach, and processing is strictly forward, so existing
//! reactions never change when later comments arrive.

use std::collections::HashSet;

use serde::Serialize;

use crate::catalog::mentions::detect_mentions;
use crate::catalog::ApiCatalog;
use crate::corpus::{Post, Sentence};
use crate::opinion::{Polarity, SentimentLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionBasis {
    /// The sentence names the API.
    #[serde(rename = "explicit_name")]
    Explicit,
    /// A pronoun resolved to the nearest preceding API name.
    Pronoun,
    /// No reference; the post's owning snippet takes it.
    Implicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Reaction {
    pub sentence_id: String,
    pub comment_id: u64,
    pub comment_order: u32,
    pub text: String,
    pub polarity: Polarity,
    pub basis: ReactionBasis,
}

/// How one comment sentence refers to an API, before sentiment is applied.
#[derive(Debug, Clone, PartialEq)]
enum Reference {
    Named(String),
    PronounTo(String),
    UnresolvedPronoun,
    None,
}

/// The API a sentence names, if any: the first candidate of its first
/// mention. The last mention is also reported for backwards resolution.
fn sentence_apis(sentence: &Sentence, catalog: &ApiCatalog) -> Option<(String, String)> {
    let mentions = detect_mentions(std::slice::from_ref(sentence), catalog);
    let first = mentions.first()?.candidates.first()?.0.clone();
    let last = mentions.last()?.candidates.first()?.0.clone();
    Some((first, last))
}

fn has_pronoun(text: &str, pronouns: &HashSet<String>) -> bool {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .any(|t| pronouns.contains(&t.to_ascii_lowercase()))
}

/// Attach opinionated comment sentences of `post` to the snippet linked to
/// `api`. `owns_post` marks the post's owning snippet — the last valid,
/// decided one — which alone may receive implicit reactions.
#[allow(clippy::too_many_arguments)]
pub fn associate_reactions(
    thread_id: u64,
    post: &Post,
    api: &str,
    owns_post: bool,
    catalog: &ApiCatalog,
    lexicon: &SentimentLexicon,
    pronouns: &HashSet<String>,
    negation_window: usize,
    implicit_lookback: usize,
) -> Vec<Reaction> {
    let mut reactions = Vec::new();
    // Per comment: the API named by each sentence, for backward scans.
    let mut named_by_comment: Vec<Vec<Option<(String, String)>>> = Vec::new();

    for (c_idx, comment) in post.comments.iter().enumerate() {
        let named: Vec<Option<(String, String)>> = comment
            .sentences
            .iter()
            .map(|s| sentence_apis(s, catalog))
            .collect();
        named_by_comment.push(named);

        for (s_idx, sentence) in comment.sentences.iter().enumerate() {
            let reference = match &named_by_comment[c_idx][s_idx] {
                Some((first, _)) => Reference::Named(first.clone()),
                None if has_pronoun(&sentence.text, pronouns) => {
                    match nearest_preceding_api(&named_by_comment, c_idx, s_idx) {
                        Some(api) => Reference::PronounTo(api),
                        None => Reference::UnresolvedPronoun,
                    }
                }
                None => Reference::None,
            };

            let basis = match &reference {
                Reference::Named(name) if name == api => ReactionBasis::Explicit,
                Reference::Named(_) => continue, // another API's sentence
                Reference::PronounTo(name) if name == api => ReactionBasis::Pronoun,
                Reference::PronounTo(_) => continue,
                Reference::UnresolvedPronoun | Reference::None => {
                    if !owns_post
                        || foreign_api_recently(
                            &named_by_comment,
                            c_idx,
                            s_idx,
                            implicit_lookback,
                            api,
                        )
                    {
                        continue;
                    }
                    ReactionBasis::Implicit
                }
            };

            let polarity = lexicon.classify_sentence(&sentence.text, negation_window);
            if polarity == Polarity::Neutral {
                continue;
            }
            reactions.push(Reaction {
                sentence_id: sentence.id(thread_id),
                comment_id: comment.id,
                comment_order: comment.order,
                text: sentence.text.clone(),
                polarity,
                basis,
            });
        }
    }
    reactions
}

/// Walk backwards — earlier sentences of this comment, then prior comments
/// — and return the nearest named API (the last mention of the nearest
/// naming sentence).
fn nearest_preceding_api(
    named_by_comment: &[Vec<Option<(String, String)>>],
    c_idx: usize,
    s_idx: usize,
) -> Option<String> {
    for s in (0..s_idx).rev() {
        if let Some((_, last)) = &named_by_comment[c_idx][s] {
            return Some(last.clone());
        }
    }
    for c in (0..c_idx).rev() {
        for named in named_by_comment[c].iter().rev() {
            if let Some((_, last)) = named {
                return Some(last.clone());
            }
        }
    }
    None
}

/// Did anything "above" the sentence — earlier sentences of its own
/// comment, or any of the `lookback` comments before it — name an API
/// other than `api`?
fn foreign_api_recently(
    named_by_comment: &[Vec<Option<(String, String)>>],
    c_idx: usize,
    s_idx: usize,
    lookback: usize,
    api: &str,
) -> bool {
    let foreign = |named: &[Option<(String, String)>]| {
        named.iter().flatten().any(|(first, _)| first != api)
    };
    let start = c_idx.saturating_sub(lookback);
    foreign(&named_by_comment[c_idx][..s_idx])
        || named_by_comment[start..c_idx].iter().any(|s| foreign(s))
}

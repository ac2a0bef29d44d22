//! Task description extraction.
//!
//! For a linked snippet, the problem side comes from the question and the
//! solution side from the text around the snippet. Relevant sentences are
//! selected by the mention-anchored walk, then ranked on the similarity
//! graph; the top sentences come out in document order, so a description
//! always reads as a subsequence of the original post.

pub mod graph;
pub mod rank;
pub mod relevance;

use std::collections::HashSet;

use once_cell::sync::Lazy;

use crate::catalog::ApiCatalog;
use crate::corpus::{Sentence, Thread};
use self::graph::build_text_graph;
use self::rank::rank_nodes;
use self::relevance::select_relevant;

static DEFAULT_STOPWORDS: Lazy<HashSet<String>> = Lazy::new(|| {
    include_str!("../../data/stopwords.txt")
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
});

static DEFAULT_PRONOUNS: Lazy<HashSet<String>> = Lazy::new(|| {
    include_str!("../../data/pronouns.txt")
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
});

pub fn default_stopwords() -> &'static HashSet<String> {
    &DEFAULT_STOPWORDS
}

pub fn default_pronouns() -> &'static HashSet<String> {
    &DEFAULT_PRONOUNS
}

/// Knobs for the ranking pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankParams {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// How many sentences a summary keeps.
    pub top_n: usize,
    pub edge_threshold: f64,
}

impl Default for RankParams {
    fn default() -> Self {
        RankParams {
            damping: 0.85,
            tolerance: 1e-6,
            max_iterations: 100,
            top_n: 3,
            edge_threshold: 0.05,
        }
    }
}

/// Rank sentences and keep the top `top_n`, re-ordered by document
/// position. Ties in score favor the earlier sentence.
pub fn summarize_sentences(
    sentences: &[Sentence],
    params: &RankParams,
    stopwords: &HashSet<String>,
) -> Vec<Sentence> {
    if sentences.len() <= params.top_n {
        return sentences.to_vec();
    }
    let texts: Vec<String> = sentences.iter().map(|s| s.text.clone()).collect();
    let graph = build_text_graph(&texts, stopwords, params.edge_threshold);
    let outcome = rank_nodes(&graph, params.damping, params.tolerance, params.max_iterations);
    let mut order: Vec<usize> = (0..sentences.len()).collect();
    order.sort_by(|&a, &b| {
        outcome.scores[b]
            .partial_cmp(&outcome.scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut chosen: Vec<usize> = order.into_iter().take(params.top_n).collect();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| sentences[i].clone()).collect()
}

/// A finished description for one linked snippet.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskDescription {
    pub title: String,
    /// What the asker wanted, from the question.
    pub problem: Vec<Sentence>,
    pub problem_low_confidence: bool,
    /// How the snippet's post addresses it.
    pub solution: Vec<Sentence>,
    pub solution_low_confidence: bool,
}

/// Build the description for a snippet linked to `api` via `mention`.
#[allow(clippy::too_many_arguments)]
pub fn describe_task(
    thread: &Thread,
    snippet_post_id: u64,
    snippet_block_index: usize,
    mention: Option<&str>,
    api: &str,
    catalog: &ApiCatalog,
    params: &RankParams,
    stopwords: &HashSet<String>,
    pronouns: &HashSet<String>,
) -> TaskDescription {
    let question_sentences: Vec<Sentence> = thread
        .question
        .text_sentences()
        .into_iter()
        .cloned()
        .collect();
    let snippet_in_question = thread.question.id == snippet_post_id;
    let problem_selection = select_relevant(
        &question_sentences,
        snippet_in_question.then_some(snippet_block_index),
        mention,
        api,
        catalog,
        pronouns,
    );
    // A question that never names the API still poses the problem; rank
    // the whole question rather than returning nothing.
    let (problem_pool, problem_low_confidence) = if problem_selection.sentences.is_empty() {
        (question_sentences.clone(), true)
    } else {
        (
            problem_selection.sentences,
            problem_selection.low_confidence,
        )
    };
    let problem = summarize_sentences(&problem_pool, params, stopwords);

    let snippet_post = thread.post(snippet_post_id);
    let solution_sentences: Vec<Sentence> = snippet_post
        .map(|p| p.text_sentences().into_iter().cloned().collect())
        .unwrap_or_default();
    let solution_selection = select_relevant(
        &solution_sentences,
        Some(snippet_block_index),
        mention,
        api,
        catalog,
        pronouns,
    );
    let solution = summarize_sentences(&solution_selection.sentences, params, stopwords);
    let solution_low_confidence = solution_selection.low_confidence;

    TaskDescription {
        title: thread.title.trim().to_string(),
        problem,
        problem_low_confidence,
        solution,
        solution_low_confidence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ApiRecord;
    use crate::corpus::segment::segment_body;
    use crate::corpus::{Post, PostKind, Thread};
    use std::collections::{BTreeMap, BTreeSet};

    fn catalog() -> ApiCatalog {
        ApiCatalog::new(vec![ApiRecord {
            name: "com.google.code.gson".to_string(),
            modules: vec!["gson".to_string()],
            packages: Vec::new(),
            types: ["com.google.gson.Gson"]
                .iter()
                .map(|t| t.to_string())
                .collect::<BTreeSet<_>>(),
            methods: BTreeMap::new(),
            dependencies: Vec::new(),
            aliases: Vec::new(),
        }])
        .unwrap()
    }

    fn post(id: u64, kind: PostKind, body: &str) -> Post {
        let (blocks, _warnings) = segment_body(body, id);
        Post {
            id,
            kind,
            score: 0,
            blocks,
            comments: Vec::new(),
        }
    }

    fn thread() -> Thread {
        Thread {
            id: 3,
            title: "How to convert a JSON string to a Java object?".to_string(),
            tags: vec!["java".to_string(), "json".to_string()],
            question: post(
                10,
                PostKind::Question,
                "I have a JSON string from a web service. \
                 I want to convert it into a Java object. \
                 What library should I use?",
            ),
            answers: vec![post(
                20,
                PostKind::Answer,
                "You can use gson to convert your string. \
                 It maps fields automatically.<code>Gson g = new Gson();</code>",
            )],
        }
    }

    #[test]
    fn description_draws_problem_and_solution_from_their_posts() {
        let t = thread();
        let desc = describe_task(
            &t,
            20,
            1,
            Some("gson"),
            "com.google.code.gson",
            &catalog(),
            &RankParams::default(),
            default_stopwords(),
            default_pronouns(),
        );
        assert_eq!(desc.title, "How to convert a JSON string to a Java object?");
        assert!(!desc.problem.is_empty());
        assert!(desc.problem.iter().all(|s| {
            t.question
                .text_sentences()
                .iter()
                .any(|q| q.text == s.text)
        }));
        assert_eq!(desc.solution.len(), 2, "{:?}", desc.solution);
        assert!(desc.solution[0].text.contains("use gson"));
        assert!(desc.solution[1].text.contains("maps fields"));
        assert!(!desc.solution_low_confidence);
        // The question never says "gson": flagged, but still summarized.
        assert!(desc.problem_low_confidence);
    }

    #[test]
    fn summaries_keep_document_order() {
        let sentences: Vec<Sentence> = crate::corpus::sentences::split_sentences(
            "Convert the JSON string to an object. \
             The object mapper reads the JSON string. \
             Completely unrelated remark goes here. \
             JSON string conversion needs a mapper object. \
             Nothing beats a quiet lunch break.",
            crate::corpus::Container::Block {
                post_id: 1,
                block_index: 0,
            },
        );
        let summary = summarize_sentences(
            &sentences,
            &RankParams {
                top_n: 3,
                ..RankParams::default()
            },
            default_stopwords(),
        );
        assert_eq!(summary.len(), 3);
        let positions: Vec<usize> = summary.iter().map(|s| s.index).collect();
        // The mutually-similar sentences outrank the isolated asides, and the
        // output keeps document order rather than score order.
        assert_eq!(positions, vec![0, 1, 3]);
    }

    #[test]
    fn short_inputs_come_back_whole() {
        let sentences = crate::corpus::sentences::split_sentences(
            "One sentence only.",
            crate::corpus::Container::Title,
        );
        let summary =
            summarize_sentences(&sentences, &RankParams::default(), default_stopwords());
        assert_eq!(summary.len(), 1);
    }
}

//! The end-to-end miner: threads in, usage scenarios out.
//!
//! Mining runs in two phases. Phase one handles each thread independently
//! (and so in parallel): parse snippets, infer variable types, extract API
//! elements, and link by mention proximity. Phase two is sequential: the
//! proximity links form a fixed prior for the probabilistic fallback, then
//! descriptions and reactions are attached. Scenario output is sorted by
//! (thread, post, snippet) and fully deterministic — the same corpus gives
//! byte-identical JSON no matter the worker count.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::ApiCatalog;
use crate::catalog::mentions::detect_mentions;
use crate::config::MinerConfig;
use crate::corpus::{PostKind, Sentence, Thread};
use crate::linker::{
    associate, bucket_mentions, probabilistic_link, BucketKind, FilterTraceEntry, LinkDecision,
    LinkMethod, PriorLink,
};
use crate::opinion::SentimentLexicon;
use crate::reactions::{associate_reactions, Reaction};
use crate::snippet::{
    extract_api_elements, infer_variable_types, parse_hybrid, ApiElements, SnippetRef, Validity,
};
use crate::summarize::{
    default_pronouns, default_stopwords, describe_task, TaskDescription,
};

#[derive(Debug, thiserror::Error)]
pub enum MineError {
    #[error("cannot build worker pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// One prose sentence as it appears in emitted artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SentenceRecord {
    pub id: String,
    pub text: String,
}

/// Problem/solution summary attached to an answer-post scenario.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct DescriptionRecord {
    pub problem: Vec<SentenceRecord>,
    pub problem_low_confidence: bool,
    pub solution: Vec<SentenceRecord>,
    pub solution_low_confidence: bool,
}

/// The linked API plus how the link was made.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct ScenarioLink {
    pub name: String,
    pub method: LinkMethod,
    /// The mention token that anchored a proximity link.
    pub mention: Option<String>,
    pub bucket: Option<BucketKind>,
    pub trace: Vec<FilterTraceEntry>,
}

/// One mined task-based usage scenario.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct UsageScenario {
    pub id: String,
    pub thread_id: u64,
    pub post_id: u64,
    pub snippet_index: usize,
    pub title: String,
    pub code: String,
    pub api: ScenarioLink,
    /// Simple type names the snippet uses, sorted.
    pub types_used: Vec<String>,
    /// Present only for answer-post snippets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<DescriptionRecord>,
    pub reactions: Vec<Reaction>,
}

/// Per-snippet label for the evaluation harness: an API name, `invalid`,
/// or `undecided`.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Prediction {
    pub snippet_id: String,
    pub label: String,
}

#[derive(Debug, Default, Clone, PartialEq, Serialize)]
pub struct MineStats {
    pub threads: usize,
    pub snippets_total: usize,
    pub snippets_invalid: usize,
    pub snippets_undecided: usize,
    pub scenarios: usize,
}

#[derive(Debug)]
pub struct MineResult {
    pub scenarios: Vec<UsageScenario>,
    /// One label per snippet, scenario or not; feeds `eval`.
    pub predictions: Vec<Prediction>,
    pub stats: MineStats,
    pub diagnostics: Vec<String>,
}

// ---------------------------------------------------------------------------
// Phase one: per-thread, parallel
// ---------------------------------------------------------------------------

struct MinedSnippet {
    refr: SnippetRef,
    code: String,
    validity: Validity,
    elements: ApiElements,
    decision: LinkDecision,
}

struct MinedThread {
    snippets: Vec<MinedSnippet>,
    diagnostics: Vec<String>,
}

fn mine_thread(thread: &Thread, catalog: &ApiCatalog, config: &MinerConfig) -> MinedThread {
    let mut parsed_all = Vec::new();
    let mut raw_codes = Vec::new();
    for post in thread.posts() {
        for (snippet_index, block, code) in post.code_blocks() {
            let refr = SnippetRef {
                thread_id: thread.id,
                post_id: post.id,
                snippet_index,
                block_index: block.index,
                in_question: post.kind == PostKind::Question,
            };
            let mut parsed = parse_hybrid(&code.raw, refr);
            parsed.apply_error_ratio(config.max_error_line_ratio);
            parsed_all.push(parsed);
            raw_codes.push(code.raw.clone());
        }
    }

    let ctx = infer_variable_types(&parsed_all);
    let diagnostics = ctx
        .diagnostics
        .iter()
        .map(|d| format!("thread {}: {d}", thread.id))
        .collect();

    // Every prose sentence of the thread, for mention buckets.
    let mut sentences: Vec<Sentence> = thread.title_sentences();
    for post in thread.posts() {
        sentences.extend(post.text_sentences().into_iter().cloned());
    }
    let mentions = detect_mentions(&sentences, catalog);

    let snippets = parsed_all
        .iter()
        .zip(raw_codes)
        .map(|(parsed, code)| {
            let refr = parsed.snippet;
            if !parsed.validity.is_valid() {
                return MinedSnippet {
                    refr,
                    code,
                    validity: parsed.validity,
                    elements: ApiElements::default(),
                    decision: LinkDecision::undecided(),
                };
            }
            let elements = extract_api_elements(parsed, &ctx);
            let buckets = bucket_mentions(&mentions, &refr, thread.question.id);
            let decision = associate(&elements, &buckets, catalog, config.mode);
            MinedSnippet {
                refr,
                code,
                validity: parsed.validity,
                elements,
                decision,
            }
        })
        .collect();

    MinedThread {
        snippets,
        diagnostics,
    }
}

// ---------------------------------------------------------------------------
// Phase two: sequential fallback, descriptions, reactions
// ---------------------------------------------------------------------------

/// Mine `threads` into usage scenarios. Per-record trouble lands in
/// `diagnostics`; only a worker-pool failure is fatal.
pub fn mine(
    threads: &[Thread],
    catalog: &ApiCatalog,
    lexicon: &SentimentLexicon,
    config: &MinerConfig,
) -> Result<MineResult, MineError> {
    let workers = config.workers.max(1);
    let mut mined: Vec<MinedThread> = if workers == 1 {
        threads
            .iter()
            .map(|t| mine_thread(t, catalog, config))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()?;
        pool.install(|| {
            threads
                .par_iter()
                .map(|t| mine_thread(t, catalog, config))
                .collect()
        })
    };

    // The prior is frozen here: probabilistic links never feed it.
    let prior: Vec<PriorLink> = mined
        .iter()
        .flat_map(|mt| mt.snippets.iter())
        .filter(|s| s.decision.method == LinkMethod::Proximity)
        .filter_map(|s| {
            s.decision.api.clone().map(|api| PriorLink {
                api,
                types: s.elements.types.iter().map(|(t, _)| t.clone()).collect(),
            })
        })
        .collect();

    for mt in &mut mined {
        for s in &mut mt.snippets {
            if s.validity.is_valid() && s.decision.method == LinkMethod::Undecided {
                if let Some((api, _votes)) = probabilistic_link(&s.elements, &prior) {
                    s.decision.api = Some(api);
                    s.decision.method = LinkMethod::Probabilistic;
                }
            }
        }
    }

    let stopwords = default_stopwords();
    let pronouns = default_pronouns();
    let params = config.rank_params();

    let mut stats = MineStats {
        threads: threads.len(),
        ..MineStats::default()
    };
    let mut diagnostics = Vec::new();
    let mut scenarios = Vec::new();
    let mut predictions: Vec<(u64, u64, usize, Prediction)> = Vec::new();

    for (thread, mt) in threads.iter().zip(&mined) {
        diagnostics.extend(mt.diagnostics.iter().cloned());

        // Implicit reactions go to the post's owning snippet: its last
        // valid, linked one.
        let mut owner: BTreeMap<u64, usize> = BTreeMap::new();
        for s in &mt.snippets {
            if s.validity.is_valid() && s.decision.api.is_some() {
                owner.insert(s.refr.post_id, s.refr.snippet_index);
            }
        }

        for s in &mt.snippets {
            stats.snippets_total += 1;
            let label = if !s.validity.is_valid() {
                stats.snippets_invalid += 1;
                "invalid".to_string()
            } else {
                match &s.decision.api {
                    Some(api) => api.clone(),
                    None => {
                        stats.snippets_undecided += 1;
                        "undecided".to_string()
                    }
                }
            };
            predictions.push((
                s.refr.thread_id,
                s.refr.post_id,
                s.refr.snippet_index,
                Prediction {
                    snippet_id: s.refr.id(),
                    label,
                },
            ));

            let Some(api) = s.decision.api.clone() else {
                continue;
            };
            let Some(post) = thread.post(s.refr.post_id) else {
                diagnostics.push(format!(
                    "thread {}: snippet {} lost its post",
                    thread.id,
                    s.refr.id()
                ));
                continue;
            };

            let description = if s.refr.in_question {
                None
            } else {
                let described = describe_task(
                    thread,
                    s.refr.post_id,
                    s.refr.block_index,
                    s.decision.mention.as_deref(),
                    &api,
                    catalog,
                    &params,
                    stopwords,
                    pronouns,
                );
                Some(description_record(thread.id, described))
            };

            let owns = owner.get(&s.refr.post_id) == Some(&s.refr.snippet_index);
            let reactions = associate_reactions(
                thread.id,
                post,
                &api,
                owns,
                catalog,
                lexicon,
                pronouns,
                config.negation_window,
                config.implicit_lookback,
            );

            let mut types_used: Vec<String> =
                s.elements.types.iter().map(|(t, _)| t.clone()).collect();
            types_used.sort();
            types_used.dedup();

            scenarios.push(UsageScenario {
                id: s.refr.id(),
                thread_id: s.refr.thread_id,
                post_id: s.refr.post_id,
                snippet_index: s.refr.snippet_index,
                title: thread.title.clone(),
                code: s.code.clone(),
                api: ScenarioLink {
                    name: api,
                    method: s.decision.method,
                    mention: s.decision.mention.clone(),
                    bucket: s.decision.bucket,
                    trace: s.decision.trace.clone(),
                },
                types_used,
                description,
                reactions,
            });
        }
    }

    scenarios.sort_by(|a, b| {
        (a.thread_id, a.post_id, a.snippet_index).cmp(&(b.thread_id, b.post_id, b.snippet_index))
    });
    predictions.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    stats.scenarios = scenarios.len();

    let result = MineResult {
        scenarios,
        predictions: predictions.into_iter().map(|(_, _, _, p)| p).collect(),
        stats,
        diagnostics,
    };
    let violations = verify_integrity(&result, threads, catalog);
    let mut result = result;
    result.diagnostics.extend(violations);
    Ok(result)
}

fn description_record(thread_id: u64, description: TaskDescription) -> DescriptionRecord {
    let records = |sentences: Vec<Sentence>| {
        sentences
            .into_iter()
            .map(|s| SentenceRecord {
                id: s.id(thread_id),
                text: s.text,
            })
            .collect()
    };
    DescriptionRecord {
        problem: records(description.problem),
        problem_low_confidence: description.problem_low_confidence,
        solution: records(description.solution),
        solution_low_confidence: description.solution_low_confidence,
    }
}

/// Cross-check emitted scenarios against their sources: every linked API
/// must exist in the catalog and every cited sentence in the corpus.
/// Returns one message per violation; empty means consistent.
pub fn verify_integrity(
    result: &MineResult,
    threads: &[Thread],
    catalog: &ApiCatalog,
) -> Vec<String> {
    let mut sentence_ids: BTreeSet<String> = BTreeSet::new();
    for thread in threads {
        for s in thread.title_sentences() {
            sentence_ids.insert(s.id(thread.id));
        }
        for post in thread.posts() {
            for s in post.text_sentences() {
                sentence_ids.insert(s.id(thread.id));
            }
            for comment in &post.comments {
                for s in &comment.sentences {
                    sentence_ids.insert(s.id(thread.id));
                }
            }
        }
    }

    let mut violations = Vec::new();
    for scenario in &result.scenarios {
        if !catalog.contains(&scenario.api.name) {
            violations.push(format!(
                "integrity: scenario {} links unknown api {}",
                scenario.id, scenario.api.name
            ));
        }
        let cited = scenario
            .reactions
            .iter()
            .map(|r: &Reaction| &r.sentence_id)
            .chain(scenario.description.iter().flat_map(|d| {
                d.problem
                    .iter()
                    .map(|s| &s.id)
                    .chain(d.solution.iter().map(|s| &s.id))
            }));
        for id in cited {
            if !sentence_ids.contains(id) {
                violations.push(format!(
                    "integrity: scenario {} cites unknown sentence {id}",
                    scenario.id
                ));
            }
        }
    }
    violations
}

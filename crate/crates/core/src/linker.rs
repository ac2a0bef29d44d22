//! Snippet-to-API association.
//!
//! Mentions around a snippet are grouped into three buckets — text earlier
//! in the same post, text later in the same post, then title + question —
//! and the first non-empty bucket decides. Within a bucket, candidate APIs
//! pass through deductive filters (type overlap, method overlap, inter-API
//! dependencies); whenever a filter has no signal it leaves the candidate
//! set untouched. Whatever survives is settled by mention proximity,
//! exact-over-fuzzy preference and finally name order, so every snippet
//! with nearby mentions gets a decision. Snippets with no mentions at all
//! fall through to a coverage-based pass over the already-linked corpus.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::catalog::mentions::{MatchKind, MentionCandidateList};
use crate::catalog::{ApiCatalog, ApiRecord};
use crate::corpus::Container;
use crate::snippet::{ApiElements, SnippetRef};

/// Which deductive filters run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMode {
    /// Type, method and dependency filters.
    Full,
    /// Type filter only.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BucketKind {
    Before,
    After,
    Thread,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    Type,
    Method,
    Dependency,
}

/// One mention-candidate pair inside a bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct MentionApiTuple {
    /// The mention text as written.
    pub token: String,
    pub api: String,
    pub kind: MatchKind,
    /// Mention position within the bucket (document order).
    pub order: usize,
}

#[derive(Debug, Default, Clone)]
pub struct MentionBuckets {
    pub before: Vec<MentionApiTuple>,
    pub after: Vec<MentionApiTuple>,
    pub thread: Vec<MentionApiTuple>,
}

impl MentionBuckets {
    fn get(&self, kind: BucketKind) -> &[MentionApiTuple] {
        match kind {
            BucketKind::Before => &self.before,
            BucketKind::After => &self.after,
            BucketKind::Thread => &self.thread,
        }
    }
}

/// Record of one filter application inside the deciding bucket.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct FilterTraceEntry {
    pub filter: FilterKind,
    pub input_count: usize,
    pub output_count: usize,
    /// Best score the filter saw; absent when it could not score at all.
    pub max_score: Option<f64>,
    /// True when the filter left the candidate set untouched.
    pub no_signal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMethod {
    Proximity,
    Probabilistic,
    Undecided,
}

/// The outcome of linking one snippet.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkDecision {
    pub api: Option<String>,
    /// The mention text that anchored the decision.
    pub mention: Option<String>,
    pub method: LinkMethod,
    pub bucket: Option<BucketKind>,
    pub trace: Vec<FilterTraceEntry>,
}

impl LinkDecision {
    pub fn undecided() -> Self {
        LinkDecision {
            api: None,
            mention: None,
            method: LinkMethod::Undecided,
            bucket: None,
            trace: Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Similarity scores
// ---------------------------------------------------------------------------

/// Fraction of the snippet's types the API provides. Types resolved to a
/// fully qualified name must match qualified; unresolved ones match on the
/// simple name.
pub fn type_similarity(record: &ApiRecord, types: &[(String, Option<String>)]) -> f64 {
    if types.is_empty() {
        return 0.0;
    }
    let matched = types
        .iter()
        .filter(|(simple, fqn)| record.has_type(simple, fqn.as_deref()))
        .count();
    matched as f64 / types.len() as f64
}

/// Fraction of the snippet's invoked methods the API provides.
pub fn method_similarity(record: &ApiRecord, methods: &BTreeSet<String>) -> f64 {
    if methods.is_empty() {
        return 0.0;
    }
    let matched = methods.iter().filter(|m| record.has_method(m)).count();
    matched as f64 / methods.len() as f64
}

// ---------------------------------------------------------------------------
// Buckets
// ---------------------------------------------------------------------------

/// Sort the thread's mentions into the three buckets for one snippet.
///
/// Comments never contribute. The thread bucket holds the title plus the
/// question's text; for a snippet inside the question itself it holds the
/// title only, since the question text already fills the positional buckets.
pub fn bucket_mentions(
    mentions: &[MentionCandidateList],
    snippet: &SnippetRef,
    question_post_id: u64,
) -> MentionBuckets {
    let mut buckets = MentionBuckets::default();
    let mut orders = [0usize; 3];
    for mcl in mentions {
        let slot = match mcl.mention.container {
            Container::Title => Some(2),
            Container::Block {
                post_id,
                block_index,
            } => {
                if post_id == snippet.post_id {
                    if block_index < snippet.block_index {
                        Some(0)
                    } else if block_index > snippet.block_index {
                        Some(1)
                    } else {
                        None
                    }
                } else if post_id == question_post_id && !snippet.in_question {
                    Some(2)
                } else {
                    None
                }
            }
            Container::Comment { .. } => None,
        };
        let Some(slot) = slot else { continue };
        let order = orders[slot];
        orders[slot] += 1;
        let bucket = match slot {
            0 => &mut buckets.before,
            1 => &mut buckets.after,
            _ => &mut buckets.thread,
        };
        for (api, kind) in &mcl.candidates {
            bucket.push(MentionApiTuple {
                token: mcl.mention.token.clone(),
                api: api.clone(),
                kind: *kind,
                order,
            });
        }
    }
    buckets
}

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

/// Keep the candidates maximizing `score`. An empty candidate list or an
/// all-zero scoring round has no signal and returns the input unchanged.
fn score_filter(
    filter: FilterKind,
    candidates: Vec<String>,
    score: impl Fn(&str) -> f64,
    trace: &mut Vec<FilterTraceEntry>,
) -> Vec<String> {
    let input_count = candidates.len();
    let scores: Vec<f64> = candidates.iter().map(|c| score(c)).collect();
    let max = scores.iter().copied().fold(0.0f64, f64::max);
    let no_signal = input_count == 0 || max <= 0.0;
    let output: Vec<String> = if no_signal {
        candidates
    } else {
        candidates
            .into_iter()
            .zip(scores.iter())
            .filter(|&(_, s)| *s >= max)
            .map(|(c, _)| c)
            .collect()
    };
    trace.push(FilterTraceEntry {
        filter,
        input_count,
        output_count: output.len(),
        max_score: if input_count == 0 { None } else { Some(max) },
        no_signal,
    });
    output
}

/// Keep the candidates with the most incoming dependency edges from other
/// candidates. Needs at least two distinct candidates and at least one edge
/// to carry any signal.
pub fn dependency_filter(
    catalog: &ApiCatalog,
    candidates: Vec<String>,
    trace: &mut Vec<FilterTraceEntry>,
) -> Vec<String> {
    let input_count = candidates.len();
    let distinct: BTreeSet<&String> = candidates.iter().collect();
    if distinct.len() < 2 {
        trace.push(FilterTraceEntry {
            filter: FilterKind::Dependency,
            input_count,
            output_count: input_count,
            max_score: None,
            no_signal: true,
        });
        return candidates;
    }
    let counts = catalog.dependency_incoming_counts(&candidates);
    let max = counts.iter().map(|&(_, n)| n).max().unwrap_or(0);
    let no_signal = max == 0;
    let output: Vec<String> = if no_signal {
        candidates
    } else {
        let winners: BTreeSet<String> = counts
            .into_iter()
            .filter(|&(_, n)| n == max)
            .map(|(name, _)| name)
            .collect();
        candidates
            .into_iter()
            .filter(|c| winners.contains(c))
            .collect()
    };
    trace.push(FilterTraceEntry {
        filter: FilterKind::Dependency,
        input_count,
        output_count: output.len(),
        max_score: Some(max as f64),
        no_signal,
    });
    output
}

// ---------------------------------------------------------------------------
// Association
// ---------------------------------------------------------------------------

/// Link one snippet from its surrounding mentions. The first non-empty
/// bucket decides; with every bucket empty the result is undecided.
pub fn associate(
    elements: &ApiElements,
    buckets: &MentionBuckets,
    catalog: &ApiCatalog,
    mode: LinkMode,
) -> LinkDecision {
    for kind in [BucketKind::Before, BucketKind::After, BucketKind::Thread] {
        let tuples = buckets.get(kind);
        if tuples.is_empty() {
            continue;
        }
        return decide_bucket(elements, tuples, kind, catalog, mode);
    }
    LinkDecision::undecided()
}

fn decide_bucket(
    elements: &ApiElements,
    tuples: &[MentionApiTuple],
    kind: BucketKind,
    catalog: &ApiCatalog,
    mode: LinkMode,
) -> LinkDecision {
    // Candidate set: distinct APIs in first-appearance order.
    let mut candidates: Vec<String> = Vec::new();
    for tuple in tuples {
        if !candidates.contains(&tuple.api) {
            candidates.push(tuple.api.clone());
        }
    }

    let mut trace = Vec::new();
    let mut current = candidates;
    current = score_filter(
        FilterKind::Type,
        current,
        |api| {
            catalog
                .get(api)
                .map_or(0.0, |r| type_similarity(r, &elements.types))
        },
        &mut trace,
    );
    if mode == LinkMode::Full && current.len() > 1 {
        current = score_filter(
            FilterKind::Method,
            current,
            |api| {
                catalog
                    .get(api)
                    .map_or(0.0, |r| method_similarity(r, &elements.methods))
            },
            &mut trace,
        );
    }
    if mode == LinkMode::Full && current.len() > 1 {
        current = dependency_filter(catalog, current, &mut trace);
    }

    let api = if current.len() == 1 {
        current.into_iter().next().unwrap()
    } else {
        tie_break(current, tuples, kind)
    };
    let mention = nearest_mention_token(&api, tuples, kind);
    LinkDecision {
        api: Some(api),
        mention,
        method: LinkMethod::Proximity,
        bucket: Some(kind),
        trace,
    }
}

/// Mention proximity, then exact-over-fuzzy, then name order.
fn tie_break(candidates: Vec<String>, tuples: &[MentionApiTuple], kind: BucketKind) -> String {
    debug_assert!(!candidates.is_empty());
    let mut best: Vec<String> = Vec::new();
    let mut best_rank: Option<usize> = None;
    for api in &candidates {
        let Some(rank) = proximity_rank(api, tuples, kind) else {
            continue;
        };
        match best_rank {
            None => {
                best_rank = Some(rank);
                best.push(api.clone());
            }
            Some(current) if rank < current => {
                best_rank = Some(rank);
                best.clear();
                best.push(api.clone());
            }
            Some(current) if rank == current => best.push(api.clone()),
            Some(_) => {}
        }
    }
    if best.is_empty() {
        best = candidates;
    }
    if best.len() > 1 {
        let exact: Vec<String> = best
            .iter()
            .filter(|api| {
                tuples
                    .iter()
                    .any(|t| t.api == **api && t.kind == MatchKind::Exact)
            })
            .cloned()
            .collect();
        if !exact.is_empty() {
            best = exact;
        }
    }
    best.into_iter().min().expect("non-empty candidate set")
}

/// Distance rank of a candidate's nearest mention: smaller is nearer.
/// Before-buckets read toward the snippet, so the latest mention is
/// nearest; the other buckets read away from it.
fn proximity_rank(api: &str, tuples: &[MentionApiTuple], kind: BucketKind) -> Option<usize> {
    let orders = tuples.iter().filter(|t| t.api == api).map(|t| t.order);
    match kind {
        BucketKind::Before => orders.max().map(|o| usize::MAX - o),
        BucketKind::After | BucketKind::Thread => orders.min(),
    }
}

fn nearest_mention_token(
    api: &str,
    tuples: &[MentionApiTuple],
    kind: BucketKind,
) -> Option<String> {
    let matching = tuples.iter().filter(|t| t.api == api);
    let tuple = match kind {
        BucketKind::Before => matching.max_by_key(|t| t.order),
        BucketKind::After | BucketKind::Thread => matching.min_by_key(|t| t.order),
    };
    tuple.map(|t| t.token.clone())
}

// ---------------------------------------------------------------------------
// Probabilistic fallback
// ---------------------------------------------------------------------------

/// One already-linked snippet from the proximity phase.
#[derive(Debug, Clone)]
pub struct PriorLink {
    pub api: String,
    /// Simple type names the linked snippet used.
    pub types: BTreeSet<String>,
}

/// Coverage-based fallback for snippets without nearby mentions: each
/// prior snippet of an API that shares at least one type with this snippet
/// votes for it. Most votes wins, ties break on name order; no votes at
/// all stays undecided.
pub fn probabilistic_link(elements: &ApiElements, prior: &[PriorLink]) -> Option<(String, usize)> {
    let own: BTreeSet<&str> = elements.types.iter().map(|(t, _)| t.as_str()).collect();
    if own.is_empty() {
        return None;
    }
    let mut votes: std::collections::BTreeMap<&str, usize> = std::collections::BTreeMap::new();
    for link in prior {
        if link.types.iter().any(|t| own.contains(t.as_str())) {
            *votes.entry(link.api.as_str()).or_insert(0) += 1;
        }
    }
    votes
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(a.0)))
        .filter(|&(_, n)| n > 0)
        .map(|(api, n)| (api.to_string(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::mentions::{detect_mentions, Mention};
    use crate::corpus::{sentences::split_sentences, Container};
    use std::collections::{BTreeMap, BTreeSet};

    fn record(
        name: &str,
        module: &str,
        types: &[&str],
        methods: &[(&str, &[&str])],
        deps: &[&str],
    ) -> ApiRecord {
        ApiRecord {
            name: name.to_string(),
            modules: vec![module.to_string()],
            packages: Vec::new(),
            types: types.iter().map(|t| t.to_string()).collect(),
            methods: methods
                .iter()
                .map(|(ty, ms)| {
                    (
                        ty.to_string(),
                        ms.iter().map(|m| m.to_string()).collect::<BTreeSet<_>>(),
                    )
                })
                .collect::<BTreeMap<_, _>>(),
            dependencies: deps.iter().map(|d| d.to_string()).collect(),
            aliases: Vec::new(),
        }
    }

    fn catalog() -> ApiCatalog {
        ApiCatalog::new(vec![
            record(
                "com.google.code.gson",
                "gson",
                &["com.google.gson.Gson", "com.google.gson.reflect.TypeToken"],
                &[("com.google.gson.Gson", &["toJson", "fromJson"])],
                &[],
            ),
            record(
                "org.json",
                "json",
                &["org.json.JSONObject", "org.json.JSONArray"],
                &[("org.json.JSONObject", &["getString", "put"])],
                &[],
            ),
            record(
                "org.easygson",
                "easygson",
                &["org.easygson.JsonEntity"],
                &[("org.easygson.JsonEntity", &["create"])],
                &["com.google.code.gson"],
            ),
        ])
        .unwrap()
    }

    fn snippet_ref(post_id: u64, block_index: usize, in_question: bool) -> SnippetRef {
        SnippetRef {
            thread_id: 9,
            post_id,
            snippet_index: 0,
            block_index,
            in_question,
        }
    }

    fn mcl(api_kinds: &[(&str, MatchKind)], container: Container, order_hint: usize) -> MentionCandidateList {
        MentionCandidateList {
            mention: Mention {
                token: format!("mention{order_hint}"),
                container,
                sentence_index: order_hint,
                char_offset: 0,
                kind: api_kinds
                    .iter()
                    .map(|&(_, k)| k)
                    .fold(MatchKind::Fuzzy, |acc, k| {
                        if acc == MatchKind::Exact || k == MatchKind::Exact {
                            MatchKind::Exact
                        } else {
                            MatchKind::Fuzzy
                        }
                    }),
            },
            candidates: api_kinds
                .iter()
                .map(|&(api, kind)| (api.to_string(), kind))
                .collect(),
        }
    }

    fn block(post_id: u64, block_index: usize) -> Container {
        Container::Block {
            post_id,
            block_index,
        }
    }

    fn elements(types: &[&str], methods: &[&str]) -> ApiElements {
        ApiElements {
            types: types.iter().map(|t| (t.to_string(), None)).collect(),
            methods: methods.iter().map(|m| m.to_string()).collect(),
        }
    }

    // === bucketing =========================================================

    #[test]
    fn buckets_split_same_post_text_around_the_snippet() {
        let mentions = vec![
            mcl(&[("org.json", MatchKind::Exact)], block(20, 0), 0),
            mcl(&[("com.google.code.gson", MatchKind::Exact)], block(20, 2), 1),
            mcl(&[("org.easygson", MatchKind::Exact)], Container::Title, 2),
        ];
        let buckets = bucket_mentions(&mentions, &snippet_ref(20, 1, false), 10);
        assert_eq!(buckets.before.len(), 1);
        assert_eq!(buckets.before[0].api, "org.json");
        assert_eq!(buckets.after.len(), 1);
        assert_eq!(buckets.after[0].api, "com.google.code.gson");
        assert_eq!(buckets.thread.len(), 1);
    }

    #[test]
    fn question_snippet_thread_bucket_is_title_only() {
        let mentions = vec![
            mcl(&[("org.json", MatchKind::Exact)], Container::Title, 0),
            mcl(&[("com.google.code.gson", MatchKind::Exact)], block(10, 0), 1),
        ];
        // Snippet inside the question post (10) at block 2: the question
        // text mention goes to the before bucket, not the thread bucket.
        let buckets = bucket_mentions(&mentions, &snippet_ref(10, 2, true), 10);
        assert_eq!(buckets.thread.len(), 1);
        assert_eq!(buckets.thread[0].api, "org.json");
        assert_eq!(buckets.before.len(), 1);
    }

    #[test]
    fn comment_mentions_never_reach_buckets() {
        let mentions = vec![mcl(
            &[("org.json", MatchKind::Exact)],
            Container::Comment {
                post_id: 20,
                comment_id: 7,
            },
            0,
        )];
        let buckets = bucket_mentions(&mentions, &snippet_ref(20, 1, false), 10);
        assert!(buckets.before.is_empty());
        assert!(buckets.after.is_empty());
        assert!(buckets.thread.is_empty());
    }

    // === filters ===========================================================

    #[test]
    fn type_filter_disambiguates_competing_mentions() {
        let cat = catalog();
        let buckets = MentionBuckets {
            before: vec![
                MentionApiTuple {
                    token: "gson".into(),
                    api: "com.google.code.gson".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
                MentionApiTuple {
                    token: "org.json".into(),
                    api: "org.json".into(),
                    kind: MatchKind::Exact,
                    order: 1,
                },
            ],
            ..Default::default()
        };
        let decision = associate(
            &elements(&["Gson", "TypeToken"], &["fromJson"]),
            &buckets,
            &cat,
            LinkMode::Full,
        );
        assert_eq!(decision.api.as_deref(), Some("com.google.code.gson"));
        assert_eq!(decision.bucket, Some(BucketKind::Before));
        assert_eq!(decision.method, LinkMethod::Proximity);
        assert_eq!(decision.trace.len(), 1); // type filter alone decided
        assert_eq!(decision.trace[0].filter, FilterKind::Type);
        assert!(!decision.trace[0].no_signal);
        assert_eq!(decision.trace[0].max_score, Some(1.0));
        assert_eq!(decision.mention.as_deref(), Some("gson"));
    }

    #[test]
    fn empty_types_pass_through_and_methods_decide() {
        let cat = catalog();
        let buckets = MentionBuckets {
            before: vec![
                MentionApiTuple {
                    token: "gson".into(),
                    api: "com.google.code.gson".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
                MentionApiTuple {
                    token: "json".into(),
                    api: "org.json".into(),
                    kind: MatchKind::Exact,
                    order: 1,
                },
            ],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &["getString"]), &buckets, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("org.json"));
        let type_entry = &decision.trace[0];
        assert!(type_entry.no_signal);
        assert_eq!(type_entry.input_count, 2);
        assert_eq!(type_entry.output_count, 2);
        let method_entry = &decision.trace[1];
        assert_eq!(method_entry.filter, FilterKind::Method);
        assert!(!method_entry.no_signal);
        assert_eq!(method_entry.output_count, 1);
    }

    #[test]
    fn dependency_filter_breaks_remaining_ties() {
        let cat = catalog();
        // Neither types nor methods give signal; easygson depends on gson,
        // so gson has one incoming edge and wins.
        let buckets = MentionBuckets {
            before: vec![
                MentionApiTuple {
                    token: "easygson".into(),
                    api: "org.easygson".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
                MentionApiTuple {
                    token: "gson".into(),
                    api: "com.google.code.gson".into(),
                    kind: MatchKind::Exact,
                    order: 1,
                },
            ],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &[]), &buckets, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("com.google.code.gson"));
        assert_eq!(decision.trace.len(), 3);
        let dep = &decision.trace[2];
        assert_eq!(dep.filter, FilterKind::Dependency);
        assert!(!dep.no_signal);
        assert_eq!(dep.max_score, Some(1.0));
        assert_eq!(dep.output_count, 1);
    }

    #[test]
    fn partial_mode_runs_only_the_type_filter() {
        let cat = catalog();
        let buckets = MentionBuckets {
            before: vec![
                MentionApiTuple {
                    token: "easygson".into(),
                    api: "org.easygson".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
                MentionApiTuple {
                    token: "gson".into(),
                    api: "com.google.code.gson".into(),
                    kind: MatchKind::Exact,
                    order: 1,
                },
            ],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &["getString"]), &buckets, &cat, LinkMode::Partial);
        // No filter signal at all: nearest mention in a before-bucket is
        // the latest one.
        assert_eq!(decision.api.as_deref(), Some("com.google.code.gson"));
        assert_eq!(decision.trace.len(), 1);
        assert!(decision.trace[0].no_signal);
    }

    #[test]
    fn first_nonempty_bucket_decides_even_with_weak_evidence() {
        let cat = catalog();
        let buckets = MentionBuckets {
            before: vec![MentionApiTuple {
                token: "org.json".into(),
                api: "org.json".into(),
                kind: MatchKind::Exact,
                order: 0,
            }],
            after: vec![MentionApiTuple {
                token: "gson".into(),
                api: "com.google.code.gson".into(),
                kind: MatchKind::Exact,
                order: 0,
            }],
            ..Default::default()
        };
        // The snippet clearly uses Gson, but the before-bucket is
        // non-empty so it decides: org.json wins by position.
        let decision = associate(&elements(&["Gson"], &["toJson"]), &buckets, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("org.json"));
        assert_eq!(decision.bucket, Some(BucketKind::Before));
    }

    #[test]
    fn nearest_mention_is_latest_before_and_earliest_after() {
        let cat = catalog();
        let tuple = |api: &str, order: usize| MentionApiTuple {
            token: api.to_string(),
            api: api.to_string(),
            kind: MatchKind::Exact,
            order,
        };
        let before = MentionBuckets {
            before: vec![tuple("com.google.code.gson", 0), tuple("org.json", 1)],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &[]), &before, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("org.json"));

        let after = MentionBuckets {
            after: vec![tuple("org.json", 0), tuple("com.google.code.gson", 1)],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &[]), &after, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("org.json"));
        assert_eq!(decision.bucket, Some(BucketKind::After));
    }

    #[test]
    fn exact_beats_fuzzy_at_equal_distance() {
        let cat = catalog();
        let buckets = MentionBuckets {
            thread: vec![
                MentionApiTuple {
                    token: "json".into(),
                    api: "org.json".into(),
                    kind: MatchKind::Fuzzy,
                    order: 0,
                },
                MentionApiTuple {
                    token: "json".into(),
                    api: "com.google.code.gson".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
            ],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &[]), &buckets, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("com.google.code.gson"));
    }

    #[test]
    fn name_order_is_the_last_resort() {
        let cat = catalog();
        let buckets = MentionBuckets {
            thread: vec![
                MentionApiTuple {
                    token: "json".into(),
                    api: "org.json".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
                MentionApiTuple {
                    token: "json".into(),
                    api: "com.google.code.gson".into(),
                    kind: MatchKind::Exact,
                    order: 0,
                },
            ],
            ..Default::default()
        };
        let decision = associate(&elements(&[], &[]), &buckets, &cat, LinkMode::Full);
        assert_eq!(decision.api.as_deref(), Some("com.google.code.gson"));
    }

    #[test]
    fn no_mentions_anywhere_is_undecided() {
        let cat = catalog();
        let decision = associate(
            &elements(&["Gson"], &["toJson"]),
            &MentionBuckets::default(),
            &cat,
            LinkMode::Full,
        );
        assert_eq!(decision.api, None);
        assert_eq!(decision.method, LinkMethod::Undecided);
        assert!(decision.trace.is_empty());
    }

    #[test]
    fn fq_resolved_types_must_match_qualified() {
        let cat = catalog();
        let wrong_fqn = ApiElements {
            types: vec![(
                "Gson".to_string(),
                Some("org.immutables.gson.Gson".to_string()),
            )],
            methods: BTreeSet::new(),
        };
        let record = cat.get("com.google.code.gson").unwrap();
        assert_eq!(type_similarity(record, &wrong_fqn.types), 0.0);
        let unresolved = ApiElements {
            types: vec![("Gson".to_string(), None)],
            methods: BTreeSet::new(),
        };
        assert_eq!(type_similarity(record, &unresolved.types), 1.0);
    }

    // === probabilistic fallback ===========================================

    #[test]
    fn coverage_votes_pick_the_best_supported_api() {
        let prior = vec![
            PriorLink {
                api: "com.google.code.gson".into(),
                types: ["Gson"].iter().map(|s| s.to_string()).collect(),
            },
            PriorLink {
                api: "com.google.code.gson".into(),
                types: ["Gson", "TypeToken"].iter().map(|s| s.to_string()).collect(),
            },
            PriorLink {
                api: "org.json".into(),
                types: ["JSONObject", "Gson"].iter().map(|s| s.to_string()).collect(),
            },
        ];
        let got = probabilistic_link(&elements(&["Gson"], &[]), &prior);
        assert_eq!(got, Some(("com.google.code.gson".to_string(), 2)));
    }

    #[test]
    fn zero_coverage_stays_undecided() {
        let prior = vec![PriorLink {
            api: "org.json".into(),
            types: ["JSONObject"].iter().map(|s| s.to_string()).collect(),
        }];
        assert_eq!(probabilistic_link(&elements(&["Gson"], &[]), &prior), None);
        assert_eq!(probabilistic_link(&elements(&[], &[]), &prior), None);
    }

    #[test]
    fn coverage_ties_break_on_name_order() {
        let prior = vec![
            PriorLink {
                api: "org.json".into(),
                types: ["Gson"].iter().map(|s| s.to_string()).collect(),
            },
            PriorLink {
                api: "com.google.code.gson".into(),
                types: ["Gson"].iter().map(|s| s.to_string()).collect(),
            },
        ];
        let got = probabilistic_link(&elements(&["Gson"], &[]), &prior);
        assert_eq!(got, Some(("com.google.code.gson".to_string(), 1)));
    }

    // === end-to-end over real sentences ===================================

    #[test]
    fn mentions_detected_from_text_drive_the_decision() {
        let cat = catalog();
        let sentences = split_sentences(
            "You can use gson to convert the string. The org.json way also works.",
            Container::Block {
                post_id: 20,
                block_index: 0,
            },
        );
        let mentions = detect_mentions(&sentences, &cat);
        let buckets = bucket_mentions(&mentions, &snippet_ref(20, 1, false), 10);
        assert!(!buckets.before.is_empty());
        let decision = associate(
            &elements(&["Gson"], &["toJson"]),
            &buckets,
            &cat,
            LinkMode::Full,
        );
        assert_eq!(decision.api.as_deref(), Some("com.google.code.gson"));
        assert_eq!(decision.mention.as_deref(), Some("gson"));
    }
}

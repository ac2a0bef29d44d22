//! Hybrid snippet analysis.
//!
//! A code block is screened first (XML, JavaScript, data blobs), then each
//! logical line goes through the statement grammar; rejected lines fall back
//! to the island scanner. The result records per-line outcomes, aggregate
//! type/method usage, import resolution and variable bindings. A second
//! pass over all snippets of a thread infers variable types across blocks
//! so that `gson.toJson(..)` attributes `Gson` even when the declaration
//! lives in an earlier snippet.

pub mod classify;
pub mod grammar;
pub mod island;
pub mod lines;
pub mod names;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use self::grammar::LineArtifacts;
use self::lines::split_logical_lines;

/// Why a snippet was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidKind {
    Xml,
    JavaScript,
    NonCode,
    TooManyErrors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Valid,
    Invalid(InvalidKind),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Where a snippet sits inside its thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SnippetRef {
    pub thread_id: u64,
    pub post_id: u64,
    /// Position among the post's code blocks (0-based).
    pub snippet_index: usize,
    /// Position among all of the post's content blocks.
    pub block_index: usize,
    pub in_question: bool,
}

impl SnippetRef {
    pub fn id(&self) -> String {
        crate::corpus::snippet_id(self.thread_id, self.post_id, self.snippet_index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineStatus {
    GrammarOk,
    IslandRecovered,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineParseOutcome {
    pub line_index: usize,
    pub text: String,
    pub status: LineStatus,
    pub extracted: LineArtifacts,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParsedSnippet {
    pub snippet: SnippetRef,
    pub validity: Validity,
    pub lines: Vec<LineParseOutcome>,
    /// Logical lines that needed the island scanner or failed outright.
    pub error_line_count: usize,
    pub line_count: usize,
    pub types: BTreeSet<String>,
    pub fq_types: BTreeSet<String>,
    pub methods: BTreeSet<String>,
    /// Simple name -> fully qualified name, from import statements.
    pub imports: BTreeMap<String, String>,
    /// Variable declarations in source order.
    pub bindings: Vec<(String, String)>,
    pub declared_types: BTreeSet<String>,
    /// Method calls on variables, in source order.
    pub var_uses: Vec<(String, String)>,
}

impl ParsedSnippet {
    fn rejected(snippet: SnippetRef, kind: InvalidKind) -> Self {
        ParsedSnippet {
            snippet,
            validity: Validity::Invalid(kind),
            lines: Vec::new(),
            error_line_count: 0,
            line_count: 0,
            types: BTreeSet::new(),
            fq_types: BTreeSet::new(),
            methods: BTreeSet::new(),
            imports: BTreeMap::new(),
            bindings: Vec::new(),
            declared_types: BTreeSet::new(),
            var_uses: Vec::new(),
        }
    }

    fn clear_artifacts(&mut self) {
        self.types.clear();
        self.fq_types.clear();
        self.methods.clear();
        self.imports.clear();
        self.bindings.clear();
        self.declared_types.clear();
        self.var_uses.clear();
    }

    /// Reject the snippet when too large a share of its lines misparsed.
    /// The ratio must strictly exceed `max_ratio` to trip.
    pub fn apply_error_ratio(&mut self, max_ratio: f64) {
        if !self.validity.is_valid() || self.line_count == 0 {
            return;
        }
        let ratio = self.error_line_count as f64 / self.line_count as f64;
        if ratio > max_ratio {
            self.validity = Validity::Invalid(InvalidKind::TooManyErrors);
            self.clear_artifacts();
        }
    }
}

/// Run the full hybrid route over one code block.
pub fn parse_hybrid(code: &str, snippet: SnippetRef) -> ParsedSnippet {
    if classify::xml_like(code) {
        return ParsedSnippet::rejected(snippet, InvalidKind::Xml);
    }
    if classify::js_like(code) {
        return ParsedSnippet::rejected(snippet, InvalidKind::JavaScript);
    }
    if !classify::has_statement_like_line(code) {
        return ParsedSnippet::rejected(snippet, InvalidKind::NonCode);
    }

    let logical = split_logical_lines(code);
    let mut outcomes = Vec::with_capacity(logical.len());
    let mut any_contentful_parsed = false;
    let mut error_line_count = 0usize;

    for (line_index, line) in logical.iter().enumerate() {
        let contentful = line.text.chars().any(|c| c.is_ascii_alphanumeric());
        let (status, extracted) = match grammar::parse_line(line) {
            Some(art) => (LineStatus::GrammarOk, art),
            None => {
                let art = island::island_extract(&line.text);
                if art.recovered_any() {
                    (LineStatus::IslandRecovered, art)
                } else {
                    (LineStatus::Failed, art)
                }
            }
        };
        if status != LineStatus::GrammarOk {
            error_line_count += 1;
        }
        if contentful && status != LineStatus::Failed {
            any_contentful_parsed = true;
        }
        outcomes.push(LineParseOutcome {
            line_index,
            text: line.text.clone(),
            status,
            extracted,
        });
    }

    if !any_contentful_parsed {
        let mut rejected = ParsedSnippet::rejected(snippet, InvalidKind::NonCode);
        rejected.line_count = logical.len();
        rejected.error_line_count = error_line_count;
        rejected.lines = outcomes;
        return rejected;
    }

    let mut parsed = ParsedSnippet {
        snippet,
        validity: Validity::Valid,
        lines: Vec::new(),
        error_line_count,
        line_count: logical.len(),
        types: BTreeSet::new(),
        fq_types: BTreeSet::new(),
        methods: BTreeSet::new(),
        imports: BTreeMap::new(),
        bindings: Vec::new(),
        declared_types: BTreeSet::new(),
        var_uses: Vec::new(),
    };
    for outcome in &outcomes {
        if outcome.status == LineStatus::Failed {
            continue;
        }
        let art = &outcome.extracted;
        parsed.types.extend(art.types.iter().cloned());
        parsed.fq_types.extend(art.fq_types.iter().cloned());
        parsed.methods.extend(art.methods.iter().cloned());
        for (simple, fqn) in &art.imports {
            parsed
                .imports
                .entry(simple.clone())
                .or_insert_with(|| fqn.clone());
        }
        for binding in &art.bindings {
            if !parsed.bindings.contains(binding) {
                parsed.bindings.push(binding.clone());
            }
        }
        parsed.declared_types.extend(art.declared_types.iter().cloned());
        for var_use in &art.var_uses {
            if !parsed.var_uses.contains(var_use) {
                parsed.var_uses.push(var_use.clone());
            }
        }
    }
    parsed.lines = outcomes;
    parsed
}

// ---------------------------------------------------------------------------
// Thread-level type context
// ---------------------------------------------------------------------------

/// Variable bindings and user-declared types accumulated over every valid
/// snippet of one thread.
#[derive(Debug, Default, Clone)]
pub struct ThreadTypeContext {
    /// Variable -> bindings in thread order, each with its source post.
    bindings: BTreeMap<String, Vec<(u64, String)>>,
    /// Simple name -> fully qualified name imported anywhere in the thread.
    imports: BTreeMap<String, String>,
    /// Fully qualified type names used anywhere in the thread.
    fq_types: BTreeSet<String>,
    pub declared_user_types: BTreeSet<String>,
    pub diagnostics: Vec<String>,
}

impl ThreadTypeContext {
    /// Resolve a variable: bindings in the same post win, then the earliest
    /// binding anywhere in the thread.
    pub fn binding_for(&self, var: &str, post_id: u64) -> Option<&str> {
        let entries = self.bindings.get(var)?;
        entries
            .iter()
            .find(|(p, _)| *p == post_id)
            .or_else(|| entries.first())
            .map(|(_, ty)| ty.as_str())
    }

    /// All bindings for inspection, keyed by variable.
    pub fn variable_bindings(&self) -> &BTreeMap<String, Vec<(u64, String)>> {
        &self.bindings
    }

    /// Fully qualified name for a simple type, when the thread resolves it.
    pub fn resolve_fqn(&self, snippet: &ParsedSnippet, simple: &str) -> Option<String> {
        if let Some(fqn) = snippet.imports.get(simple) {
            return Some(fqn.clone());
        }
        let suffix = format!(".{simple}");
        if let Some(fqn) = snippet.fq_types.iter().find(|f| f.ends_with(&suffix)) {
            return Some(fqn.clone());
        }
        if let Some(fqn) = self.imports.get(simple) {
            return Some(fqn.clone());
        }
        self.fq_types.iter().find(|f| f.ends_with(&suffix)).cloned()
    }
}

/// Build the thread context from every snippet of a thread, in order.
pub fn infer_variable_types(snippets: &[ParsedSnippet]) -> ThreadTypeContext {
    let mut ctx = ThreadTypeContext::default();
    for parsed in snippets {
        ctx.declared_user_types
            .extend(parsed.declared_types.iter().cloned());
    }
    for parsed in snippets {
        let post_id = parsed.snippet.post_id;
        for (simple, fqn) in &parsed.imports {
            match ctx.imports.get(simple) {
                None => {
                    ctx.imports.insert(simple.clone(), fqn.clone());
                }
                Some(existing) if existing != fqn => {
                    ctx.diagnostics.push(format!(
                        "thread {}: type `{simple}` imported as {existing} and {fqn}",
                        parsed.snippet.thread_id
                    ));
                }
                Some(_) => {}
            }
        }
        ctx.fq_types.extend(parsed.fq_types.iter().cloned());
        for (var, ty) in &parsed.bindings {
            // A "variable" spelled like a declared user type is a type
            // reference misread as a binding; drop it.
            if ctx.declared_user_types.contains(var) {
                continue;
            }
            let entries = ctx.bindings.entry(var.clone()).or_default();
            let conflict = entries
                .iter()
                .any(|(p, t)| *p == post_id && t != ty);
            if conflict {
                ctx.diagnostics.push(format!(
                    "thread {}: variable `{var}` rebound to {ty} in post {post_id}",
                    parsed.snippet.thread_id
                ));
            }
            if !entries.iter().any(|(p, t)| *p == post_id && t == ty) {
                entries.push((post_id, ty.clone()));
            }
        }
    }
    ctx
}

// ---------------------------------------------------------------------------
// API element extraction
// ---------------------------------------------------------------------------

/// The type and method evidence a snippet offers for linking.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ApiElements {
    /// Simple type names with their resolved fully qualified names when the
    /// thread provides one. Sorted by simple name.
    pub types: Vec<(String, Option<String>)>,
    pub methods: BTreeSet<String>,
}

/// Compute the type set and method set used to score candidate APIs.
/// Types declared by the snippet author are excluded; variable method
/// receivers are resolved through the thread context.
pub fn extract_api_elements(parsed: &ParsedSnippet, ctx: &ThreadTypeContext) -> ApiElements {
    if !parsed.validity.is_valid() {
        return ApiElements::default();
    }
    let mut simple_types: BTreeSet<String> = BTreeSet::new();
    for ty in &parsed.types {
        simple_types.insert(ty.clone());
    }
    for (var, _method) in &parsed.var_uses {
        if let Some(ty) = ctx.binding_for(var, parsed.snippet.post_id) {
            simple_types.insert(ty.to_string());
        }
    }
    simple_types.retain(|ty| !ctx.declared_user_types.contains(ty));

    let types = simple_types
        .into_iter()
        .map(|ty| {
            let fqn = ctx.resolve_fqn(parsed, &ty);
            (ty, fqn)
        })
        .collect();
    ApiElements {
        types,
        methods: parsed.methods.clone(),
    }
}

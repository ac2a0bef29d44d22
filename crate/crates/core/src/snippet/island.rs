//! Regex island scanner.
//!
//! When the statement grammar rejects a line (merged statements, truncated
//! fragments, exotic syntax), this scanner makes a best-effort pass with a
//! handful of patterns: imports, class declarations, receiver calls, bare
//! calls, camel-case type words, dotted type chains and simple declarations.
//! A line that yields nothing here is counted as failed outright.

use once_cell::sync::Lazy;
use regex::Regex;

use super::grammar::LineArtifacts;
use super::names::{is_fq_type_like, is_keyword, is_type_like};

static IMPORT_RE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"^\s*import\s+(?:static\s+)?([A-Za-z_$][\w$]*(?:\.[A-Za-z_$*][\w$]*)+)").unwrap()
});
static CLASS_DECL_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"\b[Cc]lass\s+([A-Z][A-Za-z0-9_]*)").unwrap());
static RECV_CALL_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"([A-Za-z_$][\w$]*)\s*\.\s*([a-z_$][\w$]*)\s*\(").unwrap());
static BARE_CALL_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b([a-z_$][\w$]*)\s*\(").unwrap());
static DOTTED_RE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"\b([a-z][\w$]*(?:\.[A-Za-z_$][\w$]*)*\.[A-Z][A-Za-z0-9_]*)\b").unwrap()
});
static BINDING_RE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"\b([A-Z][\w$]*)(?:<[^<>]*>)?(?:\s*\[\s*\])*\s+([a-z_$][\w$]*)\s*[=;,):]").unwrap()
});
static WORD_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"[A-Za-z_$][\w$]*").unwrap());

/// Scan one raw line for extractable identifiers.
pub fn island_extract(text: &str) -> LineArtifacts {
    let mut out = LineArtifacts::default();

    if let Some(cap) = IMPORT_RE.captures(text) {
        let name = cap[1].to_string();
        if !name.contains('*') {
            if let Some(terminal) = name.rsplit('.').next() {
                if is_type_like(terminal) {
                    push_unique(&mut out.types, terminal);
                    if is_fq_type_like(&name) {
                        push_unique(&mut out.fq_types, &name);
                    }
                    out.imports.push((terminal.to_string(), name));
                }
            }
        }
    }

    for cap in CLASS_DECL_RE.captures_iter(text) {
        push_unique(&mut out.declared_types, &cap[1]);
    }

    for cap in RECV_CALL_RE.captures_iter(text) {
        let recv = &cap[1];
        let method = &cap[2];
        if is_keyword(method) {
            continue;
        }
        push_unique(&mut out.methods, method);
        if is_type_like(recv) {
            push_unique(&mut out.types, recv);
        } else if !is_keyword(recv) {
            let pair = (recv.to_string(), method.to_string());
            if !out.var_uses.contains(&pair) {
                out.var_uses.push(pair);
            }
        }
    }

    for cap in BARE_CALL_RE.captures_iter(text) {
        let name = cap.get(1).unwrap();
        if is_keyword(name.as_str()) {
            continue;
        }
        // `recv.method(` is already counted by the receiver pattern.
        if preceded_by_dot(text, name.start()) {
            continue;
        }
        push_unique(&mut out.methods, name.as_str());
    }

    for cap in DOTTED_RE.captures_iter(text) {
        let chain = &cap[1];
        if is_fq_type_like(chain) {
            push_unique(&mut out.fq_types, chain);
            if let Some(terminal) = chain.rsplit('.').next() {
                push_unique(&mut out.types, terminal);
            }
        }
    }

    for cap in BINDING_RE.captures_iter(text) {
        let ty = &cap[1];
        let var = &cap[2];
        if is_type_like(ty) && !is_keyword(var) {
            let pair = (var.to_string(), ty.to_string());
            if !out.bindings.contains(&pair) {
                out.bindings.push(pair);
            }
            push_unique(&mut out.types, ty);
        }
    }

    // The loose camel-word sweep needs code punctuation on the line,
    // otherwise prose sentences would sprout phantom types.
    if text.contains(|c| matches!(c, ';' | '=' | '(' | ')' | '{' | '}')) {
        for m in WORD_RE.find_iter(text) {
            let word = m.as_str();
            if is_keyword(word) || !is_type_like(word) {
                continue;
            }
            if followed_by_paren(text, m.end()) && !preceded_by_new(text, m.start()) {
                continue; // capitalized bare call, not a type use
            }
            push_unique(&mut out.types, word);
        }
    }

    for m in WORD_RE.find_iter(text) {
        out.idents.push(m.as_str().to_string());
    }

    out
}

fn push_unique(list: &mut Vec<String>, value: &str) {
    if !list.iter().any(|v| v == value) {
        list.push(value.to_string());
    }
}

fn followed_by_paren(text: &str, end: usize) -> bool {
    text[end..].trim_start().starts_with('(')
}

fn preceded_by_dot(text: &str, start: usize) -> bool {
    text[..start].trim_end().ends_with('.')
}

fn preceded_by_new(text: &str, start: usize) -> bool {
    let before = text[..start].trim_end();
    before.ends_with("new")
        && before[..before.len() - 3]
            .chars()
            .next_back()
            .map_or(true, |c| !c.is_ascii_alphanumeric() && c != '_')
}

//! Pre-parse screening of code blocks.
//!
//! Forum code fences hold more than Java: XML configs, JavaScript,
//! JSON payloads, stack traces, prose. The cheap screens here throw out
//! the clearly-foreign material before the statement grammar runs.

use once_cell::sync::Lazy;
use regex::Regex;

static JS_VAR_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"\bvar\s+[A-Za-z_$][\w$]*\s*=").unwrap());

/// At least half of the non-empty lines are tag-structured.
pub fn xml_like(code: &str) -> bool {
    let mut total = 0usize;
    let mut taggy = 0usize;
    for line in code.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        total += 1;
        if line.starts_with('<') && line.contains('>') {
            taggy += 1;
        }
    }
    total > 0 && taggy * 2 >= total
}

/// Syntax cues that occur in JavaScript but not in Java.
pub fn js_like(code: &str) -> bool {
    code.contains("function(")
        || code.contains("function (")
        || code.contains("$.")
        || code.contains("$(")
        || code.contains("=>")
        || JS_VAR_RE.is_match(code)
}

/// Some line must look like a statement: it needs an ASCII letter plus a
/// terminator or operator shape. Filters out data blobs and bare output.
pub fn has_statement_like_line(code: &str) -> bool {
    code.lines().any(|line| {
        let line = line.trim();
        line.chars().any(|c| c.is_ascii_alphabetic())
            && (line.ends_with(';')
                || line.ends_with('{')
                || line.ends_with('}')
                || line.contains('=')
                || line.contains('('))
    })
}

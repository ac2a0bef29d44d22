//! Identifier classification shared by the grammar and the island scanner.

/// All-caps tokens accepted as type names despite failing the camel-case
/// rule.
pub const ALL_CAPS_TYPES: &[&str] = &["URL", "URI", "UUID", "IO", "JSON", "XML", "SQL", "HTTP"];

pub const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

pub const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
];

pub fn is_keyword(token: &str) -> bool {
    JAVA_KEYWORDS.contains(&token)
}

pub fn is_primitive(token: &str) -> bool {
    PRIMITIVES.contains(&token)
}

/// Camel-case type token: uppercase start, alphanumeric, at least one
/// lowercase letter — or a whitelisted all-caps name such as `URL`.
pub fn is_type_like(token: &str) -> bool {
    if ALL_CAPS_TYPES.contains(&token) {
        return true;
    }
    let mut chars = token.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => {}
        _ => return false,
    }
    token.chars().all(|c| c.is_ascii_alphanumeric())
        && token.chars().any(|c| c.is_ascii_lowercase())
}

/// Fully qualified type: dotted, package-style lowercase first segment,
/// capitalized terminal segment ("com.restfb.json.JsonObject").
pub fn is_fq_type_like(token: &str) -> bool {
    let segments: Vec<&str> = token.split('.').collect();
    if segments.len() < 2 || segments.iter().any(|s| s.is_empty()) {
        return false;
    }
    let first_ok = segments[0]
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_lowercase());
    let last = segments[segments.len() - 1];
    first_ok && is_type_like(last)
}

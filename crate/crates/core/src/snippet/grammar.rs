//! Statement-level Java grammar subset.
//!
//! Each logical line is parsed independently against a small grammar
//! covering the statement forms extraction cares about: imports, package
//! declarations, class/interface headers, method and constructor headers,
//! variable declarations, assignments, method invocations, `new`
//! expressions, generics, `X.class` literals, control-flow heads and
//! method-chain continuations. Parsing a line yields the identifiers it
//! uses, classified into types, methods, imports, variable bindings and
//! variable method uses; any malformed line is rejected so the island
//! scanner can recover from it instead.

use super::lines::{LogicalLine, Terminator};
use super::names::{is_fq_type_like, is_keyword, is_primitive, is_type_like};

/// Everything a parsed line contributes to extraction.
#[derive(Debug, Default, Clone, PartialEq, serde::Serialize)]
pub struct LineArtifacts {
    /// Every identifier consumed, in source order.
    pub idents: Vec<String>,
    /// Simple type names used (camel-case rule applied).
    pub types: Vec<String>,
    /// Fully qualified type names used.
    pub fq_types: Vec<String>,
    /// Method names invoked.
    pub methods: Vec<String>,
    /// Imported types: (simple name, fully qualified name).
    pub imports: Vec<(String, String)>,
    /// Variable declarations: (variable, declared type).
    pub bindings: Vec<(String, String)>,
    /// Types declared by the snippet author (class headers, constructors).
    pub declared_types: Vec<String>,
    /// Method calls on variables: (receiver variable, method).
    pub var_uses: Vec<(String, String)>,
}

impl LineArtifacts {
    /// True when the line contributed anything beyond raw identifier text.
    pub fn recovered_any(&self) -> bool {
        !(self.types.is_empty()
            && self.fq_types.is_empty()
            && self.methods.is_empty()
            && self.imports.is_empty()
            && self.bindings.is_empty()
            && self.declared_types.is_empty()
            && self.var_uses.is_empty())
    }
}

/// Parse one logical line. `None` means the grammar rejected it.
pub fn parse_line(line: &LogicalLine) -> Option<LineArtifacts> {
    let toks = tokenize(&line.text)?;
    if !toks.iter().any(|t| t.is_content()) {
        return Some(LineArtifacts::default()); // punctuation-only line
    }
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        terminator: line.terminator,
        out: LineArtifacts::default(),
    };
    match parser.parse_statement_top() {
        Ok(()) if parser.pos == parser.toks.len() => Some(parser.out),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num,
    Str,
    Chr,
    Sym(&'static str),
}

impl Tok {
    fn is_content(&self) -> bool {
        matches!(self, Tok::Ident(_) | Tok::Num | Tok::Str | Tok::Chr)
    }
}

/// Multi-character symbols first so longest-munch wins.
const SYMBOLS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", ";", ",", ".", "(", ")",
    "{", "}", "[", "]", "<", ">", "=", "+", "-", "*", "/", "%", "!", "&", "|", "^", "~", "?",
    ":", "@",
];

fn tokenize(text: &str) -> Option<Vec<Tok>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric()
                    || matches!(bytes[i] as char, '_' | '$'))
            {
                i += 1;
            }
            toks.push(Tok::Ident(text[start..i].to_string()));
        } else if c.is_ascii_digit() {
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] as char == '_')
            {
                i += 1;
            }
            // Keep "2.2.4"-style dotted numerals as one token.
            while i + 1 < bytes.len()
                && bytes[i] as char == '.'
                && (bytes[i + 1] as char).is_ascii_digit()
            {
                i += 1;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] as char == '_')
                {
                    i += 1;
                }
            }
            toks.push(Tok::Num);
        } else if c == '"' || c == '\'' {
            let quote = c;
            i += 1;
            let mut closed = false;
            while i < bytes.len() {
                let b = bytes[i] as char;
                i += 1;
                if b == '\\' {
                    i += 1;
                } else if b == quote {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return None;
            }
            toks.push(if quote == '"' { Tok::Str } else { Tok::Chr });
        } else {
            let rest = &text[i..];
            let sym = SYMBOLS.iter().find(|s| rest.starts_with(**s))?;
            toks.push(Tok::Sym(sym));
            i += sym.len();
        }
    }
    Some(toks)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "native", "transient",
    "volatile", "strictfp", "default",
];

type PResult<T> = Result<T, ()>;

#[derive(Clone, Copy)]
struct Mark {
    pos: usize,
    idents: usize,
    types: usize,
    fq_types: usize,
    methods: usize,
    imports: usize,
    bindings: usize,
    declared: usize,
    var_uses: usize,
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    terminator: Terminator,
    out: LineArtifacts,
}

struct TypeInfo {
    main_simple: String,
}

impl<'a> Parser<'a> {
    fn mark(&self) -> Mark {
        Mark {
            pos: self.pos,
            idents: self.out.idents.len(),
            types: self.out.types.len(),
            fq_types: self.out.fq_types.len(),
            methods: self.out.methods.len(),
            imports: self.out.imports.len(),
            bindings: self.out.bindings.len(),
            declared: self.out.declared_types.len(),
            var_uses: self.out.var_uses.len(),
        }
    }

    fn restore(&mut self, m: Mark) {
        self.pos = m.pos;
        self.out.idents.truncate(m.idents);
        self.out.types.truncate(m.types);
        self.out.fq_types.truncate(m.fq_types);
        self.out.methods.truncate(m.methods);
        self.out.imports.truncate(m.imports);
        self.out.bindings.truncate(m.bindings);
        self.out.declared_types.truncate(m.declared);
        self.out.var_uses.truncate(m.var_uses);
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(())
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(id)) if id == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Consume any identifier (keywords included; callers filter).
    fn eat_ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(id)) => {
                let id = id.clone();
                self.out.idents.push(id.clone());
                self.bump();
                Ok(id)
            }
            _ => Err(()),
        }
    }

    /// A non-keyword identifier (names of variables, methods, types).
    fn eat_name(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(id)) if !is_keyword(id) => self.eat_ident(),
            _ => Err(()),
        }
    }

    /// Line end: nothing left, or exactly one of the allowed closers left.
    fn expect_end(&mut self, allow: &[&str]) -> PResult<()> {
        if self.at_end() {
            return Ok(());
        }
        if self.pos + 1 == self.toks.len() {
            if let Some(Tok::Sym(s)) = self.peek() {
                if allow.contains(s) {
                    self.bump();
                    return Ok(());
                }
            }
        }
        Err(())
    }

    /// True when the only remaining token is the line's opening brace.
    fn at_trailing_open_brace(&self) -> bool {
        self.terminator == Terminator::OpenBrace
            && self.pos + 1 == self.toks.len()
            && self.at_sym("{")
    }

    // -- artifact recording -------------------------------------------------

    fn record_type_name(&mut self, dotted: &str) {
        let segments: Vec<&str> = dotted.split('.').collect();
        for seg in &segments {
            if is_type_like(seg) && !self.out.types.iter().any(|t| t == seg) {
                self.out.types.push(seg.to_string());
            }
        }
        if is_fq_type_like(dotted) && !self.out.fq_types.iter().any(|t| t == dotted) {
            self.out.fq_types.push(dotted.to_string());
        }
    }

    fn record_method(&mut self, name: &str) {
        if !is_keyword(name) && !self.out.methods.iter().any(|m| m == name) {
            self.out.methods.push(name.to_string());
        }
    }

    // -- statement dispatch -------------------------------------------------

    fn parse_statement_top(&mut self) -> PResult<()> {
        self.strip_annotations()?;
        if self.at_end() {
            return Ok(());
        }
        if self.at_kw("import") {
            return self.parse_import();
        }
        if self.at_kw("package") {
            return self.parse_package();
        }
        if let Some(()) = self.try_class_header() {
            return Ok(());
        }
        if self.at_kw("if")
            || self.at_kw("while")
            || self.at_kw("switch")
            || self.at_kw("catch")
            || (self.at_kw("synchronized") && matches!(self.peek_at(1), Some(Tok::Sym("("))))
        {
            return self.parse_control();
        }
        if self.at_kw("for") {
            return self.parse_for();
        }
        if self.at_kw("try") {
            return self.parse_try();
        }
        if self.at_kw("do") || self.at_kw("finally") {
            self.bump();
            return self.expect_end(&["{"]);
        }
        if self.at_kw("else") {
            self.bump();
            if self.at_kw("if") {
                return self.parse_control();
            }
            if self.at_end() || self.at_sym("{") {
                return self.expect_end(&["{"]);
            }
            return self.parse_statement_top();
        }
        if self.at_kw("static") && matches!(self.peek_at(1), Some(Tok::Sym("{"))) {
            self.bump();
            return self.expect_end(&["{"]);
        }
        if self.at_kw("return") {
            self.bump();
            if !self.at_end() && !self.at_sym(";") {
                self.parse_expr()?;
            }
            return self.expect_end(&[";"]);
        }
        if self.at_kw("throw") {
            self.bump();
            self.parse_expr()?;
            return self.expect_end(&[";"]);
        }
        if self.at_kw("break") || self.at_kw("continue") {
            self.bump();
            if matches!(self.peek(), Some(Tok::Ident(id)) if !is_keyword(id)) {
                self.eat_ident()?;
            }
            return self.expect_end(&[";"]);
        }
        if self.at_kw("assert") {
            self.bump();
            self.parse_expr()?;
            if self.eat_sym(":") {
                self.parse_expr()?;
            }
            return self.expect_end(&[";"]);
        }
        if self.at_kw("case") {
            self.bump();
            self.parse_expr()?;
            self.expect_sym(":")?;
            if self.at_end() {
                return Ok(());
            }
            return self.parse_statement_top();
        }
        if self.at_kw("default") && matches!(self.peek_at(1), Some(Tok::Sym(":"))) {
            self.bump();
            self.bump();
            if self.at_end() {
                return Ok(());
            }
            return self.parse_statement_top();
        }
        if self.at_sym(".") {
            return self.parse_chain_continuation();
        }

        // Headerless forms, most specific first.
        let m = self.mark();
        if self.try_method_header().is_ok() {
            return Ok(());
        }
        self.restore(m);
        if self.try_var_decl().is_ok() {
            return Ok(());
        }
        self.restore(m);
        if self.try_assignment().is_ok() {
            return Ok(());
        }
        self.restore(m);
        self.parse_expr_statement()
    }

    fn strip_annotations(&mut self) -> PResult<()> {
        while self.at_sym("@") {
            self.bump();
            self.parse_qualified_name()?;
            if self.at_sym("(") {
                self.skip_balanced_parens()?;
            }
        }
        Ok(())
    }

    fn skip_balanced_parens(&mut self) -> PResult<()> {
        self.expect_sym("(")?;
        let mut depth = 1usize;
        while depth > 0 {
            match self.peek() {
                None => return Err(()),
                Some(Tok::Sym("(")) => depth += 1,
                Some(Tok::Sym(")")) => depth -= 1,
                Some(Tok::Ident(id)) => {
                    let id = id.clone();
                    self.out.idents.push(id);
                }
                _ => {}
            }
            self.bump();
        }
        Ok(())
    }

    // -- imports and packages ----------------------------------------------

    fn parse_import(&mut self) -> PResult<()> {
        self.bump();
        let is_static = self.eat_kw("static");
        let name = self.parse_qualified_name()?;
        let wildcard = self.at_sym(".")
            && matches!(self.peek_at(1), Some(Tok::Sym("*")));
        if wildcard {
            self.bump();
            self.bump();
        }
        self.expect_end(&[";"])?;
        if wildcard {
            return Ok(()); // wildcard imports resolve nothing
        }
        let segments: Vec<&str> = name.split('.').collect();
        let terminal = *segments.last().ok_or(())?;
        if is_type_like(terminal) {
            self.record_type_name(&name);
            self.out.imports.push((terminal.to_string(), name.clone()));
        } else if is_static && segments.len() >= 2 && is_type_like(segments[segments.len() - 2]) {
            let ty = segments[segments.len() - 2].to_string();
            let fqn = segments[..segments.len() - 1].join(".");
            self.record_type_name(&fqn);
            self.out.imports.push((ty, fqn));
        }
        Ok(())
    }

    fn parse_package(&mut self) -> PResult<()> {
        self.bump();
        self.parse_qualified_name()?;
        self.expect_end(&[";"])
    }

    /// Dotted identifier chain. Stops before `.class` and `.*`.
    fn parse_qualified_name(&mut self) -> PResult<String> {
        let mut name = self.eat_name()?;
        while self.at_sym(".") {
            match self.peek_at(1) {
                Some(Tok::Ident(id)) if id != "class" && !is_keyword(id) => {
                    self.bump();
                    name.push('.');
                    name.push_str(&self.eat_ident()?);
                }
                _ => break,
            }
        }
        Ok(name)
    }

    // -- class headers ------------------------------------------------------

    fn try_class_header(&mut self) -> Option<()> {
        let m = self.mark();
        self.consume_modifiers();
        let kind = ["class", "interface", "enum"]
            .iter()
            .find(|k| self.at_kw(k))
            .copied();
        let Some(_kind) = kind else {
            self.restore(m);
            return None;
        };
        self.bump();
        match self.parse_class_header_rest() {
            Ok(()) => Some(()),
            Err(()) => {
                self.restore(m);
                None
            }
        }
    }

    fn parse_class_header_rest(&mut self) -> PResult<()> {
        let name = self.eat_name()?;
        self.out.declared_types.push(name);
        if self.at_sym("<") {
            self.parse_generics()?;
        }
        if self.eat_kw("extends") {
            self.parse_type()?;
            while self.eat_sym(",") {
                self.parse_type()?;
            }
        }
        if self.eat_kw("implements") {
            self.parse_type()?;
            while self.eat_sym(",") {
                self.parse_type()?;
            }
        }
        self.expect_end(&["{", ";"])
    }

    fn consume_modifiers(&mut self) {
        loop {
            let is_modifier = match self.peek() {
                Some(Tok::Ident(id)) => {
                    MODIFIERS.contains(&id.as_str())
                        && !(id == "synchronized"
                            && matches!(self.peek_at(1), Some(Tok::Sym("("))))
                        && !(id == "default" && matches!(self.peek_at(1), Some(Tok::Sym(":"))))
                }
                _ => false,
            };
            if is_modifier {
                self.bump();
            } else {
                break;
            }
        }
    }

    // -- types and generics -------------------------------------------------

    fn parse_type(&mut self) -> PResult<TypeInfo> {
        if matches!(self.peek(), Some(Tok::Ident(id)) if is_primitive(id)) {
            let name = self.eat_ident()?;
            self.consume_array_suffix();
            return Ok(TypeInfo { main_simple: name });
        }
        let name = self.parse_qualified_name()?;
        self.record_type_name(&name);
        if self.at_sym("<") {
            self.parse_generics()?;
        }
        self.consume_array_suffix();
        let main_simple = name.rsplit('.').next().unwrap_or(&name).to_string();
        Ok(TypeInfo { main_simple })
    }

    fn consume_array_suffix(&mut self) {
        while self.at_sym("[") && matches!(self.peek_at(1), Some(Tok::Sym("]"))) {
            self.bump();
            self.bump();
        }
    }

    /// Balanced generic argument list. `>>` and `>>>` close several levels
    /// at once. Records type-like identifiers found inside.
    fn parse_generics(&mut self) -> PResult<()> {
        self.expect_sym("<")?;
        let mut depth: i32 = 1;
        let mut chain = String::new();
        while depth > 0 {
            let tok = self.peek().ok_or(())?.clone();
            match tok {
                Tok::Sym("<") => depth += 1,
                Tok::Sym(">") => depth -= 1,
                Tok::Sym(">>") => depth -= 2,
                Tok::Sym(">>>") => depth -= 3,
                Tok::Sym(".") => {
                    if !chain.is_empty() {
                        chain.push('.');
                    }
                }
                Tok::Ident(id) => {
                    if is_keyword(&id) && id != "extends" && id != "super" {
                        if !is_primitive(&id) {
                            return Err(());
                        }
                    }
                    self.out.idents.push(id.clone());
                    if id == "extends" || id == "super" || is_primitive(&id) {
                        self.flush_generic_chain(&mut chain);
                    } else if chain.ends_with('.') || chain.is_empty() {
                        chain.push_str(&id);
                    } else {
                        self.flush_generic_chain(&mut chain);
                        chain.push_str(&id);
                    }
                    self.bump();
                    continue;
                }
                Tok::Sym(",") | Tok::Sym("?") | Tok::Sym("&") | Tok::Sym("[") | Tok::Sym("]") => {
                    self.flush_generic_chain(&mut chain);
                }
                _ => return Err(()),
            }
            if matches!(tok, Tok::Sym("<") | Tok::Sym(">") | Tok::Sym(">>") | Tok::Sym(">>>")) {
                self.flush_generic_chain(&mut chain);
            }
            if depth < 0 {
                return Err(());
            }
            self.bump();
        }
        self.flush_generic_chain(&mut chain);
        Ok(())
    }

    fn flush_generic_chain(&mut self, chain: &mut String) {
        if !chain.is_empty() {
            let owned = chain.clone();
            self.record_type_name(&owned);
            chain.clear();
        }
    }

    // -- headers, declarations, assignments ----------------------------------

    fn try_method_header(&mut self) -> PResult<()> {
        self.consume_modifiers();
        if self.at_sym("<") {
            self.parse_generics()?;
        }
        // Constructor header: capitalized name directly before the
        // parameter list, line must open a block.
        if let (Some(Tok::Ident(id)), Some(Tok::Sym("("))) = (self.peek(), self.peek_at(1)) {
            if is_type_like(id) && self.terminator == Terminator::OpenBrace {
                let name = self.eat_name()?;
                self.out.declared_types.push(name);
                self.parse_parameter_list()?;
                self.parse_throws_clause()?;
                return self.expect_end(&["{"]);
            }
        }
        self.parse_type()?;
        let name = self.eat_name()?;
        if !self.at_sym("(") {
            return Err(());
        }
        self.out.idents.push(name);
        self.parse_parameter_list()?;
        self.parse_throws_clause()?;
        self.expect_end(&["{", ";"])
    }

    fn parse_parameter_list(&mut self) -> PResult<()> {
        self.expect_sym("(")?;
        if self.eat_sym(")") {
            return Ok(());
        }
        loop {
            self.eat_kw("final");
            let ty = self.parse_type()?;
            self.eat_sym("...");
            let name = self.eat_name()?;
            self.consume_array_suffix();
            if is_type_like(&ty.main_simple) {
                self.out.bindings.push((name, ty.main_simple));
            }
            if self.eat_sym(",") {
                continue;
            }
            return self.expect_sym(")");
        }
    }

    fn parse_throws_clause(&mut self) -> PResult<()> {
        if self.eat_kw("throws") {
            self.parse_type()?;
            while self.eat_sym(",") {
                self.parse_type()?;
            }
        }
        Ok(())
    }

    fn try_var_decl(&mut self) -> PResult<()> {
        self.consume_modifiers();
        self.parse_var_decl_core()?;
        self.expect_end(&[";", "{"])
    }

    /// `Type name [= expr] (, name [= expr])*` without the terminator.
    fn parse_var_decl_core(&mut self) -> PResult<()> {
        let ty = self.parse_type()?;
        loop {
            let name = self.eat_name()?;
            self.consume_array_suffix();
            if is_type_like(&ty.main_simple) {
                self.out.bindings.push((name, ty.main_simple.clone()));
            }
            if self.eat_sym("=") {
                self.parse_expr()?;
            }
            if !self.eat_sym(",") {
                return Ok(());
            }
        }
    }

    fn try_assignment(&mut self) -> PResult<()> {
        self.parse_qualified_name()?;
        loop {
            if self.at_sym("[") {
                self.bump();
                self.parse_expr()?;
                self.expect_sym("]")?;
            } else if self.at_sym(".")
                && matches!(self.peek_at(1), Some(Tok::Ident(id)) if !is_keyword(id))
            {
                self.bump();
                self.eat_ident()?;
            } else {
                break;
            }
        }
        let assign_ops = ["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];
        let op = assign_ops.iter().find(|op| self.at_sym(op)).ok_or(())?;
        self.expect_sym(op)?;
        self.parse_expr()?;
        self.expect_end(&[";"])
    }

    fn parse_expr_statement(&mut self) -> PResult<()> {
        self.parse_expr()?;
        while self.eat_sym(",") {
            self.parse_expr()?;
        }
        if self.at_trailing_open_brace() {
            self.bump();
            return Ok(());
        }
        self.expect_end(&[";", "{"])
    }

    /// A line starting with `.method(...)`: the continuation of a chain
    /// that was split off by an anonymous-class or initializer brace.
    fn parse_chain_continuation(&mut self) -> PResult<()> {
        while self.at_sym(".") {
            self.bump();
            let name = self.eat_name()?;
            if self.at_sym("(") {
                self.record_method(&name);
                self.parse_call_args()?;
            }
        }
        self.expect_end(&[";", "{"])
    }

    // -- control flow ---------------------------------------------------------

    fn parse_control(&mut self) -> PResult<()> {
        let keyword = match self.peek() {
            Some(Tok::Ident(id)) => id.clone(),
            _ => return Err(()),
        };
        self.bump();
        self.expect_sym("(")?;
        if keyword == "catch" {
            self.eat_kw("final");
            self.parse_type()?;
            while self.eat_sym("|") {
                self.parse_type()?;
            }
            let name = self.eat_name()?;
            self.out.idents.push(name);
            self.expect_sym(")")?;
        } else {
            self.parse_expr()?;
            self.expect_sym(")")?;
        }
        self.finish_control_tail()
    }

    fn parse_for(&mut self) -> PResult<()> {
        self.bump();
        self.expect_sym("(")?;
        let m = self.mark();
        // Enhanced for: `for (Type name : expr)`.
        let enhanced = (|| -> PResult<()> {
            self.eat_kw("final");
            let ty = self.parse_type()?;
            let name = self.eat_name()?;
            if is_type_like(&ty.main_simple) {
                self.out.bindings.push((name, ty.main_simple));
            }
            self.expect_sym(":")?;
            self.parse_expr()?;
            self.expect_sym(")")
        })();
        if enhanced.is_err() {
            self.restore(m);
            // Classic for: `for (init; cond; update)`.
            if !self.at_sym(";") {
                let m2 = self.mark();
                if self.parse_var_decl_core().is_err() {
                    self.restore(m2);
                    self.parse_expr_list()?;
                }
            }
            self.expect_sym(";")?;
            if !self.at_sym(";") {
                self.parse_expr()?;
            }
            self.expect_sym(";")?;
            if !self.at_sym(")") {
                self.parse_expr_list()?;
            }
            self.expect_sym(")")?;
        }
        self.finish_control_tail()
    }

    fn parse_try(&mut self) -> PResult<()> {
        self.bump();
        if self.at_sym("(") {
            self.bump();
            self.parse_var_decl_core()?;
            while self.eat_sym(";") {
                if self.at_sym(")") {
                    break;
                }
                self.parse_var_decl_core()?;
            }
            self.expect_sym(")")?;
        }
        self.expect_end(&["{"])
    }

    fn finish_control_tail(&mut self) -> PResult<()> {
        if self.at_end() || self.at_sym("{") {
            return self.expect_end(&["{"]);
        }
        self.parse_statement_top()
    }

    fn parse_expr_list(&mut self) -> PResult<()> {
        self.parse_expr()?;
        while self.eat_sym(",") {
            self.parse_expr()?;
        }
        Ok(())
    }

    // -- expressions ----------------------------------------------------------

    fn parse_expr(&mut self) -> PResult<()> {
        self.parse_ternary()?;
        if self.at_sym("->") {
            self.bump();
            return self.parse_lambda_body();
        }
        let assign_ops = ["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="];
        if assign_ops.iter().any(|op| self.at_sym(op)) {
            self.bump();
            return self.parse_expr();
        }
        Ok(())
    }

    fn parse_lambda_body(&mut self) -> PResult<()> {
        if self.at_trailing_open_brace() {
            self.bump();
            return Ok(());
        }
        self.parse_expr()
    }

    fn parse_ternary(&mut self) -> PResult<()> {
        self.parse_binary()?;
        if self.eat_sym("?") {
            self.parse_expr()?;
            self.expect_sym(":")?;
            self.parse_expr()?;
        }
        Ok(())
    }

    fn parse_binary(&mut self) -> PResult<()> {
        self.parse_unary()?;
        loop {
            let binary_ops = [
                "==", "!=", "<=", ">=", "&&", "||", "+", "-", "*", "/", "%", "&", "|", "^",
                "<<", ">>", ">>>", "<", ">",
            ];
            if binary_ops.iter().any(|op| self.at_sym(op)) {
                self.bump();
                self.parse_unary()?;
            } else if self.at_kw("instanceof") {
                self.bump();
                self.parse_type()?;
            } else {
                return Ok(());
            }
        }
    }

    fn parse_unary(&mut self) -> PResult<()> {
        while self.at_sym("!")
            || self.at_sym("~")
            || self.at_sym("+")
            || self.at_sym("-")
            || self.at_sym("++")
            || self.at_sym("--")
        {
            self.bump();
        }
        // Cast attempt: `(Type) operand`.
        if self.at_sym("(") {
            let m = self.mark();
            self.bump();
            let cast_ok = self.parse_type().is_ok() && self.eat_sym(")") && self.at_operand_start();
            if cast_ok {
                return self.parse_unary();
            }
            self.restore(m);
        }
        self.parse_postfix()
    }

    fn at_operand_start(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(id)) => {
                !is_keyword(id)
                    || matches!(id.as_str(), "new" | "this" | "super" | "null" | "true" | "false")
            }
            Some(Tok::Num) | Some(Tok::Str) | Some(Tok::Chr) => true,
            Some(Tok::Sym("(")) | Some(Tok::Sym("!")) | Some(Tok::Sym("~")) => true,
            _ => false,
        }
    }

    fn parse_postfix(&mut self) -> PResult<()> {
        let mut chain = self.parse_primary()?;
        loop {
            if self.at_sym(".") {
                match self.peek_at(1) {
                    Some(Tok::Ident(id)) if id == "class" => {
                        self.bump();
                        self.bump();
                        if let Some(chain) = chain.take() {
                            self.record_type_name(&chain);
                        }
                    }
                    Some(Tok::Ident(id)) if !is_keyword(id) => {
                        let id = id.clone();
                        self.bump();
                        self.eat_ident()?;
                        if self.at_sym("(") {
                            self.record_call(chain.as_deref(), &id);
                            self.parse_call_args()?;
                            chain = None;
                        } else {
                            chain = chain.map(|c| format!("{c}.{id}"));
                        }
                    }
                    _ => return Err(()),
                }
            } else if self.at_sym("(") {
                // Bare call on a plain name: `foo(args)`.
                if let Some(c) = chain.take() {
                    if !c.contains('.') && !is_type_like(&c) {
                        self.record_method(&c);
                    }
                }
                self.parse_call_args()?;
            } else if self.at_sym("[") {
                self.bump();
                self.parse_expr()?;
                self.expect_sym("]")?;
                chain = None;
            } else if self.at_sym("++") || self.at_sym("--") {
                self.bump();
            } else if self.at_sym("::") {
                self.bump();
                if self.eat_kw("new") {
                    // constructor reference
                } else {
                    let name = self.eat_name()?;
                    self.record_method(&name);
                }
                chain = None;
            } else {
                return Ok(());
            }
        }
    }

    /// Receiver semantics for `recv.method(...)`: a camel-case receiver is a
    /// static type access, a lowercase one is a variable use.
    fn record_call(&mut self, chain: Option<&str>, method: &str) {
        self.record_method(method);
        if let Some(chain) = chain {
            let recv = chain.rsplit('.').next().unwrap_or(chain);
            if is_type_like(recv) {
                self.record_type_name(chain);
            } else if !is_keyword(recv) {
                self.out
                    .var_uses
                    .push((recv.to_string(), method.to_string()));
            }
        }
    }

    fn parse_call_args(&mut self) -> PResult<()> {
        self.expect_sym("(")?;
        if self.eat_sym(")") {
            return Ok(());
        }
        loop {
            self.parse_expr()?;
            if self.eat_sym(",") {
                continue;
            }
            if self.at_trailing_open_brace() {
                self.bump();
                return Ok(()); // anonymous-class body opens here
            }
            return self.expect_sym(")");
        }
    }

    fn parse_primary(&mut self) -> PResult<Option<String>> {
        match self.peek().cloned() {
            Some(Tok::Num) | Some(Tok::Str) | Some(Tok::Chr) => {
                self.bump();
                Ok(None)
            }
            Some(Tok::Sym("(")) => {
                self.bump();
                self.parse_expr()?;
                // Parenthesized lists cover lambda parameter heads.
                while self.eat_sym(",") {
                    self.parse_expr()?;
                }
                self.expect_sym(")")?;
                Ok(None)
            }
            Some(Tok::Ident(id)) if id == "new" => {
                self.bump();
                let ty = self.parse_type()?;
                let _ = ty;
                if self.at_sym("(") {
                    self.parse_call_args()?;
                } else if self.at_sym("[") {
                    while self.at_sym("[") {
                        self.bump();
                        if !self.at_sym("]") {
                            self.parse_expr()?;
                        }
                        self.expect_sym("]")?;
                    }
                } else if !self.at_trailing_open_brace() {
                    return Err(());
                }
                Ok(None)
            }
            Some(Tok::Ident(id)) if matches!(id.as_str(), "null" | "true" | "false") => {
                self.bump();
                Ok(None)
            }
            Some(Tok::Ident(id)) if id == "this" || id == "super" => {
                self.bump();
                if self.at_sym("(") {
                    self.parse_call_args()?;
                }
                Ok(None)
            }
            Some(Tok::Ident(id)) if is_primitive(&id) => {
                self.bump();
                Ok(Some(id))
            }
            Some(Tok::Ident(id)) if !is_keyword(&id) => {
                self.eat_ident()?;
                Ok(Some(id))
            }
            _ => Err(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snippet::lines::split_logical_lines;

    fn parse_ok(code: &str) -> LineArtifacts {
        let lines = split_logical_lines(code);
        assert_eq!(lines.len(), 1, "expected one logical line from {code:?}");
        parse_line(&lines[0]).unwrap_or_else(|| panic!("grammar rejected {code:?}"))
    }

    fn parse_fails(code: &str) {
        let lines = split_logical_lines(code);
        assert_eq!(lines.len(), 1, "expected one logical line from {code:?}");
        assert!(parse_line(&lines[0]).is_none(), "grammar accepted {code:?}");
    }

    #[test]
    fn declaration_with_instantiation() {
        let a = parse_ok("Gson gson = new Gson();");
        assert_eq!(a.types, vec!["Gson"]);
        assert_eq!(a.bindings, vec![("gson".to_string(), "Gson".to_string())]);
        assert!(a.methods.is_empty());
    }

    #[test]
    fn chained_instantiation_and_call() {
        let a = parse_ok("String s = new Gson().toJson(obj);");
        assert!(a.types.contains(&"Gson".to_string()));
        assert!(a.types.contains(&"String".to_string()));
        assert_eq!(a.methods, vec!["toJson"]);
    }

    #[test]
    fn class_literal_argument() {
        let a = parse_ok("Data d = gson.fromJson(json, Data.class);");
        assert!(a.types.contains(&"Data".to_string()));
        assert_eq!(a.methods, vec!["fromJson"]);
        assert_eq!(a.var_uses, vec![("gson".to_string(), "fromJson".to_string())]);
    }

    #[test]
    fn static_access_records_the_type() {
        let a = parse_ok("AutoBean<Test> bean = AutoBeanUtils.getAutoBean(test);");
        assert!(a.types.contains(&"AutoBeanUtils".to_string()));
        assert!(a.types.contains(&"AutoBean".to_string()));
        assert!(a.types.contains(&"Test".to_string())); // generic argument
        assert_eq!(a.methods, vec!["getAutoBean"]);
    }

    #[test]
    fn nested_generics_with_shift_closers() {
        let a = parse_ok("Map<String, List<Gson>> m = build();");
        for ty in ["Map", "String", "List", "Gson"] {
            assert!(a.types.contains(&ty.to_string()), "missing {ty}: {a:?}");
        }
    }

    #[test]
    fn import_maps_simple_name_to_fqn() {
        let a = parse_ok("import com.restfb.json.JsonObject;");
        assert_eq!(
            a.imports,
            vec![("JsonObject".to_string(), "com.restfb.json.JsonObject".to_string())]
        );
        assert!(a.types.contains(&"JsonObject".to_string()));
        assert!(a.fq_types.contains(&"com.restfb.json.JsonObject".to_string()));
    }

    #[test]
    fn wildcard_import_resolves_nothing() {
        let a = parse_ok("import org.json.*;");
        assert!(a.imports.is_empty());
        assert!(a.types.is_empty());
    }

    #[test]
    fn class_header_declares_a_user_type() {
        let a = parse_ok("public class Wrapper extends BaseModel {");
        assert_eq!(a.declared_types, vec!["Wrapper"]);
        assert!(a.types.contains(&"BaseModel".to_string()));
    }

    #[test]
    fn constructor_header_declares_a_user_type() {
        let a = parse_ok("public Data(String name) {");
        assert_eq!(a.declared_types, vec!["Data"]);
        assert_eq!(a.bindings, vec![("name".to_string(), "String".to_string())]);
    }

    #[test]
    fn method_header_binds_parameters() {
        let a = parse_ok("public String convert(ObjectMapper mapper, int n) {");
        assert!(a.types.contains(&"ObjectMapper".to_string()));
        assert_eq!(
            a.bindings,
            vec![("mapper".to_string(), "ObjectMapper".to_string())]
        );
    }

    #[test]
    fn control_heads_parse() {
        parse_ok("if (json != null) {");
        parse_ok("for (int i = 0; i < n; i++) {");
        let a = parse_ok("for (String line : lines) {");
        assert_eq!(a.bindings, vec![("line".to_string(), "String".to_string())]);
        let c = parse_ok("catch (JSONException e) {");
        assert!(c.types.contains(&"JSONException".to_string()));
        parse_ok("try {");
        parse_ok("else {");
    }

    #[test]
    fn single_statement_control_line() {
        let a = parse_ok("if (x > 0) return gson.toJson(x);");
        assert_eq!(a.methods, vec!["toJson"]);
    }

    #[test]
    fn assignment_to_declared_variable() {
        let a = parse_ok("wrapper = mapper.readValue(jsonStr, Wrapper.class);");
        assert_eq!(a.methods, vec!["readValue"]);
        assert_eq!(
            a.var_uses,
            vec![("mapper".to_string(), "readValue".to_string())]
        );
        assert!(a.types.contains(&"Wrapper".to_string()));
    }

    #[test]
    fn anonymous_class_head_is_tolerated() {
        let a = parse_ok("Type t = new TypeToken<List<Data>>() {");
        for ty in ["Type", "TypeToken", "List", "Data"] {
            assert!(a.types.contains(&ty.to_string()), "missing {ty}: {a:?}");
        }
    }

    #[test]
    fn chain_continuation_line() {
        let a = parse_ok(".getType();");
        assert_eq!(a.methods, vec!["getType"]);
    }

    #[test]
    fn trailing_statement_without_semicolon_parses() {
        let a = parse_ok("mapper.writeValue(out, obj)");
        assert_eq!(a.methods, vec!["writeValue"]);
    }

    #[test]
    fn punctuation_only_lines_parse_to_nothing() {
        // "});" splits into a close brace and a ");" fragment.
        for line in split_logical_lines("});") {
            let a = parse_line(&line).expect("punctuation line should parse");
            assert!(a.idents.is_empty());
        }
    }

    #[test]
    fn merged_statements_are_rejected() {
        parse_fails("Gson gson = new Gson() String s = gson.toJson(x);");
    }

    #[test]
    fn unbalanced_call_is_rejected() {
        parse_fails("Gson g = new Gson(;");
        parse_fails("foo(a, ;");
    }

    #[test]
    fn prose_is_rejected() {
        parse_fails("This converts the string for you;");
    }

    #[test]
    fn cast_records_the_type() {
        let a = parse_ok("JSONObject o = (JSONObject) parser.parse(s);");
        assert!(a.types.contains(&"JSONObject".to_string()));
        assert_eq!(a.var_uses, vec![("parser".to_string(), "parse".to_string())]);
    }

    #[test]
    fn annotations_are_stripped() {
        let a = parse_ok("@SerializedName(\"user_name\") private String userName;");
        assert!(a.bindings.contains(&("userName".to_string(), "String".to_string())));
    }

    #[test]
    fn static_import_maps_the_enclosing_type() {
        let a = parse_ok("import static org.junit.Assert.assertEquals;");
        assert_eq!(
            a.imports,
            vec![("Assert".to_string(), "org.junit.Assert".to_string())]
        );
    }
}

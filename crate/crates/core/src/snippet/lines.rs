//! Logical-line splitting for code blocks.
//!
//! Statements are delimited by `;` (outside parentheses) and by `{` / `}`,
//! not by newlines, so a statement wrapped over several physical lines stays
//! together and a missing semicolon merges two statements into one logical
//! line (which the grammar then rejects and the island scanner recovers).
//! String/char literals and comments are honored; comments are stripped.

/// How a logical line ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminator {
    /// Ended by `;` at parenthesis depth zero.
    Semi,
    /// Ended by `{` (block or anonymous-class opener).
    OpenBrace,
    /// The line is a closing `}`.
    CloseBrace,
    /// Ran out of input without a delimiter.
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalLine {
    pub text: String,
    pub terminator: Terminator,
}

/// Split raw code into logical lines. Whitespace-only fragments are dropped;
/// comments never reach the output.
pub fn split_logical_lines(code: &str) -> Vec<LogicalLine> {
    let mut lines = Vec::new();
    let mut buf = String::new();
    let mut paren_depth = 0usize;
    let mut chars = code.chars().peekable();

    let flush = |buf: &mut String, lines: &mut Vec<LogicalLine>, terminator: Terminator| {
        let text = buf.trim();
        if !text.is_empty() {
            lines.push(LogicalLine {
                text: text.to_string(),
                terminator,
            });
        }
        buf.clear();
    };

    while let Some(c) = chars.next() {
        match c {
            '/' if chars.peek() == Some(&'/') => {
                chars.next();
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
                buf.push(' ');
            }
            '/' if chars.peek() == Some(&'*') => {
                chars.next();
                let mut prev = '\0';
                for c in chars.by_ref() {
                    if prev == '*' && c == '/' {
                        break;
                    }
                    prev = c;
                }
                buf.push(' ');
            }
            '"' | '\'' => {
                buf.push(c);
                let quote = c;
                let mut escaped = false;
                for c in chars.by_ref() {
                    buf.push(c);
                    if escaped {
                        escaped = false;
                    } else if c == '\\' {
                        escaped = true;
                    } else if c == quote {
                        break;
                    }
                }
            }
            '(' => {
                paren_depth += 1;
                buf.push(c);
            }
            ')' => {
                paren_depth = paren_depth.saturating_sub(1);
                buf.push(c);
            }
            ';' if paren_depth == 0 => {
                buf.push(c);
                flush(&mut buf, &mut lines, Terminator::Semi);
            }
            '{' => {
                buf.push(c);
                flush(&mut buf, &mut lines, Terminator::OpenBrace);
                paren_depth = 0;
            }
            '}' => {
                // Text pending before a close brace lacked its own
                // terminator; emit it first, then the brace alone.
                flush(&mut buf, &mut lines, Terminator::End);
                lines.push(LogicalLine {
                    text: "}".to_string(),
                    terminator: Terminator::CloseBrace,
                });
                paren_depth = 0;
            }
            '\n' | '\r' | '\t' => buf.push(' '),
            _ => buf.push(c),
        }
    }
    flush(&mut buf, &mut lines, Terminator::End);
    lines
}

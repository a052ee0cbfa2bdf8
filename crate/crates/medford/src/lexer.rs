//! Line lexer: raw `.mfd` text to an ordered list of logical statements.
//!
//! MEDFORD reserves three tokens. `@` at the very beginning of a line opens
//! a tag statement, `#` starts a comment, and `$$ ... $$` delimits a math
//! span within which `#` is literal. A line beginning with `` `@ `` opens a
//! macro definition. Every other non-blank line continues whichever
//! statement is currently open, joined with a single space; blank lines
//! terminate nothing. An `@` that is not the first character of a line has
//! no effect.
//!
//! Comment stripping happens here, before tokenization, so a `#` inside a
//! tag token starts a comment like anywhere else. Math spans must open and
//! close on one physical line; an unclosed `$$` is reported as a syntax
//! diagnostic and the rest of the line is kept literal.

use crate::diagnostic::Diagnostic;
use crate::document::TagPath;

/// One physical source line with the trailing newline removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawLine<'a> {
    pub text: &'a str,
    /// 1-based position in the file.
    pub line_no: usize,
}

/// Which kind of statement a line at column 1 opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementKind {
    /// `@token body...`
    Tag,
    /// `` `@name body... ``
    MacroDefinition,
}

/// One logical statement: a head line plus any continuation lines.
///
/// `head_token` is the text after the opening marker up to the next
/// whitespace (the tag token or macro name, never containing whitespace).
/// `body` is everything after the token, with continuations joined by a
/// single space and comments already stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub head_token: String,
    pub body: String,
    pub start_line: usize,
    pub end_line: usize,
}

impl Statement {
    /// Diagnostic path for this statement: tag tokens split at the first
    /// hyphen, macro definitions render as `@macro-<name>`.
    pub fn diagnostic_path(&self) -> TagPath {
        match self.kind {
            StatementKind::Tag => match self.head_token.split_once('-') {
                Some((major, minor)) => TagPath {
                    major: major.to_string(),
                    minor: Some(minor.to_string()),
                },
                None => TagPath {
                    major: self.head_token.clone(),
                    minor: None,
                },
            },
            StatementKind::MacroDefinition => TagPath {
                major: "macro".to_string(),
                minor: if self.head_token.is_empty() {
                    None
                } else {
                    Some(self.head_token.clone())
                },
            },
        }
    }
}

/// A `$$` math span was opened but not closed on the same physical line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnterminatedMathSpan {
    /// The line as scanned, trailing whitespace trimmed, with nothing
    /// truncated past the unclosed `$$`.
    pub scanned: String,
}

/// Remove the comment from one physical line.
///
/// Scanning left to right, `$$` toggles math mode. A `#` outside math mode
/// truncates the line at that character; inside math mode it is literal.
/// Trailing whitespace is trimmed from the result. A line that ends with
/// math mode still open is an error.
pub fn strip_comment(line: &str) -> Result<String, UnterminatedMathSpan> {
    let (text, terminated) = strip_comment_lossy(line);
    if terminated {
        Ok(text)
    } else {
        Err(UnterminatedMathSpan { scanned: text })
    }
}

/// Comment stripping that never fails; the boolean is false when a math
/// span was left open at end of line.
fn strip_comment_lossy(line: &str) -> (String, bool) {
    let mut out = String::with_capacity(line.len());
    let mut in_math = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '$' && chars.peek() == Some(&'$') {
            chars.next();
            out.push_str("$$");
            in_math = !in_math;
        } else if c == '#' && !in_math {
            break;
        } else {
            out.push(c);
        }
    }
    out.truncate(out.trim_end().len());
    (out, !in_math)
}

fn raw_lines(text: &str) -> impl Iterator<Item = RawLine<'_>> {
    text.split('\n').enumerate().map(|(i, line)| RawLine {
        text: line.strip_suffix('\r').unwrap_or(line),
        line_no: i + 1,
    })
}

/// Split `line` (already comment-stripped) into head token and body given
/// the byte length of the opening marker (`@` or `` `@ ``).
fn split_head(line: &str, marker_len: usize) -> (String, String) {
    let rest = &line[marker_len..];
    match rest.split_once(char::is_whitespace) {
        Some((token, body)) => (token.to_string(), body.trim_start().to_string()),
        None => (rest.to_string(), String::new()),
    }
}

/// Convert raw file text into logical statements.
///
/// A leading UTF-8 byte-order mark is stripped. Problems (unterminated math
/// spans, text before the first statement) become syntax diagnostics; the
/// scan always runs to the end of the file.
pub fn scan(file_text: &str) -> (Vec<Statement>, Vec<Diagnostic>) {
    let text = file_text.strip_prefix('\u{feff}').unwrap_or(file_text);
    let mut statements: Vec<Statement> = Vec::new();
    let mut diagnostics = Vec::new();

    for raw in raw_lines(text) {
        let (stripped, math_ok) = strip_comment_lossy(raw.text);

        if stripped.starts_with('@') || stripped.starts_with("`@") {
            let (kind, marker_len) = if stripped.starts_with('@') {
                (StatementKind::Tag, 1)
            } else {
                (StatementKind::MacroDefinition, 2)
            };
            let (head_token, body) = split_head(&stripped, marker_len);
            statements.push(Statement {
                kind,
                head_token,
                body,
                start_line: raw.line_no,
                end_line: raw.line_no,
            });
        } else if stripped.trim().is_empty() {
            // Blank or comment-only line: skipped, terminates nothing.
        } else {
            match statements.last_mut() {
                Some(open) => {
                    let cont = stripped.trim_start();
                    if open.body.is_empty() {
                        open.body.push_str(cont);
                    } else {
                        open.body.push(' ');
                        open.body.push_str(cont);
                    }
                    open.end_line = raw.line_no;
                }
                None => {
                    diagnostics.push(Diagnostic::syntax(
                        raw.line_no,
                        TagPath {
                            major: "document".to_string(),
                            minor: None,
                        },
                        "text appears before the first tag",
                    ));
                }
            }
        }

        if !math_ok {
            diagnostics.push(Diagnostic::syntax(
                raw.line_no,
                current_path(&statements),
                "unterminated math span",
            ));
        }
    }

    (statements, diagnostics)
}

fn current_path(statements: &[Statement]) -> TagPath {
    match statements.last() {
        Some(s) => s.diagnostic_path(),
        None => TagPath {
            major: "document".to_string(),
            minor: None,
        },
    }
}

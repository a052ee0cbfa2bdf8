//! Line-anchored, human-legible error records and their fixed rendering.
//!
//! Every stage of the pipeline reports problems as [`Diagnostic`] values
//! rather than aborting: the lexer, the macro engine, block assembly, and
//! content validation all speak the same three-category vocabulary, and a
//! file is considered valid exactly when the combined list is empty.
//!
//! Rendering is deliberately rigid. Each diagnostic becomes one line of the
//! form
//!
//! ```text
//! Line 7 : @Date-desc is of the wrong type: invalid date format.
//! ```
//!
//! with the verb phrase fixed per category, so output can be relied on by
//! people and scripts alike.

use serde::Serialize;

use crate::document::TagPath;

/// The three classes of problems a MEDFORD file can have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    /// Errors in the MEDFORD formatting itself, such as multiple uses of
    /// the same macro name or text before the first tag.
    Syntax,
    /// Errors in the content of a known major-minor combination, such as a
    /// date field that does not hold a valid date.
    Validation,
    /// Required information that is absent, such as a `@Date` block without
    /// a `@Date-Note`.
    MissingData,
}

impl Category {
    /// Verb phrase used when rendering a diagnostic of this category.
    pub fn verb_phrase(self) -> &'static str {
        match self {
            Category::Syntax => "is invalid",
            Category::Validation => "is of the wrong type",
            Category::MissingData => "has incomplete information",
        }
    }

    /// Stable machine-readable name, used in JSON output.
    pub fn machine_name(self) -> &'static str {
        match self {
            Category::Syntax => "syntax",
            Category::Validation => "validation",
            Category::MissingData => "missing_data",
        }
    }
}

/// One problem found in a MEDFORD file.
///
/// `line` always points at a physical line within the span of the offending
/// statement. `message` carries no trailing punctuation; [`render`] adds the
/// single closing period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub path: TagPath,
    pub category: Category,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, path: TagPath, category: Category, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            path,
            category,
            message: message.into(),
        }
    }

    pub fn syntax(line: usize, path: TagPath, message: impl Into<String>) -> Self {
        Diagnostic::new(line, path, Category::Syntax, message)
    }

    pub fn validation(line: usize, path: TagPath, message: impl Into<String>) -> Self {
        Diagnostic::new(line, path, Category::Validation, message)
    }

    pub fn missing_data(line: usize, path: TagPath, message: impl Into<String>) -> Self {
        Diagnostic::new(line, path, Category::MissingData, message)
    }
}

/// Render one diagnostic in the fixed human-legible format:
/// `Line {line} : @{major}[-{minor}] {verb phrase}: {message}.`
pub fn render(diagnostic: &Diagnostic) -> String {
    let tag = match &diagnostic.path.minor {
        Some(minor) => format!("@{}-{}", diagnostic.path.major, minor),
        None => format!("@{}", diagnostic.path.major),
    };
    format!(
        "Line {} : {} {}: {}.",
        diagnostic.line,
        tag,
        diagnostic.category.verb_phrase(),
        diagnostic.message
    )
}

/// Per-category tallies for a diagnostic list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DiagnosticCounts {
    pub syntax: usize,
    pub validation: usize,
    pub missing_data: usize,
}

impl DiagnosticCounts {
    pub fn total(self) -> usize {
        self.syntax + self.validation + self.missing_data
    }
}

/// Render a full report: one line per diagnostic, in order, followed by a
/// summary line. An empty diagnostic list produces an empty report.
pub fn report(diagnostics: &[Diagnostic]) -> (String, DiagnosticCounts) {
    let mut counts = DiagnosticCounts::default();
    for d in diagnostics {
        match d.category {
            Category::Syntax => counts.syntax += 1,
            Category::Validation => counts.validation += 1,
            Category::MissingData => counts.missing_data += 1,
        }
    }
    if diagnostics.is_empty() {
        return (String::new(), counts);
    }
    let mut out = String::new();
    for d in diagnostics {
        out.push_str(&render(d));
        out.push('\n');
    }
    let total = counts.total();
    let noun = if total == 1 { "problem" } else { "problems" };
    out.push_str(&format!(
        "{} {} ({} syntax, {} validation, {} missing data)\n",
        total, noun, counts.syntax, counts.validation, counts.missing_data
    ));
    (out, counts)
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    line: usize,
    major: &'a str,
    minor: Option<&'a str>,
    category: &'static str,
    message: &'a str,
}

/// Serialize one diagnostic as a single-line JSON object with keys
/// `line`, `major`, `minor`, `category`, `message`.
pub fn to_json_line(diagnostic: &Diagnostic) -> String {
    let json = JsonDiagnostic {
        line: diagnostic.line,
        major: &diagnostic.path.major,
        minor: diagnostic.path.minor.as_deref(),
        category: diagnostic.category.machine_name(),
        message: &diagnostic.message,
    };
    serde_json::to_string(&json).expect("diagnostic serialization cannot fail")
}

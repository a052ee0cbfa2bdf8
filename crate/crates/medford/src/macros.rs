//! Backtick macros: collection of definitions and textual substitution.
//!
//! A macro is a one-word name bound to a body; everywhere `` `@name ``
//! appears in a statement body it is replaced by that body. Substituted
//! text is re-scanned, so macros may reference other macros; a depth cap of
//! table size + 1 passes guarantees termination and turns cyclic tables
//! into a diagnostic instead of a hang. There is no escape sequence: every
//! `` `@name `` in a body is an invocation. Macros are recognized in
//! statement bodies only, never in tag tokens.

use crate::diagnostic::Diagnostic;
use crate::document::TagPath;
use crate::lexer::{Statement, StatementKind};

/// One collected macro definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroDef {
    pub body: String,
    /// Line of the `` `@ `` definition.
    pub defined_at: usize,
}

/// Name-to-body map in definition order. Names are single words of ASCII
/// letters, digits, and underscores.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MacroTable {
    entries: Vec<(String, MacroDef)>,
}

impl MacroTable {
    pub fn new() -> Self {
        MacroTable::default()
    }

    pub fn get(&self, name: &str) -> Option<&MacroDef> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, def)| def)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in definition order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &MacroDef)> {
        self.entries.iter().map(|(n, d)| (n.as_str(), d))
    }

    pub fn insert(&mut self, name: String, def: MacroDef) {
        self.entries.push((name, def));
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_macro_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_name_char)
}

fn macro_path(name: &str) -> TagPath {
    TagPath {
        major: "macro".to_string(),
        minor: if name.is_empty() {
            None
        } else {
            Some(name.to_string())
        },
    }
}

/// Pull macro definitions out of a statement list.
///
/// Definitions are collected file-wide in order; the remaining statements
/// are the tag statements, unchanged. A name defined twice keeps its first
/// body and reports a syntax diagnostic naming both definition lines.
pub fn collect_macros(statements: Vec<Statement>) -> (MacroTable, Vec<Statement>, Vec<Diagnostic>) {
    let mut table = MacroTable::new();
    let mut remaining = Vec::with_capacity(statements.len());
    let mut diagnostics = Vec::new();

    for statement in statements {
        if statement.kind != StatementKind::MacroDefinition {
            remaining.push(statement);
            continue;
        }
        let name = statement.head_token;
        if !valid_macro_name(&name) {
            diagnostics.push(Diagnostic::syntax(
                statement.start_line,
                macro_path(&name),
                "macro name must be one word of letters, digits, or underscores",
            ));
            continue;
        }
        if let Some(first) = table.get(&name) {
            diagnostics.push(Diagnostic::syntax(
                statement.start_line,
                macro_path(&name),
                format!(
                    "multiple uses of the same macro name (first defined at line {})",
                    first.defined_at
                ),
            ));
            continue;
        }
        table.insert(
            name,
            MacroDef {
                body: statement.body,
                defined_at: statement.start_line,
            },
        );
    }

    (table, remaining, diagnostics)
}

/// A problem found while expanding one body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpandIssue {
    /// `` `@name `` used but never defined; the text is left verbatim.
    Undefined { name: String },
    /// Expansion kept growing past the depth cap; `name` is the entry point
    /// still being substituted when expansion was cut off.
    Cycle { name: String },
}

/// Replace every defined `` `@name `` in `text` once, left to right.
/// Substituted text is not re-scanned within the pass.
fn replace_pass(text: &str, table: &MacroTable) -> (String, bool) {
    let mut out = String::with_capacity(text.len());
    let mut replaced = false;
    let mut rest = text;
    while let Some(pos) = rest.find("`@") {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + 2..];
        let name_len = after
            .find(|c: char| !is_name_char(c))
            .unwrap_or(after.len());
        let name = &after[..name_len];
        if !name.is_empty() && table.contains(name) {
            out.push_str(&table.get(name).unwrap().body);
            replaced = true;
        } else {
            out.push_str("`@");
            out.push_str(name);
        }
        rest = &after[name_len..];
    }
    out.push_str(rest);
    (out, replaced)
}

fn first_defined_invocation(text: &str, table: &MacroTable) -> Option<String> {
    let mut rest = text;
    while let Some(pos) = rest.find("`@") {
        let after = &rest[pos + 2..];
        let name_len = after
            .find(|c: char| !is_name_char(c))
            .unwrap_or(after.len());
        let name = &after[..name_len];
        if !name.is_empty() && table.contains(name) {
            return Some(name.to_string());
        }
        rest = &after[name_len..];
    }
    None
}

fn undefined_invocations(text: &str, table: &MacroTable) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let mut rest = text;
    while let Some(pos) = rest.find("`@") {
        let after = &rest[pos + 2..];
        let name_len = after
            .find(|c: char| !is_name_char(c))
            .unwrap_or(after.len());
        let name = &after[..name_len];
        if !name.is_empty() && !table.contains(name) && !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
        rest = &after[name_len..];
    }
    names
}

/// Expand every macro invocation in `body`.
///
/// Runs replacement passes until a fixpoint, capped at table size + 1
/// passes. Undefined names are left verbatim and reported; exceeding the
/// cap reports a cycle. Expansion always terminates and is idempotent on
/// its own output for cycle-free tables.
pub fn expand(body: &str, table: &MacroTable) -> (String, Vec<ExpandIssue>) {
    let cap = table.len() + 1;
    let mut text = body.to_string();
    for pass in 0.. {
        let (next, replaced) = replace_pass(&text, table);
        if !replaced {
            text = next;
            break;
        }
        if pass >= cap {
            let name =
                first_defined_invocation(&next, table).unwrap_or_else(|| "unknown".to_string());
            return (next, vec![ExpandIssue::Cycle { name }]);
        }
        text = next;
    }
    let issues = undefined_invocations(&text, table)
        .into_iter()
        .map(|name| ExpandIssue::Undefined { name })
        .collect();
    (text, issues)
}

/// Expand all statement bodies against the table, mapping issues to syntax
/// diagnostics anchored at each statement's head line.
pub fn expand_statements(
    statements: Vec<Statement>,
    table: &MacroTable,
) -> (Vec<Statement>, Vec<Diagnostic>) {
    let mut out = Vec::with_capacity(statements.len());
    let mut diagnostics = Vec::new();
    for mut statement in statements {
        let (body, issues) = expand(&statement.body, table);
        statement.body = body;
        for issue in issues {
            let diagnostic = match issue {
                ExpandIssue::Undefined { name } => Diagnostic::syntax(
                    statement.start_line,
                    macro_path(&name),
                    "macro is never defined",
                ),
                ExpandIssue::Cycle { name } => Diagnostic::syntax(
                    statement.start_line,
                    macro_path(&name),
                    "macro expansion never terminates",
                ),
            };
            diagnostics.push(diagnostic);
        }
        out.push(statement);
    }
    (out, diagnostics)
}

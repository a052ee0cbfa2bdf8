//! Canonical structured export: a deterministic JSON view of a document.
//!
//! The export carries the source name, the macro table, and the ordered
//! block list, with fixed key order and whitespace so that exporting the
//! same document always yields the same bytes. It is lossless: importing an
//! export reproduces the document exactly, line numbers included.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::document::{Attribute, Block, Document};
use crate::macros::{MacroDef, MacroTable};

#[derive(Serialize, Deserialize)]
struct ExportDocument {
    source: String,
    macros: Vec<ExportMacro>,
    blocks: Vec<ExportBlock>,
}

#[derive(Serialize, Deserialize)]
struct ExportMacro {
    name: String,
    body: String,
    line: usize,
}

#[derive(Serialize, Deserialize)]
struct ExportBlock {
    major: String,
    desc: String,
    line: usize,
    attributes: Vec<ExportAttribute>,
}

#[derive(Serialize, Deserialize)]
struct ExportAttribute {
    minor: String,
    value: String,
    line: usize,
}

/// The export text was not produced by [`to_canonical_export`] or has been
/// damaged.
#[derive(Debug, Error)]
#[error("export format error at line {line}, column {column}: {message}")]
pub struct ExportFormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Serialize a document to canonical export text.
pub fn to_canonical_export(document: &Document) -> String {
    let export = ExportDocument {
        source: document.source_name.clone(),
        macros: document
            .macro_table
            .iter()
            .map(|(name, def)| ExportMacro {
                name: name.to_string(),
                body: def.body.clone(),
                line: def.defined_at,
            })
            .collect(),
        blocks: document
            .blocks
            .iter()
            .map(|block| ExportBlock {
                major: block.major.clone(),
                desc: block.desc.clone(),
                line: block.head_line,
                attributes: block
                    .attributes
                    .iter()
                    .map(|a| ExportAttribute {
                        minor: a.minor.clone(),
                        value: a.value.clone(),
                        line: a.line,
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text =
        serde_json::to_string_pretty(&export).expect("document serialization cannot fail");
    text.push('\n');
    text
}

/// Rebuild a document from canonical export text.
pub fn from_canonical_export(text: &str) -> Result<Document, ExportFormatError> {
    let export: ExportDocument = serde_json::from_str(text).map_err(|e| ExportFormatError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut macro_table = MacroTable::new();
    for m in export.macros {
        macro_table.insert(
            m.name,
            MacroDef {
                body: m.body,
                defined_at: m.line,
            },
        );
    }
    Ok(Document {
        source_name: export.source,
        blocks: export
            .blocks
            .into_iter()
            .map(|b| Block {
                major: b.major,
                desc: b.desc,
                head_line: b.line,
                attributes: b
                    .attributes
                    .into_iter()
                    .map(|a| Attribute {
                        minor: a.minor,
                        value: a.value,
                        line: a.line,
                    })
                    .collect(),
            })
            .collect(),
        macro_table,
    })
}

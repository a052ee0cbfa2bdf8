//! Ordered block documents: majors, minors, and their attachment rules.
//!
//! A MEDFORD document is a sequence of blocks in file order. A major-only
//! statement (`@Software R`) opens a block whose head value is called the
//! `desc`; a major-minor statement (`@Software-Version 4.0.4`) appends an
//! attribute to the block most recently opened, and must agree with that
//! block's major. Unknown majors and minors are assembled exactly like
//! known ones — novel tags pass through verbatim.

use std::fmt;

use crate::diagnostic::Diagnostic;
use crate::lexer::{Statement, StatementKind};
use crate::macros::MacroTable;

/// A tag token split into its major part and optional minor part.
///
/// The split happens at the first hyphen, so majors may contain underscores
/// (`Code_Ref`) and minors may carry further hyphens. The head value of a
/// block is addressed in diagnostics as the pseudo-minor `desc`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TagPath {
    pub major: String,
    pub minor: Option<String>,
}

impl TagPath {
    pub fn major(major: impl Into<String>) -> Self {
        TagPath {
            major: major.into(),
            minor: None,
        }
    }

    pub fn minor(major: impl Into<String>, minor: impl Into<String>) -> Self {
        TagPath {
            major: major.into(),
            minor: Some(minor.into()),
        }
    }
}

impl fmt::Display for TagPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.minor {
            Some(minor) => write!(f, "{}-{}", self.major, minor),
            None => write!(f, "{}", self.major),
        }
    }
}

/// The tag token has no major part: it is empty or begins with a hyphen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyMajorError {
    pub token: String,
}

/// Split a raw tag token at its first hyphen.
pub fn split_tag_token(token: &str) -> Result<TagPath, EmptyMajorError> {
    if token.is_empty() || token.starts_with('-') {
        return Err(EmptyMajorError {
            token: token.to_string(),
        });
    }
    Ok(match token.split_once('-') {
        Some((major, minor)) => TagPath::minor(major, minor),
        None => TagPath::major(token),
    })
}

/// One minor-tag attribute attached to a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub minor: String,
    pub value: String,
    pub line: usize,
}

/// One major-tag instance: its head value and ordered attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub major: String,
    /// The value written on the major-only line. May be empty at parse
    /// time; whether that is allowed is a validation concern.
    pub desc: String,
    pub head_line: usize,
    pub attributes: Vec<Attribute>,
}

/// An assembled document: blocks in file order plus the macro table that
/// was in effect, retained for provenance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub source_name: String,
    pub blocks: Vec<Block>,
    pub macro_table: MacroTable,
}

impl Document {
    /// Serialize to canonical MEDFORD text: one statement per line, `desc`
    /// on the major line, attributes in stored order, blocks separated by
    /// one blank line.
    pub fn to_medford(&self) -> String {
        let mut out = String::new();
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push('@');
            out.push_str(&block.major);
            if !block.desc.is_empty() {
                out.push(' ');
                out.push_str(&block.desc);
            }
            out.push('\n');
            for attribute in &block.attributes {
                out.push('@');
                out.push_str(&block.major);
                out.push('-');
                out.push_str(&attribute.minor);
                if !attribute.value.is_empty() {
                    out.push(' ');
                    out.push_str(&attribute.value);
                }
                out.push('\n');
            }
        }
        out
    }

    /// Block-by-block equality that ignores line numbers, the source name,
    /// and the macro table. This is the equality under which canonical
    /// serialization round-trips: re-parsing `to_medford` output cannot
    /// reproduce original line positions.
    pub fn structural_eq(&self, other: &Document) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| {
                a.major == b.major
                    && a.desc == b.desc
                    && a.attributes.len() == b.attributes.len()
                    && a.attributes
                        .iter()
                        .zip(&b.attributes)
                        .all(|(x, y)| x.minor == y.minor && x.value == y.value)
            })
    }
}

/// Assemble macro-expanded tag statements into a document.
///
/// A minor statement binds to the immediately preceding open block and must
/// match its major; otherwise it is reported as an orphan and dropped while
/// assembly continues. Attribute values are never inspected.
pub fn assemble(
    source_name: &str,
    statements: Vec<Statement>,
    macro_table: MacroTable,
) -> (Document, Vec<Diagnostic>) {
    let mut blocks: Vec<Block> = Vec::new();
    let mut diagnostics = Vec::new();

    for statement in statements {
        if statement.kind != StatementKind::Tag {
            // Macro definitions are consumed before assembly.
            continue;
        }
        let path = match split_tag_token(&statement.head_token) {
            Ok(path) => path,
            Err(err) => {
                let message = if err.token.is_empty() {
                    "tag token is empty"
                } else {
                    "tag token has no major part"
                };
                diagnostics.push(Diagnostic::syntax(
                    statement.start_line,
                    TagPath::major(err.token),
                    message,
                ));
                continue;
            }
        };
        match path.minor {
            None => blocks.push(Block {
                major: path.major,
                desc: statement.body,
                head_line: statement.start_line,
                attributes: Vec::new(),
            }),
            Some(minor) => match blocks.last_mut() {
                Some(open) if open.major == path.major => {
                    open.attributes.push(Attribute {
                        minor,
                        value: statement.body,
                        line: statement.start_line,
                    });
                }
                _ => {
                    diagnostics.push(Diagnostic::missing_data(
                        statement.start_line,
                        TagPath::minor(path.major.clone(), minor),
                        format!("no open @{} block to attach this minor tag to", path.major),
                    ));
                }
            },
        }
    }

    (
        Document {
            source_name: source_name.to_string(),
            blocks,
            macro_table,
        },
        diagnostics,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostic::Category;
    use crate::lexer::scan;
    use crate::macros::collect_macros;

    fn assemble_text(text: &str) -> (Document, Vec<Diagnostic>) {
        let (statements, lex_diags) = scan(text);
        assert!(lex_diags.is_empty(), "unexpected lexer diagnostics");
        let (table, remaining, macro_diags) = collect_macros(statements);
        assert!(macro_diags.is_empty());
        assemble("test", remaining, table)
    }

    #[test]
    fn splits_major_minor_at_first_hyphen() {
        assert_eq!(
            split_tag_token("Contributor-ORCID").unwrap(),
            TagPath::minor("Contributor", "ORCID")
        );
        assert_eq!(
            split_tag_token("Software").unwrap(),
            TagPath::major("Software")
        );
        assert_eq!(
            split_tag_token("Code_Ref-Type").unwrap(),
            TagPath::minor("Code_Ref", "Type")
        );
    }

    #[test]
    fn minor_keeps_further_hyphens() {
        assert_eq!(
            split_tag_token("Date-Unstructured-extra").unwrap(),
            TagPath::minor("Date", "Unstructured-extra")
        );
    }

    #[test]
    fn leading_hyphen_has_no_major() {
        assert!(split_tag_token("-Foo").is_err());
        assert!(split_tag_token("").is_err());
    }

    #[test]
    fn contributor_example_assembles_one_block() {
        let text = "@Contributor Hollie M. Putnam\n\
                    @Contributor-ORCID 0000-0003-2322-3269\n\
                    @Contributor-Role Corresponding Author\n\
                    @Contributor-Email hputnam@uri.edu\n";
        let (doc, diagnostics) = assemble_text(text);
        assert!(diagnostics.is_empty());
        assert_eq!(doc.blocks.len(), 1);
        let block = &doc.blocks[0];
        assert_eq!(block.major, "Contributor");
        assert_eq!(block.desc, "Hollie M. Putnam");
        let attrs: Vec<(&str, &str)> = block
            .attributes
            .iter()
            .map(|a| (a.minor.as_str(), a.value.as_str()))
            .collect();
        assert_eq!(
            attrs,
            vec![
                ("ORCID", "0000-0003-2322-3269"),
                ("Role", "Corresponding Author"),
                ("Email", "hputnam@uri.edu"),
            ]
        );
    }

    #[test]
    fn software_example_keeps_repeated_notes_in_order() {
        let text = "@Software R\n\
                    @Software-Version 4.0.4 (\"Lost Library Book\")\n\
                    @Software-Notes Packages used include dplyr, stringr,\n\
                    \x20   and genefilter.\n\
                    \n\
                    @Software DESeq2\n\
                    @Software-Version 1.28.1\n\
                    @Software-Notes Used as a package in R.\n\
                    @Software-Notes Installed through BioCManager.\n";
        let (doc, diagnostics) = assemble_text(text);
        assert!(diagnostics.is_empty());
        assert_eq!(doc.blocks.len(), 2);
        assert_eq!(doc.blocks[0].desc, "R");
        assert_eq!(doc.blocks[1].desc, "DESeq2");
        let notes: Vec<&str> = doc.blocks[1]
            .attributes
            .iter()
            .filter(|a| a.minor == "Notes")
            .map(|a| a.value.as_str())
            .collect();
        assert_eq!(
            notes,
            vec!["Used as a package in R.", "Installed through BioCManager."]
        );
    }

    #[test]
    fn minor_before_any_block_is_an_orphan() {
        let (doc, diagnostics) = assemble_text("@Contributor-ORCID 0000-0003-2322-3269\n");
        assert!(doc.blocks.is_empty());
        assert_eq!(diagnostics.len(), 1);
        assert_eq!(diagnostics[0].line, 1);
        assert_eq!(diagnostics[0].category, Category::MissingData);
        assert_eq!(diagnostics[0].path, TagPath::minor("Contributor", "ORCID"));
    }

    #[test]
    fn interleaved_minor_is_an_orphan() {
        let text = "@A one\n@B two\n@A-x stray\n";
        let (doc, diagnostics) = assemble_text(text);
        assert_eq!(doc.blocks.len(), 2);
        assert_eq!(diagnostics.len(), 1);
        assert_eq!(diagnostics[0].line, 3);
        assert!(diagnostics[0].message.contains("@A"));
    }

    #[test]
    fn tag_matching_is_case_sensitive() {
        let (doc, diagnostics) = assemble_text("@Software R\n@software-Version 4.0.4\n");
        assert_eq!(doc.blocks.len(), 1);
        assert_eq!(diagnostics.len(), 1);
        assert!(doc.blocks[0].attributes.is_empty());
    }

    #[test]
    fn novel_tags_pass_through_verbatim() {
        let text = "@Weather sunny with squalls\n@Weather-WindKnots 12\n";
        let (doc, diagnostics) = assemble_text(text);
        assert!(diagnostics.is_empty());
        assert_eq!(doc.blocks[0].major, "Weather");
        assert_eq!(doc.blocks[0].attributes[0].value, "12");
    }

    #[test]
    fn block_count_equals_accepted_major_statements() {
        let text = "@A 1\n@B 2\n@C 3\n@C-x y\n";
        let (doc, _) = assemble_text(text);
        assert_eq!(doc.blocks.len(), 3);
    }

    #[test]
    fn canonical_serialization_round_trips() {
        let text = "@Image 05-01-19_Image3\n\
                    @Image-Date 2019-05-01T19:20:30.45\n\
                    @Image-Coverage  6.2\n\
                    \n\
                    @Region LTER 1 polygon including\n\
                    \x20   LTER 0 on north shore\n\
                    @Region-NorthernCoord -17.47\n";
        let (doc, diagnostics) = assemble_text(text);
        assert!(diagnostics.is_empty());
        let (round, diagnostics2) = assemble_text(&doc.to_medford());
        assert!(diagnostics2.is_empty());
        assert!(doc.structural_eq(&round));
        // Serializing the re-parsed document is a fixpoint.
        assert_eq!(doc.to_medford(), round.to_medford());
    }

    #[test]
    fn empty_desc_survives_round_trip() {
        let (doc, _) = assemble_text("@Freeform\n@Freeform-Note text\n");
        assert_eq!(doc.blocks[0].desc, "");
        let (round, _) = assemble_text(&doc.to_medford());
        assert!(doc.structural_eq(&round));
    }
}

//! Parser, validator, and BagIt compiler for the MEDFORD metadata markup
//! language.
//!
//! MEDFORD is a line-oriented markup for scientific metadata that is meant
//! to be written by hand and read by machines. Tags start with `@` at the
//! beginning of a line; a major tag opens a block and major-minor tags
//! attach attributes to it:
//!
//! ```text
//! @Contributor Hollie M. Putnam
//! @Contributor-ORCID 0000-0003-2322-3269
//! @Contributor-Role Corresponding Author
//! ```
//!
//! This crate takes `.mfd` text through the full pipeline: lexing into
//! statements, backtick-macro expansion, block assembly, schema-driven
//! content validation with line-numbered diagnostics, compilation into a
//! BagIt bag with a sha512 manifest and fetch list, and a deterministic
//! structured export. The `medford` binary wraps the same pipeline as a
//! command line tool.
//!
//! ```
//! use medford::{builtin_vocabulary, check};
//!
//! let text = "@Contributor Hollie M. Putnam\n\
//!             @Contributor-ORCID 0000-0003-2322-3269\n\
//!             @Contributor-Role Corresponding Author\n\
//!             @Contributor-Email hputnam@uri.edu\n";
//! let (document, diagnostics) = check("example", text, &builtin_vocabulary());
//! assert!(diagnostics.is_empty());
//! assert_eq!(document.blocks.len(), 1);
//! assert_eq!(document.blocks[0].desc, "Hollie M. Putnam");
//! ```
//!
//! A narrative guide lives in the `book/` directory of the repository; its
//! code snippets are compiled as doc-tests of this crate.

pub mod bag;
pub mod diagnostic;
pub mod document;
pub mod export;
pub mod lexer;
pub mod macros;
pub mod schema;
pub mod validate;

pub use bag::{
    extract_provenance, plan_bag, verify_bag, write_bag, BagError, BagMismatch, BagPlan,
    FetchEntry, PayloadEntry, PayloadSource, ProvenanceEntry, ProvenanceKind, ProvenanceRole,
    VerifyReport,
};
pub use diagnostic::{render, report, to_json_line, Category, Diagnostic, DiagnosticCounts};
pub use document::{assemble, split_tag_token, Attribute, Block, Document, TagPath};
pub use export::{from_canonical_export, to_canonical_export, ExportFormatError};
pub use lexer::{scan, strip_comment, Statement, StatementKind};
pub use macros::{collect_macros, expand, expand_statements, ExpandIssue, MacroDef, MacroTable};
pub use schema::{
    builtin_vocabulary, load_schema, ConditionalRule, FieldSpec, FieldType, SchemaFormatError,
    SchemaRegistry, TagSchema, ValuePredicate,
};
pub use validate::{
    check_date, check_email, check_latitude, check_local_path, check_longitude, check_orcid,
    check_uri, detect_template_tokens, validate_document, TEMPLATE_TOKEN,
};

/// Run text through the parse pipeline: lexing, macro collection and
/// expansion, and block assembly. Diagnostics from all stages come back
/// merged and sorted by line.
pub fn parse(source_name: &str, text: &str) -> (Document, Vec<Diagnostic>) {
    let (statements, mut diagnostics) = lexer::scan(text);
    let (table, statements, macro_diags) = macros::collect_macros(statements);
    diagnostics.extend(macro_diags);
    let (statements, expand_diags) = macros::expand_statements(statements, &table);
    diagnostics.extend(expand_diags);
    let (document, assemble_diags) = document::assemble(source_name, statements, table);
    diagnostics.extend(assemble_diags);
    diagnostics.sort_by_key(|d| d.line);
    (document, diagnostics)
}

/// Parse and validate in one call. The document is valid exactly when the
/// returned diagnostic list is empty.
pub fn check(
    source_name: &str,
    text: &str,
    registry: &SchemaRegistry,
) -> (Document, Vec<Diagnostic>) {
    let (document, mut diagnostics) = parse(source_name, text);
    diagnostics.extend(validate::validate_document(&document, registry));
    diagnostics.sort_by_key(|d| d.line);
    (document, diagnostics)
}

// The book's code snippets double as doc-tests so the guide cannot drift
// from the library.
#[cfg(doctest)]
mod book {
    macro_rules! book_chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    book_chapter!(Introduction, "../../../book/src/introduction.md");
    book_chapter!(Syntax, "../../../book/src/syntax.md");
    book_chapter!(Macros, "../../../book/src/macros.md");
    book_chapter!(Templates, "../../../book/src/templates.md");
    book_chapter!(SchemaChapter, "../../../book/src/schema.md");
    book_chapter!(Validation, "../../../book/src/validation.md");
    book_chapter!(Bags, "../../../book/src/bags.md");
    book_chapter!(Export, "../../../book/src/export.md");
    book_chapter!(Cli, "../../../book/src/cli.md");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_merges_diagnostics_in_line_order() {
        let text = "@Date nonsense\n\
                    @Date-Note x\n\
                    @Orphan-Minor stray\n\
                    `@dup a\n\
                    `@dup b\n";
        let (_, diagnostics) = check("t", text, &builtin_vocabulary());
        let lines: Vec<usize> = diagnostics.iter().map(|d| d.line).collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
        assert_eq!(diagnostics.len(), 3);
    }

    #[test]
    fn macro_expansion_feeds_assembly() {
        let text = "`@myinstitute 100 Institute Drive, State, Zip\n\
                    @Contributor A. Researcher\n\
                    @Contributor-Association `@myinstitute\n";
        let (document, diagnostics) = parse("t", text);
        assert!(diagnostics.is_empty());
        assert_eq!(
            document.blocks[0].attributes[0].value,
            "100 Institute Drive, State, Zip"
        );
        assert_eq!(document.macro_table.len(), 1);
    }
}

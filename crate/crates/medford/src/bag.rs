//! Compilation of a validated document into a BagIt bag.
//!
//! The nine provenance majors (`Data`/`Code`/`Paper` crossed with
//! `Primary`/`Copy`/`Ref`) drive packaging. `Primary` and `Copy` blocks
//! name local files through their `Path` minor; those files land in the
//! `data/` payload and their sha512 digests in `manifest-sha512.txt`.
//! `Ref` blocks name remote resources through their `URI` minor; those are
//! listed in `fetch.txt` and never appear in the manifest. The canonical
//! serialization of the document itself is always part of the payload, so
//! the metadata travels checksum-protected alongside the data. A document
//! with no provenance blocks compiles to an empty bag: payload of one
//! `.mfd` file, no fetch list.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha512};
use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::document::{Block, Document, TagPath};

/// Which resource family a provenance block describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProvenanceKind {
    Data,
    Code,
    Paper,
}

/// How the bag relates to the resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProvenanceRole {
    /// The bag is the authoritative source.
    Primary,
    /// The bag holds a duplicate of a resource owned elsewhere.
    Copy,
    /// The bag only points at an external resource.
    Ref,
}

/// One provenance block, resolved to its locator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenanceEntry {
    pub kind: ProvenanceKind,
    pub role: ProvenanceRole,
    pub desc: String,
    /// Relative local path for `Primary`/`Copy`, URI for `Ref`.
    pub locator: String,
    pub head_line: usize,
}

/// Recognize one of the nine provenance majors.
pub fn parse_provenance_major(major: &str) -> Option<(ProvenanceKind, ProvenanceRole)> {
    let (kind_name, role_name) = major.split_once('_')?;
    let kind = match kind_name {
        "Data" => ProvenanceKind::Data,
        "Code" => ProvenanceKind::Code,
        "Paper" => ProvenanceKind::Paper,
        _ => return None,
    };
    let role = match role_name {
        "Primary" => ProvenanceRole::Primary,
        "Copy" => ProvenanceRole::Copy,
        "Ref" => ProvenanceRole::Ref,
        _ => return None,
    };
    Some((kind, role))
}

fn locator_minor(role: ProvenanceRole) -> &'static str {
    match role {
        ProvenanceRole::Primary | ProvenanceRole::Copy => "Path",
        ProvenanceRole::Ref => "URI",
    }
}

fn block_locator(block: &Block, minor: &str) -> Option<String> {
    block
        .attributes
        .iter()
        .find(|a| a.minor == minor && !a.value.is_empty())
        .map(|a| a.value.clone())
}

/// Walk the document and extract every provenance block. Blocks of other
/// majors are ignored. A provenance block without its locator minor is
/// reported as missing data and skipped.
pub fn extract_provenance(document: &Document) -> (Vec<ProvenanceEntry>, Vec<Diagnostic>) {
    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    for block in &document.blocks {
        let Some((kind, role)) = parse_provenance_major(&block.major) else {
            continue;
        };
        let minor = locator_minor(role);
        match block_locator(block, minor) {
            Some(locator) => entries.push(ProvenanceEntry {
                kind,
                role,
                desc: block.desc.clone(),
                locator,
                head_line: block.head_line,
            }),
            None => diagnostics.push(Diagnostic::missing_data(
                block.head_line,
                TagPath::major(&block.major),
                format!("missing required field {minor}"),
            )),
        }
    }
    (entries, diagnostics)
}

/// Where a payload entry's bytes come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PayloadSource {
    /// Copied from a file on disk.
    File(PathBuf),
    /// Generated content (the serialized `.mfd`).
    Inline(Vec<u8>),
}

/// One file destined for the bag payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayloadEntry {
    pub source: PayloadSource,
    /// Bag-relative path, always under `data/`, `/`-separated.
    pub bag_path: String,
    /// Lowercase hex sha512 of the source bytes.
    pub sha512_hex: String,
}

/// One remote resource destined for `fetch.txt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchEntry {
    pub uri: String,
    /// Byte length when known; written as `-` when unknown.
    pub length: Option<u64>,
    pub bag_path: String,
}

/// Everything needed to write a bag: the payload (the serialized `.mfd`
/// first), and the fetch list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagPlan {
    pub mfd_bag_path: String,
    pub payload: Vec<PayloadEntry>,
    pub fetch: Vec<FetchEntry>,
}

#[derive(Debug, Error)]
pub enum BagError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot read referenced file {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("not a bag: {0} has no bagit.txt")]
    NotABag(PathBuf),
    #[error("two entries map to the same bag path {0}")]
    DuplicateBagPath(String),
    #[error("path {0} escapes the bag payload")]
    PathEscape(String),
    #[error("output directory {0} already exists and is not empty")]
    OutputNotEmpty(PathBuf),
    #[error("line {line}: provenance block @{major} has no usable locator")]
    IncompleteProvenance { line: usize, major: String },
    #[error("manifest line {line} is malformed")]
    ManifestFormat { line: usize },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> BagError + '_ {
    move |source| BagError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn hex(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// sha512 of a byte slice, lowercase hex.
pub fn sha512_hex(bytes: &[u8]) -> String {
    hex(&Sha512::digest(bytes))
}

fn sha512_file(path: &Path) -> io::Result<String> {
    let mut file = fs::File::open(path)?;
    let mut hasher = Sha512::new();
    io::copy(&mut file, &mut hasher)?;
    Ok(hex(&hasher.finalize()))
}

/// Normalize a locator into a clean `/`-separated relative path. Rejects
/// absolute paths and `..` segments.
fn sanitize_relative(locator: &str) -> Result<String, BagError> {
    if locator.starts_with('/') || locator.starts_with('\\') {
        return Err(BagError::PathEscape(locator.to_string()));
    }
    let mut segments = Vec::new();
    for segment in locator.split(['/', '\\']) {
        match segment {
            "" | "." => continue,
            ".." => return Err(BagError::PathEscape(locator.to_string())),
            s => segments.push(s),
        }
    }
    if segments.is_empty() {
        return Err(BagError::PathEscape(locator.to_string()));
    }
    Ok(segments.join("/"))
}

fn sanitize_component(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect();
    let trimmed = cleaned.trim_matches('.');
    if trimmed.is_empty() {
        "resource".to_string()
    } else {
        trimmed.to_string()
    }
}

/// Derive a fetch target name from the final path segment of a URI.
fn fetch_name(uri: &str) -> String {
    let bare = uri
        .split(['?', '#'])
        .next()
        .unwrap_or(uri)
        .trim_end_matches('/');
    let last = bare.rsplit('/').next().unwrap_or(bare);
    sanitize_component(last)
}

/// Build the bag plan for a document whose provenance is complete.
///
/// Local locators are resolved against `base_dir` and digested; refs become
/// fetch entries with an unknown length and a target under `data/ref/`.
/// Payload paths must be unique; colliding fetch names are disambiguated
/// with a numeric suffix.
pub fn plan_bag(document: &Document, base_dir: &Path) -> Result<BagPlan, BagError> {
    let (entries, diagnostics) = extract_provenance(document);
    if let Some(d) = diagnostics.first() {
        return Err(BagError::IncompleteProvenance {
            line: d.line,
            major: d.path.major.clone(),
        });
    }

    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mfd_bag_path = format!("data/{}.mfd", sanitize_component(&document.source_name));
    let serialized = document.to_medford().into_bytes();
    let mut payload = vec![PayloadEntry {
        sha512_hex: sha512_hex(&serialized),
        source: PayloadSource::Inline(serialized),
        bag_path: mfd_bag_path.clone(),
    }];
    taken.insert(mfd_bag_path.clone());

    let mut fetch = Vec::new();
    for entry in &entries {
        match entry.role {
            ProvenanceRole::Primary | ProvenanceRole::Copy => {
                let relative = sanitize_relative(&entry.locator)?;
                let bag_path = format!("data/{relative}");
                if !taken.insert(bag_path.clone()) {
                    return Err(BagError::DuplicateBagPath(bag_path));
                }
                let source_path: PathBuf = base_dir.join(relative.split('/').collect::<PathBuf>());
                let digest =
                    sha512_file(&source_path).map_err(|source| BagError::UnreadableFile {
                        path: source_path.clone(),
                        source,
                    })?;
                payload.push(PayloadEntry {
                    source: PayloadSource::File(source_path),
                    bag_path,
                    sha512_hex: digest,
                });
            }
            ProvenanceRole::Ref => {
                let base_name = fetch_name(&entry.locator);
                let mut bag_path = format!("data/ref/{base_name}");
                let mut suffix = 2;
                while !taken.insert(bag_path.clone()) {
                    bag_path = format!("data/ref/{base_name}-{suffix}");
                    suffix += 1;
                }
                fetch.push(FetchEntry {
                    uri: entry.locator.clone(),
                    length: None,
                    bag_path,
                });
            }
        }
    }

    Ok(BagPlan {
        mfd_bag_path,
        payload,
        fetch,
    })
}

/// Write the bag to `out_dir`, which must be absent or empty.
///
/// Produces `bagit.txt`, the `data/` payload, `manifest-sha512.txt` sorted
/// by path with two spaces between digest and path, and `fetch.txt` when
/// there are fetch entries. All text files use LF endings and UTF-8.
pub fn write_bag(plan: &BagPlan, out_dir: &Path) -> Result<(), BagError> {
    if out_dir.exists() {
        let mut entries = fs::read_dir(out_dir).map_err(io_err(out_dir))?;
        if entries.next().is_some() {
            return Err(BagError::OutputNotEmpty(out_dir.to_path_buf()));
        }
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let bagit = out_dir.join("bagit.txt");
    fs::write(
        &bagit,
        "BagIt-Version: 1.0\nTag-File-Character-Encoding: UTF-8\n",
    )
    .map_err(io_err(&bagit))?;

    for entry in &plan.payload {
        let target = out_dir.join(entry.bag_path.split('/').collect::<PathBuf>());
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        match &entry.source {
            PayloadSource::File(source) => {
                fs::copy(source, &target).map_err(|e| BagError::UnreadableFile {
                    path: source.clone(),
                    source: e,
                })?;
            }
            PayloadSource::Inline(bytes) => {
                fs::write(&target, bytes).map_err(io_err(&target))?;
            }
        }
    }

    let mut by_path: Vec<(&str, &str)> = plan
        .payload
        .iter()
        .map(|e| (e.bag_path.as_str(), e.sha512_hex.as_str()))
        .collect();
    by_path.sort();
    let manifest_text: String = by_path
        .iter()
        .map(|(path, digest)| format!("{digest}  {path}\n"))
        .collect();
    let manifest = out_dir.join("manifest-sha512.txt");
    fs::write(&manifest, manifest_text).map_err(io_err(&manifest))?;

    if !plan.fetch.is_empty() {
        let fetch_lines: String = plan
            .fetch
            .iter()
            .map(|f| {
                let length = match f.length {
                    Some(n) => n.to_string(),
                    None => "-".to_string(),
                };
                format!("{} {} {}\n", f.uri, length, f.bag_path)
            })
            .collect();
        let fetch = out_dir.join("fetch.txt");
        fs::write(&fetch, fetch_lines).map_err(io_err(&fetch))?;
    }

    Ok(())
}

/// One discrepancy found while verifying a bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BagMismatch {
    /// The payload file exists but its digest differs from the manifest.
    DigestMismatch {
        path: String,
        expected: String,
        actual: String,
    },
    /// Listed in the manifest but absent from the payload.
    MissingPayload { path: String },
    /// Present in the payload but not listed in the manifest.
    UnlistedPayload { path: String },
}

impl std::fmt::Display for BagMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BagMismatch::DigestMismatch { path, .. } => {
                write!(f, "digest mismatch: {path}")
            }
            BagMismatch::MissingPayload { path } => {
                write!(f, "missing payload file: {path}")
            }
            BagMismatch::UnlistedPayload { path } => {
                write!(f, "payload file not in manifest: {path}")
            }
        }
    }
}

/// Outcome of [`verify_bag`]: empty means the bag is intact.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub mismatches: Vec<BagMismatch>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn walk_payload(dir: &Path, prefix: &str, found: &mut Vec<String>) -> io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let path = format!("{prefix}/{name}");
        if entry.file_type()?.is_dir() {
            walk_payload(&entry.path(), &path, found)?;
        } else {
            found.push(path);
        }
    }
    Ok(())
}

/// Recompute the digest of every payload file and compare against the
/// manifest, reporting missing files, digest mismatches, and payload files
/// the manifest does not list.
pub fn verify_bag(bag_dir: &Path) -> Result<VerifyReport, BagError> {
    if !bag_dir.join("bagit.txt").is_file() {
        return Err(BagError::NotABag(bag_dir.to_path_buf()));
    }
    let manifest_path = bag_dir.join("manifest-sha512.txt");
    if !manifest_path.is_file() {
        return Err(BagError::NotABag(bag_dir.to_path_buf()));
    }
    let manifest = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;

    let mut report = VerifyReport::default();
    let mut listed: BTreeSet<String> = BTreeSet::new();
    for (index, line) in manifest.lines().enumerate() {
        let (digest, path) = line
            .split_once("  ")
            .ok_or(BagError::ManifestFormat { line: index + 1 })?;
        listed.insert(path.to_string());
        let file = bag_dir.join(path.split('/').collect::<PathBuf>());
        match sha512_file(&file) {
            Ok(actual) => {
                if actual != digest {
                    report.mismatches.push(BagMismatch::DigestMismatch {
                        path: path.to_string(),
                        expected: digest.to_string(),
                        actual,
                    });
                }
            }
            Err(_) => report.mismatches.push(BagMismatch::MissingPayload {
                path: path.to_string(),
            }),
        }
    }

    let data_dir = bag_dir.join("data");
    if data_dir.is_dir() {
        let mut found = Vec::new();
        walk_payload(&data_dir, "data", &mut found).map_err(io_err(&data_dir))?;
        found.sort();
        for path in found {
            if !listed.contains(&path) {
                report
                    .mismatches
                    .push(BagMismatch::UnlistedPayload { path });
            }
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::assemble;
    use crate::lexer::scan;
    use crate::macros::collect_macros;

    fn parse(name: &str, text: &str) -> Document {
        let (statements, _) = scan(text);
        let (table, remaining, _) = collect_macros(statements);
        assemble(name, remaining, table).0
    }

    #[test]
    fn code_ref_block_extracts_to_a_ref_entry() {
        let doc = parse(
            "repo",
            "@Code_Ref MEDFORD Source Repo\n\
             @Code_Ref-Version 1.0\n\
             @Code_Ref-URI https://github.com/TuftsBCB/medford\n\
             @Code_Ref-Type GitHub\n",
        );
        let (entries, diagnostics) = extract_provenance(&doc);
        assert!(diagnostics.is_empty());
        assert_eq!(
            entries,
            vec![ProvenanceEntry {
                kind: ProvenanceKind::Code,
                role: ProvenanceRole::Ref,
                desc: "MEDFORD Source Repo".to_string(),
                locator: "https://github.com/TuftsBCB/medford".to_string(),
                head_line: 1,
            }]
        );
    }

    #[test]
    fn document_without_provenance_extracts_nothing() {
        let doc = parse("plain", "@Software R\n@Software-Version 4.0.4\n");
        let (entries, diagnostics) = extract_provenance(&doc);
        assert!(entries.is_empty());
        assert!(diagnostics.is_empty());
    }

    #[test]
    fn data_primary_uses_its_path_minor() {
        let doc = parse(
            "reads",
            "@Data_Primary raw reads\n@Data_Primary-Path reads/r1.fastq\n",
        );
        let (entries, _) = extract_provenance(&doc);
        assert_eq!(entries[0].role, ProvenanceRole::Primary);
        assert_eq!(entries[0].locator, "reads/r1.fastq");
    }

    #[test]
    fn provenance_without_locator_is_missing_data() {
        let doc = parse("bad", "@Data_Primary raw reads\n");
        let (entries, diagnostics) = extract_provenance(&doc);
        assert!(entries.is_empty());
        assert_eq!(diagnostics.len(), 1);
        assert_eq!(diagnostics[0].message, "missing required field Path");
    }

    #[test]
    fn empty_provenance_plans_an_mfd_only_bag() {
        let doc = parse("study", "@Software R\n");
        let plan = plan_bag(&doc, Path::new(".")).unwrap();
        assert_eq!(plan.payload.len(), 1);
        assert_eq!(plan.mfd_bag_path, "data/study.mfd");
        assert!(plan.fetch.is_empty());
    }

    #[test]
    fn copy_file_is_digested_into_the_payload() {
        let dir = tempfile::tempdir().unwrap();
        let scripts = dir.path().join("scripts");
        fs::create_dir_all(&scripts).unwrap();
        fs::write(scripts.join("filter.sh"), b"#!/bin/sh\nexit 0\n").unwrap();
        let doc = parse(
            "study",
            "@Code_Copy read filter\n@Code_Copy-Path scripts/filter.sh\n",
        );
        let plan = plan_bag(&doc, dir.path()).unwrap();
        assert_eq!(plan.payload.len(), 2);
        let entry = &plan.payload[1];
        assert_eq!(entry.bag_path, "data/scripts/filter.sh");
        assert_eq!(entry.sha512_hex, sha512_hex(b"#!/bin/sh\nexit 0\n"));
    }

    #[test]
    fn refs_go_to_fetch_not_payload() {
        let doc = parse(
            "index",
            "@Data_Ref public reads\n@Data_Ref-URI https://example.org/seq/read-archive\n",
        );
        let plan = plan_bag(&doc, Path::new(".")).unwrap();
        assert_eq!(plan.payload.len(), 1);
        assert_eq!(plan.fetch.len(), 1);
        assert_eq!(plan.fetch[0].bag_path, "data/ref/read-archive");
    }

    #[test]
    fn colliding_fetch_names_are_disambiguated() {
        let doc = parse(
            "index",
            "@Data_Ref a\n@Data_Ref-URI https://a.org/x/data\n\
             @Data_Ref b\n@Data_Ref-URI https://b.org/y/data\n",
        );
        let plan = plan_bag(&doc, Path::new(".")).unwrap();
        assert_eq!(plan.fetch[0].bag_path, "data/ref/data");
        assert_eq!(plan.fetch[1].bag_path, "data/ref/data-2");
    }

    #[test]
    fn escaping_paths_are_rejected() {
        for bad in ["../secrets.txt", "/etc/passwd", "a/../../b"] {
            let doc = parse("escape", &format!("@Data_Copy d\n@Data_Copy-Path {bad}\n"));
            assert!(matches!(
                plan_bag(&doc, Path::new(".")),
                Err(BagError::PathEscape(_))
            ));
        }
    }

    #[test]
    fn duplicate_payload_paths_are_an_error() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("f.txt"), b"x").unwrap();
        let doc = parse(
            "dup",
            "@Data_Copy one\n@Data_Copy-Path f.txt\n@Data_Copy two\n@Data_Copy-Path ./f.txt\n",
        );
        assert!(matches!(
            plan_bag(&doc, dir.path()),
            Err(BagError::DuplicateBagPath(_))
        ));
    }

    #[test]
    fn minimal_bag_layout_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bag");
        let doc = parse("study", "@Software R\n");
        let plan = plan_bag(&doc, dir.path()).unwrap();
        write_bag(&plan, &out).unwrap();
        assert_eq!(
            fs::read_to_string(out.join("bagit.txt")).unwrap(),
            "BagIt-Version: 1.0\nTag-File-Character-Encoding: UTF-8\n"
        );
        let manifest = fs::read_to_string(out.join("manifest-sha512.txt")).unwrap();
        assert_eq!(manifest.lines().count(), 1);
        assert!(manifest.ends_with("data/study.mfd\n"));
        assert!(out.join("data/study.mfd").is_file());
        assert!(!out.join("fetch.txt").exists());
        assert!(verify_bag(&out).unwrap().is_ok());
    }

    #[test]
    fn one_ref_writes_one_fetch_line() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bag");
        let doc = parse(
            "index",
            "@Code_Ref repo\n@Code_Ref-URI https://github.com/TuftsBCB/medford\n",
        );
        let plan = plan_bag(&doc, dir.path()).unwrap();
        write_bag(&plan, &out).unwrap();
        let fetch = fs::read_to_string(out.join("fetch.txt")).unwrap();
        assert_eq!(
            fetch,
            "https://github.com/TuftsBCB/medford - data/ref/medford\n"
        );
        let manifest = fs::read_to_string(out.join("manifest-sha512.txt")).unwrap();
        assert!(!manifest.contains("ref/"));
    }

    #[test]
    fn write_refuses_nonempty_output() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bag");
        fs::create_dir_all(&out).unwrap();
        fs::write(out.join("keep.txt"), b"precious").unwrap();
        let doc = parse("study", "@Software R\n");
        let plan = plan_bag(&doc, dir.path()).unwrap();
        assert!(matches!(
            write_bag(&plan, &out),
            Err(BagError::OutputNotEmpty(_))
        ));
        assert_eq!(fs::read(out.join("keep.txt")).unwrap(), b"precious");
    }

    #[test]
    fn flipped_byte_is_exactly_one_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("data.bin"), b"original contents").unwrap();
        let out = dir.path().join("bag");
        let doc = parse("study", "@Data_Copy d\n@Data_Copy-Path data.bin\n");
        let plan = plan_bag(&doc, dir.path()).unwrap();
        write_bag(&plan, &out).unwrap();
        fs::write(out.join("data/data.bin"), b"originaX contents").unwrap();
        let report = verify_bag(&out).unwrap();
        assert_eq!(report.mismatches.len(), 1);
        assert!(matches!(
            &report.mismatches[0],
            BagMismatch::DigestMismatch { path, .. } if path == "data/data.bin"
        ));
    }

    #[test]
    fn deleted_manifest_entry_reports_unlisted_payload() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("data.bin"), b"contents").unwrap();
        let out = dir.path().join("bag");
        let doc = parse("study", "@Data_Copy d\n@Data_Copy-Path data.bin\n");
        let plan = plan_bag(&doc, dir.path()).unwrap();
        write_bag(&plan, &out).unwrap();
        let manifest_path = out.join("manifest-sha512.txt");
        let manifest = fs::read_to_string(&manifest_path).unwrap();
        let kept: String = manifest
            .lines()
            .filter(|l| !l.ends_with("data/data.bin"))
            .map(|l| format!("{l}\n"))
            .collect();
        fs::write(&manifest_path, kept).unwrap();
        let report = verify_bag(&out).unwrap();
        assert_eq!(
            report.mismatches,
            vec![BagMismatch::UnlistedPayload {
                path: "data/data.bin".to_string()
            }]
        );
    }

    #[test]
    fn missing_payload_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bag");
        let doc = parse("study", "@Software R\n");
        write_bag(&plan_bag(&doc, dir.path()).unwrap(), &out).unwrap();
        fs::remove_file(out.join("data/study.mfd")).unwrap();
        let report = verify_bag(&out).unwrap();
        assert_eq!(
            report.mismatches,
            vec![BagMismatch::MissingPayload {
                path: "data/study.mfd".to_string()
            }]
        );
    }

    #[test]
    fn directory_without_bagit_txt_is_not_a_bag() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(verify_bag(dir.path()), Err(BagError::NotABag(_))));
    }

    #[test]
    fn known_answer_digests() {
        assert_eq!(
            sha512_hex(b""),
            "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce\
             47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e"
        );
        assert_eq!(
            sha512_hex(b"abc"),
            "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a\
             2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f"
        );
    }
}

//! Content validation of an assembled document against a registry.
//!
//! Every check runs; nothing fails fast. The result is an ordered list of
//! diagnostics (by line, then discovery order), and a document is valid
//! exactly when that list is empty. Field types with several accepted
//! shapes report one consolidated diagnostic per offending value, never one
//! per failed alternative.
//!
//! The individual value checkers are offline and structural: an ORCID is
//! checked for shape and ISO 7064 mod 11-2 checksum, never against the live
//! registry; an email is checked for shape, never resolved.

use crate::diagnostic::Diagnostic;
use crate::document::{Block, Document, TagPath};
use crate::schema::{FieldType, SchemaRegistry};

/// The literal placeholder that templates use to mark values that must be
/// filled in before a file can validate.
pub const TEMPLATE_TOKEN: &str = "[..]";

/// Accepts `YYYY-MM-DD`, or `YYYY-MM-DDThh:mm:ss` with optional fractional
/// seconds and optional zone offset (`Z` or `±hh:mm`). The two alternative
/// shapes are tried in order; failing both is a single failure.
pub fn check_date(value: &str) -> bool {
    let bytes = value.as_bytes();
    if bytes.len() < 10 || !check_calendar_date(&bytes[..10]) {
        return false;
    }
    if bytes.len() == 10 {
        return true;
    }
    let rest = &bytes[10..];
    if rest[0] != b'T' {
        return false;
    }
    check_time_of_day(&rest[1..])
}

fn all_digits(bytes: &[u8]) -> bool {
    !bytes.is_empty() && bytes.iter().all(u8::is_ascii_digit)
}

fn two_digits(bytes: &[u8]) -> u32 {
    (u32::from(bytes[0] - b'0')) * 10 + u32::from(bytes[1] - b'0')
}

fn check_calendar_date(bytes: &[u8]) -> bool {
    if bytes.len() != 10 || bytes[4] != b'-' || bytes[7] != b'-' {
        return false;
    }
    if !all_digits(&bytes[..4]) || !all_digits(&bytes[5..7]) || !all_digits(&bytes[8..10]) {
        return false;
    }
    let year: u32 = std::str::from_utf8(&bytes[..4]).unwrap().parse().unwrap();
    let month = two_digits(&bytes[5..7]);
    let day = two_digits(&bytes[8..10]);
    if !(1..=12).contains(&month) {
        return false;
    }
    let leap = year.is_multiple_of(4) && (!year.is_multiple_of(100) || year.is_multiple_of(400));
    let days_in_month = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        _ => {
            if leap {
                29
            } else {
                28
            }
        }
    };
    (1..=days_in_month).contains(&day)
}

fn check_time_of_day(bytes: &[u8]) -> bool {
    if bytes.len() < 8 || bytes[2] != b':' || bytes[5] != b':' {
        return false;
    }
    if !all_digits(&bytes[..2]) || !all_digits(&bytes[3..5]) || !all_digits(&bytes[6..8]) {
        return false;
    }
    if two_digits(&bytes[..2]) > 23
        || two_digits(&bytes[3..5]) > 59
        || two_digits(&bytes[6..8]) > 59
    {
        return false;
    }
    let mut rest = &bytes[8..];
    if rest.first() == Some(&b'.') {
        let frac_len = rest[1..].iter().take_while(|b| b.is_ascii_digit()).count();
        if frac_len == 0 {
            return false;
        }
        rest = &rest[1 + frac_len..];
    }
    match rest {
        [] => true,
        [b'Z'] => true,
        [sign, h1, h2, b':', m1, m2] if *sign == b'+' || *sign == b'-' => {
            all_digits(&[*h1, *h2])
                && all_digits(&[*m1, *m2])
                && two_digits(&[*h1, *h2]) <= 23
                && two_digits(&[*m1, *m2]) <= 59
        }
        _ => false,
    }
}

/// ORCID identifier: `DDDD-DDDD-DDDD-DDDC` where the final character is a
/// digit or `X`, and the ISO 7064 mod 11-2 check digit computed over the 15
/// base digits equals it.
pub fn check_orcid(value: &str) -> bool {
    let bytes = value.as_bytes();
    if bytes.len() != 19 || bytes[4] != b'-' || bytes[9] != b'-' || bytes[14] != b'-' {
        return false;
    }
    let mut total: u32 = 0;
    let mut seen = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if i == 4 || i == 9 || i == 14 {
            continue;
        }
        seen += 1;
        if seen == 16 {
            // Final position: the check character itself.
            let expected = (12 - total % 11) % 11;
            return match b {
                b'X' => expected == 10,
                b'0'..=b'9' => u32::from(b - b'0') == expected,
                _ => false,
            };
        }
        if !b.is_ascii_digit() {
            return false;
        }
        total = (total + u32::from(b - b'0')) * 2;
    }
    false
}

/// Structural email check: exactly one `@`, a nonempty local part, and a
/// domain containing at least one `.` with nonempty labels.
pub fn check_email(value: &str) -> bool {
    let mut parts = value.split('@');
    let (local, domain) = match (parts.next(), parts.next(), parts.next()) {
        (Some(local), Some(domain), None) => (local, domain),
        _ => return false,
    };
    if local.is_empty() {
        return false;
    }
    domain.contains('.') && domain.split('.').all(|label| !label.is_empty())
}

/// Plain decimal number: optional sign, digits, optional fractional part.
/// No exponents, no surrounding whitespace.
fn parse_decimal(value: &str) -> Option<f64> {
    let rest = value.strip_prefix(['+', '-']).unwrap_or(value);
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (rest, None),
    };
    if !all_digits(int_part.as_bytes()) {
        return None;
    }
    if let Some(frac) = frac_part {
        if !all_digits(frac.as_bytes()) {
            return None;
        }
    }
    value.parse().ok()
}

/// Decimal degrees in [-90, 90].
pub fn check_latitude(value: &str) -> bool {
    matches!(parse_decimal(value), Some(v) if (-90.0..=90.0).contains(&v))
}

/// Decimal degrees in [-180, 180].
pub fn check_longitude(value: &str) -> bool {
    matches!(parse_decimal(value), Some(v) if (-180.0..=180.0).contains(&v))
}

/// A URI in the loose sense used for `_Ref` locators: a scheme followed by
/// a colon and a nonempty remainder. Covers URLs and DOIs alike.
pub fn check_uri(value: &str) -> bool {
    match value.split_once(':') {
        Some((scheme, rest)) => {
            !rest.is_empty()
                && scheme
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        None => false,
    }
}

/// A relative path with no `..` segments, suitable for resolution under a
/// bag's base directory.
pub fn check_local_path(value: &str) -> bool {
    if value.is_empty() || value.starts_with('/') || value.starts_with('\\') {
        return false;
    }
    value
        .split(['/', '\\'])
        .all(|segment| segment != ".." && !segment.contains('\0'))
}

fn check_value_type(field_type: FieldType, value: &str) -> bool {
    match field_type {
        FieldType::FreeText => true,
        FieldType::DateOrDateTime => check_date(value),
        FieldType::Orcid => check_orcid(value),
        FieldType::Email => check_email(value),
        FieldType::Latitude => check_latitude(value),
        FieldType::Longitude => check_longitude(value),
        FieldType::Uri => check_uri(value),
        FieldType::LocalPath => check_local_path(value),
    }
}

fn type_failure_message(field_type: FieldType) -> &'static str {
    match field_type {
        FieldType::FreeText => "free text",
        FieldType::DateOrDateTime => "invalid date format",
        FieldType::Orcid => "invalid ORCID",
        FieldType::Email => "invalid email address",
        FieldType::Latitude => "invalid latitude",
        FieldType::Longitude => "invalid longitude",
        FieldType::Uri => "invalid URI",
        FieldType::LocalPath => "invalid local path",
    }
}

/// Placeholder detection, then a type check. At most one diagnostic is
/// emitted per value: a value still holding the template token is never
/// additionally reported as the wrong type.
fn check_one_value(
    registry: &SchemaRegistry,
    major: &str,
    minor: &str,
    value: &str,
    line: usize,
    diagnostics: &mut Vec<Diagnostic>,
) {
    if value.contains(TEMPLATE_TOKEN) {
        diagnostics.push(Diagnostic::validation(
            line,
            TagPath::minor(major, minor),
            format!("template placeholder {TEMPLATE_TOKEN} must be completed before validation"),
        ));
        return;
    }
    let spec = registry.field_spec(major, minor);
    if !check_value_type(spec.field_type, value) {
        diagnostics.push(Diagnostic::validation(
            line,
            TagPath::minor(major, minor),
            type_failure_message(spec.field_type),
        ));
    }
}

fn check_block(block: &Block, registry: &SchemaRegistry, diagnostics: &mut Vec<Diagnostic>) {
    let major = &block.major;

    // Head value; an empty desc is a requiredness concern, not a type one.
    if !block.desc.is_empty() {
        check_one_value(
            registry,
            major,
            "desc",
            &block.desc,
            block.head_line,
            diagnostics,
        );
    }

    for attribute in &block.attributes {
        check_one_value(
            registry,
            major,
            &attribute.minor,
            &attribute.value,
            attribute.line,
            diagnostics,
        );
    }

    // Required fields, anchored at the block head.
    if let Some(schema) = registry.lookup(major) {
        for (name, spec) in &schema.fields {
            if !spec.required {
                continue;
            }
            let present = if name == "desc" {
                !block.desc.is_empty()
            } else {
                block.attributes.iter().any(|a| &a.minor == name)
            };
            if !present {
                diagnostics.push(Diagnostic::missing_data(
                    block.head_line,
                    TagPath::major(major),
                    format!("missing required field {name}"),
                ));
            }
        }
    }

    // Conditional rules, anchored at the block head.
    for rule in registry.rules_for(major) {
        let triggered = block
            .attributes
            .iter()
            .any(|a| a.minor == rule.when_minor && rule.when_value.matches(&a.value));
        if !triggered {
            continue;
        }
        let satisfied = block.attributes.iter().any(|a| {
            a.minor == rule.require_minor && check_value_type(rule.require_type, &a.value)
        });
        if !satisfied {
            diagnostics.push(Diagnostic::missing_data(
                block.head_line,
                TagPath::major(major),
                rule.message.clone(),
            ));
        }
    }

    // Non-repeatable fields used more than once: reported at the second
    // occurrence, once per field.
    let mut seen: Vec<&str> = Vec::new();
    let mut flagged: Vec<&str> = Vec::new();
    for attribute in &block.attributes {
        let minor = attribute.minor.as_str();
        if seen.contains(&minor) {
            if !flagged.contains(&minor) && !registry.field_spec(major, minor).repeatable {
                flagged.push(minor);
                diagnostics.push(Diagnostic::syntax(
                    attribute.line,
                    TagPath::minor(major, minor),
                    "may only be provided once per block",
                ));
            }
        } else {
            seen.push(minor);
        }
    }
}

/// Run every check over the document. Diagnostics come back sorted by line,
/// then by discovery order within a line.
pub fn validate_document(document: &Document, registry: &SchemaRegistry) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    for block in &document.blocks {
        check_block(block, registry, &mut diagnostics);
    }
    diagnostics.sort_by_key(|d| d.line);
    diagnostics
}

/// Report every value (head or attribute) still containing the literal
/// template token `[..]`.
pub fn detect_template_tokens(document: &Document) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    for block in &document.blocks {
        if block.desc.contains(TEMPLATE_TOKEN) {
            diagnostics.push(Diagnostic::validation(
                block.head_line,
                TagPath::minor(&block.major, "desc"),
                format!(
                    "template placeholder {TEMPLATE_TOKEN} must be completed before validation"
                ),
            ));
        }
        for attribute in &block.attributes {
            if attribute.value.contains(TEMPLATE_TOKEN) {
                diagnostics.push(Diagnostic::validation(
                    attribute.line,
                    TagPath::minor(&block.major, &attribute.minor),
                    format!(
                        "template placeholder {TEMPLATE_TOKEN} must be completed before validation"
                    ),
                ));
            }
        }
    }
    diagnostics.sort_by_key(|d| d.line);
    diagnostics
}

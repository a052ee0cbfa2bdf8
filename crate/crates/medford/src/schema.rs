//! Data-driven tag vocabulary: field types, requiredness, and rules.
//!
//! The registry is the single place where the language's checked vocabulary
//! lives; parsing never consults it. Lookups are total: an unknown major
//! behaves as a schema whose every field is free text, and an unknown minor
//! on a known major is free text too, so novel tags are never an error.
//! Any minor named `Unstructured`, or whose name ends in `-Unstructured`,
//! is forced to free text regardless of what a schema says.
//!
//! The built-in vocabulary can be extended or overridden through a small
//! line-oriented overlay file (see [`SchemaRegistry::overlay_text`]), so
//! the vocabulary can be edited in any text editor without touching code.

use std::collections::BTreeMap;

use thiserror::Error;

/// The checked value types a field can have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldType {
    FreeText,
    DateOrDateTime,
    Orcid,
    Email,
    Latitude,
    Longitude,
    Uri,
    LocalPath,
}

impl FieldType {
    fn parse(name: &str) -> Option<FieldType> {
        match name.to_ascii_lowercase().as_str() {
            "freetext" => Some(FieldType::FreeText),
            "dateordatetime" => Some(FieldType::DateOrDateTime),
            "orcid" => Some(FieldType::Orcid),
            "email" => Some(FieldType::Email),
            "latitude" => Some(FieldType::Latitude),
            "longitude" => Some(FieldType::Longitude),
            "uri" => Some(FieldType::Uri),
            "localpath" => Some(FieldType::LocalPath),
            _ => None,
        }
    }
}

/// How one minor (or the head `desc`) of a major is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub field_type: FieldType,
    pub required: bool,
    pub repeatable: bool,
}

impl Default for FieldSpec {
    /// What fields nobody declared get: free text, optional, repeatable.
    fn default() -> Self {
        FieldSpec {
            field_type: FieldType::FreeText,
            required: false,
            repeatable: true,
        }
    }
}

/// Predicate over an attribute value in a conditional rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuePredicate {
    Equals(String),
}

impl ValuePredicate {
    pub fn matches(&self, value: &str) -> bool {
        match self {
            ValuePredicate::Equals(expected) => value == expected,
        }
    }
}

/// "When minor X has a matching value, minor Y must validate as type T."
///
/// `message` is rendered verbatim when the rule is violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalRule {
    pub when_minor: String,
    pub when_value: ValuePredicate,
    pub require_minor: String,
    pub require_type: FieldType,
    pub message: String,
}

/// The vocabulary entry for one major tag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TagSchema {
    pub fields: BTreeMap<String, FieldSpec>,
    pub rules: Vec<ConditionalRule>,
}

/// A malformed line in a schema overlay file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema line {line}: {message}")]
pub struct SchemaFormatError {
    pub line: usize,
    pub message: String,
}

/// The full vocabulary: major name to schema.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchemaRegistry {
    schemas: BTreeMap<String, TagSchema>,
}

fn field(field_type: FieldType) -> FieldSpec {
    FieldSpec {
        field_type,
        required: false,
        repeatable: true,
    }
}

fn required(field_type: FieldType) -> FieldSpec {
    FieldSpec {
        required: true,
        ..field(field_type)
    }
}

fn once(field_type: FieldType) -> FieldSpec {
    FieldSpec {
        repeatable: false,
        ..field(field_type)
    }
}

fn required_once(field_type: FieldType) -> FieldSpec {
    FieldSpec {
        required: true,
        repeatable: false,
        ..field(field_type)
    }
}

/// The vocabulary this tool ships with.
///
/// It covers the descriptive majors (`Contributor`, `Software`, `Method`,
/// `Species`, `Date`, `time`, `Image`, `Taxonomy`, `Region`, `Expedition`,
/// `Freeform`) and the nine provenance majors `Data`/`Code`/`Paper` crossed
/// with `Primary`/`Copy`/`Ref`. `_Primary` and `_Copy` carry a required
/// local `Path`; `_Ref` carries a required `URI`.
pub fn builtin_vocabulary() -> SchemaRegistry {
    use FieldType::*;

    let mut registry = SchemaRegistry::default();

    let contributor = registry.schema_mut("Contributor");
    contributor.fields.insert("desc".into(), required(FreeText));
    contributor.fields.insert("ORCID".into(), once(Orcid));
    contributor.fields.insert("Email".into(), field(Email));
    contributor.fields.insert("Role".into(), field(FreeText));
    contributor
        .fields
        .insert("Association".into(), field(FreeText));
    contributor.rules.push(ConditionalRule {
        when_minor: "Role".into(),
        when_value: ValuePredicate::Equals("Corresponding Author".into()),
        require_minor: "Email".into(),
        require_type: Email,
        message: "Corresponding Authors must have a provided validated email".into(),
    });

    let software = registry.schema_mut("Software");
    software.fields.insert("desc".into(), required(FreeText));
    software.fields.insert("Version".into(), once(FreeText));
    software.fields.insert("Notes".into(), field(FreeText));
    software.fields.insert("Note".into(), field(FreeText));

    let method = registry.schema_mut("Method");
    method.fields.insert("desc".into(), required(FreeText));
    method.fields.insert("Type".into(), field(FreeText));
    method.fields.insert("Company".into(), field(FreeText));
    method.fields.insert("Sample".into(), field(FreeText));
    method.fields.insert("Note".into(), field(FreeText));

    let species = registry.schema_mut("Species");
    species.fields.insert("desc".into(), required(FreeText));
    species.fields.insert("Loc".into(), field(FreeText));
    species
        .fields
        .insert("ReefCollection".into(), field(FreeText));
    species.fields.insert("Cultured".into(), field(FreeText));
    species
        .fields
        .insert("CultureCollection".into(), field(FreeText));

    let date = registry.schema_mut("Date");
    date.fields.insert("desc".into(), required(DateOrDateTime));
    date.fields.insert("Note".into(), required(FreeText));

    let time = registry.schema_mut("time");
    time.fields.insert("desc".into(), required(DateOrDateTime));
    time.fields.insert("Note".into(), field(FreeText));

    let image = registry.schema_mut("Image");
    image.fields.insert("desc".into(), required(FreeText));
    image.fields.insert("Date".into(), field(DateOrDateTime));
    image.fields.insert("Site".into(), field(FreeText));
    image.fields.insert("Habitat".into(), field(FreeText));
    image.fields.insert("Pole".into(), field(FreeText));
    image.fields.insert("Quadrant".into(), field(FreeText));
    image.fields.insert("Coral".into(), field(FreeText));
    image.fields.insert("Coverage".into(), field(FreeText));

    let taxonomy = registry.schema_mut("Taxonomy");
    taxonomy.fields.insert("desc".into(), required(FreeText));
    taxonomy.fields.insert("Type".into(), field(FreeText));
    taxonomy.fields.insert("Parent".into(), field(FreeText));

    let region = registry.schema_mut("Region");
    region.fields.insert("desc".into(), required(FreeText));
    region
        .fields
        .insert("NorthernCoord".into(), field(Latitude));
    region
        .fields
        .insert("SouthernCoord".into(), field(Latitude));
    region
        .fields
        .insert("EasternCoord".into(), field(Longitude));
    region
        .fields
        .insert("WesternCoord".into(), field(Longitude));

    let expedition = registry.schema_mut("Expedition");
    expedition.fields.insert("desc".into(), required(FreeText));
    expedition.fields.insert("ShipName".into(), field(FreeText));
    expedition.fields.insert("CruiseID".into(), field(FreeText));

    registry
        .schema_mut("Freeform")
        .fields
        .insert("desc".into(), field(FreeText));

    for kind in ["Data", "Code", "Paper"] {
        for role in ["Primary", "Copy", "Ref"] {
            let major = format!("{kind}_{role}");
            let schema = registry.schema_mut(&major);
            schema.fields.insert("desc".into(), required(FreeText));
            if role == "Ref" {
                schema.fields.insert("URI".into(), required_once(Uri));
            } else {
                schema
                    .fields
                    .insert("Path".into(), required_once(LocalPath));
            }
        }
    }

    registry
}

/// Load a registry: the built-in vocabulary overlaid with user entries.
pub fn load_schema(definition_text: &str) -> Result<SchemaRegistry, SchemaFormatError> {
    let mut registry = builtin_vocabulary();
    registry.overlay_text(definition_text)?;
    Ok(registry)
}

impl SchemaRegistry {
    /// A registry with no entries at all; every lookup falls back to the
    /// permissive default.
    pub fn empty() -> Self {
        SchemaRegistry::default()
    }

    /// The schema for `major`, if one is declared.
    pub fn lookup(&self, major: &str) -> Option<&TagSchema> {
        self.schemas.get(major)
    }

    fn schema_mut(&mut self, major: &str) -> &mut TagSchema {
        self.schemas.entry(major.to_string()).or_default()
    }

    /// Total field lookup. Unknown majors and undeclared minors get the
    /// permissive default; `Unstructured` minors are forced to free text.
    pub fn field_spec(&self, major: &str, minor: &str) -> FieldSpec {
        let declared = self
            .schemas
            .get(major)
            .and_then(|schema| schema.fields.get(minor))
            .copied()
            .unwrap_or_default();
        if minor == "Unstructured" || minor.ends_with("-Unstructured") {
            FieldSpec {
                field_type: FieldType::FreeText,
                ..declared
            }
        } else {
            declared
        }
    }

    /// Conditional rules declared for `major` (empty for unknown majors).
    pub fn rules_for(&self, major: &str) -> &[ConditionalRule] {
        self.schemas
            .get(major)
            .map(|schema| schema.rules.as_slice())
            .unwrap_or(&[])
    }

    /// Apply a schema overlay in the line-oriented file format:
    ///
    /// ```text
    /// # comment
    /// major.minor = type[,required][,repeatable]
    /// ```
    ///
    /// Types are the [`FieldType`] names, matched case-insensitively. An
    /// entry declared here replaces any built-in entry for the same field;
    /// an explicitly declared field defaults to optional and
    /// non-repeatable unless flagged.
    pub fn overlay_text(&mut self, text: &str) -> Result<(), SchemaFormatError> {
        for (index, raw_line) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| SchemaFormatError {
                line: line_no,
                message: message.to_string(),
            };
            let (name, spec_text) = line
                .split_once('=')
                .ok_or_else(|| err("expected `major.minor = type[,required][,repeatable]`"))?;
            let (major, minor) = name
                .trim()
                .split_once('.')
                .ok_or_else(|| err("field name must be `major.minor`"))?;
            let (major, minor) = (major.trim(), minor.trim());
            if major.is_empty() || minor.is_empty() {
                return Err(err("major and minor names must be nonempty"));
            }
            let mut parts = spec_text.split(',').map(str::trim);
            let type_name = parts.next().unwrap_or("");
            let field_type = FieldType::parse(type_name)
                .ok_or_else(|| err(&format!("unknown field type `{type_name}`")))?;
            let mut spec = FieldSpec {
                field_type,
                required: false,
                repeatable: false,
            };
            for flag in parts {
                match flag {
                    "required" => spec.required = true,
                    "repeatable" => spec.repeatable = true,
                    other => return Err(err(&format!("unknown flag `{other}`"))),
                }
            }
            self.schema_mut(major)
                .fields
                .insert(minor.to_string(), spec);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_contributor_fields_and_rule() {
        let registry = builtin_vocabulary();
        let schema = registry.lookup("Contributor").unwrap();
        assert_eq!(schema.fields["ORCID"].field_type, FieldType::Orcid);
        assert_eq!(schema.fields["Email"].field_type, FieldType::Email);
        let role = schema.fields["Role"];
        assert_eq!(role.field_type, FieldType::FreeText);
        assert!(role.repeatable);
        assert_eq!(schema.rules.len(), 1);
        assert_eq!(schema.rules[0].require_minor, "Email");
    }

    #[test]
    fn builtin_date_requires_desc_and_note() {
        let registry = builtin_vocabulary();
        let date = registry.lookup("Date").unwrap();
        let desc = date.fields["desc"];
        assert_eq!(desc.field_type, FieldType::DateOrDateTime);
        assert!(desc.required);
        assert!(date.fields["Note"].required);
    }

    #[test]
    fn builtin_region_coords_are_latitudes() {
        let registry = builtin_vocabulary();
        let spec = registry.field_spec("Region", "NorthernCoord");
        assert_eq!(spec.field_type, FieldType::Latitude);
        assert_eq!(
            registry.field_spec("Region", "SouthernCoord").field_type,
            FieldType::Latitude
        );
    }

    #[test]
    fn builtin_ref_majors_carry_uri_not_path() {
        let registry = builtin_vocabulary();
        let data_ref = registry.lookup("Data_Ref").unwrap();
        let uri = data_ref.fields["URI"];
        assert_eq!(uri.field_type, FieldType::Uri);
        assert!(uri.required);
        assert!(!data_ref.fields.contains_key("Path"));
        let data_primary = registry.lookup("Data_Primary").unwrap();
        assert!(data_primary.fields["Path"].required);
        assert!(!data_primary.fields.contains_key("URI"));
    }

    #[test]
    fn unknown_major_is_all_free_text() {
        let registry = builtin_vocabulary();
        assert!(registry.lookup("NeverSeenMajor").is_none());
        for minor in ["desc", "Anything", "X-Y-Z"] {
            let spec = registry.field_spec("NeverSeenMajor", minor);
            assert_eq!(spec.field_type, FieldType::FreeText);
            assert!(!spec.required);
        }
        assert!(registry.rules_for("NeverSeenMajor").is_empty());
    }

    #[test]
    fn unstructured_minors_are_forced_to_free_text() {
        let mut registry = builtin_vocabulary();
        assert_eq!(
            registry.field_spec("Date", "Unstructured").field_type,
            FieldType::FreeText
        );
        // Even an explicit declaration cannot type an Unstructured minor.
        registry
            .overlay_text("Image.Date-Unstructured = DateOrDateTime\n")
            .unwrap();
        assert_eq!(
            registry.field_spec("Image", "Date-Unstructured").field_type,
            FieldType::FreeText
        );
    }

    #[test]
    fn overlay_wins_over_builtin() {
        let registry = load_schema("Image.Coverage = FreeText,required\n").unwrap();
        let spec = registry.field_spec("Image", "Coverage");
        assert_eq!(spec.field_type, FieldType::FreeText);
        assert!(spec.required);
        assert!(
            !builtin_vocabulary()
                .field_spec("Image", "Coverage")
                .required
        );
    }

    #[test]
    fn overlay_parses_comments_and_flags() {
        let text = "# station vocabulary\n\
                    Station.Depth = latitude   # reused numeric check\n\
                    Station.Name = FreeText, required, repeatable\n";
        let registry = load_schema(text).unwrap();
        assert_eq!(
            registry.field_spec("Station", "Depth").field_type,
            FieldType::Latitude
        );
        let name = registry.field_spec("Station", "Name");
        assert!(name.required && name.repeatable);
    }

    #[test]
    fn overlay_is_associative() {
        let a = "X.One = Email\nX.Two = Uri\n";
        let b = "X.One = Latitude,required\nY.Z = Orcid\n";
        let mut stepwise = builtin_vocabulary();
        stepwise.overlay_text(a).unwrap();
        stepwise.overlay_text(b).unwrap();
        let merged = load_schema(&format!("{a}{b}")).unwrap();
        assert_eq!(stepwise, merged);
    }

    #[test]
    fn overlay_errors_carry_line_numbers() {
        let err = load_schema("Image.Coverage = FreeText\nbogus line\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = load_schema("Image.Coverage = NoSuchType\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("NoSuchType"));
        let err = load_schema("ImageCoverage = FreeText\n").unwrap_err();
        assert!(err.message.contains("major.minor"));
    }
}

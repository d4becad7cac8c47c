//! The in-memory form of a `paper.json` document and its lossless JSON
//! round-trip.
//!
//! Parsing is deliberately lenient: the only hard requirements are valid
//! UTF-8 and a well-formed top-level JSON object. Known fields whose value
//! does not match the expected shape are kept verbatim in the `extras` map
//! instead of raising an error, so a malformed document still round-trips
//! byte-losslessly and [`crate::schema::validate`] can report the precise
//! problem against the raw JSON tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::canonical::{canonical_json_bytes, sort_keys};
use crate::id::{self, ItemKind};

/// The required top-level fields, in canonical serialization order.
pub const REQUIRED_FIELDS: [&str; 9] = [
    "id",
    "title",
    "version",
    "status",
    "authors",
    "abstract",
    "claims",
    "does_not_claim",
    "reproducibility",
];

/// One author entry. Only `name` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Author {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affiliation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identifier_url: Option<String>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A single claim: a stable `C<n>` ID plus a natural-language statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Vec<Evidence>>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// Evidence attached to a claim: a description plus an optional source
/// pointer and an optional free-form value (a score, a table, anything).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A defined term with a stable `D<n>` ID.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Definition {
    pub id: String,
    pub term: String,
    pub definition: String,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A dual-form theorem: natural language plus a structured notation block
/// readable without rendering markup (`formal` must not contain backslash
/// macros).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem {
    pub id: String,
    pub natural_language: String,
    pub formal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_sketch: Option<String>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A follow-up work item with a stable `F<n>` ID. `requires` names claim IDs
/// declared in the same document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FollowUp {
    pub id: String,
    pub title: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requires: Option<Vec<String>>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// The executable reproducibility block: environment description, exact
/// commands, and whether a human has to step in anywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproducibility {
    pub environment: String,
    pub commands: Vec<Command>,
    pub human_intervention_required: bool,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// One copy-runnable shell command. `verbatim` must contain no `<`/`>`
/// placeholders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Command {
    pub verbatim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub produces: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// Links into the propagation network: upstream nodes this document extends,
/// the self-declared hosting URL, and per-claim diff declarations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkLinks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extends: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim_diffs: Option<Vec<ClaimDiffDecl>>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A declared claim-diff: this document's claim (`ref`, bare ID or canonical
/// reference) relates to a parent paper's claim (`parent_ref`, canonical).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimDiffDecl {
    #[serde(rename = "ref")]
    pub reference: String,
    pub relation: String,
    pub parent_ref: String,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// Shell steps an agent can run to rebuild the full artifact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfApplication {
    pub agent_reproduction_steps: Vec<String>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A tool disclosed as part of the authoring workflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthoringTool {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub role: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub review_posture: Option<String>,
    #[serde(flatten, default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

/// A parsed `paper.json`.
///
/// Every field is optional at this layer; presence and shape requirements
/// are the validator's business. The `extras` map holds (a) unknown
/// top-level fields and (b) known fields whose value failed to match the
/// typed shape, both kept verbatim for lossless round-trips.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PaperDocument {
    pub id: Option<String>,
    pub title: Option<String>,
    pub version: Option<String>,
    pub status: Option<String>,
    pub authors: Option<Vec<Author>>,
    pub abstract_text: Option<String>,
    pub claims: Option<Vec<Claim>>,
    pub does_not_claim: Option<Vec<String>>,
    pub reproducibility: Option<Reproducibility>,
    pub definitions: Option<Vec<Definition>>,
    pub theorems: Option<Vec<Theorem>>,
    pub future_work: Option<Vec<FollowUp>>,
    pub network: Option<NetworkLinks>,
    pub self_application: Option<SelfApplication>,
    pub authoring_tools: Option<Vec<AuthoringTool>>,
    pub convention_version: Option<String>,
    pub extras: BTreeMap<String, Value>,
}

/// Why a byte sequence could not be read as a document at all.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("input is not valid UTF-8 (first invalid byte at offset {offset})")]
    InvalidUtf8 { offset: usize },
    #[error("malformed JSON at byte offset {offset} (line {line}, column {column})")]
    MalformedJson {
        offset: usize,
        line: usize,
        column: usize,
    },
    #[error("top-level JSON value is not an object")]
    NotAnObject,
}

/// Errors from ID bookkeeping and reference construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DocumentError {
    #[error("item ID `{0}` is declared more than once")]
    DuplicateId(String),
    #[error("`{0}` is not a valid item ID (expected C, D, T, or F followed by digits)")]
    InvalidItemId(String),
    #[error("node ID `{0}` must not contain `#`")]
    InvalidNodeId(String),
}

/// The IDs a document declares, partitioned by kind.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct IdSet {
    pub claims: BTreeSet<String>,
    pub definitions: BTreeSet<String>,
    pub theorems: BTreeSet<String>,
    pub followups: BTreeSet<String>,
}

impl IdSet {
    /// Total number of declared IDs across all kinds.
    pub fn len(&self) -> usize {
        self.claims.len() + self.definitions.len() + self.theorems.len() + self.followups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when any kind declares `id`.
    pub fn contains(&self, id: &str) -> bool {
        self.claims.contains(id)
            || self.definitions.contains(id)
            || self.theorems.contains(id)
            || self.followups.contains(id)
    }

    /// All declared IDs in sorted order, kinds interleaved.
    pub fn iter(&self) -> impl Iterator<Item = &String> {
        let mut all: Vec<&String> = self
            .claims
            .iter()
            .chain(&self.definitions)
            .chain(&self.theorems)
            .chain(&self.followups)
            .collect();
        all.sort();
        all.into_iter()
    }

    /// The partition for one kind.
    pub fn kind(&self, kind: ItemKind) -> &BTreeSet<String> {
        match kind {
            ItemKind::Claim => &self.claims,
            ItemKind::Definition => &self.definitions,
            ItemKind::Theorem => &self.theorems,
            ItemKind::FollowUp => &self.followups,
        }
    }
}

/// Parse raw bytes into a [`PaperDocument`].
///
/// Only UTF-8 validity and JSON well-formedness are enforced; see the module
/// docs for how ill-shaped fields are retained.
pub fn parse_document(raw: &[u8]) -> Result<PaperDocument, ParseError> {
    let text = std::str::from_utf8(raw).map_err(|e| ParseError::InvalidUtf8 {
        offset: e.valid_up_to(),
    })?;
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        ParseError::MalformedJson {
            offset: byte_offset(text, line, column),
            line,
            column,
        }
    })?;
    let Value::Object(map) = value else {
        return Err(ParseError::NotAnObject);
    };
    Ok(document_from_map(map))
}

/// Serialize a document as canonical JSON bytes.
///
/// Field order is fixed: the nine required fields in convention order, then
/// everything else alphabetically. Output is deterministic and satisfies
/// `parse_document(serialize_document(doc)) == doc`.
pub fn serialize_document(doc: &PaperDocument) -> Vec<u8> {
    canonical_json_bytes(&document_to_value(doc))
}

/// The canonical JSON tree for a document, with keys in serialization order.
pub fn document_to_value(doc: &PaperDocument) -> Value {
    let mut out = Map::new();
    let mut typed: BTreeMap<&str, Value> = BTreeMap::new();
    insert_opt(&mut typed, "id", &doc.id);
    insert_opt(&mut typed, "title", &doc.title);
    insert_opt(&mut typed, "version", &doc.version);
    insert_opt(&mut typed, "status", &doc.status);
    insert_opt(&mut typed, "authors", &doc.authors);
    insert_opt(&mut typed, "abstract", &doc.abstract_text);
    insert_opt(&mut typed, "claims", &doc.claims);
    insert_opt(&mut typed, "does_not_claim", &doc.does_not_claim);
    insert_opt(&mut typed, "reproducibility", &doc.reproducibility);
    insert_opt(&mut typed, "authoring_tools", &doc.authoring_tools);
    insert_opt(&mut typed, "convention_version", &doc.convention_version);
    insert_opt(&mut typed, "definitions", &doc.definitions);
    insert_opt(&mut typed, "future_work", &doc.future_work);
    insert_opt(&mut typed, "network", &doc.network);
    insert_opt(&mut typed, "self_application", &doc.self_application);
    insert_opt(&mut typed, "theorems", &doc.theorems);

    // Required fields first, in convention order. A raw extras entry stands
    // in when the typed field is absent (it holds the ill-shaped original).
    for name in REQUIRED_FIELDS {
        if let Some(v) = typed.remove(name) {
            out.insert(name.to_string(), v);
        } else if let Some(v) = doc.extras.get(name) {
            out.insert(name.to_string(), sort_keys(v.clone()));
        }
    }
    // Then optional and unknown fields together, alphabetically. A typed
    // field shadows an extras entry of the same name.
    let mut rest: BTreeMap<String, Value> = doc
        .extras
        .iter()
        .filter(|(k, _)| !out.contains_key(k.as_str()))
        .map(|(k, v)| (k.clone(), sort_keys(v.clone())))
        .collect();
    for (name, v) in typed {
        rest.insert(name.to_string(), v);
    }
    for (name, v) in rest {
        out.insert(name, v);
    }
    Value::Object(out)
}

/// The set of IDs declared across claims, definitions, theorems, and
/// follow-up items. Errors if any ID appears twice, across kinds included.
pub fn declared_ids(doc: &PaperDocument) -> Result<IdSet, DocumentError> {
    fn add(
        id: &str,
        bucket: &mut BTreeSet<String>,
        seen: &mut BTreeSet<String>,
    ) -> Result<(), DocumentError> {
        if !seen.insert(id.to_string()) {
            return Err(DocumentError::DuplicateId(id.to_string()));
        }
        bucket.insert(id.to_string());
        Ok(())
    }
    let mut set = IdSet::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for claim in doc.claims.iter().flatten() {
        add(&claim.id, &mut set.claims, &mut seen)?;
    }
    for def in doc.definitions.iter().flatten() {
        add(&def.id, &mut set.definitions, &mut seen)?;
    }
    for theorem in doc.theorems.iter().flatten() {
        add(&theorem.id, &mut set.theorems, &mut seen)?;
    }
    for item in doc.future_work.iter().flatten() {
        add(&item.id, &mut set.followups, &mut seen)?;
    }
    Ok(set)
}

/// Build the canonical global reference `<node_id>#<item_id>`.
///
/// Trailing slashes are stripped from `node_id` so the same node always
/// yields the same reference text.
pub fn canonical_ref(node_id: &str, item_id: &str) -> Result<String, DocumentError> {
    if !id::is_item_id(item_id) {
        return Err(DocumentError::InvalidItemId(item_id.to_string()));
    }
    if node_id.contains('#') {
        return Err(DocumentError::InvalidNodeId(node_id.to_string()));
    }
    Ok(format!("{}#{}", normalize_node_id(node_id), item_id))
}

/// Node IDs compare and serialize without trailing slashes.
pub fn normalize_node_id(node_id: &str) -> &str {
    node_id.trim_end_matches('/')
}

fn insert_opt<T: Serialize>(map: &mut BTreeMap<&str, Value>, name: &'static str, field: &Option<T>) {
    if let Some(v) = field {
        map.insert(
            name,
            serde_json::to_value(v).expect("document field serialization cannot fail"),
        );
    }
}

fn document_from_map(mut map: Map<String, Value>) -> PaperDocument {
    let mut doc = PaperDocument::default();
    doc.id = take(&mut map, "id", &mut doc.extras);
    doc.title = take(&mut map, "title", &mut doc.extras);
    doc.version = take(&mut map, "version", &mut doc.extras);
    doc.status = take(&mut map, "status", &mut doc.extras);
    doc.authors = take(&mut map, "authors", &mut doc.extras);
    doc.abstract_text = take(&mut map, "abstract", &mut doc.extras);
    doc.claims = take(&mut map, "claims", &mut doc.extras);
    doc.does_not_claim = take(&mut map, "does_not_claim", &mut doc.extras);
    doc.reproducibility = take(&mut map, "reproducibility", &mut doc.extras);
    doc.definitions = take(&mut map, "definitions", &mut doc.extras);
    doc.theorems = take(&mut map, "theorems", &mut doc.extras);
    doc.future_work = take(&mut map, "future_work", &mut doc.extras);
    doc.network = take(&mut map, "network", &mut doc.extras);
    doc.self_application = take(&mut map, "self_application", &mut doc.extras);
    doc.authoring_tools = take(&mut map, "authoring_tools", &mut doc.extras);
    doc.convention_version = take(&mut map, "convention_version", &mut doc.extras);
    for (key, value) in map {
        doc.extras.insert(key, value);
    }
    doc
}

/// Remove `name` from the raw map and parse it into its typed shape. On a
/// shape mismatch the raw value goes to `extras` instead and `None` is
/// returned; schema validation reports the mismatch later.
fn take<T: for<'de> Deserialize<'de>>(
    map: &mut Map<String, Value>,
    name: &str,
    extras: &mut BTreeMap<String, Value>,
) -> Option<T> {
    let raw = map.remove(name)?;
    match serde_json::from_value::<T>(raw.clone()) {
        Ok(v) => Some(v),
        Err(_) => {
            extras.insert(name.to_string(), raw);
            None
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut skip_newlines = line.saturating_sub(1);
    let mut line_start = 0;
    if skip_newlines > 0 {
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                skip_newlines -= 1;
                line_start = i + 1;
                if skip_newlines == 0 {
                    break;
                }
            }
        }
    }
    (line_start + column.saturating_sub(1)).min(text.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn minimal_json() -> Value {
        json!({
            "id": "tiny-paper",
            "title": "A Tiny Paper",
            "version": "1.0.0",
            "status": "preprint",
            "authors": [{"name": "A. Author"}],
            "abstract": "One claim, nothing else.",
            "claims": [{"id": "C1", "statement": "The tiny method works on the tiny dataset."}],
            "does_not_claim": ["The tiny method works on any other dataset."],
            "reproducibility": {
                "environment": "POSIX shell",
                "commands": [{"verbatim": "make check"}],
                "human_intervention_required": false
            }
        })
    }

    #[test]
    fn minimal_document_populates_required_fields() {
        let raw = serde_json::to_vec(&minimal_json()).unwrap();
        let doc = parse_document(&raw).unwrap();
        assert_eq!(doc.id.as_deref(), Some("tiny-paper"));
        assert_eq!(doc.claims.as_ref().unwrap().len(), 1);
        assert_eq!(doc.does_not_claim.as_ref().unwrap().len(), 1);
        assert!(doc.reproducibility.is_some());
        assert!(doc.definitions.is_none());
        assert!(doc.extras.is_empty());
    }

    #[test]
    fn empty_object_parses_with_all_fields_absent() {
        let doc = parse_document(b"{}").unwrap();
        assert_eq!(doc, PaperDocument::default());
    }

    #[test]
    fn malformed_json_reports_byte_offset() {
        let err = parse_document(b"{\n  \"id\": }").unwrap_err();
        match err {
            ParseError::MalformedJson { offset, line, .. } => {
                assert_eq!(line, 2);
                assert_eq!(offset, 10);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_object_roots_are_rejected() {
        assert_eq!(parse_document(b"[1, 2]").unwrap_err(), ParseError::NotAnObject);
        assert_eq!(parse_document(b"\"hi\"").unwrap_err(), ParseError::NotAnObject);
    }

    #[test]
    fn invalid_utf8_is_rejected_with_offset() {
        let err = parse_document(b"{\"id\": \"a\xff\"}").unwrap_err();
        assert_eq!(err, ParseError::InvalidUtf8 { offset: 9 });
    }

    #[test]
    fn unknown_top_level_fields_are_retained() {
        let mut value = minimal_json();
        value["x_custom"] = json!({"z": 1, "a": 2});
        let doc = parse_document(&serde_json::to_vec(&value).unwrap()).unwrap();
        assert_eq!(doc.extras.get("x_custom"), Some(&json!({"z": 1, "a": 2})));
        let reparsed = parse_document(&serialize_document(&doc)).unwrap();
        assert_eq!(reparsed, doc);
    }

    #[test]
    fn ill_shaped_known_field_lands_in_extras() {
        let mut value = minimal_json();
        value["claims"] = json!(42);
        let doc = parse_document(&serde_json::to_vec(&value).unwrap()).unwrap();
        assert!(doc.claims.is_none());
        assert_eq!(doc.extras.get("claims"), Some(&json!(42)));
        // The raw value still serializes at the canonical `claims` position.
        let out = String::from_utf8(serialize_document(&doc)).unwrap();
        let claims_pos = out.find("\"claims\"").unwrap();
        let repro_pos = out.find("\"reproducibility\"").unwrap();
        assert!(claims_pos < repro_pos);
    }

    #[test]
    fn serialization_is_deterministic_and_ordered() {
        let raw = serde_json::to_vec(&minimal_json()).unwrap();
        let doc = parse_document(&raw).unwrap();
        let a = serialize_document(&doc);
        let b = serialize_document(&doc);
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.ends_with('\n'));
        let mut last = 0;
        for field in REQUIRED_FIELDS {
            let pos = text.find(&format!("\"{field}\"")).unwrap();
            assert!(pos > last, "field {field} out of order");
            last = pos;
        }
    }

    #[test]
    fn round_trip_equals_original() {
        let mut value = minimal_json();
        value["definitions"] = json!([{"id": "D1", "term": "tiny", "definition": "very small"}]);
        value["convention_version"] = json!("0.1");
        let doc = parse_document(&serde_json::to_vec(&value).unwrap()).unwrap();
        assert_eq!(parse_document(&serialize_document(&doc)).unwrap(), doc);
    }

    #[test]
    fn declared_ids_partitions_by_kind() {
        let mut value = minimal_json();
        value["definitions"] = json!([{"id": "D1", "term": "t", "definition": "d"}]);
        value["future_work"] = json!([
            {"id": "F1", "title": "next", "description": "do it", "requires": ["C1"]}
        ]);
        let doc = parse_document(&serde_json::to_vec(&value).unwrap()).unwrap();
        let ids = declared_ids(&doc).unwrap();
        assert_eq!(ids.claims, BTreeSet::from(["C1".to_string()]));
        assert_eq!(ids.definitions, BTreeSet::from(["D1".to_string()]));
        assert!(ids.theorems.is_empty());
        assert_eq!(ids.followups, BTreeSet::from(["F1".to_string()]));
        assert_eq!(ids.len(), 3);
    }

    #[test]
    fn duplicate_id_is_an_error() {
        let mut value = minimal_json();
        value["claims"] = json!([
            {"id": "C1", "statement": "first"},
            {"id": "C2", "statement": "second"},
            {"id": "C2", "statement": "again"}
        ]);
        let doc = parse_document(&serde_json::to_vec(&value).unwrap()).unwrap();
        assert_eq!(
            declared_ids(&doc).unwrap_err(),
            DocumentError::DuplicateId("C2".to_string())
        );
    }

    #[test]
    fn duplicate_across_kinds_is_an_error() {
        let mut value = minimal_json();
        value["definitions"] = json!([{"id": "C1", "term": "t", "definition": "d"}]);
        let doc = parse_document(&serde_json::to_vec(&value).unwrap()).unwrap();
        assert_eq!(
            declared_ids(&doc).unwrap_err(),
            DocumentError::DuplicateId("C1".to_string())
        );
    }

    #[test]
    fn canonical_ref_examples() {
        assert_eq!(
            canonical_ref("https://github.com/arquicanedo/paper-json", "C1").unwrap(),
            "https://github.com/arquicanedo/paper-json#C1"
        );
        assert_eq!(
            canonical_ref("https://example.org/p/", "D4").unwrap(),
            "https://example.org/p#D4"
        );
        assert_eq!(
            canonical_ref("https://x.org", "Q1").unwrap_err(),
            DocumentError::InvalidItemId("Q1".to_string())
        );
        assert_eq!(
            canonical_ref("https://x.org/p#frag", "C1").unwrap_err(),
            DocumentError::InvalidNodeId("https://x.org/p#frag".to_string())
        );
    }
}

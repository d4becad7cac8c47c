//! The embedded convention schema and structural validation against it.
//!
//! The schema is a deliberately small keyword subset (`type`, `required`,
//! `properties`, `items`, `pattern`, `minItems`, `enum`), the smallest set
//! that expresses the convention. It is compiled into the binary; nothing is
//! fetched at runtime. Validation is structural only: it checks that IDs are
//! declared and fields are shaped, never that a claim statement is true.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::document::REQUIRED_FIELDS;
use crate::id;

const KEBAB_ID: &str = "^[a-z0-9]+(-[a-z0-9]+)*$";
const SEMVER: &str = "^[0-9]+\\.[0-9]+\\.[0-9]+$";
const CLAIM_ID: &str = "^C[0-9]+$";
const DEFINITION_ID: &str = "^D[0-9]+$";
const THEOREM_ID: &str = "^T[0-9]+$";
const FOLLOWUP_ID: &str = "^F[0-9]+$";
// At least one character, newlines allowed.
const NON_EMPTY: &str = "(?s).";
// Copy-runnable command text: non-empty, no <placeholder> markers.
const NO_PLACEHOLDERS: &str = "^[^<>]+$";
// Structured notation must stay renderable without macro expansion:
// non-empty and no backslash followed by a letter.
const NO_MACROS: &str = "^(?:[^\\\\]|\\\\[^A-Za-z])+$";
// A canonical reference: node URL, optionally `#` plus a typed fragment.
const REFERENCE: &str = "^[^#\\s]+(#(C|D|T|F)[0-9]+)?$";
// Claim-diff endpoints: a bare claim ID (resolved against the declaring
// node) or a canonical reference with a claim fragment.
const CLAIM_REF: &str = "^(C[0-9]+|[^#\\s]+#C[0-9]+)$";
const PARENT_CLAIM_REF: &str = "^[^#\\s]+#C[0-9]+$";

/// JSON value types distinguished by the schema subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaType {
    Object,
    Array,
    String,
    Boolean,
}

impl SchemaType {
    fn name(self) -> &'static str {
        match self {
            SchemaType::Object => "object",
            SchemaType::Array => "array",
            SchemaType::String => "string",
            SchemaType::Boolean => "boolean",
        }
    }

    fn matches(self, value: &Value) -> bool {
        match self {
            SchemaType::Object => value.is_object(),
            SchemaType::Array => value.is_array(),
            SchemaType::String => value.is_string(),
            SchemaType::Boolean => value.is_boolean(),
        }
    }
}

fn type_name(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// A compiled pattern keyword: the source text plus its regex.
#[derive(Debug, Clone)]
pub struct Pattern {
    source: String,
    regex: Regex,
}

impl Pattern {
    fn new(source: &str) -> Self {
        Pattern {
            source: source.to_string(),
            regex: Regex::new(source).expect("embedded schema pattern must compile"),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_match(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }
}

/// One node of the keyword-driven schema tree.
#[derive(Debug, Clone, Default)]
pub struct SchemaNode {
    pub schema_type: Option<SchemaType>,
    pub required: Vec<String>,
    pub properties: BTreeMap<String, SchemaNode>,
    pub items: Option<Box<SchemaNode>>,
    pub pattern: Option<Pattern>,
    pub min_items: Option<usize>,
    pub enum_values: Option<Vec<Value>>,
}

impl SchemaNode {
    /// A node with no keywords; accepts any value.
    pub fn any() -> Self {
        SchemaNode::default()
    }

    pub fn object() -> Self {
        SchemaNode {
            schema_type: Some(SchemaType::Object),
            ..SchemaNode::default()
        }
    }

    pub fn array() -> Self {
        SchemaNode {
            schema_type: Some(SchemaType::Array),
            ..SchemaNode::default()
        }
    }

    pub fn string() -> Self {
        SchemaNode {
            schema_type: Some(SchemaType::String),
            ..SchemaNode::default()
        }
    }

    pub fn boolean() -> Self {
        SchemaNode {
            schema_type: Some(SchemaType::Boolean),
            ..SchemaNode::default()
        }
    }

    pub fn required(mut self, fields: &[&str]) -> Self {
        self.required = fields.iter().map(|f| f.to_string()).collect();
        self
    }

    pub fn property(mut self, name: &str, node: SchemaNode) -> Self {
        self.properties.insert(name.to_string(), node);
        self
    }

    pub fn items(mut self, node: SchemaNode) -> Self {
        self.items = Some(Box::new(node));
        self
    }

    pub fn pattern(mut self, source: &str) -> Self {
        self.pattern = Some(Pattern::new(source));
        self
    }

    pub fn min_items(mut self, n: usize) -> Self {
        self.min_items = Some(n);
        self
    }

    pub fn enum_of(mut self, values: &[&str]) -> Self {
        self.enum_values = Some(values.iter().map(|v| Value::String(v.to_string())).collect());
        self
    }

    /// The schema tree as a JSON value, for `schema dump`.
    ///
    /// Keywords appear in a fixed order; `required` keeps its authored order
    /// and `properties` is alphabetical.
    pub fn to_value(&self) -> Value {
        let mut out = Map::new();
        if let Some(t) = self.schema_type {
            out.insert("type".into(), Value::String(t.name().into()));
        }
        if !self.required.is_empty() {
            out.insert(
                "required".into(),
                Value::Array(self.required.iter().map(|f| Value::String(f.clone())).collect()),
            );
        }
        if let Some(n) = self.min_items {
            out.insert("minItems".into(), Value::from(n));
        }
        if let Some(p) = &self.pattern {
            out.insert("pattern".into(), Value::String(p.source.clone()));
        }
        if let Some(values) = &self.enum_values {
            out.insert("enum".into(), Value::Array(values.clone()));
        }
        if !self.properties.is_empty() {
            let mut props = Map::new();
            for (name, node) in &self.properties {
                props.insert(name.clone(), node.to_value());
            }
            out.insert("properties".into(), Value::Object(props));
        }
        if let Some(items) = &self.items {
            out.insert("items".into(), items.to_value());
        }
        Value::Object(out)
    }
}

/// Identifiers for every rule the toolchain can report. The set is closed;
/// the last three arise from claim-reference and read-receipt checks rather
/// than schema keywords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    RequiredFieldMissing,
    TypeMismatch,
    PatternMismatch,
    MinItems,
    EnumMismatch,
    DuplicateId,
    UnknownClaimRef,
    UnknownClaim,
    UnknownFollowup,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::RequiredFieldMissing => "required-field-missing",
            Rule::TypeMismatch => "type-mismatch",
            Rule::PatternMismatch => "pattern-mismatch",
            Rule::MinItems => "min-items",
            Rule::EnumMismatch => "enum-mismatch",
            Rule::DuplicateId => "duplicate-id",
            Rule::UnknownClaimRef => "unknown-claim-ref",
            Rule::UnknownClaim => "unknown-claim",
            Rule::UnknownFollowup => "unknown-followup",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rule breach: where (a JSON pointer, `/` for the root), which rule,
/// and a human-readable message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub rule: Rule,
    pub message: String,
}

impl Violation {
    fn new(path: &str, rule: Rule, message: String) -> Self {
        Violation {
            path: display_path(path),
            rule,
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.path, self.rule, self.message)
    }
}

/// The convention schema compiled into this crate. Both calls return the
/// same tree; nothing is fetched at runtime.
pub fn embedded_schema() -> &'static SchemaNode {
    static SCHEMA: OnceLock<SchemaNode> = OnceLock::new();
    SCHEMA.get_or_init(build_schema)
}

fn build_schema() -> SchemaNode {
    let evidence = SchemaNode::object()
        .required(&["description"])
        .property("description", SchemaNode::string().pattern(NON_EMPTY))
        .property("source", SchemaNode::string())
        .property("value", SchemaNode::any());
    let claim = SchemaNode::object()
        .required(&["id", "statement"])
        .property("id", SchemaNode::string().pattern(CLAIM_ID))
        .property("statement", SchemaNode::string().pattern(NON_EMPTY))
        .property("status", SchemaNode::string())
        .property("evidence", SchemaNode::array().items(evidence));
    let author = SchemaNode::object()
        .required(&["name"])
        .property("name", SchemaNode::string().pattern(NON_EMPTY))
        .property("affiliation", SchemaNode::string())
        .property("identifier_url", SchemaNode::string());
    let command = SchemaNode::object()
        .required(&["verbatim"])
        .property("verbatim", SchemaNode::string().pattern(NO_PLACEHOLDERS))
        .property("produces", SchemaNode::string())
        .property("description", SchemaNode::string());
    let reproducibility = SchemaNode::object()
        .required(&["environment", "commands", "human_intervention_required"])
        .property("environment", SchemaNode::string())
        .property(
            "commands",
            SchemaNode::array().min_items(1).items(command),
        )
        .property("human_intervention_required", SchemaNode::boolean());
    let definition = SchemaNode::object()
        .required(&["id", "term", "definition"])
        .property("id", SchemaNode::string().pattern(DEFINITION_ID))
        .property("term", SchemaNode::string().pattern(NON_EMPTY))
        .property("definition", SchemaNode::string().pattern(NON_EMPTY));
    let theorem = SchemaNode::object()
        .required(&["id", "natural_language", "formal"])
        .property("id", SchemaNode::string().pattern(THEOREM_ID))
        .property("natural_language", SchemaNode::string().pattern(NON_EMPTY))
        .property("formal", SchemaNode::string().pattern(NO_MACROS))
        .property("proof_sketch", SchemaNode::string());
    let follow_up = SchemaNode::object()
        .required(&["id", "title", "description"])
        .property("id", SchemaNode::string().pattern(FOLLOWUP_ID))
        .property("title", SchemaNode::string().pattern(NON_EMPTY))
        .property("description", SchemaNode::string().pattern(NON_EMPTY))
        .property(
            "requires",
            SchemaNode::array().items(SchemaNode::string().pattern(CLAIM_ID)),
        );
    let claim_diff = SchemaNode::object()
        .required(&["ref", "relation", "parent_ref"])
        .property("ref", SchemaNode::string().pattern(CLAIM_REF))
        .property(
            "relation",
            SchemaNode::string().enum_of(&["supersedes", "strengthens", "contradicts"]),
        )
        .property("parent_ref", SchemaNode::string().pattern(PARENT_CLAIM_REF));
    let network = SchemaNode::object()
        .property(
            "extends",
            SchemaNode::array().items(SchemaNode::string().pattern(REFERENCE)),
        )
        .property("node_id", SchemaNode::string())
        .property("claim_diffs", SchemaNode::array().items(claim_diff));
    let self_application = SchemaNode::object()
        .required(&["agent_reproduction_steps"])
        .property(
            "agent_reproduction_steps",
            SchemaNode::array()
                .min_items(1)
                .items(SchemaNode::string().pattern(NON_EMPTY)),
        );
    let authoring_tool = SchemaNode::object()
        .required(&["name", "role"])
        .property("name", SchemaNode::string().pattern(NON_EMPTY))
        .property("role", SchemaNode::string().pattern(NON_EMPTY))
        .property("version", SchemaNode::string())
        .property("review_posture", SchemaNode::string());

    SchemaNode::object()
        .required(&REQUIRED_FIELDS)
        .property("id", SchemaNode::string().pattern(KEBAB_ID))
        .property("title", SchemaNode::string().pattern(NON_EMPTY))
        .property("version", SchemaNode::string().pattern(SEMVER))
        .property("status", SchemaNode::string())
        .property("authors", SchemaNode::array().items(author))
        .property("abstract", SchemaNode::string())
        .property("claims", SchemaNode::array().min_items(1).items(claim))
        .property(
            "does_not_claim",
            SchemaNode::array()
                .min_items(1)
                .items(SchemaNode::string().pattern(NON_EMPTY)),
        )
        .property("reproducibility", reproducibility)
        .property("convention_version", SchemaNode::string())
        .property("definitions", SchemaNode::array().items(definition))
        .property("theorems", SchemaNode::array().items(theorem))
        .property("future_work", SchemaNode::array().items(follow_up))
        .property("network", network)
        .property("self_application", self_application)
        .property("authoring_tools", SchemaNode::array().items(authoring_tool))
}

/// Validate a raw JSON tree against a schema node.
///
/// Returns every violation, not just the first, ordered lexicographically by
/// path and then by rule name. An empty list means the document is
/// schema-valid. On top of the keyword walk this applies the two structural
/// convention rules: item IDs must be unique and `future_work[].requires`
/// entries must name declared claims.
pub fn validate(doc_json: &Value, schema: &SchemaNode) -> Vec<Violation> {
    let mut out = Vec::new();
    walk(doc_json, schema, "", &mut out);
    duplicate_id_pass(doc_json, &mut out);
    claim_ref_pass(doc_json, &mut out);
    sort_violations(&mut out);
    out
}

/// The minimum-viable-compliance check: the nine required fields are
/// present, `claims` and `does_not_claim` each have at least one entry.
/// Returns whether the document passes plus the explaining violations.
/// Unlike [`validate`], a missing field is reported at the field's own path.
pub fn check_minimum_viable(doc_json: &Value) -> (bool, Vec<Violation>) {
    let mut out = Vec::new();
    let Some(map) = doc_json.as_object() else {
        out.push(Violation::new(
            "",
            Rule::TypeMismatch,
            format!("expected object, found {}", type_name(doc_json)),
        ));
        return (false, out);
    };
    for field in REQUIRED_FIELDS {
        if !map.contains_key(field) {
            out.push(Violation::new(
                &format!("/{field}"),
                Rule::RequiredFieldMissing,
                format!("field `{field}` is missing"),
            ));
        }
    }
    for field in ["claims", "does_not_claim"] {
        match map.get(field) {
            None => {}
            Some(Value::Array(items)) if items.is_empty() => {
                out.push(Violation::new(
                    &format!("/{field}"),
                    Rule::MinItems,
                    format!("`{field}` has 0 items, minimum is 1"),
                ));
            }
            Some(Value::Array(_)) => {}
            Some(other) => {
                out.push(Violation::new(
                    &format!("/{field}"),
                    Rule::TypeMismatch,
                    format!("expected array, found {}", type_name(other)),
                ));
            }
        }
    }
    sort_violations(&mut out);
    (out.is_empty(), out)
}

fn walk(value: &Value, node: &SchemaNode, path: &str, out: &mut Vec<Violation>) {
    if let Some(expected) = node.schema_type {
        if !expected.matches(value) {
            out.push(Violation::new(
                path,
                Rule::TypeMismatch,
                format!("expected {}, found {}", expected.name(), type_name(value)),
            ));
            return;
        }
    }
    if let (Some(pattern), Some(text)) = (&node.pattern, value.as_str()) {
        if !pattern.is_match(text) {
            out.push(Violation::new(
                path,
                Rule::PatternMismatch,
                format!(
                    "value `{}` does not match pattern `{}`",
                    clip(text),
                    pattern.source()
                ),
            ));
        }
    }
    if let Some(allowed) = &node.enum_values {
        if !allowed.contains(value) {
            let names: Vec<String> = allowed.iter().map(|v| v.to_string()).collect();
            out.push(Violation::new(
                path,
                Rule::EnumMismatch,
                format!("value {} is not one of {}", value, names.join(", ")),
            ));
        }
    }
    if let Some(map) = value.as_object() {
        for field in &node.required {
            if !map.contains_key(field) {
                out.push(Violation::new(
                    path,
                    Rule::RequiredFieldMissing,
                    format!("missing required field `{field}`"),
                ));
            }
        }
        for (name, subnode) in &node.properties {
            if let Some(child_value) = map.get(name) {
                walk(child_value, subnode, &child(path, name), out);
            }
        }
    }
    if let Some(items) = value.as_array() {
        if let Some(min) = node.min_items {
            if items.len() < min {
                out.push(Violation::new(
                    path,
                    Rule::MinItems,
                    format!("array has {} items, minimum is {}", items.len(), min),
                ));
            }
        }
        if let Some(item_node) = &node.items {
            for (i, item) in items.iter().enumerate() {
                walk(item, item_node, &child(path, &i.to_string()), out);
            }
        }
    }
}

/// Item IDs must be unique across claims, definitions, theorems, and
/// follow-up items; each repeat is reported at the repeated occurrence.
fn duplicate_id_pass(doc_json: &Value, out: &mut Vec<Violation>) {
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    for array in ["claims", "definitions", "theorems", "future_work"] {
        let Some(items) = doc_json.get(array).and_then(Value::as_array) else {
            continue;
        };
        for (i, item) in items.iter().enumerate() {
            let Some(item_id) = item.get("id").and_then(Value::as_str) else {
                continue;
            };
            let path = format!("/{array}/{i}/id");
            if let Some(first) = seen.get(item_id) {
                out.push(Violation::new(
                    &path,
                    Rule::DuplicateId,
                    format!("ID `{item_id}` is already declared at {first}"),
                ));
            } else {
                seen.insert(item_id.to_string(), path);
            }
        }
    }
}

/// `future_work[].requires` entries must name claims declared in the same
/// document. Only well-formed claim IDs are checked; malformed entries are
/// already covered by the pattern keyword.
fn claim_ref_pass(doc_json: &Value, out: &mut Vec<Violation>) {
    let Some(claims) = doc_json.get("claims").and_then(Value::as_array) else {
        return;
    };
    let declared: Vec<&str> = claims
        .iter()
        .filter_map(|c| c.get("id").and_then(Value::as_str))
        .collect();
    let Some(items) = doc_json.get("future_work").and_then(Value::as_array) else {
        return;
    };
    for (i, item) in items.iter().enumerate() {
        let Some(requires) = item.get("requires").and_then(Value::as_array) else {
            continue;
        };
        for (j, entry) in requires.iter().enumerate() {
            let Some(claim_id) = entry.as_str() else { continue };
            if id::is_claim_id(claim_id) && !declared.contains(&claim_id) {
                out.push(Violation::new(
                    &format!("/future_work/{i}/requires/{j}"),
                    Rule::UnknownClaimRef,
                    format!("requires `{claim_id}`, which is not declared in claims"),
                ));
            }
        }
    }
}

fn sort_violations(out: &mut [Violation]) {
    out.sort_by(|a, b| (a.path.as_str(), a.rule.name()).cmp(&(b.path.as_str(), b.rule.name())));
}

fn child(path: &str, segment: &str) -> String {
    let escaped = segment.replace('~', "~0").replace('/', "~1");
    format!("{path}/{escaped}")
}

fn display_path(path: &str) -> String {
    if path.is_empty() {
        "/".to_string()
    } else {
        path.to_string()
    }
}

fn clip(text: &str) -> String {
    if text.chars().count() <= 40 {
        text.to_string()
    } else {
        let head: String = text.chars().take(40).collect();
        format!("{head}…")
    }
}

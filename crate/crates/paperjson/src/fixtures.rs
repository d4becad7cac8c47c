//! Adversarial conformance fixtures, one per structural violation class.
//!
//! Each generated fixture triggers exactly its named class and nothing
//! else, so a harness can assert the toolchain's exit codes one class at a
//! time. Classes that break the schema carry no source file (the expected
//! failure is structural); classes that break cross-checking carry both
//! files and a schema-valid document.
//!
//! One deliberate omission: a fixture whose claim statements are
//! semantically wrong is not generatable. Structural validation cannot
//! detect it, and pretending otherwise would misstate what the toolchain
//! checks.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::canonical::canonical_json_bytes;
use crate::document::{parse_document, serialize_document};

/// The closed set of generatable violation classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationClass {
    /// The nine-field requirement broken on the field unique to the
    /// convention: `does_not_claim` is absent.
    MissingDoesNotClaim,
    /// Any other required field absent (`version` here).
    MissingRequiredField,
    /// An item ID that breaks its prefix-plus-digits pattern.
    BadIdPattern,
    /// `claims` present but empty.
    EmptyClaims,
    /// The same item ID declared twice.
    DuplicateId,
    /// A claim declared in the document but never mentioned in the source.
    OrphanIdInJson,
    /// An ID mentioned in the source but never declared in the document.
    UndeclaredIdInSource,
}

impl ViolationClass {
    pub const ALL: [ViolationClass; 7] = [
        ViolationClass::MissingDoesNotClaim,
        ViolationClass::MissingRequiredField,
        ViolationClass::BadIdPattern,
        ViolationClass::EmptyClaims,
        ViolationClass::DuplicateId,
        ViolationClass::OrphanIdInJson,
        ViolationClass::UndeclaredIdInSource,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ViolationClass::MissingDoesNotClaim => "missing-does-not-claim",
            ViolationClass::MissingRequiredField => "missing-required-field",
            ViolationClass::BadIdPattern => "bad-id-pattern",
            ViolationClass::EmptyClaims => "empty-claims",
            ViolationClass::DuplicateId => "duplicate-id",
            ViolationClass::OrphanIdInJson => "orphan-id-in-json",
            ViolationClass::UndeclaredIdInSource => "undeclared-id-in-source",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|class| class.name() == name)
    }

    /// The exit code the `validate` command must produce for this class:
    /// 1 for schema classes, 2 for cross-check classes.
    pub fn expected_exit_code(self) -> i32 {
        match self {
            ViolationClass::MissingDoesNotClaim
            | ViolationClass::MissingRequiredField
            | ViolationClass::BadIdPattern
            | ViolationClass::EmptyClaims
            | ViolationClass::DuplicateId => 1,
            ViolationClass::OrphanIdInJson | ViolationClass::UndeclaredIdInSource => 2,
        }
    }
}

impl fmt::Display for ViolationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `ViolationClass::from_name`, as the standard parsing trait.
impl FromStr for ViolationClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ViolationClass::from_name(s).ok_or_else(|| UnknownClass(s.to_string()))
    }
}

/// Error for a class name outside the closed set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownClass(pub String);

impl fmt::Display for UnknownClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = ViolationClass::ALL.iter().map(|c| c.name()).collect();
        write!(
            f,
            "unknown violation class `{}` (expected one of: {})",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownClass {}

/// A generated fixture: companion-file bytes, optional source bytes, and
/// the exit code `validate` must produce for the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub paper_json: Vec<u8>,
    pub source: Option<Vec<u8>>,
    pub expected_exit_code: i32,
}

/// The compliant document every fixture perturbs: two claims, one
/// definition, one follow-up item.
fn baseline_document() -> Value {
    json!({
        "id": "fixture-paper",
        "title": "A Compliant Fixture Paper",
        "version": "0.1.0",
        "status": "draft",
        "authors": [{"name": "Fixture Author"}],
        "abstract": "A minimal compliant document used as the baseline for adversarial fixtures.",
        "claims": [
            {
                "id": "C1",
                "statement": "The fixture validator accepts this document unchanged.",
                "status": "open-hypothesis"
            },
            {
                "id": "C2",
                "statement": "Perturbing exactly one rule produces exactly one violation class.",
                "status": "open-hypothesis"
            }
        ],
        "does_not_claim": [
            "Anything about documents other than this one."
        ],
        "reproducibility": {
            "environment": "POSIX shell",
            "commands": [
                {"verbatim": "make check", "produces": "a conformance report"}
            ],
            "human_intervention_required": false
        },
        "definitions": [
            {
                "id": "D1",
                "term": "baseline",
                "definition": "The unperturbed document all violation fixtures derive from."
            }
        ],
        "future_work": [
            {
                "id": "F1",
                "title": "Extend the baseline",
                "description": "Grow the baseline to cover theorem items as well.",
                "requires": ["C1"]
            }
        ]
    })
}

/// A source text mentioning every ID the baseline declares.
fn baseline_source() -> String {
    concat!(
        "= A Compliant Fixture Paper\n",
        "\n",
        "We make two claims. The first (C1) is that the validator accepts\n",
        "this document unchanged. The second (C2) is that perturbing one\n",
        "rule produces one violation class. The baseline (D1) is the\n",
        "unperturbed document. Extending it to theorem items is left as\n",
        "follow-up work (F1).\n",
    )
    .to_string()
}

/// Generate the fixture for a violation class. The output is deterministic:
/// the same class always yields the same bytes.
pub fn generate_violation_fixture(class: ViolationClass) -> Fixture {
    let mut doc = baseline_document();
    let map = doc.as_object_mut().expect("baseline is an object");
    let mut source = None;
    match class {
        ViolationClass::MissingDoesNotClaim => {
            map.remove("does_not_claim");
        }
        ViolationClass::MissingRequiredField => {
            map.remove("version");
        }
        ViolationClass::BadIdPattern => {
            // C2 is required by nothing, so the rename breaks only the
            // pattern rule.
            map["claims"][1]["id"] = json!("c2");
        }
        ViolationClass::EmptyClaims => {
            // future_work requires C1; it must go too, or the fixture
            // would also trip the unknown-claim-ref rule.
            map["claims"] = json!([]);
            map.remove("future_work");
        }
        ViolationClass::DuplicateId => {
            map["claims"][1]["id"] = json!("C1");
        }
        ViolationClass::OrphanIdInJson => {
            // The document stays valid; the source simply never mentions C2.
            source = Some(baseline_source().replace("(C2)", "(see above)"));
        }
        ViolationClass::UndeclaredIdInSource => {
            let mut text = baseline_source();
            text.push_str("\nA later revision will sharpen this into C7.\n");
            source = Some(text);
        }
    }
    Fixture {
        paper_json: normalize(&doc),
        source: source.map(String::into_bytes),
        expected_exit_code: class.expected_exit_code(),
    }
}

/// Emit the document through the canonical writer, so every fixture is in
/// serialization-order form and round-trips byte-identically.
fn normalize(doc: &Value) -> Vec<u8> {
    let parsed = parse_document(&canonical_json_bytes(doc)).expect("fixtures are JSON objects");
    serialize_document(&parsed)
}

/// The unperturbed compliant pair, for tests that need a known-good
/// document and matching source.
pub fn baseline() -> (Vec<u8>, Vec<u8>) {
    (
        normalize(&baseline_document()),
        baseline_source().into_bytes(),
    )
}

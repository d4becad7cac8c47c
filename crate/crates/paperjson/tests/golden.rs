//! Library-level tests against the golden fixture pair: the companion
//! file and source that every public API must handle cleanly, exercised
//! from outside the crate the way a downstream consumer would.

use std::collections::BTreeSet;
use std::path::Path;

use paperjson::crosscheck::{crosscheck, extract_ids};
use paperjson::document::{
    canonical_ref, declared_ids, parse_document, serialize_document,
};
use paperjson::registry::RegistryIndex;
use paperjson::resolver::{lookup_fragment, ResolvedItem};
use paperjson::schema::{check_minimum_viable, embedded_schema, validate};

fn genesis_bytes() -> Vec<u8> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/genesis/paper.json");
    std::fs::read(path).expect("golden companion file is part of the repository")
}

fn genesis_source() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/genesis/source.typ");
    std::fs::read_to_string(path).expect("golden source is part of the repository")
}

fn ids(prefix: char, count: usize) -> BTreeSet<String> {
    (1..=count).map(|n| format!("{prefix}{n}")).collect()
}

#[test]
fn golden_document_is_schema_valid() {
    let value = serde_json::from_slice(&genesis_bytes()).unwrap();
    assert_eq!(validate(&value, embedded_schema()), []);
    let (viable, gaps) = check_minimum_viable(&value);
    assert!(viable, "golden document must be minimally viable: {gaps:?}");
}

#[test]
fn golden_document_declares_the_full_id_set() {
    let doc = parse_document(&genesis_bytes()).unwrap();
    let declared = declared_ids(&doc).unwrap();
    assert_eq!(declared.claims, ids('C', 5));
    assert_eq!(declared.definitions, ids('D', 4));
    assert!(declared.theorems.is_empty());
    assert_eq!(declared.followups, ids('F', 6));
}

#[test]
fn golden_pair_crosschecks_clean() {
    let doc = parse_document(&genesis_bytes()).unwrap();
    let declared = declared_ids(&doc).unwrap();
    let report = crosscheck(&declared, &extract_ids(&genesis_source()));
    assert!(report.passes(), "missing: {:?}, undeclared: {:?}",
        report.missing_in_source, report.undeclared_in_json);
    // Every declared ID appears at a real position in the source.
    let mentioned: BTreeSet<&str> = report.occurrences.iter().map(|o| o.id.as_str()).collect();
    assert_eq!(mentioned.len(), 15);
}

#[test]
fn golden_round_trip_is_byte_identical() {
    let bytes = genesis_bytes();
    let doc = parse_document(&bytes).unwrap();
    assert_eq!(serialize_document(&doc), bytes);
}

#[test]
fn fragments_address_the_authored_items() {
    let doc = parse_document(&genesis_bytes()).unwrap();

    match lookup_fragment(&doc, Some("C1")).unwrap() {
        ResolvedItem::Claim(claim) => {
            assert!(claim
                .statement
                .starts_with("Agents querying claims by ID cite the correct sub-claim"));
        }
        other => panic!("C1 must resolve to a claim, got {other:?}"),
    }
    match lookup_fragment(&doc, Some("D4")).unwrap() {
        ResolvedItem::Definition(def) => {
            assert_eq!(def.term, "Dual-form theorem");
        }
        other => panic!("D4 must resolve to a definition, got {other:?}"),
    }
    match lookup_fragment(&doc, None).unwrap() {
        ResolvedItem::WholeDocument(whole) => assert_eq!(*whole, doc),
        other => panic!("no fragment must resolve to the whole document, got {other:?}"),
    }
}

#[test]
fn golden_document_indexes_and_answers_queries() {
    let doc = parse_document(&genesis_bytes()).unwrap();
    let node_id = doc
        .network
        .as_ref()
        .and_then(|n| n.node_id.as_deref())
        .unwrap()
        .to_string();

    let mut index = RegistryIndex::new();
    index.add(&node_id, &doc).unwrap();

    assert_eq!(
        index.query_claim("C4").unwrap(),
        [canonical_ref(&node_id, "C4").unwrap()]
    );
    assert_eq!(
        index.query_title("coordination").unwrap(),
        std::slice::from_ref(&node_id)
    );
    assert_eq!(index.query_version("0.1"), [node_id]);
}

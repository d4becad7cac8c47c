//! Conformance tooling for machine-readable paper companions.
//!
//! A companion file (`paper.json`) sits next to a paper's PDF and carries
//! the paper's content in stable, addressable form: claims (`C1`, `C2`,
//! …), definitions (`D1`, …), theorems (`T1`, …), and follow-up items
//! (`F1`, …), plus an explicit list of what the paper does *not* claim
//! and an executable reproducibility block. Because the IDs are stable,
//! any claim is globally addressable as `<node_id>#<id>`, where the node
//! ID is the URL hosting the file.
//!
//! This crate implements the toolchain around that convention:
//!
//! - [`document`]: the typed model, parsing, and the canonical serializer
//!   (required fields in convention order, everything else alphabetical,
//!   two-space indentation, trailing newline).
//! - [`schema`]: the embedded structural schema and a validator that
//!   collects every violation with a JSON-pointer path and a stable rule
//!   name.
//! - [`crosscheck`]: the ID scanner that compares IDs declared in the
//!   companion file against IDs appearing in the paper source, with an
//!   alphanumeric-boundary rule so `C12` matches but `ABC123` does not.
//! - [`resolver`]: canonical-reference resolution over HTTP, including
//!   well-known companion-file discovery and a GitHub raw-content
//!   rewrite, behind a swappable [`resolver::Fetcher`] seam.
//! - [`network`]: read receipts and the propagation graph they induce,
//!   with cycle detection, deterministic topological traversal, and
//!   claim-lineage walks over typed claim-diff edges.
//! - [`registry`]: a persistent index of known nodes, queryable by claim
//!   ID, convention version, or title substring, and servable read-only
//!   over HTTP with byte-deterministic responses.
//! - [`fixtures`]: deterministic generation of adversarial documents,
//!   each triggering exactly one violation class.
//!
//! The `paperjson` binary in this workspace fronts all of it on the
//! command line with a fixed exit-code contract: 0 valid, 1 schema
//! violation, 2 cross-reference violation, 3 file not found.
//!
//! # Validating a document
//!
//! ```
//! use paperjson::schema::{embedded_schema, validate};
//!
//! let doc = serde_json::json!({
//!     "id": "demo", "title": "Demo", "version": "1.0.0",
//!     "status": "draft", "authors": [{"name": "A"}],
//!     "abstract": "One-paragraph summary.",
//!     "claims": [{"id": "C1", "statement": "The demo validates."}],
//!     "does_not_claim": ["Anything beyond the demo."],
//!     "reproducibility": {
//!         "environment": "any shell",
//!         "commands": [{"verbatim": "true", "produces": "nothing"}],
//!         "human_intervention_required": false
//!     }
//! });
//! assert!(validate(&doc, embedded_schema()).is_empty());
//! ```

pub mod canonical;
pub mod crosscheck;
pub mod document;
pub mod fixtures;
pub mod id;
pub mod network;
pub mod registry;
pub mod resolver;
pub mod schema;

/// Doc-tests for the guide chapters and the README, so every snippet in
/// the prose compiles and runs against the current API.
#[cfg(doctest)]
mod book_snippets {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(unused)]
            mod $name {}
        };
    }

    chapter!(readme, "../../../README.md");
    chapter!(document_model, "../../../book/src/document-model.md");
    chapter!(validation, "../../../book/src/validation.md");
    chapter!(crosscheck, "../../../book/src/crosscheck.md");
    chapter!(references, "../../../book/src/references.md");
    chapter!(receipts_graph, "../../../book/src/receipts-and-graph.md");
    chapter!(registry, "../../../book/src/registry.md");
}

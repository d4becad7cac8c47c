//! A persistent local index of compliant nodes, queryable by claim ID,
//! convention version, or title substring, with an optional read-only HTTP
//! front end.
//!
//! The index is a single canonical-JSON file with a format version and a
//! named digest algorithm. Crawling is an operator concern: entries arrive
//! one at a time through [`RegistryIndex::add`], which re-validates
//! defensively because a registry of non-compliant documents would be
//! worse than no registry at all.

use std::collections::{BTreeMap, BTreeSet};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::thread::JoinHandle;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;
use url::Url;

use crate::canonical::canonical_json_bytes;
use crate::document::{declared_ids, document_to_value, normalize_node_id, PaperDocument};
use crate::id::is_claim_id;
use crate::schema::{embedded_schema, validate, Violation};

/// The index file layout this build reads and writes.
pub const FORMAT_VERSION: u32 = 1;
/// The digest named in every index file this build writes.
pub const DIGEST_ALGORITHM: &str = "sha256";

/// One indexed node: identity, query keys, and a content digest for
/// change detection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub node_id: String,
    pub title: String,
    /// Empty when the document does not state a convention version.
    pub convention_version: String,
    pub claim_ids: BTreeSet<String>,
    pub definition_ids: BTreeSet<String>,
    pub followup_ids: BTreeSet<String>,
    /// Hex digest of the document's canonical serialization; 64 characters.
    pub document_digest: String,
    pub indexed_at: String,
}

/// The queryable index: node_id → entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegistryIndex {
    pub entries: BTreeMap<String, RegistryEntry>,
}

/// What an add did to the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    Inserted,
    Replaced,
    /// The node was already indexed with an identical digest; nothing
    /// changed, including its `indexed_at` stamp.
    Unchanged,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("document failed validation with {} violation(s); first: {}", violations.len(), first_violation(violations))]
    ValidationFailed { violations: Vec<Violation> },
    #[error("node ID `{url}` is not a valid URL: {reason}")]
    InvalidNodeId { url: String, reason: String },
    #[error("`{0}` is not a claim ID")]
    InvalidItemId(String),
    #[error("title query needle must be non-empty")]
    EmptyNeedle,
    #[error("{}: {source}", path.display())]
    IoError {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("registry file `{}` is not usable: {reason}", path.display())]
    Corrupt { path: PathBuf, reason: String },
    #[error("registry format version {0} is unsupported (this build reads version {FORMAT_VERSION})")]
    FormatVersionUnsupported(u32),
    #[error("registry digest algorithm `{0}` is unsupported (this build uses {DIGEST_ALGORITHM})")]
    DigestAlgorithmUnsupported(String),
    #[error("failed to bind `{addr}`: {reason}")]
    BindFailed { addr: String, reason: String },
}

fn first_violation(violations: &[Violation]) -> String {
    violations
        .first()
        .map(ToString::to_string)
        .unwrap_or_default()
}

/// Hex digest of a document's canonical serialization.
pub fn document_digest(doc: &PaperDocument) -> String {
    let bytes = canonical_json_bytes(&document_to_value(doc));
    hex::encode(Sha256::digest(&bytes))
}

impl RegistryIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index a document under a node ID, re-validating it first.
    ///
    /// An existing entry is replaced only when the document digest
    /// changed, so re-adding the same document is a no-op.
    pub fn add(&mut self, node_id: &str, doc: &PaperDocument) -> Result<AddOutcome, RegistryError> {
        let node_id = normalize_node_id(node_id);
        if let Err(e) = Url::parse(node_id) {
            return Err(RegistryError::InvalidNodeId {
                url: node_id.to_string(),
                reason: e.to_string(),
            });
        }
        let violations = validate(&document_to_value(doc), embedded_schema());
        if !violations.is_empty() {
            return Err(RegistryError::ValidationFailed { violations });
        }
        let digest = document_digest(doc);
        if let Some(existing) = self.entries.get(node_id) {
            if existing.document_digest == digest {
                return Ok(AddOutcome::Unchanged);
            }
        }
        let ids = declared_ids(doc).expect("validated documents have unique IDs");
        let entry = RegistryEntry {
            node_id: node_id.to_string(),
            title: doc.title.clone().expect("validated documents have a title"),
            convention_version: doc.convention_version.clone().unwrap_or_default(),
            claim_ids: ids.claims,
            definition_ids: ids.definitions,
            followup_ids: ids.followups,
            document_digest: digest,
            indexed_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        };
        let outcome = if self.entries.contains_key(node_id) {
            AddOutcome::Replaced
        } else {
            AddOutcome::Inserted
        };
        self.entries.insert(node_id.to_string(), entry);
        Ok(outcome)
    }

    /// Every canonical reference `<node_id>#<claim_id>` for entries
    /// declaring the claim, sorted lexicographically.
    pub fn query_claim(&self, claim_id: &str) -> Result<Vec<String>, RegistryError> {
        if !is_claim_id(claim_id) {
            return Err(RegistryError::InvalidItemId(claim_id.to_string()));
        }
        let mut refs: Vec<String> = self
            .entries
            .values()
            .filter(|entry| entry.claim_ids.contains(claim_id))
            .map(|entry| format!("{}#{claim_id}", entry.node_id))
            .collect();
        refs.sort();
        Ok(refs)
    }

    /// Node IDs whose convention version matches exactly, sorted.
    pub fn query_version(&self, convention_version: &str) -> Vec<String> {
        self.entries
            .values()
            .filter(|entry| entry.convention_version == convention_version)
            .map(|entry| entry.node_id.clone())
            .collect()
    }

    /// Node IDs whose title contains the needle, case-insensitively,
    /// sorted. The needle must be non-empty.
    pub fn query_title(&self, needle: &str) -> Result<Vec<String>, RegistryError> {
        if needle.is_empty() {
            return Err(RegistryError::EmptyNeedle);
        }
        let needle = needle.to_lowercase();
        Ok(self
            .entries
            .values()
            .filter(|entry| entry.title.to_lowercase().contains(&needle))
            .map(|entry| entry.node_id.clone())
            .collect())
    }
}

/// On-disk layout: the index plus self-describing format metadata.
#[derive(Serialize, Deserialize)]
struct IndexFile {
    format_version: u32,
    digest_algorithm: String,
    entries: BTreeMap<String, RegistryEntry>,
}

/// Persist the index as canonical JSON.
pub fn save_index(index: &RegistryIndex, path: &Path) -> Result<(), RegistryError> {
    let file = IndexFile {
        format_version: FORMAT_VERSION,
        digest_algorithm: DIGEST_ALGORITHM.to_string(),
        entries: index.entries.clone(),
    };
    let value = serde_json::to_value(&file).expect("index file serializes");
    std::fs::write(path, canonical_json_bytes(&value)).map_err(|source| RegistryError::IoError {
        path: path.to_path_buf(),
        source,
    })
}

/// Load an index, refusing format versions and digest algorithms this
/// build does not understand.
pub fn load_index(path: &Path) -> Result<RegistryIndex, RegistryError> {
    let bytes = std::fs::read(path).map_err(|source| RegistryError::IoError {
        path: path.to_path_buf(),
        source,
    })?;
    let corrupt = |reason: String| RegistryError::Corrupt {
        path: path.to_path_buf(),
        reason,
    };
    let raw: Value = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
    let version = raw
        .get("format_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| corrupt("missing format_version".to_string()))?;
    if version != u64::from(FORMAT_VERSION) {
        return Err(RegistryError::FormatVersionUnsupported(version as u32));
    }
    let file: IndexFile =
        serde_json::from_value(raw).map_err(|e| corrupt(e.to_string()))?;
    if file.digest_algorithm != DIGEST_ALGORITHM {
        return Err(RegistryError::DigestAlgorithmUnsupported(
            file.digest_algorithm,
        ));
    }
    for (key, entry) in &file.entries {
        if key != &entry.node_id {
            return Err(corrupt(format!(
                "entry key `{key}` does not match its node_id `{}`",
                entry.node_id
            )));
        }
        if entry.document_digest.len() != 64
            || !entry.document_digest.bytes().all(|b| b.is_ascii_hexdigit())
        {
            return Err(corrupt(format!(
                "entry `{key}` has a malformed document digest"
            )));
        }
    }
    Ok(RegistryIndex {
        entries: file.entries,
    })
}

/// The registry's own companion document, served at `/paper.json`. It
/// describes the running index and is schema-valid like any other node.
pub fn registry_descriptor(index: &RegistryIndex) -> Value {
    json!({
        "id": "paper-json-registry",
        "title": "Local Registry of Compliant Companion Files",
        "version": env!("CARGO_PKG_VERSION"),
        "status": "living-index",
        "authors": [{"name": "registry operator"}],
        "abstract": "A queryable index of nodes whose companion files passed structural validation at the time they were indexed. Queries run by claim ID, by convention version, or by title substring.",
        "claims": [
            {
                "id": "C1",
                "statement": "Every indexed entry passed structural validation when it was added.",
                "status": "enforced-by-construction",
                "evidence": [
                    {"description": "number of entries currently indexed", "value": index.entries.len()}
                ]
            },
            {
                "id": "C2",
                "statement": "Claim queries return canonical references whose node part is an indexed node ID.",
                "status": "enforced-by-construction"
            }
        ],
        "does_not_claim": [
            "That indexed documents are still compliant at query time.",
            "That any claim made by an indexed document is true."
        ],
        "reproducibility": {
            "environment": "any host with the paperjson CLI installed",
            "commands": [
                {
                    "verbatim": "paperjson registry serve --index registry.json --addr 127.0.0.1:8080",
                    "produces": "this query endpoint"
                }
            ],
            "human_intervention_required": false
        },
        "convention_version": "0.1"
    })
}

/// A background registry server. Dropping it unblocks the listener and
/// joins the worker thread.
pub struct RunningRegistry {
    server: Arc<tiny_http::Server>,
    local_addr: SocketAddr,
    worker: Option<JoinHandle<()>>,
}

impl RunningRegistry {
    pub fn local_addr(&self) -> SocketAddr {
        self.local_addr
    }

    /// Block until the accept loop exits. The loop only exits when the
    /// process is killed or the server handle is unblocked elsewhere, so
    /// this is how a foreground server parks its main thread.
    pub fn wait(mut self) {
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}

impl Drop for RunningRegistry {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}

/// Serve the index read-only over HTTP.
///
/// Routes: `GET /claims/{claim_id}`, `GET /nodes?version={v}`,
/// `GET /nodes?title={needle}`, and `GET /paper.json`. Every response body
/// is byte-identical to the canonical serialization of the corresponding
/// in-process query result. The server snapshots the index; later
/// mutations elsewhere are invisible to it.
pub fn serve(index: RegistryIndex, addr: &str) -> Result<RunningRegistry, RegistryError> {
    let server = tiny_http::Server::http(addr).map_err(|e| RegistryError::BindFailed {
        addr: addr.to_string(),
        reason: e.to_string(),
    })?;
    let local_addr = match server.server_addr() {
        tiny_http::ListenAddr::IP(socket) => socket,
        #[cfg(unix)]
        tiny_http::ListenAddr::Unix(_) => unreachable!("registry binds TCP addresses only"),
    };
    let server = Arc::new(server);
    let worker_server = Arc::clone(&server);
    let worker = std::thread::spawn(move || {
        for request in worker_server.incoming_requests() {
            let (status, body) = respond(&index, request.method(), request.url());
            let header = tiny_http::Header::from_bytes(
                &b"Content-Type"[..],
                &b"application/json; charset=utf-8"[..],
            )
            .expect("static header");
            let response = tiny_http::Response::from_data(body)
                .with_status_code(status)
                .with_header(header);
            let _ = request.respond(response);
        }
    });
    Ok(RunningRegistry {
        server,
        local_addr,
        worker: Some(worker),
    })
}

/// Route a request to the query operations. Pure, so tests can compare
/// served bytes against direct calls.
fn respond(index: &RegistryIndex, method: &tiny_http::Method, raw_url: &str) -> (u16, Vec<u8>) {
    if *method != tiny_http::Method::Get {
        return error_body(405, "read-only registry: use GET");
    }
    let Ok(url) = Url::parse(&format!("http://registry.invalid{raw_url}")) else {
        return error_body(400, "unparseable request URL");
    };
    match url.path() {
        "/paper.json" => (200, canonical_json_bytes(&registry_descriptor(index))),
        "/nodes" => {
            let params: BTreeMap<String, String> = url
                .query_pairs()
                .map(|(k, v)| (k.into_owned(), v.into_owned()))
                .collect();
            match (params.get("version"), params.get("title")) {
                (Some(version), None) => (200, json_body(&index.query_version(version))),
                (None, Some(needle)) => match index.query_title(needle) {
                    Ok(nodes) => (200, json_body(&nodes)),
                    Err(e) => error_body(400, &e.to_string()),
                },
                _ => error_body(400, "query with exactly one of `version` or `title`"),
            }
        }
        path => match path.strip_prefix("/claims/") {
            Some(claim_id) if !claim_id.contains('/') => match index.query_claim(claim_id) {
                Ok(refs) => (200, json_body(&refs)),
                Err(e) => error_body(400, &e.to_string()),
            },
            _ => error_body(404, "no such route"),
        },
    }
}

fn json_body<T: Serialize>(value: &T) -> Vec<u8> {
    canonical_json_bytes(&serde_json::to_value(value).expect("query results serialize"))
}

fn error_body(status: u16, message: &str) -> (u16, Vec<u8>) {
    (status, canonical_json_bytes(&json!({ "error": message })))
}

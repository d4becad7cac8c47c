//! Canonical reference resolution: parse `<node_id>#<id>` references,
//! discover a node's companion file over HTTP, and return the item the
//! fragment addresses.
//!
//! Fetching goes through the [`Fetcher`] trait so tests can resolve against
//! stub responses; [`HttpFetcher`] is the production implementation. The
//! fragment is client-side by convention and is never sent on the wire.

use std::time::Duration;

use thiserror::Error;
use url::Url;

use crate::document::{
    normalize_node_id, parse_document, Claim, Definition, FollowUp, PaperDocument, Theorem,
};
use crate::id::{is_item_id, ItemKind};

/// Environment variable overriding the per-attempt HTTP timeout, in whole
/// seconds.
pub const HTTP_TIMEOUT_ENV: &str = "PAPERJSON_HTTP_TIMEOUT";

const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
const MAX_REDIRECTS: usize = 5;

/// A parsed canonical reference: a node URL and an optional item fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    pub node_id: String,
    pub fragment: Option<String>,
}

/// The item a fragment addresses, cloned out of the fetched document.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedItem {
    Claim(Claim),
    Definition(Definition),
    Theorem(Theorem),
    FollowUp(FollowUp),
    WholeDocument(Box<PaperDocument>),
}

/// A successful resolution: the item plus the URL the document was
/// actually fetched from.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub item: ResolvedItem,
    pub source_url: String,
}

/// One failed discovery candidate and why it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub url: String,
    pub reason: String,
}

impl std::fmt::Display for Attempt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.url, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("invalid fragment `{0}`: expected C, D, T, or F followed by digits")]
    InvalidFragment(String),
    #[error("invalid URL `{url}`: {reason}")]
    InvalidUrl { url: String, reason: String },
    #[error("no item with ID `{0}` in the resolved document")]
    NotFound(String),
    #[error("discovery failed for `{node_id}`: {}", join_attempts(attempts))]
    DiscoveryFailed {
        node_id: String,
        attempts: Vec<Attempt>,
    },
    #[error("network error fetching `{url}`: {reason}")]
    NetworkError { url: String, reason: String },
}

fn join_attempts(attempts: &[Attempt]) -> String {
    attempts
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parse a canonical reference, splitting on the last `#`.
///
/// The node part is validated as an absolute URL and loses any trailing
/// slashes; the fragment, when present, must be a well-formed item ID.
pub fn parse_reference(reference: &str) -> Result<Reference, ResolveError> {
    let (node, fragment) = match reference.rsplit_once('#') {
        Some((node, fragment)) => (node, Some(fragment)),
        None => (reference, None),
    };
    if let Some(fragment) = fragment {
        if !is_item_id(fragment) {
            return Err(ResolveError::InvalidFragment(fragment.to_string()));
        }
    }
    if node.contains('#') {
        return Err(ResolveError::InvalidUrl {
            url: node.to_string(),
            reason: "node ID contains `#`".to_string(),
        });
    }
    let node = normalize_node_id(node);
    if let Err(e) = Url::parse(node) {
        return Err(ResolveError::InvalidUrl {
            url: node.to_string(),
            reason: e.to_string(),
        });
    }
    Ok(Reference {
        node_id: node.to_string(),
        fragment: fragment.map(str::to_string),
    })
}

/// The ordered URLs to try when looking for a node's companion file.
///
/// A bare GitHub repository URL gets the raw-content rewrite first, pinned
/// to the symbolic `HEAD` reference so the default branch is never guessed;
/// everything else (including GitHub URLs pointing into a subdirectory)
/// gets the single well-known path `<node_id>/paper.json`.
pub fn discovery_candidates(node_id: &str) -> Result<Vec<String>, ResolveError> {
    let trimmed = normalize_node_id(node_id);
    let url = Url::parse(trimmed).map_err(|e| ResolveError::InvalidUrl {
        url: node_id.to_string(),
        reason: e.to_string(),
    })?;
    let well_known = format!("{trimmed}/paper.json");
    if url.host_str() == Some("github.com") {
        let segments: Vec<&str> = url
            .path_segments()
            .map(|s| s.filter(|part| !part.is_empty()).collect())
            .unwrap_or_default();
        if let [owner, repo] = segments.as_slice() {
            let raw = format!("https://raw.githubusercontent.com/{owner}/{repo}/HEAD/paper.json");
            return Ok(vec![raw, well_known]);
        }
    }
    Ok(vec![well_known])
}

/// Find the item a fragment addresses within an already-parsed document.
/// An absent fragment addresses the whole document.
pub fn lookup_fragment(
    doc: &PaperDocument,
    fragment: Option<&str>,
) -> Result<ResolvedItem, ResolveError> {
    let Some(fragment) = fragment else {
        return Ok(ResolvedItem::WholeDocument(Box::new(doc.clone())));
    };
    let Some(kind) = ItemKind::of(fragment) else {
        return Err(ResolveError::InvalidFragment(fragment.to_string()));
    };
    let not_found = || ResolveError::NotFound(fragment.to_string());
    match kind {
        ItemKind::Claim => doc
            .claims
            .iter()
            .flatten()
            .find(|c| c.id == fragment)
            .map(|c| ResolvedItem::Claim(c.clone()))
            .ok_or_else(not_found),
        ItemKind::Definition => doc
            .definitions
            .iter()
            .flatten()
            .find(|d| d.id == fragment)
            .map(|d| ResolvedItem::Definition(d.clone()))
            .ok_or_else(not_found),
        ItemKind::Theorem => doc
            .theorems
            .iter()
            .flatten()
            .find(|t| t.id == fragment)
            .map(|t| ResolvedItem::Theorem(t.clone()))
            .ok_or_else(not_found),
        ItemKind::FollowUp => doc
            .future_work
            .iter()
            .flatten()
            .find(|f| f.id == fragment)
            .map(|f| ResolvedItem::FollowUp(f.clone()))
            .ok_or_else(not_found),
    }
}

/// Resolve a canonical reference end to end: parse, discover, fetch, look
/// up the fragment.
///
/// Candidates are tried in order; the first 200 response whose body parses
/// as a companion document wins. When every candidate fails at the
/// transport level the node is unreachable and a [`ResolveError::NetworkError`]
/// is returned; any mix of HTTP failures and bad bodies becomes
/// [`ResolveError::DiscoveryFailed`] with one reason per candidate.
pub fn resolve(reference: &str, fetcher: &dyn Fetcher) -> Result<Resolution, ResolveError> {
    let parsed = parse_reference(reference)?;
    let candidates = discovery_candidates(&parsed.node_id)?;
    let mut attempts = Vec::new();
    let mut transport_only = true;
    for url in candidates {
        match fetcher.fetch(&url) {
            Ok(response) if response.status == 200 => match parse_document(&response.body) {
                Ok(doc) => {
                    let item = lookup_fragment(&doc, parsed.fragment.as_deref())?;
                    return Ok(Resolution {
                        item,
                        source_url: url,
                    });
                }
                Err(e) => {
                    transport_only = false;
                    attempts.push(Attempt {
                        url,
                        reason: format!("body is not a companion document: {e}"),
                    });
                }
            },
            Ok(response) => {
                transport_only = false;
                attempts.push(Attempt {
                    url,
                    reason: format!("HTTP {}", response.status),
                });
            }
            Err(e) => attempts.push(Attempt {
                url,
                reason: e.reason,
            }),
        }
    }
    if transport_only {
        let first = attempts.into_iter().next().expect("at least one candidate");
        return Err(ResolveError::NetworkError {
            url: first.url,
            reason: first.reason,
        });
    }
    Err(ResolveError::DiscoveryFailed {
        node_id: parsed.node_id,
        attempts,
    })
}

/// An HTTP response as the resolver sees it: status plus raw body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

/// A fetch attempt that produced no HTTP response at all (timeout, refused
/// connection, DNS failure).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}")]
pub struct FetchError {
    pub reason: String,
}

/// The seam between resolution logic and the network. Implementations must
/// perform a single GET and be safe to call from concurrent callers.
pub trait Fetcher {
    fn fetch(&self, url: &str) -> Result<FetchResponse, FetchError>;
}

/// The production fetcher: blocking GET with `Accept: application/json`,
/// a tool-identifying user agent, a 10-second default timeout (overridable
/// via [`HTTP_TIMEOUT_ENV`]), and at most 5 followed redirects.
pub struct HttpFetcher {
    client: reqwest::blocking::Client,
}

impl HttpFetcher {
    pub fn new() -> Self {
        let timeout = std::env::var(HTTP_TIMEOUT_ENV)
            .ok()
            .and_then(|raw| raw.parse::<u64>().ok())
            .map_or(DEFAULT_TIMEOUT, Duration::from_secs);
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .redirect(reqwest::redirect::Policy::limited(MAX_REDIRECTS))
            .user_agent(concat!("paperjson/", env!("CARGO_PKG_VERSION")))
            .build()
            .expect("HTTP client construction with static settings");
        HttpFetcher { client }
    }
}

impl Default for HttpFetcher {
    fn default() -> Self {
        Self::new()
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &str) -> Result<FetchResponse, FetchError> {
        let response = self
            .client
            .get(url)
            .header(reqwest::header::ACCEPT, "application/json")
            .send()
            .map_err(|e| FetchError {
                reason: e.to_string(),
            })?;
        let status = response.status().as_u16();
        let body = response
            .bytes()
            .map_err(|e| FetchError {
                reason: e.to_string(),
            })?
            .to_vec();
        Ok(FetchResponse { status, body })
    }
}

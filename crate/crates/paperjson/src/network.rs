//! Read receipts and the propagation graph.
//!
//! A read receipt records that an agent read a node and built something
//! from it. Receipts, `network.extends` declarations, and claim-diff edges
//! together form the propagation graph: node-level built→read and
//! extends edges must stay acyclic, while claim-level edges may cycle
//! (two claims can legitimately contradict each other).
//!
//! Receipts travel as plain JSON files or on standard input; filing them
//! with a hosted issue tracker is out of scope here. The conventional
//! issue title is produced by [`receipt_title`].

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::document::{normalize_node_id, PaperDocument};
use crate::id::{is_claim_id, is_followup_id};
use crate::resolver::{parse_reference, Reference};
use crate::schema::{Rule, Violation};

/// A record that an agent read a node and what it built from it.
/// Unknown fields are retained in `extras` and survive reserialization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadReceipt {
    pub agent_identity: String,
    pub node_read: String,
    pub produced_url: String,
    pub claims_accessed: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub followup_addressed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(flatten, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, Value>,
}

#[derive(Debug, Error)]
pub enum ReceiptError {
    #[error("receipt is not a JSON object: {0}")]
    ParseError(String),
    #[error("receipt field `{0}` is missing or empty")]
    MissingField(&'static str),
    #[error("receipt field `{field}` holds ill-formed ID `{value}`")]
    BadIdPattern { field: &'static str, value: String },
}

/// Parse a receipt from raw bytes.
///
/// `agent_identity`, `node_read`, `produced_url`, and `claims_accessed`
/// must be present; claim and follow-up IDs must match their patterns.
/// The timestamp is carried verbatim; its format is the author's problem
/// until receipts gain a signing story.
pub fn parse_receipt(raw: &[u8]) -> Result<ReadReceipt, ReceiptError> {
    let text = std::str::from_utf8(raw).map_err(|e| ReceiptError::ParseError(e.to_string()))?;
    let value: Value =
        serde_json::from_str(text).map_err(|e| ReceiptError::ParseError(e.to_string()))?;
    let Value::Object(mut map) = value else {
        return Err(ReceiptError::ParseError(format!(
            "top level is {}, expected object",
            match value {
                Value::Array(_) => "an array",
                Value::String(_) => "a string",
                Value::Null => "null",
                _ => "a scalar",
            }
        )));
    };

    let mut required_text = |field: &'static str| -> Result<String, ReceiptError> {
        match map.remove(field) {
            Some(Value::String(s)) if !s.is_empty() => Ok(s),
            Some(Value::String(_)) | None => Err(ReceiptError::MissingField(field)),
            Some(other) => Err(ReceiptError::ParseError(format!(
                "field `{field}` must be a string, got {other}"
            ))),
        }
    };
    let agent_identity = required_text("agent_identity")?;
    let node_read = required_text("node_read")?;
    let produced_url = required_text("produced_url")?;

    let claims_accessed = match map.remove("claims_accessed") {
        Some(Value::Array(entries)) => {
            let mut ids = Vec::with_capacity(entries.len());
            for entry in entries {
                let Value::String(claim) = entry else {
                    return Err(ReceiptError::ParseError(format!(
                        "claims_accessed entries must be strings, got {entry}"
                    )));
                };
                if !is_claim_id(&claim) {
                    return Err(ReceiptError::BadIdPattern {
                        field: "claims_accessed",
                        value: claim,
                    });
                }
                ids.push(claim);
            }
            ids
        }
        Some(other) => {
            return Err(ReceiptError::ParseError(format!(
                "field `claims_accessed` must be an array, got {other}"
            )))
        }
        None => return Err(ReceiptError::MissingField("claims_accessed")),
    };

    let followup_addressed = match map.remove("followup_addressed") {
        Some(Value::String(item)) => {
            if !is_followup_id(&item) {
                return Err(ReceiptError::BadIdPattern {
                    field: "followup_addressed",
                    value: item,
                });
            }
            Some(item)
        }
        Some(Value::Null) | None => None,
        Some(other) => {
            return Err(ReceiptError::ParseError(format!(
                "field `followup_addressed` must be a string, got {other}"
            )))
        }
    };

    let timestamp = match map.remove("timestamp") {
        Some(Value::String(t)) => Some(t),
        Some(Value::Null) | None => None,
        Some(other) => {
            return Err(ReceiptError::ParseError(format!(
                "field `timestamp` must be a string, got {other}"
            )))
        }
    };

    Ok(ReadReceipt {
        agent_identity,
        node_read,
        produced_url,
        claims_accessed,
        followup_addressed,
        timestamp,
        extras: map.into_iter().collect(),
    })
}

/// The conventional issue title for filing a receipt by hand.
pub fn receipt_title(receipt: &ReadReceipt) -> String {
    format!("agent-read: {}", receipt.produced_url)
}

/// The current UTC time in the format receipts carry: RFC 3339 with
/// second precision and a `Z` suffix.
pub fn now_timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// The outcome of checking a receipt against the document it claims to
/// have read. `empty_access` flags the vacuously consistent case of no
/// claims accessed at all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReceiptCheck {
    pub violations: Vec<Violation>,
    pub empty_access: bool,
}

impl ReceiptCheck {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that every accessed claim and the addressed follow-up item are
/// declared by the document of the node the receipt names.
///
/// Declared IDs are read straight off the item arrays, so a document with
/// duplicated IDs still yields an answer instead of an error.
pub fn validate_receipt(receipt: &ReadReceipt, paper: &PaperDocument) -> ReceiptCheck {
    let claims: BTreeSet<&str> = paper
        .claims
        .iter()
        .flatten()
        .map(|c| c.id.as_str())
        .collect();
    let followups: BTreeSet<&str> = paper
        .future_work
        .iter()
        .flatten()
        .map(|f| f.id.as_str())
        .collect();
    let mut violations = Vec::new();
    for (i, claim) in receipt.claims_accessed.iter().enumerate() {
        if !claims.contains(claim.as_str()) {
            violations.push(Violation {
                path: format!("/claims_accessed/{i}"),
                rule: Rule::UnknownClaim,
                message: format!("claim `{claim}` is not declared by the node read"),
            });
        }
    }
    if let Some(item) = &receipt.followup_addressed {
        if !followups.contains(item.as_str()) {
            violations.push(Violation {
                path: "/followup_addressed".to_string(),
                rule: Rule::UnknownFollowup,
                message: format!("follow-up item `{item}` is not declared by the node read"),
            });
        }
    }
    ReceiptCheck {
        violations,
        empty_access: receipt.claims_accessed.is_empty(),
    }
}

/// How one claim relates to a claim in a parent paper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffRelation {
    Supersedes,
    Strengthens,
    Contradicts,
}

impl DiffRelation {
    pub fn name(self) -> &'static str {
        match self {
            DiffRelation::Supersedes => "supersedes",
            DiffRelation::Strengthens => "strengthens",
            DiffRelation::Contradicts => "contradicts",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "supersedes" => Some(DiffRelation::Supersedes),
            "strengthens" => Some(DiffRelation::Strengthens),
            "contradicts" => Some(DiffRelation::Contradicts),
            _ => None,
        }
    }
}

impl std::fmt::Display for DiffRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A claim-level edge: the child claim `from_ref` relates to the parent
/// claim `to_ref`. Both ends are canonical references with C fragments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimDiffEdge {
    pub from_ref: String,
    pub to_ref: String,
    pub relation: DiffRelation,
}

/// A node-level built→read edge carrying its originating receipt.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceiptEdge {
    pub produced: String,
    pub read: String,
    pub receipt: ReadReceipt,
}

/// The propagation graph. Receipt and extends edges are node-level and
/// their union is guaranteed acyclic by construction; claim edges are
/// claim-level and unconstrained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationGraph {
    pub nodes: BTreeSet<String>,
    pub receipt_edges: Vec<ReceiptEdge>,
    pub extends_edges: Vec<(String, String)>,
    pub claim_edges: Vec<ClaimDiffEdge>,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("propagation graph has a cycle: {}", path.join(" -> "))]
    CycleDetected { path: Vec<String> },
    #[error("invalid `{field}` entry `{entry}` on node `{node_id}`: {reason}")]
    InvalidLink {
        node_id: String,
        field: &'static str,
        entry: String,
        reason: String,
    },
    #[error("claim edge endpoint `{reference}`: node `{node_id}` declares no claim `{claim}`")]
    UnknownEdgeClaim {
        reference: String,
        node_id: String,
        claim: String,
    },
    #[error("unknown start node `{0}`")]
    UnknownNode(String),
    #[error("claim lineage needs a reference with a claim fragment, got `{0}`")]
    InvalidFragment(String),
}

/// Traversal direction. Downstream walks from a paper to the work built on
/// it (read-node to producing-node); upstream walks back to the sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Downstream,
    Upstream,
}

/// Assemble the propagation graph from known documents, receipts, and any
/// extra claim-diff edges.
///
/// Claim-diff declarations inside each document's `network.claim_diffs`
/// become edges too, with bare `ref` IDs resolved against the declaring
/// node. Every edge endpoint whose document is known must declare the
/// referenced claim. A receipt whose `produced_url` matches no known node
/// still contributes an external leaf node.
pub fn build_graph(
    documents: &[(String, PaperDocument)],
    receipts: &[ReadReceipt],
    diffs: &[ClaimDiffEdge],
) -> Result<PropagationGraph, GraphError> {
    let known: BTreeMap<String, &PaperDocument> = documents
        .iter()
        .map(|(node_id, doc)| (normalize_node_id(node_id).to_string(), doc))
        .collect();
    let mut nodes: BTreeSet<String> = known.keys().cloned().collect();

    let mut receipt_edges = Vec::with_capacity(receipts.len());
    for receipt in receipts {
        let read = normalize_node_id(&receipt.node_read).to_string();
        let produced = normalize_node_id(&receipt.produced_url).to_string();
        nodes.insert(read.clone());
        nodes.insert(produced.clone());
        receipt_edges.push(ReceiptEdge {
            produced,
            read,
            receipt: receipt.clone(),
        });
    }

    let mut extends_edges = Vec::new();
    let mut claim_edges = Vec::new();
    for (raw_node_id, doc) in documents {
        let node_id = normalize_node_id(raw_node_id).to_string();
        let Some(network) = &doc.network else { continue };
        for entry in network.extends.iter().flatten() {
            let parent = parse_node_part(entry).map_err(|reason| GraphError::InvalidLink {
                node_id: node_id.clone(),
                field: "extends",
                entry: entry.clone(),
                reason,
            })?;
            nodes.insert(parent.clone());
            extends_edges.push((node_id.clone(), parent));
        }
        for decl in network.claim_diffs.iter().flatten() {
            let from_ref = if is_claim_id(&decl.reference) {
                format!("{node_id}#{}", decl.reference)
            } else {
                decl.reference.clone()
            };
            let invalid = |entry: &str, reason: String| GraphError::InvalidLink {
                node_id: node_id.clone(),
                field: "claim_diffs",
                entry: entry.to_string(),
                reason,
            };
            let relation = DiffRelation::from_name(&decl.relation)
                .ok_or_else(|| invalid(&decl.relation, "unknown relation".to_string()))?;
            let from = parse_claim_ref(&from_ref).map_err(|r| invalid(&from_ref, r))?;
            let to = parse_claim_ref(&decl.parent_ref).map_err(|r| invalid(&decl.parent_ref, r))?;
            claim_edges.push(assemble_claim_edge(from, to, relation));
        }
    }
    for diff in diffs {
        let invalid = |entry: &str, reason: String| GraphError::InvalidLink {
            node_id: "(explicit diff)".to_string(),
            field: "claim_diffs",
            entry: entry.to_string(),
            reason,
        };
        let from = parse_claim_ref(&diff.from_ref).map_err(|r| invalid(&diff.from_ref, r))?;
        let to = parse_claim_ref(&diff.to_ref).map_err(|r| invalid(&diff.to_ref, r))?;
        claim_edges.push(assemble_claim_edge(from, to, diff.relation));
    }

    for edge in &claim_edges {
        for reference in [&edge.from_ref, &edge.to_ref] {
            let (node_id, claim) = reference
                .rsplit_once('#')
                .expect("claim refs are canonical by construction");
            nodes.insert(node_id.to_string());
            if let Some(doc) = known.get(node_id) {
                let declared = doc.claims.iter().flatten().any(|c| c.id == claim);
                if !declared {
                    return Err(GraphError::UnknownEdgeClaim {
                        reference: reference.clone(),
                        node_id: node_id.to_string(),
                        claim: claim.to_string(),
                    });
                }
            }
        }
    }

    let graph = PropagationGraph {
        nodes,
        receipt_edges,
        extends_edges,
        claim_edges,
    };
    if let Some(path) = find_cycle(&graph) {
        return Err(GraphError::CycleDetected { path });
    }
    Ok(graph)
}

/// The node part of a reference, for extends entries that may carry a
/// fragment.
fn parse_node_part(entry: &str) -> Result<String, String> {
    let Reference { node_id, .. } = parse_reference(entry).map_err(|e| e.to_string())?;
    Ok(node_id)
}

/// Parse and canonicalize a reference that must carry a claim fragment.
fn parse_claim_ref(reference: &str) -> Result<(String, String), String> {
    let parsed = parse_reference(reference).map_err(|e| e.to_string())?;
    match parsed.fragment {
        Some(fragment) if is_claim_id(&fragment) => Ok((parsed.node_id, fragment)),
        Some(fragment) => Err(format!("fragment `{fragment}` is not a claim ID")),
        None => Err("missing claim fragment".to_string()),
    }
}

fn assemble_claim_edge(
    from: (String, String),
    to: (String, String),
    relation: DiffRelation,
) -> ClaimDiffEdge {
    ClaimDiffEdge {
        from_ref: format!("{}#{}", from.0, from.1),
        to_ref: format!("{}#{}", to.0, to.1),
        relation,
    }
}

/// Adjacency of the node-level union graph in built→read direction:
/// producing node to read node.
fn union_adjacency(graph: &PropagationGraph) -> BTreeMap<&str, BTreeSet<&str>> {
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for edge in &graph.receipt_edges {
        adj.entry(&edge.produced).or_default().insert(&edge.read);
    }
    for (child, parent) in &graph.extends_edges {
        adj.entry(child).or_default().insert(parent);
    }
    adj
}

/// Depth-first cycle search over the union of receipt and extends edges.
/// Returns a closed path like `[A, B, A]` when a cycle exists.
fn find_cycle(graph: &PropagationGraph) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        InProgress,
        Done,
    }
    fn visit<'a>(
        node: &'a str,
        adj: &BTreeMap<&str, BTreeSet<&'a str>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        marks.insert(node, Mark::InProgress);
        stack.push(node);
        for &next in adj.get(node).into_iter().flatten() {
            match marks.get(next) {
                Some(Mark::Done) => {}
                Some(Mark::InProgress) => {
                    let start = stack.iter().position(|&n| n == next).expect("on stack");
                    let mut path: Vec<String> =
                        stack[start..].iter().map(|n| n.to_string()).collect();
                    path.push(next.to_string());
                    return Some(path);
                }
                None => {
                    if let Some(path) = visit(next, adj, marks, stack) {
                        return Some(path);
                    }
                }
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
        None
    }

    let adj = union_adjacency(graph);
    let mut marks = BTreeMap::new();
    let mut stack = Vec::new();
    for node in &graph.nodes {
        if !marks.contains_key(node.as_str()) {
            if let Some(path) = visit(node, &adj, &mut marks, &mut stack) {
                return Some(path);
            }
        }
    }
    None
}

/// Walk the nodes reachable from `start`, in deterministic topological
/// order with lexicographic tie-breaking.
pub fn traverse(
    graph: &PropagationGraph,
    start: &str,
    direction: Direction,
) -> Result<Vec<String>, GraphError> {
    let start = normalize_node_id(start);
    if !graph.nodes.contains(start) {
        return Err(GraphError::UnknownNode(start.to_string()));
    }
    // Built→read adjacency runs produced→read; downstream asks "who built
    // on this node", which follows those edges backwards.
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (from, to) in union_adjacency(graph) {
        for target in to {
            let (a, b) = match direction {
                Direction::Downstream => (target, from),
                Direction::Upstream => (from, target),
            };
            adj.entry(a).or_default().insert(b);
        }
    }

    let mut reachable: BTreeSet<&str> = BTreeSet::new();
    let mut frontier = vec![start];
    while let Some(node) = frontier.pop() {
        if reachable.insert(node) {
            frontier.extend(adj.get(node).into_iter().flatten().copied());
        }
    }

    let mut indegree: BTreeMap<&str, usize> = reachable.iter().map(|&n| (n, 0)).collect();
    for &node in &reachable {
        for &next in adj.get(node).into_iter().flatten() {
            if reachable.contains(next) {
                *indegree.get_mut(next).expect("reachable") += 1;
            }
        }
    }

    let mut ready: BinaryHeap<std::cmp::Reverse<&str>> = indegree
        .iter()
        .filter(|&(_, &degree)| degree == 0)
        .map(|(&node, _)| std::cmp::Reverse(node))
        .collect();
    let mut order = Vec::with_capacity(reachable.len());
    while let Some(std::cmp::Reverse(node)) = ready.pop() {
        order.push(node.to_string());
        for &next in adj.get(node).into_iter().flatten() {
            if let Some(degree) = indegree.get_mut(next) {
                *degree -= 1;
                if *degree == 0 {
                    ready.push(std::cmp::Reverse(next));
                }
            }
        }
    }
    Ok(order)
}

/// Every claim edge connected to the given claim, directly or through
/// other claim edges, as a deterministic breadth-first list.
pub fn claim_lineage(
    graph: &PropagationGraph,
    claim_ref: &str,
) -> Result<Vec<ClaimDiffEdge>, GraphError> {
    let canonical = match parse_claim_ref(claim_ref) {
        Ok((node, claim)) => format!("{node}#{claim}"),
        Err(_) => return Err(GraphError::InvalidFragment(claim_ref.to_string())),
    };
    let mut frontier: BTreeSet<String> = BTreeSet::from([canonical]);
    let mut seen_claims = frontier.clone();
    let mut collected: Vec<usize> = Vec::new();
    let mut used = vec![false; graph.claim_edges.len()];
    while !frontier.is_empty() {
        let mut next_frontier = BTreeSet::new();
        for (i, edge) in graph.claim_edges.iter().enumerate() {
            if used[i] {
                continue;
            }
            if frontier.contains(&edge.from_ref) || frontier.contains(&edge.to_ref) {
                used[i] = true;
                collected.push(i);
                for endpoint in [&edge.from_ref, &edge.to_ref] {
                    if seen_claims.insert(endpoint.clone()) {
                        next_frontier.insert(endpoint.clone());
                    }
                }
            }
        }
        frontier = next_frontier;
    }
    Ok(collected
        .into_iter()
        .map(|i| graph.claim_edges[i].clone())
        .collect())
}

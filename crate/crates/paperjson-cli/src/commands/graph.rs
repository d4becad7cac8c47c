use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use paperjson::document::{parse_document, PaperDocument};
use paperjson::network::{
    build_graph, claim_lineage, parse_receipt, traverse, Direction, GraphError, PropagationGraph,
    ReadReceipt,
};
use serde_json::{json, Value};

use crate::output::{read_input, Out, EXIT_CROSSREF, EXIT_OK, EXIT_SCHEMA, EXIT_USAGE};

#[derive(Subcommand)]
pub enum GraphCommand {
    /// Assemble the propagation graph from companion files and receipts
    Build(BuildArgs),
    /// Walk the graph from a node, in deterministic topological order
    Traverse(TraverseArgs),
    /// List every claim-diff edge connected to a claim
    Lineage(LineageArgs),
}

#[derive(Args)]
pub struct BuildArgs {
    /// Companion files and receipt files, in any mix; receipts are
    /// recognized by their `node_read` field
    #[arg(required = true, value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Print the graph as canonical JSON on standard output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub struct TraverseArgs {
    /// Node ID to start from
    #[arg(value_name = "NODE_ID")]
    start: String,
    /// Which way to walk
    #[arg(long, value_enum)]
    direction: DirectionArg,
    /// Companion files and receipt files describing the graph
    #[arg(required = true, value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Print the visit order as canonical JSON on standard output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub struct LineageArgs {
    /// Canonical claim reference, like https://example.org/paper#C1
    #[arg(value_name = "CLAIM_REF")]
    claim_ref: String,
    /// Companion files and receipt files describing the graph
    #[arg(required = true, value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Print the connected edges as canonical JSON on standard output
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    /// Toward the work built on the start node
    Downstream,
    /// Toward the sources the start node was built on
    Upstream,
}

impl From<DirectionArg> for Direction {
    fn from(arg: DirectionArg) -> Direction {
        match arg {
            DirectionArg::Downstream => Direction::Downstream,
            DirectionArg::Upstream => Direction::Upstream,
        }
    }
}

pub fn run(command: GraphCommand) -> i32 {
    match command {
        GraphCommand::Build(args) => run_build(args),
        GraphCommand::Traverse(args) => run_traverse(args),
        GraphCommand::Lineage(args) => run_lineage(args),
    }
}

/// Documents keyed by their declared node ID, plus standalone receipts.
type GraphInputs = (Vec<(String, PaperDocument)>, Vec<ReadReceipt>);

/// Read the input files and split them into documents and receipts.
fn load_inputs(out: &Out, paths: &[PathBuf]) -> Result<GraphInputs, i32> {
    let mut documents = Vec::new();
    let mut receipts = Vec::new();
    for path in paths {
        let bytes = read_input(out, path)?;
        let value: Value = serde_json::from_slice(&bytes).map_err(|e| {
            out.fail(
                EXIT_SCHEMA,
                &format!("{} is not well-formed JSON: {e}", path.display()),
            )
        })?;
        if value.get("node_read").is_some() {
            let receipt = parse_receipt(&bytes)
                .map_err(|e| out.fail(EXIT_SCHEMA, &format!("{}: {e}", path.display())))?;
            receipts.push(receipt);
        } else {
            let doc = parse_document(&bytes)
                .map_err(|e| out.fail(EXIT_SCHEMA, &format!("{}: {e}", path.display())))?;
            let node_id = doc
                .network
                .as_ref()
                .and_then(|n| n.node_id.clone())
                .ok_or_else(|| {
                    out.fail(
                        EXIT_SCHEMA,
                        &format!(
                            "{} declares no network.node_id; cannot place it in the graph",
                            path.display()
                        ),
                    )
                })?;
            documents.push((node_id, doc));
        }
    }
    Ok((documents, receipts))
}

fn build_from(out: &Out, inputs: &[PathBuf]) -> Result<PropagationGraph, i32> {
    let (documents, receipts) = load_inputs(out, inputs)?;
    build_graph(&documents, &receipts, &[])
        .map_err(|e| out.fail(EXIT_CROSSREF, &e.to_string()))
}

fn run_build(args: BuildArgs) -> i32 {
    let out = Out::new(args.json);
    let graph = match build_from(&out, &args.inputs) {
        Ok(graph) => graph,
        Err(code) => return code,
    };
    out.note(&format!(
        "graph: {} node(s), {} receipt edge(s), {} extends edge(s), {} claim edge(s)",
        graph.nodes.len(),
        graph.receipt_edges.len(),
        graph.extends_edges.len(),
        graph.claim_edges.len()
    ));
    for node in &graph.nodes {
        out.plain(node);
    }
    out.machine(json!({
        "exit_code": EXIT_OK,
        "graph": graph,
    }));
    EXIT_OK
}

fn run_traverse(args: TraverseArgs) -> i32 {
    let out = Out::new(args.json);
    let graph = match build_from(&out, &args.inputs) {
        Ok(graph) => graph,
        Err(code) => return code,
    };
    match traverse(&graph, &args.start, args.direction.into()) {
        Ok(order) => {
            for node in &order {
                out.plain(node);
            }
            out.machine(json!({
                "exit_code": EXIT_OK,
                "order": order,
            }));
            EXIT_OK
        }
        Err(e) => out.fail(EXIT_CROSSREF, &e.to_string()),
    }
}

fn run_lineage(args: LineageArgs) -> i32 {
    let out = Out::new(args.json);
    let graph = match build_from(&out, &args.inputs) {
        Ok(graph) => graph,
        Err(code) => return code,
    };
    match claim_lineage(&graph, &args.claim_ref) {
        Ok(edges) => {
            for edge in &edges {
                out.plain(&format!(
                    "{} -[{}]-> {}",
                    edge.from_ref,
                    edge.relation.name(),
                    edge.to_ref
                ));
            }
            out.machine(json!({
                "exit_code": EXIT_OK,
                "edges": edges,
            }));
            EXIT_OK
        }
        // A reference without a claim fragment is a malformed invocation,
        // not a property of the graph.
        Err(GraphError::InvalidFragment(_)) => {
            out.fail(EXIT_USAGE, &format!(
                "`{}` has no claim fragment; pass a reference like https://example.org/paper#C1",
                args.claim_ref
            ))
        }
        Err(e) => out.fail(EXIT_CROSSREF, &e.to_string()),
    }
}

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Subcommand};
use paperjson::document::parse_document;
use paperjson::id::is_claim_id;
use paperjson::registry::{
    load_index, save_index, serve, AddOutcome, RegistryError, RegistryIndex,
};
use serde_json::json;

use crate::output::{read_input, Out, EXIT_CROSSREF, EXIT_NOT_FOUND, EXIT_OK, EXIT_SCHEMA};

#[derive(Subcommand)]
pub enum RegistryCommand {
    /// Validate a companion file and index it under its node ID
    Add(AddArgs),
    /// Query the index by claim ID, convention version, or title text
    Query(QueryArgs),
    /// Serve the index read-only over HTTP
    Serve(ServeArgs),
}

#[derive(Args)]
pub struct AddArgs {
    /// Companion file to index
    paper: PathBuf,
    /// Registry file to create or update
    #[arg(long, value_name = "FILE")]
    index: PathBuf,
    /// Node ID to file it under (default: the document's network.node_id)
    #[arg(long, value_name = "URL")]
    node_id: Option<String>,
    /// Print a canonical JSON report on standard output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group = ArgGroup::new("selector").required(true).multiple(false))]
pub struct QueryArgs {
    /// Registry file to read
    #[arg(long, value_name = "FILE")]
    index: PathBuf,
    /// Find nodes declaring this claim ID
    #[arg(long, value_name = "C1", value_parser = claim_id, group = "selector")]
    claim: Option<String>,
    /// Find nodes with this exact convention version
    #[arg(long, value_name = "SEMVER", group = "selector")]
    version: Option<String>,
    /// Find nodes whose title contains this text (case-insensitive)
    #[arg(long, value_name = "TEXT", value_parser = non_empty, group = "selector")]
    title: Option<String>,
    /// Print results as canonical JSON on standard output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub struct ServeArgs {
    /// Registry file to serve
    #[arg(long, value_name = "FILE")]
    index: PathBuf,
    /// Address to bind
    #[arg(long, value_name = "HOST:PORT", default_value = "127.0.0.1:8080")]
    addr: String,
}

pub fn run(command: RegistryCommand) -> i32 {
    match command {
        RegistryCommand::Add(args) => run_add(args),
        RegistryCommand::Query(args) => run_query(args),
        RegistryCommand::Serve(args) => run_serve(args),
    }
}

fn claim_id(raw: &str) -> Result<String, String> {
    if is_claim_id(raw) {
        Ok(raw.to_string())
    } else {
        Err(format!("`{raw}` is not a claim ID (C followed by digits)"))
    }
}

fn non_empty(raw: &str) -> Result<String, String> {
    if raw.is_empty() {
        Err("needle must be non-empty".to_string())
    } else {
        Ok(raw.to_string())
    }
}

/// Load an index file, mapping a missing file to the not-found exit code
/// and anything unreadable or unsupported to a structural failure.
fn load_existing(out: &Out, path: &Path) -> Result<RegistryIndex, i32> {
    load_index(path).map_err(|e| match e {
        RegistryError::IoError { ref source, .. }
            if source.kind() == std::io::ErrorKind::NotFound =>
        {
            out.fail(EXIT_NOT_FOUND, &e.to_string())
        }
        _ => out.fail(EXIT_SCHEMA, &e.to_string()),
    })
}

fn run_add(args: AddArgs) -> i32 {
    let out = Out::new(args.json);
    let bytes = match read_input(&out, &args.paper) {
        Ok(bytes) => bytes,
        Err(code) => return code,
    };
    let doc = match parse_document(&bytes) {
        Ok(doc) => doc,
        Err(e) => {
            return out.fail(EXIT_SCHEMA, &format!("{}: {e}", args.paper.display()));
        }
    };

    let mut index = if args.index.exists() {
        match load_existing(&out, &args.index) {
            Ok(index) => index,
            Err(code) => return code,
        }
    } else {
        RegistryIndex::new()
    };

    let node_id = match args
        .node_id
        .clone()
        .or_else(|| doc.network.as_ref().and_then(|n| n.node_id.clone()))
    {
        Some(node_id) => node_id,
        None => {
            return out.fail(
                EXIT_SCHEMA,
                &format!(
                    "{} declares no network.node_id; pass --node-id to file it",
                    args.paper.display()
                ),
            );
        }
    };

    let outcome = match index.add(&node_id, &doc) {
        Ok(outcome) => outcome,
        Err(RegistryError::ValidationFailed { violations }) => {
            for violation in &violations {
                out.note(&format!("violation: {violation}"));
            }
            return out.fail(
                EXIT_SCHEMA,
                &format!(
                    "{} failed validation with {} violation(s); not indexed",
                    args.paper.display(),
                    violations.len()
                ),
            );
        }
        Err(e) => return out.fail(EXIT_SCHEMA, &e.to_string()),
    };

    if let Err(e) = save_index(&index, &args.index) {
        return out.fail(EXIT_SCHEMA, &e.to_string());
    }

    let entry = index.entries.get(&normalized(&node_id)).expect("just added");
    let verb = match outcome {
        AddOutcome::Inserted => "indexed",
        AddOutcome::Replaced => "replaced",
        AddOutcome::Unchanged => "unchanged",
    };
    out.note(&format!(
        "{verb}: {} in {}",
        entry.node_id,
        args.index.display()
    ));
    out.machine(json!({
        "exit_code": EXIT_OK,
        "outcome": verb,
        "node_id": entry.node_id,
        "document_digest": entry.document_digest,
    }));
    EXIT_OK
}

fn normalized(node_id: &str) -> String {
    paperjson::document::normalize_node_id(node_id).to_string()
}

fn run_query(args: QueryArgs) -> i32 {
    let out = Out::new(args.json);
    let index = match load_existing(&out, &args.index) {
        Ok(index) => index,
        Err(code) => return code,
    };
    // The arg group guarantees exactly one selector is present.
    let results = if let Some(claim) = &args.claim {
        index
            .query_claim(claim)
            .expect("claim ID shape enforced by the argument parser")
    } else if let Some(version) = &args.version {
        index.query_version(version)
    } else {
        let needle = args.title.as_deref().expect("selector group");
        match index.query_title(needle) {
            Ok(results) => results,
            Err(e) => return out.fail(EXIT_CROSSREF, &e.to_string()),
        }
    };

    for line in &results {
        out.plain(line);
    }
    if results.is_empty() {
        out.note("no matches");
    }
    out.machine(json!({
        "exit_code": EXIT_OK,
        "results": results,
    }));
    EXIT_OK
}

fn run_serve(args: ServeArgs) -> i32 {
    let out = Out::new(false);
    let index = match load_existing(&out, &args.index) {
        Ok(index) => index,
        Err(code) => return code,
    };
    let entries = index.entries.len();
    let running = match serve(index, &args.addr) {
        Ok(running) => running,
        Err(e) => return out.fail(EXIT_SCHEMA, &e.to_string()),
    };
    out.note(&format!(
        "registry: serving {entries} entr{} on http://{}; stop with Ctrl-C",
        if entries == 1 { "y" } else { "ies" },
        running.local_addr()
    ));
    running.wait();
    EXIT_OK
}

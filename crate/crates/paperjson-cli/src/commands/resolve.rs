use clap::Args;
use paperjson::document::document_to_value;
use paperjson::resolver::{resolve, HttpFetcher, ResolvedItem};
use serde_json::{json, Value};

use crate::output::{Out, EXIT_OK, EXIT_SCHEMA};

#[derive(Args)]
pub struct ResolveArgs {
    /// Canonical reference: a node URL, optionally with an item fragment
    /// like https://example.org/paper#C1
    reference: String,
    /// Print a canonical JSON envelope on standard output
    #[arg(long)]
    json: bool,
}

pub fn run(args: ResolveArgs) -> i32 {
    let out = Out::new(args.json);
    if args.reference.starts_with("http://") {
        out.note("warning: plain-HTTP node ID; the fetched document is open to tampering in transit");
    }
    let fetcher = HttpFetcher::new();
    match resolve(&args.reference, &fetcher) {
        Ok(resolution) => {
            out.note(&format!("resolved from {}", resolution.source_url));
            let (kind, item) = describe(resolution.item);
            out.plain_value(&item);
            out.machine(json!({
                "exit_code": EXIT_OK,
                "kind": kind,
                "item": item,
                "source_url": resolution.source_url,
            }));
            EXIT_OK
        }
        Err(e) => out.fail(EXIT_SCHEMA, &e.to_string()),
    }
}

fn describe(item: ResolvedItem) -> (&'static str, Value) {
    match item {
        ResolvedItem::Claim(claim) => ("claim", to_value(&claim)),
        ResolvedItem::Definition(def) => ("definition", to_value(&def)),
        ResolvedItem::Theorem(theorem) => ("theorem", to_value(&theorem)),
        ResolvedItem::FollowUp(item) => ("future_work", to_value(&item)),
        ResolvedItem::WholeDocument(doc) => ("document", document_to_value(&doc)),
    }
}

fn to_value<T: serde::Serialize>(item: &T) -> Value {
    serde_json::to_value(item).expect("document items serialize to JSON")
}

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use paperjson::canonical::{canonical_json_bytes, sort_keys};
use paperjson::document::{normalize_node_id, parse_document};
use paperjson::id::{is_claim_id, is_followup_id};
use paperjson::network::{
    now_timestamp, parse_receipt, receipt_title, validate_receipt, ReadReceipt,
};
use paperjson::schema::{embedded_schema, validate};
use serde_json::{json, Value};

use crate::output::{read_input, Out, EXIT_CROSSREF, EXIT_OK, EXIT_SCHEMA};

#[derive(Subcommand)]
pub enum ReceiptCommand {
    /// Compose a read receipt and print the issue title to file it under
    New(NewArgs),
    /// Check a receipt against the companion file of the node it names
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct NewArgs {
    /// Node ID of the paper that was read
    #[arg(long, value_name = "URL")]
    node: String,
    /// URL of the artifact built from it
    #[arg(long, value_name = "URL")]
    produced: String,
    /// Who did the reading
    #[arg(long, value_name = "TEXT")]
    agent: String,
    /// Claim IDs that were accessed, comma separated
    #[arg(long, value_name = "C1,C2", value_delimiter = ',', value_parser = claim_id)]
    claims: Vec<String>,
    /// Follow-up item the artifact addresses
    #[arg(long, value_name = "F1", value_parser = followup_id)]
    followup: Option<String>,
    /// Write the receipt here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Receipt file to check
    receipt: PathBuf,
    /// Companion file of the node the receipt says it read
    #[arg(long, value_name = "PAPER_JSON")]
    paper: PathBuf,
    /// Print a canonical JSON report on standard output
    #[arg(long)]
    json: bool,
}

pub fn run(command: ReceiptCommand) -> i32 {
    match command {
        ReceiptCommand::New(args) => run_new(args),
        ReceiptCommand::Verify(args) => run_verify(args),
    }
}

fn claim_id(raw: &str) -> Result<String, String> {
    if is_claim_id(raw) {
        Ok(raw.to_string())
    } else {
        Err(format!("`{raw}` is not a claim ID (C followed by digits)"))
    }
}

fn followup_id(raw: &str) -> Result<String, String> {
    if is_followup_id(raw) {
        Ok(raw.to_string())
    } else {
        Err(format!(
            "`{raw}` is not a follow-up item ID (F followed by digits)"
        ))
    }
}

fn run_new(args: NewArgs) -> i32 {
    let out = Out::new(false);
    let receipt = ReadReceipt {
        agent_identity: args.agent,
        node_read: args.node,
        produced_url: args.produced,
        claims_accessed: args.claims,
        followup_addressed: args.followup,
        timestamp: Some(now_timestamp()),
        extras: BTreeMap::new(),
    };
    let value = serde_json::to_value(&receipt).expect("receipts serialize to JSON");
    let bytes = canonical_json_bytes(&sort_keys(value));
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &bytes) {
                return out.fail(
                    EXIT_SCHEMA,
                    &format!("cannot write {}: {e}", path.display()),
                );
            }
            out.note(&format!("wrote receipt to {}", path.display()));
        }
        None => {
            std::io::stdout()
                .write_all(&bytes)
                .expect("write to stdout");
        }
    }
    out.note("file this as an issue on the node that was read, titled:");
    out.note(&receipt_title(&receipt));
    EXIT_OK
}

fn run_verify(args: VerifyArgs) -> i32 {
    let out = Out::new(args.json);
    let receipt_bytes = match read_input(&out, &args.receipt) {
        Ok(bytes) => bytes,
        Err(code) => return code,
    };
    let paper_bytes = match read_input(&out, &args.paper) {
        Ok(bytes) => bytes,
        Err(code) => return code,
    };

    let receipt = match parse_receipt(&receipt_bytes) {
        Ok(receipt) => receipt,
        Err(e) => {
            return out.fail(
                EXIT_SCHEMA,
                &format!("{}: {e}", args.receipt.display()),
            );
        }
    };

    let value: Value = match serde_json::from_slice(&paper_bytes) {
        Ok(value) => value,
        Err(e) => {
            return out.fail(
                EXIT_SCHEMA,
                &format!("{} is not well-formed JSON: {e}", args.paper.display()),
            );
        }
    };
    // The receipt only means something against a conforming document.
    let violations = validate(&value, embedded_schema());
    if !violations.is_empty() {
        for violation in &violations {
            out.note(&format!("violation: {violation}"));
        }
        return out.fail(
            EXIT_SCHEMA,
            &format!(
                "{} has {} schema violation(s); fix the document before verifying receipts",
                args.paper.display(),
                violations.len()
            ),
        );
    }
    let doc = parse_document(&paper_bytes).expect("schema-valid document parses");

    if let Some(declared) = doc.network.as_ref().and_then(|n| n.node_id.as_deref()) {
        if normalize_node_id(declared) != normalize_node_id(&receipt.node_read) {
            out.note(&format!(
                "warning: receipt says it read `{}` but the document declares node ID `{declared}`",
                receipt.node_read
            ));
        }
    }

    let check = validate_receipt(&receipt, &doc);
    if check.empty_access {
        out.note("warning: receipt accessed no claims; it is vacuously consistent");
    }
    for violation in &check.violations {
        out.note(&format!("violation: {violation}"));
    }

    let code = if check.passes() { EXIT_OK } else { EXIT_CROSSREF };
    out.machine(json!({
        "exit_code": code,
        "violations": check.violations,
        "empty_access": check.empty_access,
    }));
    if check.passes() {
        out.note(&format!(
            "ok: receipt is consistent with {}",
            args.paper.display()
        ));
    }
    code
}

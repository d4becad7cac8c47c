use std::path::PathBuf;

use clap::Args;
use paperjson::crosscheck::{crosscheck, extract_ids, CrosscheckReport};
use paperjson::document::{declared_ids, parse_document};
use paperjson::schema::{embedded_schema, validate, Violation};
use serde_json::{json, Value};

use crate::output::{read_input, Out, EXIT_CROSSREF, EXIT_OK, EXIT_SCHEMA};

#[derive(Args)]
pub struct ValidateArgs {
    /// Companion file to validate
    paper: PathBuf,
    /// Paper source file to cross-check declared IDs against
    #[arg(long, value_name = "SOURCE")]
    against: Option<PathBuf>,
    /// Print a canonical JSON report on standard output
    #[arg(long)]
    json: bool,
}

pub fn run(args: ValidateArgs) -> i32 {
    let out = Out::new(args.json);
    // Both inputs are read up front: a missing file outranks every other
    // failure, whichever argument names it.
    let paper_bytes = match read_input(&out, &args.paper) {
        Ok(bytes) => bytes,
        Err(code) => return code,
    };
    let source_bytes = match &args.against {
        Some(path) => match read_input(&out, path) {
            Ok(bytes) => Some(bytes),
            Err(code) => return code,
        },
        None => None,
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

    let violations = validate(&value, embedded_schema());
    if !violations.is_empty() {
        for violation in &violations {
            out.note(&format!("violation: {violation}"));
        }
        let skipped = if args.against.is_some() {
            "; cross-check skipped"
        } else {
            ""
        };
        out.note(&format!(
            "{}: {} schema violation(s){skipped}",
            args.paper.display(),
            violations.len()
        ));
        out.machine(report(EXIT_SCHEMA, &violations, None));
        return EXIT_SCHEMA;
    }

    let Some(source_bytes) = source_bytes else {
        out.note(&format!(
            "ok: {} conforms to the schema (no cross-check requested)",
            args.paper.display()
        ));
        out.machine(report(EXIT_OK, &[], None));
        return EXIT_OK;
    };

    let source_text = match String::from_utf8(source_bytes) {
        Ok(text) => text,
        Err(e) => {
            return out.fail(
                EXIT_CROSSREF,
                &format!(
                    "{} is not UTF-8 text: {e}",
                    args.against.as_ref().expect("source path").display()
                ),
            );
        }
    };

    // A schema-valid byte stream is a JSON object with distinct,
    // well-formed IDs, so the typed parse and ID collection cannot fail.
    let doc = parse_document(&paper_bytes).expect("schema-valid document parses");
    let declared = declared_ids(&doc).expect("schema-valid document has distinct IDs");
    let check = crosscheck(&declared, &extract_ids(&source_text));

    for id in &check.missing_in_source {
        out.note(&format!(
            "cross-check: declared ID {id} never appears in the source"
        ));
    }
    for id in &check.undeclared_in_json {
        out.note(&format!(
            "cross-check: source mentions {id}, which the companion file does not declare"
        ));
    }

    if check.passes() {
        out.note(&format!(
            "ok: {} conforms and all IDs line up with {}",
            args.paper.display(),
            args.against.as_ref().expect("source path").display()
        ));
        out.machine(report(EXIT_OK, &[], Some(&check)));
        EXIT_OK
    } else {
        out.machine(report(EXIT_CROSSREF, &[], Some(&check)));
        EXIT_CROSSREF
    }
}

fn report(exit_code: i32, violations: &[Violation], check: Option<&CrosscheckReport>) -> Value {
    json!({
        "exit_code": exit_code,
        "schema_violations": violations,
        "crosscheck": check,
    })
}

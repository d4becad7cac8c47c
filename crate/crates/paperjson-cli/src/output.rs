//! Output discipline shared by every subcommand.
//!
//! Standard output carries machine-readable results only: canonical JSON
//! under `--json`, or the command's primary payload (resolved items,
//! traversal orders, generated receipts) in plain mode. Everything meant
//! for a human reading the terminal goes to standard error.

use std::io::Write;
use std::path::Path;

use paperjson::canonical::{canonical_json_bytes, sort_keys};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 1;
pub const EXIT_CROSSREF: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub struct Out {
    json: bool,
}

impl Out {
    pub fn new(json: bool) -> Self {
        Out { json }
    }

    /// Print one human-readable line on standard error.
    pub fn note(&self, message: &str) {
        eprintln!("{message}");
    }

    /// Emit the machine report on standard output; no-op in plain mode.
    pub fn machine(&self, value: Value) {
        if self.json {
            write_canonical(&value);
        }
    }

    /// Print one plain-mode result line on standard output; no-op under
    /// `--json`, where the machine report owns the stream.
    pub fn plain(&self, line: &str) {
        if !self.json {
            println!("{line}");
        }
    }

    /// Print a JSON value on standard output in plain mode only.
    pub fn plain_value(&self, value: &Value) {
        if !self.json {
            write_canonical(value);
        }
    }

    /// Report a failure on standard error and return the exit code, with
    /// a machine-readable error envelope under `--json`.
    pub fn fail(&self, code: i32, message: &str) -> i32 {
        eprintln!("error: {message}");
        if self.json {
            write_canonical(&serde_json::json!({
                "error": message,
                "exit_code": code,
            }));
        }
        code
    }
}

/// Write a value to standard output as canonical JSON: sorted keys,
/// two-space indentation, trailing newline.
fn write_canonical(value: &Value) {
    let bytes = canonical_json_bytes(&sort_keys(value.clone()));
    std::io::stdout()
        .write_all(&bytes)
        .expect("write to stdout");
}

/// Read an input file. Any read failure maps to the file-not-found exit
/// code: an input the tool cannot open is indistinguishable, for the
/// caller's purposes, from one that is not there.
pub fn read_input(out: &Out, path: &Path) -> Result<Vec<u8>, i32> {
    std::fs::read(path)
        .map_err(|e| out.fail(EXIT_NOT_FOUND, &format!("cannot read {}: {e}", path.display())))
}

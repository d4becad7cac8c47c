//! Source-agreement checking: every ID declared in the companion file must
//! appear verbatim in the paper source, and every ID found in the source
//! must be declared.
//!
//! The scan is dialect-blind. Comments and code blocks are searched like
//! prose, and the file extension is never interpreted; the only contract is
//! UTF-8 text. "Verbatim" is a token-boundary match: `C1` never fires
//! inside `C12` or `ABC123`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::document::IdSet;

/// One token-boundary occurrence of a stable ID in a source file.
/// `line` and `column` are 1-based; columns count Unicode scalar values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdOccurrence {
    pub id: String,
    pub line: usize,
    pub column: usize,
}

/// The outcome of comparing declared IDs against source occurrences.
/// `missing_in_source` and `undeclared_in_json` are disjoint by
/// construction; the check passes iff both are empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub missing_in_source: BTreeSet<String>,
    pub undeclared_in_json: BTreeSet<String>,
    pub occurrences: Vec<IdOccurrence>,
}

impl CrosscheckReport {
    pub fn passes(&self) -> bool {
        self.missing_in_source.is_empty() && self.undeclared_in_json.is_empty()
    }
}

/// Scan source text for stable-ID tokens, in order of appearance.
///
/// A token is one of `C`, `D`, `T`, `F` followed by one or more ASCII
/// digits, where the character before is not alphanumeric and the character
/// after is neither a letter nor a digit. The boundary test uses Unicode
/// alphanumerics, so an ID glued to accented or non-Latin letters is
/// rejected the same way as `xC1`.
pub fn extract_ids(source_text: &str) -> Vec<IdOccurrence> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut prev: Option<char> = None;
    let mut chars = source_text.chars().peekable();
    while let Some(c) = chars.next() {
        if matches!(c, 'C' | 'D' | 'T' | 'F') && !prev.is_some_and(char::is_alphanumeric) {
            let mut digits = String::new();
            while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(d);
                chars.next();
            }
            let boundary_ok = !chars.peek().copied().is_some_and(char::is_alphanumeric);
            if !digits.is_empty() && boundary_ok {
                out.push(IdOccurrence {
                    id: format!("{c}{digits}"),
                    line,
                    column,
                });
            }
            // The consumed digits cannot start another token; advance the
            // position past them and remember the last one as `prev`.
            column += 1 + digits.chars().count();
            prev = digits.chars().last().or(Some(c));
            continue;
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
        prev = Some(c);
    }
    out
}

/// Compare declared IDs with source occurrences in both directions.
pub fn crosscheck(declared: &IdSet, occurrences: &[IdOccurrence]) -> CrosscheckReport {
    let found: BTreeSet<&str> = occurrences.iter().map(|o| o.id.as_str()).collect();
    let missing_in_source = declared
        .iter()
        .filter(|id| !found.contains(id.as_str()))
        .cloned()
        .collect();
    let undeclared_in_json = found
        .iter()
        .filter(|id| !declared.contains(id))
        .map(|id| id.to_string())
        .collect();
    CrosscheckReport {
        missing_in_source,
        undeclared_in_json,
        occurrences: occurrences.to_vec(),
    }
}

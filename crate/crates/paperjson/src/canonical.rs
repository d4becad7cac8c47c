//! Canonical JSON emission: 2-space indentation, UTF-8, a trailing newline,
//! and deterministic key order. Every byte the toolchain writes (documents,
//! machine output, registry files, HTTP bodies) goes through here.

use serde_json::{Map, Value};

/// Serialize `value` as canonical JSON bytes.
///
/// Object key order is taken from the value itself, so callers are expected
/// to build maps in their documented order (see [`crate::document`] for the
/// document field order). Two calls on equal values produce identical bytes.
pub fn canonical_json_bytes(value: &Value) -> Vec<u8> {
    let mut out = serde_json::to_string_pretty(value)
        .expect("JSON value serialization cannot fail")
        .into_bytes();
    out.push(b'\n');
    out
}

/// Like [`canonical_json_bytes`] for any serializable value.
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let tree = serde_json::to_value(value).expect("serialization to JSON value cannot fail");
    canonical_json_bytes(&tree)
}

/// Recursively rewrite `value` so that every object's keys appear in
/// lexicographic order. Applied to retained unknown fields, whose key order
/// would otherwise depend on the input file.
pub fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut sorted = Map::new();
            for (key, inner) in entries {
                sorted.insert(key, sort_keys(inner));
            }
            Value::Object(sorted)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn trailing_newline_and_two_space_indent() {
        let bytes = canonical_json_bytes(&json!({"a": [1, 2]}));
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text, "{\n  \"a\": [\n    1,\n    2\n  ]\n}\n");
    }

    #[test]
    fn sort_keys_is_recursive() {
        let sorted = sort_keys(json!({"b": {"z": 1, "a": 2}, "a": [{"y": 1, "x": 2}]}));
        let text = serde_json::to_string(&sorted).unwrap();
        assert_eq!(text, r#"{"a":[{"x":2,"y":1}],"b":{"a":2,"z":1}}"#);
    }
}

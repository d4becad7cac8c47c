//! End-to-end tests driving the compiled binary the way a user would:
//! spawn it, feed it files, check exit codes and both output streams.

use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Command, Output, Stdio};

use paperjson::canonical::{canonical_json_bytes, sort_keys};
use paperjson::fixtures::{baseline, generate_violation_fixture, ViolationClass};
use paperjson::network::parse_receipt;
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_paperjson");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn paperjson")
}

fn run_str(args: &[String]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn paperjson")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("process exits normally")
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn genesis_paper() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/genesis/paper.json")
        .to_string_lossy()
        .into_owned()
}

fn genesis_source() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/genesis/source.typ")
        .to_string_lossy()
        .into_owned()
}

/// A schema-valid document derived from the fixture baseline, filed under
/// a node ID so it can participate in graphs and registries.
fn networked_doc(node_id: &str, extends: &[&str], diffs: &[Value]) -> Vec<u8> {
    let (paper, _) = baseline();
    let mut value: Value = serde_json::from_slice(&paper).expect("baseline parses");
    let mut network = json!({ "node_id": node_id });
    if !extends.is_empty() {
        network["extends"] = json!(extends);
    }
    if !diffs.is_empty() {
        network["claim_diffs"] = json!(diffs);
    }
    value["network"] = network;
    canonical_json_bytes(&value)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, bytes).expect("write test file");
    path.to_string_lossy().into_owned()
}

// ---- validate ----

#[test]
fn golden_pair_validates_clean() {
    let output = run(&["validate", &genesis_paper(), "--against", &genesis_source()]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    assert!(stderr_text(&output).contains("ok:"));
}

#[test]
fn schema_only_validation_passes_without_source() {
    let output = run(&["validate", &genesis_paper()]);
    assert_eq!(code(&output), 0);
    assert!(stderr_text(&output).contains("no cross-check requested"));
}

#[test]
fn missing_paper_file_exits_3() {
    let output = run(&["validate", "/nonexistent/paper.json"]);
    assert_eq!(code(&output), 3);
    assert!(stderr_text(&output).contains("cannot read"));
}

#[test]
fn missing_source_outranks_schema_violations() {
    let dir = tempfile::tempdir().unwrap();
    // The paper is malformed, but the absent source must win.
    let paper = write(dir.path(), "paper.json", b"{not json");
    let output = run(&["validate", &paper, "--against", "/nonexistent/source.typ"]);
    assert_eq!(code(&output), 3);
}

#[test]
fn malformed_json_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let paper = write(dir.path(), "paper.json", b"{\"id\": ");
    let output = run(&["validate", &paper]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("not well-formed JSON"));
}

#[test]
fn schema_violation_exits_1_and_names_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = generate_violation_fixture(ViolationClass::MissingRequiredField);
    let paper = write(dir.path(), "paper.json", &fixture.paper_json);
    let output = run(&["validate", &paper]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("[required-field-missing]"));
}

#[test]
fn crosscheck_violation_exits_2_and_names_the_id() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = generate_violation_fixture(ViolationClass::OrphanIdInJson);
    let paper = write(dir.path(), "paper.json", &fixture.paper_json);
    let source = write(dir.path(), "source.typ", &fixture.source.unwrap());
    let output = run(&["validate", &paper, "--against", &source]);
    assert_eq!(code(&output), 2);
    assert!(stderr_text(&output).contains("C2"));
}

#[test]
fn schema_failure_skips_the_crosscheck() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = generate_violation_fixture(ViolationClass::MissingDoesNotClaim);
    let paper = write(dir.path(), "paper.json", &fixture.paper_json);
    let (_, source_bytes) = baseline();
    let source = write(dir.path(), "source.typ", &source_bytes);
    let output = run(&["validate", &paper, "--against", &source, "--json"]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("cross-check skipped"));
    let report: Value = serde_json::from_str(&stdout_text(&output)).unwrap();
    assert_eq!(report["crosscheck"], Value::Null);
}

#[test]
fn json_report_is_canonical_and_machine_complete() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = generate_violation_fixture(ViolationClass::OrphanIdInJson);
    let paper = write(dir.path(), "paper.json", &fixture.paper_json);
    let source = write(dir.path(), "source.typ", &fixture.source.unwrap());
    let output = run(&["validate", &paper, "--against", &source, "--json"]);
    assert_eq!(code(&output), 2);

    let report: Value = serde_json::from_str(&stdout_text(&output)).unwrap();
    assert_eq!(report["exit_code"], json!(2));
    assert_eq!(report["schema_violations"], json!([]));
    assert_eq!(report["crosscheck"]["missing_in_source"], json!(["C2"]));

    // Byte-level canonical form: sorted keys, two-space indent, newline.
    let expected = canonical_json_bytes(&sort_keys(report));
    assert_eq!(output.stdout, expected);
}

// ---- resolve ----

#[test]
fn resolve_rejects_relative_references() {
    let output = run(&["resolve", "not-a-url#C1"]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("error:"));
}

#[test]
fn resolve_reports_unreachable_hosts_as_failure() {
    // Port 9 is the discard service; nothing listens there in the test
    // environment, so the connection is refused immediately.
    let output = Command::new(BIN)
        .args(["resolve", "https://127.0.0.1:9/paper#C1"])
        .env("PAPERJSON_HTTP_TIMEOUT", "1")
        .output()
        .expect("spawn paperjson");
    assert_eq!(code(&output), 1);
}

// ---- receipt ----

#[test]
fn receipt_new_round_trips_and_prints_the_title() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("receipt.json");
    let output = run(&[
        "receipt",
        "new",
        "--node",
        "https://example.org/genesis",
        "--produced",
        "https://example.org/tool",
        "--agent",
        "integration test",
        "--claims",
        "C1,C2",
        "--followup",
        "F1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0);
    assert!(stderr_text(&output).contains("agent-read: https://example.org/tool"));

    let receipt = parse_receipt(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(receipt.agent_identity, "integration test");
    assert_eq!(receipt.claims_accessed, ["C1", "C2"]);
    assert_eq!(receipt.followup_addressed.as_deref(), Some("F1"));
    assert!(receipt.timestamp.is_some());
}

#[test]
fn receipt_new_writes_stdout_by_default() {
    let output = run(&[
        "receipt",
        "new",
        "--node",
        "https://example.org/a",
        "--produced",
        "https://example.org/b",
        "--agent",
        "t",
    ]);
    assert_eq!(code(&output), 0);
    let receipt = parse_receipt(output.stdout.as_slice()).unwrap();
    assert_eq!(receipt.node_read, "https://example.org/a");
    assert!(receipt.claims_accessed.is_empty());
}

#[test]
fn receipt_new_rejects_malformed_claim_ids() {
    let output = run(&[
        "receipt",
        "new",
        "--node",
        "https://example.org/a",
        "--produced",
        "https://example.org/b",
        "--agent",
        "t",
        "--claims",
        "C1,claim-two",
    ]);
    assert_eq!(code(&output), 64);
}

#[test]
fn receipt_verify_accepts_a_consistent_receipt() {
    let dir = tempfile::tempdir().unwrap();
    let receipt = write(
        dir.path(),
        "receipt.json",
        json!({
            "agent_identity": "t",
            "node_read": "https://github.com/arquicanedo/paper-json",
            "produced_url": "https://example.org/tool",
            "claims_accessed": ["C1", "C3"],
            "followup_addressed": "F2"
        })
        .to_string()
        .as_bytes(),
    );
    let output = run(&["receipt", "verify", &receipt, "--paper", &genesis_paper()]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    assert!(stderr_text(&output).contains("ok:"));
}

#[test]
fn receipt_verify_rejects_undeclared_claims() {
    let dir = tempfile::tempdir().unwrap();
    let receipt = write(
        dir.path(),
        "receipt.json",
        json!({
            "agent_identity": "t",
            "node_read": "https://github.com/arquicanedo/paper-json",
            "produced_url": "https://example.org/tool",
            "claims_accessed": ["C99"]
        })
        .to_string()
        .as_bytes(),
    );
    let output = run(&["receipt", "verify", &receipt, "--paper", &genesis_paper()]);
    assert_eq!(code(&output), 2);
    assert!(stderr_text(&output).contains("[unknown-claim]"));
}

#[test]
fn receipt_verify_missing_receipt_exits_3() {
    let output = run(&[
        "receipt",
        "verify",
        "/nonexistent/receipt.json",
        "--paper",
        &genesis_paper(),
    ]);
    assert_eq!(code(&output), 3);
}

#[test]
fn receipt_verify_rejects_receipts_missing_fields() {
    let dir = tempfile::tempdir().unwrap();
    let receipt = write(dir.path(), "receipt.json", b"{\"agent_identity\": \"t\"}");
    let output = run(&["receipt", "verify", &receipt, "--paper", &genesis_paper()]);
    assert_eq!(code(&output), 1);
}

// ---- graph ----

/// Two papers and a receipt: B extends A and supersedes its C1; an
/// external tool was built from B.
fn graph_inputs(dir: &Path) -> Vec<String> {
    let a = networked_doc("https://example.org/a", &[], &[]);
    let b = networked_doc(
        "https://example.org/b",
        &["https://example.org/a"],
        &[json!({
            "ref": "C1",
            "relation": "supersedes",
            "parent_ref": "https://example.org/a#C1"
        })],
    );
    let receipt = json!({
        "agent_identity": "t",
        "node_read": "https://example.org/b",
        "produced_url": "https://example.org/tool",
        "claims_accessed": ["C1"]
    });
    vec![
        write(dir, "a.json", &a),
        write(dir, "b.json", &b),
        write(dir, "receipt.json", receipt.to_string().as_bytes()),
    ]
}

#[test]
fn graph_traverse_downstream_orders_topologically() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "graph".into(),
        "traverse".into(),
        "https://example.org/a".into(),
        "--direction".into(),
        "downstream".into(),
    ];
    args.extend(graph_inputs(dir.path()));
    let output = run_str(&args);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    let text = stdout_text(&output);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();

    let pos = |node: &str| lines.iter().position(|&l| l == node).unwrap();
    assert!(pos("https://example.org/a") < pos("https://example.org/b"));
    assert!(pos("https://example.org/b") < pos("https://example.org/tool"));
}

#[test]
fn graph_traverse_unknown_start_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "graph".into(),
        "traverse".into(),
        "https://example.org/unknown".into(),
        "--direction".into(),
        "upstream".into(),
    ];
    args.extend(graph_inputs(dir.path()));
    let output = run_str(&args);
    assert_eq!(code(&output), 2);
    assert!(stderr_text(&output).contains("unknown start node"));
}

#[test]
fn graph_build_detects_receipt_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = json!({
        "agent_identity": "t", "node_read": "https://example.org/a",
        "produced_url": "https://example.org/b", "claims_accessed": []
    });
    let r2 = json!({
        "agent_identity": "t", "node_read": "https://example.org/b",
        "produced_url": "https://example.org/a", "claims_accessed": []
    });
    let args = vec![
        "graph".to_string(),
        "build".to_string(),
        write(dir.path(), "r1.json", r1.to_string().as_bytes()),
        write(dir.path(), "r2.json", r2.to_string().as_bytes()),
    ];
    let output = run_str(&args);
    assert_eq!(code(&output), 2);
    assert!(stderr_text(&output).contains("cycle"));
}

#[test]
fn graph_lineage_lists_the_supersedes_edge() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "graph".into(),
        "lineage".into(),
        "https://example.org/a#C1".into(),
    ];
    args.extend(graph_inputs(dir.path()));
    let output = run_str(&args);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    assert_eq!(
        stdout_text(&output).trim(),
        "https://example.org/b#C1 -[supersedes]-> https://example.org/a#C1"
    );
}

#[test]
fn graph_lineage_without_fragment_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "graph".into(),
        "lineage".into(),
        "https://example.org/a".into(),
    ];
    args.extend(graph_inputs(dir.path()));
    let output = run_str(&args);
    assert_eq!(code(&output), 64);
}

#[test]
fn graph_rejects_documents_without_node_ids() {
    let dir = tempfile::tempdir().unwrap();
    let (paper, _) = baseline();
    let path = write(dir.path(), "paper.json", &paper);
    let output = run(&["graph", "build", &path]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("node_id"));
}

// ---- registry ----

#[test]
fn registry_add_query_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let index = dir.path().join("registry.json");
    let index_str = index.to_string_lossy().into_owned();
    let paper = write(
        dir.path(),
        "paper.json",
        &networked_doc("https://example.org/alpha", &[], &[]),
    );

    let output = run(&["registry", "add", &paper, "--index", &index_str]);
    assert_eq!(code(&output), 0, "stderr: {}", stderr_text(&output));
    assert!(stderr_text(&output).contains("indexed:"));

    // Re-adding the identical document changes nothing.
    let again = run(&["registry", "add", &paper, "--index", &index_str]);
    assert_eq!(code(&again), 0);
    assert!(stderr_text(&again).contains("unchanged:"));

    let by_claim = run(&["registry", "query", "--index", &index_str, "--claim", "C1"]);
    assert_eq!(code(&by_claim), 0);
    assert_eq!(stdout_text(&by_claim).trim(), "https://example.org/alpha#C1");

    let by_title = run(&[
        "registry", "query", "--index", &index_str, "--title", "compliant",
    ]);
    assert_eq!(stdout_text(&by_title).trim(), "https://example.org/alpha");

    let by_version = run(&[
        "registry", "query", "--index", &index_str, "--version", "9.9.9",
    ]);
    assert_eq!(code(&by_version), 0);
    assert_eq!(stdout_text(&by_version).trim(), "");
    assert!(stderr_text(&by_version).contains("no matches"));
}

#[test]
fn registry_query_needs_exactly_one_selector() {
    let dir = tempfile::tempdir().unwrap();
    let index = dir.path().join("registry.json").to_string_lossy().into_owned();
    let none = run(&["registry", "query", "--index", &index]);
    assert_eq!(code(&none), 64);
    let both = run(&[
        "registry", "query", "--index", &index, "--claim", "C1", "--title", "x",
    ]);
    assert_eq!(code(&both), 64);
}

#[test]
fn registry_query_missing_index_exits_3() {
    let output = run(&[
        "registry",
        "query",
        "--index",
        "/nonexistent/registry.json",
        "--claim",
        "C1",
    ]);
    assert_eq!(code(&output), 3);
}

#[test]
fn registry_add_rejects_invalid_documents() {
    let dir = tempfile::tempdir().unwrap();
    let index = dir.path().join("registry.json").to_string_lossy().into_owned();
    let fixture = generate_violation_fixture(ViolationClass::DuplicateId);
    let paper = write(dir.path(), "paper.json", &fixture.paper_json);
    let output = run(&[
        "registry",
        "add",
        &paper,
        "--node-id",
        "https://example.org/bad",
        "--index",
        &index,
    ]);
    assert_eq!(code(&output), 1);
    assert!(stderr_text(&output).contains("[duplicate-id]"));
}

#[test]
fn registry_serve_answers_over_http() {
    let dir = tempfile::tempdir().unwrap();
    let index = dir.path().join("registry.json").to_string_lossy().into_owned();
    let paper = write(
        dir.path(),
        "paper.json",
        &networked_doc("https://example.org/alpha", &[], &[]),
    );
    assert_eq!(
        code(&run(&["registry", "add", &paper, "--index", &index])),
        0
    );

    let mut child = Command::new(BIN)
        .args(["registry", "serve", "--index", &index, "--addr", "127.0.0.1:0"])
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn registry serve");
    // The bound address is announced on the first stderr line.
    let stderr = child.stderr.take().expect("piped stderr");
    let mut line = String::new();
    BufReader::new(stderr).read_line(&mut line).unwrap();
    let addr = line
        .split("http://")
        .nth(1)
        .and_then(|rest| rest.split(';').next())
        .expect("announced address")
        .to_string();

    let client = reqwest::blocking::Client::builder()
        .timeout(std::time::Duration::from_secs(5))
        .build()
        .unwrap();
    let body = client
        .get(format!("http://{addr}/claims/C1"))
        .send()
        .unwrap()
        .text()
        .unwrap();
    let parsed: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(parsed, json!(["https://example.org/alpha#C1"]));

    let missing = client
        .get(format!("http://{addr}/claims/C999"))
        .send()
        .unwrap();
    assert_eq!(missing.status().as_u16(), 200);
    let missing_body: Value = serde_json::from_str(&missing.text().unwrap()).unwrap();
    assert_eq!(missing_body, json!([]));

    child.kill().expect("stop the server");
    let _ = child.wait();
}

// ---- schema ----

#[test]
fn schema_dump_prints_the_full_contract() {
    let output = run(&["schema", "dump"]);
    assert_eq!(code(&output), 0);
    let schema: Value = serde_json::from_str(&stdout_text(&output)).unwrap();
    assert_eq!(
        schema["required"],
        json!([
            "id",
            "title",
            "version",
            "status",
            "authors",
            "abstract",
            "claims",
            "does_not_claim",
            "reproducibility"
        ])
    );
    assert_eq!(schema["properties"]["claims"]["minItems"], json!(1));
}

// ---- fixtures ----

#[test]
fn fixtures_gen_writes_the_pair_and_reports_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fx");
    let output = run(&[
        "fixtures",
        "gen",
        "undeclared-id-in-source",
        "--out",
        out_dir.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&output), 0);
    assert!(out_dir.join("paper.json").exists());
    assert!(out_dir.join("source.typ").exists());
    let report: Value = serde_json::from_str(&stdout_text(&output)).unwrap();
    assert_eq!(report["class"], json!("undeclared-id-in-source"));
    assert_eq!(report["expected_exit_code"], json!(2));
}

#[test]
fn fixtures_gen_unknown_class_is_a_usage_error() {
    let output = run(&["fixtures", "gen", "no-such-class", "--out", "/tmp/x"]);
    assert_eq!(code(&output), 64);
    assert!(stderr_text(&output).contains("expected one of"));
}

// ---- invocation surface ----

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["validate", "--help"])), 0);
}

#[test]
fn malformed_invocations_exit_64() {
    assert_eq!(code(&run(&[])), 64);
    assert_eq!(code(&run(&["no-such-command"])), 64);
    assert_eq!(code(&run(&["validate", "--no-such-flag", "x"])), 64);
}

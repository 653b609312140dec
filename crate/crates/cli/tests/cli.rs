use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};
use trigona_cli::{run, Inline, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_UNKNOWN};

fn cli(args: &[&str], doc: &str) -> (i32, Value) {
    cli_env(args, doc, None)
}

fn cli_env(args: &[&str], doc: &str, env: Option<&str>) -> (i32, Value) {
    let argv = std::iter::once("trigona").chain(args.iter().copied());
    let out = run(argv, env, &mut Inline(doc.to_string()));
    let value = serde_json::from_str(&out.report).unwrap_or_else(|e| panic!("{e}: {}", out.report));
    (out.code, value)
}

fn binary(args: &[&str], stdin: &str, env_seed: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trigona"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    match env_seed {
        Some(s) => cmd.env("TRIGONA_SEED", s),
        None => cmd.env_remove("TRIGONA_SEED"),
    };
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

const TRIANGULAR_PAIR: &str = r#"{"field":{"kind":"Q"},"generators":[[["1","2"],["0","3"]],[["4","1/2"],["0","5"]]]}"#;
/// P diag-block family P^-1 with P = [[1,0],[1,1]]: [[1,1],[0,2]] and [[3,0],[0,3]] conjugated.
const CONJUGATED_PAIR: &str = r#"{"field":{"kind":"Q"},"generators":[[[1,1],[-1,3]],[[3,0],[0,3]]]}"#;

#[test]
fn already_triangular_pair_gives_identity() {
    let (code, v) = cli(&["triangularize"], TRIANGULAR_PAIR);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["outcome"], "flag");
    assert_eq!(v["T"], json!([["1", "0"], ["0", "1"]]));
    assert_eq!(v["conjugated"][1], json!([["4", "1/2"], ["0", "5"]]));
}

#[test]
fn diagonal_witness_fails_the_hypothesis() {
    let (code, v) = cli(&["check", "--cap", "50"], r#"{"field":{"kind":"Q"},"generators":[[[1,0],[0,2]]]}"#);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["status"], "hypothesis_fails");
    assert_eq!(v["witnesses"][0]["element"], json!([["1", "0"], ["0", "2"]]));
    assert_eq!(v["witnesses"][0]["spectrum"]["singleton"], false);
}

#[test]
fn unipotent_closure_truncates() {
    let (code, v) = cli(&["closure", "--cap", "10"], r#"{"field":{"kind":"Q"},"generators":[[[1,1],[0,1]]]}"#);
    assert_eq!(code, EXIT_UNKNOWN);
    assert_eq!(v["truncated"], true);
    assert_eq!(v["count"], 10);
}

#[test]
fn rotation_closure_lists_four_elements() {
    let (code, v) = cli(&["closure", "--emit-elements"], r#"{"field":{"kind":"Q"},"generators":[[[0,-1],[1,0]]]}"#);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["count"], 4);
    assert!(v["elements"].as_array().unwrap().contains(&json!([["1", "0"], ["0", "1"]])));
}

#[test]
fn spectrum_reports_each_generator() {
    let (code, v) = cli(&["spectrum"], r#"{"field":{"kind":"GFp","p":2},"generators":[[[1,1],[0,1]],[[0,1],[1,1]]]}"#);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["reports"][0], json!({"singleton": true, "c": "1", "nil_index": 2}));
    assert_eq!(v["reports"][1], json!({"singleton": false, "c": null, "nil_index": null}));
}

#[test]
fn reducibility_verdicts() {
    let (code, v) = cli(&["check", "--reducibility"], r#"{"field":{"kind":"GFp","p":2},"generators":[[[0,1],[1,1]]]}"#);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["verdict"], "irreducible");
    let (code, v) = cli(&["check", "--reducibility"], CONJUGATED_PAIR);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["verdict"], "reducible");
    assert_eq!(v["subspace"]["dim"], 1);
    let (code, v) = cli(&["check", "--reducibility"], r#"{"field":{"kind":"Q"},"generators":[[[0,-1],[1,0]]]}"#);
    assert_eq!(code, EXIT_UNKNOWN);
    assert_eq!(v["verdict"], "unknown");
}

#[test]
fn emitted_flag_verifies() {
    let (code, v) = cli(&["triangularize", "--diagonals"], CONJUGATED_PAIR);
    assert_eq!(code, EXIT_OK);
    let mut doc: Value = serde_json::from_str(CONJUGATED_PAIR).unwrap();
    doc["flag"] = v["T"].clone();
    let (code, verdict) = cli(&["verify"], &doc.to_string());
    assert_eq!(code, EXIT_OK, "{verdict}");
    assert_eq!(verdict["valid"], true);
    for d in v["diagonals"].as_array().unwrap() {
        assert_eq!(d.as_array().unwrap().len(), 2);
    }

    doc["flag"] = json!([[1, 0], [0, 1]]);
    let (code, verdict) = cli(&["verify"], &doc.to_string());
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(verdict["valid"], false);
    doc["flag"] = json!([[1, 1], [1, 1]]);
    assert_eq!(cli(&["verify"], &doc.to_string()).0, EXIT_NEGATIVE);
}

#[test]
fn seed_precedence_is_flag_then_environment_then_document() {
    let doc = r#"{"field":{"kind":"Q"},"generators":[[[1,1],[0,1]]],"options":{"seed":11}}"#;
    assert_eq!(cli_env(&["triangularize"], doc, None).1["seed"], 11);
    assert_eq!(cli_env(&["triangularize"], doc, Some("22")).1["seed"], 22);
    assert_eq!(cli_env(&["triangularize", "--seed", "33"], doc, Some("22")).1["seed"], 33);
    let (code, v) = cli_env(&["triangularize"], doc, Some("twelve"));
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["status"], "input_error");
}

#[test]
fn input_errors_carry_positions() {
    let (code, v) = cli(&["closure"], "{\"field\": {\"kind\": \"Q\"},\n \"generators\": [[[1, 2], [3 4]]]}");
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["line"], 2);
    assert!(v["error"]["column"].as_u64().unwrap() > 0);

    let cases = [
        (r#"{"field":{"kind":"Q"},"generators":[[[1,"1/0"],[0,1]]]}"#, "$.generators[0][0][1]"),
        (r#"{"field":{"kind":"Q"},"generators":[[[1,2],[3]]]}"#, "$.generators[0][1]"),
        (r#"{"field":{"kind":"Q"},"generators":[[[1]],[[1,0],[0,1]]]}"#, "$.generators[1]"),
        (r#"{"field":{"kind":"GFp","p":4},"generators":[[[1]]]}"#, "$.field.p"),
        (r#"{"field":{"kind":"R"},"generators":[[[1]]]}"#, "$.field.kind"),
        (r#"{"field":{"kind":"Q"},"generators":[]}"#, "$.generators"),
        (r#"{"field":{"kind":"Q"},"generators":[[[1.5]]]}"#, "$.generators[0][0][0]"),
        (r#"{"field":{"kind":"Q"},"generators":[[[1]]],"options":{"cap":0}}"#, "$.options.cap"),
        (r#"{"field":{"kind":"Q"},"generators":[[[1]]],"extra":1}"#, "$.extra"),
    ];
    for (doc, path) in cases {
        let (code, v) = cli(&["closure"], doc);
        assert_eq!(code, EXIT_INPUT, "{doc}");
        assert_eq!(v["error"]["path"], path, "{doc}");
    }
}

#[test]
fn field_kinds_must_match_the_command() {
    let (code, _) = cli(&["unitarize"], TRIANGULAR_PAIR);
    assert_eq!(code, EXIT_INPUT);
    let (code, _) = cli(&["closure"], r#"{"field":{"kind":"C"},"generators":[[[[1,0]]]]}"#);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn unitarize_reports_blocks() {
    let dihedral =
        r#"{"field":{"kind":"C"},"generators":[[[[0,0],[-2,0]],[[2,0],[0,0]]],[[[2,0],[0,0]],[[0,0],[-2,0]]]]}"#;
    let (code, v) = cli(&["unitarize"], dihedral);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["block_dims"], json!([2]));
    assert_eq!(v["kinds"], json!(["scaled_unitary"]));
    assert!(v["residuals"][0].as_f64().unwrap() <= 1e-8);

    let off_circle = r#"{"field":{"kind":"C"},"generators":[[[[2,0],[0,0]],[[0,0],[3,0]]]]}"#;
    let (code, v) = cli(&["unitarize"], off_circle);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["status"], "hypothesis_fails");

    let shear = r#"{"field":"complex","generators":[[[1,1],[0,1]]],"options":{"cap":40}}"#;
    assert_eq!(cli(&["unitarize"], shear).0, EXIT_UNKNOWN);
}

#[test]
fn selftest_single_criterion() {
    let (code, v) = cli(&["selftest", "--criterion", "5", "--seed", "3"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 1);
    assert_eq!(v["criteria"][0]["passed"], 500);
}

#[test]
fn binary_reads_stdin_and_honours_environment_seed() {
    let doc = r#"{"field":{"kind":"GFp","p":5},"generators":[[[1,1],[0,1]],[[2,0],[0,2]]]}"#;
    let (code, first) = binary(&["triangularize"], doc, Some("99"));
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["seed"], 99);
    let (_, second) = binary(&["triangularize", "-"], doc, Some("99"));
    assert_eq!(first, second, "reports are byte identical");

    let (code, out) =
        binary(&["closure", "--cap", "10"], r#"{"field":{"kind":"Q"},"generators":[[[1,1],[0,1]]]}"#, None);
    assert_eq!(code, EXIT_UNKNOWN);
    assert!(out.contains("\"truncated\": true"));
    let (code, _) = binary(&["frobnicate"], "", None);
    assert_eq!(code, EXIT_INPUT);
    let (code, _) = binary(&["closure", "/nonexistent/doc.json"], "", None);
    assert_eq!(code, EXIT_INPUT);
}

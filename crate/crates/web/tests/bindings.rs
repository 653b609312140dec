use serde_json::Value;
use trigona_web::{check, triangularize, unitarize};

fn parse(text: &str) -> Value {
    serde_json::from_str(text).expect("bindings return JSON")
}

#[test]
fn triangularize_returns_code_and_report() {
    let doc = r#"{"field":{"kind":"Q"},"generators":[[[1,1],[-1,3]],[[3,0],[0,3]]]}"#;
    let v = parse(&triangularize(doc, true));
    assert_eq!(v["code"], 0);
    assert_eq!(v["report"]["outcome"], "flag");
    assert!(v["report"]["diagonals"].is_array());
}

#[test]
fn check_modes() {
    let doc = r#"{"field":{"kind":"GFp","p":2},"generators":[[[0,1],[1,1]]]}"#;
    assert_eq!(parse(&check(doc, true))["report"]["verdict"], "irreducible");
    let v = parse(&check(doc, false));
    assert_eq!(v["code"], 1);
    assert_eq!(v["report"]["all_singleton"], false);
}

#[test]
fn unitarize_and_input_errors() {
    let doc = r#"{"field":{"kind":"C"},"generators":[[[[0,0],[-1,0]],[[1,0],[0,0]]]]}"#;
    let v = parse(&unitarize(doc));
    assert_eq!(v["code"], 0);
    assert_eq!(v["report"]["block_dims"], serde_json::json!([1, 1]));
    let bad = parse(&unitarize("{"));
    assert_eq!(bad["code"], 64);
    assert!(bad["report"]["error"]["line"].is_number());
}

//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each operation takes an input document in the CLI format and returns
//! `{"code": <exit code>, "report": <CLI report>}` as JSON text.

use serde_json::{json, Value};
use trigona_cli::{run, Inline};
use wasm_bindgen::prelude::wasm_bindgen;

fn invoke(args: &[&str], document: &str) -> String {
    let argv = std::iter::once("trigona").chain(args.iter().copied());
    let out = run(argv, None, &mut Inline(document.to_string()));
    let report = serde_json::from_str::<Value>(&out.report).unwrap_or_else(|_| Value::String(out.report.clone()));
    json!({ "code": out.code, "report": report }).to_string()
}

/// Flag search; `diagonals` adds per-element diagonals of the closure.
#[wasm_bindgen]
pub fn triangularize(document: &str, diagonals: bool) -> String {
    let args: &[&str] = if diagonals { &["triangularize", "--diagonals"] } else { &["triangularize"] };
    invoke(args, document)
}

/// Common invariant subspace search, or the closure hypothesis check when
/// `reducibility` is false.
#[wasm_bindgen]
pub fn check(document: &str, reducibility: bool) -> String {
    let args: &[&str] = if reducibility { &["check", "--reducibility"] } else { &["check"] };
    invoke(args, document)
}

/// Block unitarization of a complex family.
#[wasm_bindgen]
pub fn unitarize(document: &str) -> String {
    invoke(&["unitarize"], document)
}

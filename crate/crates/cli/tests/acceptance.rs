//! Acceptance matrix: one line per criterion, all must pass.

use serde_json::Value;
use trigona::harness::suites::DEFAULT_SUITE_SEED;
use trigona_cli::{run, Inline, EXIT_OK};

/// Pinned instance counts; criterion 6 counts every complete closure met.
const EXPECTED_TOTALS: [(u64, Option<u64>); 10] = [
    (1, Some(200)),
    (2, Some(100)),
    (3, Some(100)),
    (4, Some(100)),
    (5, Some(500)),
    (6, None),
    (7, Some(50)),
    (8, Some(10)),
    (9, Some(60)),
    (10, Some(9)),
];

const DOCUMENTS: &[(&[&str], &str)] = &[
    (&["closure", "--emit-elements"], r#"{"field":{"kind":"Q"},"generators":[[[0,-1],[1,0]]]}"#),
    (&["spectrum"], r#"{"field":{"kind":"GFp","p":2},"generators":[[[1,1],[0,1]],[[0,1],[1,0]]]}"#),
    (
        &["check"],
        r#"{"field":{"kind":"GFp","p":3},"generators":[[[1,1,0],[0,1,1],[0,0,1]],[[2,0,1],[0,2,0],[0,0,2]]]}"#,
    ),
    (&["check", "--reducibility"], r#"{"field":{"kind":"GFp","p":2},"generators":[[[0,1],[1,1]]]}"#),
    (
        &["triangularize", "--diagonals"],
        r#"{"field":{"kind":"Q"},"generators":[[["3","-1"],["1","1"]],[["1","1/2"],["-1/2","2"]]],"options":{"seed":5}}"#,
    ),
    (
        &["unitarize"],
        r#"{"field":{"kind":"C"},"generators":[[[[0,0],[-2,0]],[[2,0],[0,0]]],[[[2,0],[0,0]],[[0,0],[-2,0]]]]}"#,
    ),
];

/// Written to the stdout handle directly so the lines survive test output capture.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn cli(args: &[&str], doc: &str, env_seed: Option<&str>) -> (i32, String) {
    let argv = std::iter::once("trigona").chain(args.iter().copied());
    let out = run(argv, env_seed, &mut Inline(doc.to_string()));
    (out.code, out.report)
}

#[test]
fn acceptance_matrix() {
    let seed = DEFAULT_SUITE_SEED.to_string();
    let (code, report) = cli(&["selftest", "--seed", &seed], "", None);
    let value: Value = serde_json::from_str(&report).expect("selftest emits JSON");
    let rows = value["criteria"].as_array().expect("criteria table");

    let mut document_mismatches = Vec::new();
    for (args, doc) in DOCUMENTS {
        let first = cli(args, doc, None);
        let second = cli(args, doc, None);
        if first != second {
            document_mismatches.push(args.join(" "));
        }
    }

    let mut failed = Vec::new();
    for &(criterion, expected_total) in &EXPECTED_TOTALS {
        let row = rows.iter().find(|r| r["criterion"].as_u64() == Some(criterion));
        let Some(row) = row else {
            say!("[FAIL] criterion {criterion}: missing from the selftest report");
            failed.push(criterion);
            continue;
        };
        let (passed, total) = (row["passed"].as_u64().unwrap_or(0), row["total"].as_u64().unwrap_or(0));
        let mut ok = row["ok"] == Value::Bool(true) && expected_total.is_none_or(|t| t == total);
        let mut detail = row["detail"].as_str().unwrap_or_default().to_string();
        if criterion == 10 {
            ok &= document_mismatches.is_empty();
            detail.push_str(&format!("; {} command documents rerun", DOCUMENTS.len()));
        }
        say!(
            "[{}] criterion {criterion} {}: {passed}/{total} ({detail})",
            if ok { "PASS" } else { "FAIL" },
            row["name"].as_str().unwrap_or("?"),
        );
        for failure in row["failures"].as_array().into_iter().flatten() {
            say!("       {}", failure.as_str().unwrap_or_default());
        }
        for m in &document_mismatches {
            if criterion == 10 {
                say!("       report differs on rerun: {m}");
            }
        }
        if !ok {
            failed.push(criterion);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    assert_eq!(code, EXIT_OK);
}

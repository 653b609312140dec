//! Command-line front end: parses input documents, runs one engine operation
//! and renders a JSON report with sorted keys.
//!
//! Exit codes: 0 success, 1 definitive negative, 2 unknown or truncated,
//! 64 input error.

pub mod document;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use trigona::harness::suites::{run_criterion, SuiteReport, DEFAULT_SUITE_SEED, SUITE_CRITERIA};
use trigona::invariant::{find_invariant_subspace_with, Certificate, InvariantConfig, ReducibilityVerdict};
use trigona::linalg::verify_flag;
use trigona::semigroup::{closure, DEFAULT_CAP};
use trigona::spectrum::{singleton_spectrum, SpectrumReport};
use trigona::triangularize::{
    check_kaplansky_hypothesis, triangularize_with, validate_generators, LevelOutcome, TriangularizationOutcome,
};
use trigona::unitarize::{block_unitarize, NumericMatrix, DEFAULT_TOL};
use trigona::{Error, FieldDescriptor, Flag, Fp, Matrix, Rational, Scalar, Subspace};

use document::{exact_generators, exact_matrix, numeric_generators, parse_document, Document, FieldSpec, InputError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 64;

pub const SEED_ENV: &str = "TRIGONA_SEED";
/// The criterion that reruns the other suites and compares report bytes.
pub const DETERMINISM_CRITERION: u32 = 10;

#[derive(Debug, Parser)]
#[command(name = "trigona", version, about = "Simultaneous triangularization of matrix semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the generated semigroup up to the cap.
    Closure(Common),
    /// Singleton-spectrum report for every generator.
    Spectrum(Common),
    /// Check the singleton-spectrum hypothesis on the closure, or reducibility.
    Check {
        #[command(flatten)]
        common: Common,
        /// Search for a common invariant subspace instead.
        #[arg(long)]
        reducibility: bool,
    },
    /// Find a basis in which every generator is upper triangular.
    Triangularize(Common),
    /// Check that the document's "flag" matrix triangularizes the generators.
    Verify(Common),
    /// Block-unitarize a complex family with spectra on circles.
    Unitarize(Common),
    /// Run the acceptance suites.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict to these criteria (repeatable); all by default.
        #[arg(long = "criterion", value_parser = clap::value_parser!(u32).range(1..=10))]
        criteria: Vec<u32>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input document; standard input when absent or "-".
    pub input: Option<String>,
    /// Closure element cap (default 10000).
    #[arg(long)]
    pub cap: Option<usize>,
    /// Unitarity residual tolerance (default 1e-8).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized search stages; overrides TRIGONA_SEED and the document.
    #[arg(long)]
    pub seed: Option<u64>,
    /// List every closure element (closure).
    #[arg(long)]
    pub emit_elements: bool,
    /// Add the conjugated diagonal of every closure element (triangularize).
    #[arg(long)]
    pub diagonals: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// JSON report, newline terminated.
    pub report: String,
}

/// Where the input document comes from.
pub trait Source {
    fn read(&mut self, path: Option<&str>) -> Result<String, String>;
}

/// Reads named files, and standard input for `-` or no path.
pub struct FileSystem;

impl Source for FileSystem {
    fn read(&mut self, path: Option<&str>) -> Result<String, String> {
        match path {
            None | Some("-") => std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}")),
            Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{p}: {e}")),
        }
    }
}

/// Serves a fixed document regardless of the path.
pub struct Inline(pub String);

impl Source for Inline {
    fn read(&mut self, _path: Option<&str>) -> Result<String, String> {
        Ok(self.0.clone())
    }
}

struct Settings {
    cap: usize,
    tol: f64,
    seed: Option<u64>,
    emit_elements: bool,
    diagonals: bool,
}

/// Flag over environment over document.
fn resolve_seed(flag: Option<u64>, env: Option<&str>, doc: Option<u64>) -> Result<Option<u64>, InputError> {
    if flag.is_some() {
        return Ok(flag);
    }
    if let Some(text) = env {
        return text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| InputError::plain(format!("{SEED_ENV}={text:?} is not an unsigned integer")));
    }
    Ok(doc)
}

fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn outcome(code: i32, value: Value) -> Outcome {
    Outcome { code, report: render(&value) }
}

fn input_error(command: &str, error: &InputError) -> Outcome {
    let mut detail = Map::new();
    detail.insert("message".into(), json!(error.message));
    if let Some(l) = error.line {
        detail.insert("line".into(), json!(l));
    }
    if let Some(c) = error.column {
        detail.insert("column".into(), json!(c));
    }
    if let Some(p) = &error.path {
        detail.insert("path".into(), json!(p));
    }
    outcome(EXIT_INPUT, json!({ "command": command, "status": "input_error", "error": Value::Object(detail) }))
}

fn engine_error(command: &str, error: &Error) -> Outcome {
    let (code, status) = match error {
        Error::NotOnCircle { .. } | Error::NotNilpotent { .. } | Error::FlagInvalid => {
            (EXIT_NEGATIVE, "hypothesis_fails")
        }
        Error::ClosureNotFinite { .. }
        | Error::TruncatedClosure { .. }
        | Error::BudgetExceeded { .. }
        | Error::NotPositiveDefinite
        | Error::NoFlag(_) => (EXIT_UNKNOWN, "unknown"),
        _ => (EXIT_INPUT, "input_error"),
    };
    outcome(code, json!({ "command": command, "status": status, "error": { "message": error.to_string() } }))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, env_seed: Option<&str>, source: &mut dyn Source) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Outcome { code, report: e.to_string() };
        }
    };
    run_command(&cli.command, env_seed, source)
}

pub fn run_command(command: &Command, env_seed: Option<&str>, source: &mut dyn Source) -> Outcome {
    let (name, common) = match command {
        Command::Selftest { seed, criteria } => {
            return match resolve_seed(*seed, env_seed, None) {
                Ok(s) => selftest(s.unwrap_or(DEFAULT_SUITE_SEED), criteria),
                Err(e) => input_error("selftest", &e),
            }
        }
        Command::Closure(c) => ("closure", c),
        Command::Spectrum(c) => ("spectrum", c),
        Command::Check { common, reducibility } => (if *reducibility { "check_reducibility" } else { "check" }, common),
        Command::Triangularize(c) => ("triangularize", c),
        Command::Verify(c) => ("verify", c),
        Command::Unitarize(c) => ("unitarize", c),
    };
    let text = match source.read(common.input.as_deref()) {
        Ok(t) => t,
        Err(e) => return input_error(name, &InputError::plain(e)),
    };
    let doc = match parse_document(&text) {
        Ok(d) => d,
        Err(e) => return input_error(name, &e),
    };
    let seed = match resolve_seed(common.seed, env_seed, doc.options.seed) {
        Ok(s) => s,
        Err(e) => return input_error(name, &e),
    };
    let settings = Settings {
        cap: common.cap.or(doc.options.cap).unwrap_or(DEFAULT_CAP),
        tol: common.tol.or(doc.options.tol).unwrap_or(DEFAULT_TOL),
        seed,
        emit_elements: common.emit_elements,
        diagonals: common.diagonals,
    };
    if settings.cap == 0 || settings.tol.is_nan() || settings.tol <= 0.0 {
        return input_error(name, &InputError::plain("cap and tol must be positive"));
    }
    match (name, doc.field) {
        ("unitarize", FieldSpec::Complex) => unitarize(&doc, &settings),
        ("unitarize", FieldSpec::Exact(_)) => {
            input_error(name, &InputError::at("$.field", "unitarize needs complex input ({\"kind\": \"C\"})"))
        }
        (_, FieldSpec::Complex) => input_error(name, &InputError::at("$.field", "exact commands need Q or GFp")),
        (_, FieldSpec::Exact(field @ FieldDescriptor::Rational)) => exact::<Rational>(name, &doc, &field, &settings),
        (_, FieldSpec::Exact(field)) => exact::<Fp>(name, &doc, &field, &settings),
    }
}

fn exact<S: Scalar>(name: &str, doc: &Document, field: &FieldDescriptor, settings: &Settings) -> Outcome {
    let gens = match exact_generators::<S>(doc, field) {
        Ok(g) => g,
        Err(e) => return input_error(name, &e),
    };
    let mut header = Map::new();
    header.insert("command".into(), json!(name));
    header.insert("field".into(), json!(field.to_string()));
    header.insert("n".into(), json!(gens[0].n()));
    header.insert("generator_count".into(), json!(gens.len()));
    let result = match name {
        "closure" => Ok(closure_report(&gens, settings)),
        "spectrum" => Ok(spectrum_command(&gens)),
        "check" => Ok(hypothesis_report(&gens, settings)),
        "check_reducibility" => Ok(reducibility_report(&gens, field, settings)),
        "triangularize" => triangularize_report(&gens, settings),
        "verify" => verify_report(&gens, doc, field),
        _ => unreachable!("dispatch covers every exact command"),
    };
    match result {
        Ok((code, body)) => {
            header.extend(body);
            outcome(code, Value::Object(header))
        }
        Err(Ok(e)) => engine_error(name, &e),
        Err(Err(e)) => input_error(name, &e),
    }
}

type Body = (i32, Map<String, Value>);
type CommandResult = Result<Body, Result<Error, InputError>>;

fn matrix_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| json!(x.to_string())).collect())).collect())
}

fn vector_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

fn subspace_json<S: Scalar>(w: &Subspace<S>) -> Value {
    json!({ "dim": w.dim(), "basis": Value::Array(w.basis().iter().map(|v| vector_json(v)).collect()) })
}

pub fn spectrum_json<S: Scalar>(r: &SpectrumReport<S>) -> Value {
    json!({
        "singleton": r.singleton,
        "c": r.eigenvalue.as_ref().map(|c| c.to_string()),
        "nil_index": r.nil_index,
    })
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::FullAlgebra { dim } => json!({ "kind": c.name(), "algebra_dim": dim }),
        Certificate::ExhaustiveSearch => json!({ "kind": c.name() }),
    }
}

fn body(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn closure_report<S: Scalar>(gens: &[Matrix<S>], settings: &Settings) -> Body {
    let c = closure(gens, settings.cap);
    let mut out = body(vec![
        ("cap", json!(settings.cap)),
        ("count", json!(c.len())),
        ("truncated", json!(c.truncated())),
        ("status", json!(if c.truncated() { "truncated" } else { "complete" })),
    ]);
    if settings.emit_elements {
        out.insert("elements".into(), Value::Array(c.elements().iter().map(matrix_json).collect()));
    }
    (if c.truncated() { EXIT_UNKNOWN } else { EXIT_OK }, out)
}

fn spectrum_command<S: Scalar>(gens: &[Matrix<S>]) -> Body {
    let reports: Vec<SpectrumReport<S>> = gens.iter().map(singleton_spectrum).collect();
    let all = reports.iter().all(|r| r.singleton);
    let out = body(vec![
        ("reports", Value::Array(reports.iter().map(spectrum_json).collect())),
        ("all_singleton", json!(all)),
    ]);
    (if all { EXIT_OK } else { EXIT_NEGATIVE }, out)
}

fn hypothesis_report<S: Scalar>(gens: &[Matrix<S>], settings: &Settings) -> Body {
    let report = check_kaplansky_hypothesis(gens, settings.cap);
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|(m, r)| json!({ "element": matrix_json(m), "spectrum": spectrum_json(r) }))
        .collect();
    let (code, status) = if !report.all_singleton {
        (EXIT_NEGATIVE, "hypothesis_fails")
    } else if report.closure_truncated {
        (EXIT_UNKNOWN, "truncated")
    } else {
        (EXIT_OK, "hypothesis_holds")
    };
    let out = body(vec![
        ("mode", json!("hypothesis")),
        ("cap", json!(settings.cap)),
        ("checked_elements", json!(report.checked_elements)),
        ("closure_truncated", json!(report.closure_truncated)),
        ("all_singleton", json!(report.all_singleton)),
        ("witnesses", Value::Array(witnesses)),
        ("status", json!(status)),
    ]);
    (code, out)
}

fn config(settings: &Settings) -> InvariantConfig {
    let mut config = InvariantConfig::default();
    if let Some(seed) = settings.seed {
        config.seed = seed;
    }
    config
}

fn reducibility_report<S: Scalar>(gens: &[Matrix<S>], field: &FieldDescriptor, settings: &Settings) -> Body {
    let config = config(settings);
    let verdict = find_invariant_subspace_with(gens[0].n(), field, gens, &config);
    let mut out = body(vec![("mode", json!("reducibility")), ("seed", json!(config.seed))]);
    let code = match &verdict {
        ReducibilityVerdict::Reducible { subspace, stage } => {
            out.insert("verdict".into(), json!("reducible"));
            out.insert("stage".into(), json!(stage.name()));
            out.insert("subspace".into(), subspace_json(subspace));
            EXIT_OK
        }
        ReducibilityVerdict::Irreducible(cert) => {
            out.insert("verdict".into(), json!("irreducible"));
            out.insert("certificate".into(), certificate_json(cert));
            EXIT_NEGATIVE
        }
        ReducibilityVerdict::Unknown => {
            out.insert("verdict".into(), json!("unknown"));
            EXIT_UNKNOWN
        }
    };
    (code, out)
}

fn triangularize_report<S: Scalar>(gens: &[Matrix<S>], settings: &Settings) -> CommandResult {
    let config = config(settings);
    let result = triangularize_with(gens, &config).map_err(Ok)?;
    let diagnostics: Vec<Value> = result
        .diagnostics
        .iter()
        .map(|d| {
            let outcome = match d.outcome {
                LevelOutcome::Split { subspace_dim } => json!({ "kind": "split", "subspace_dim": subspace_dim }),
                LevelOutcome::Leaf => json!({ "kind": "leaf" }),
                LevelOutcome::Irreducible(cert) => {
                    json!({ "kind": "irreducible", "certificate": certificate_json(&cert) })
                }
                LevelOutcome::Unknown => json!({ "kind": "unknown" }),
            };
            json!({
                "depth": d.depth,
                "offset": d.offset,
                "dim": d.dim,
                "stage": d.stage.map(|s| s.name()),
                "outcome": outcome,
            })
        })
        .collect();
    let mut out = body(vec![("seed", json!(config.seed)), ("diagnostics", Value::Array(diagnostics))]);
    let code = match &result.outcome {
        TriangularizationOutcome::Flag(flag) => {
            out.insert("outcome".into(), json!("flag"));
            out.insert("T".into(), matrix_json(flag.basis()));
            out.insert("conjugated".into(), Value::Array(gens.iter().map(|g| matrix_json(&flag.apply(g))).collect()));
            if settings.diagonals {
                let c = closure(gens, settings.cap);
                let diagonals: Vec<Value> =
                    c.elements().iter().map(|m| vector_json(&flag.apply(m).diagonal())).collect();
                out.insert("diagonals".into(), Value::Array(diagonals));
                out.insert("diagonals_truncated".into(), json!(c.truncated()));
            }
            EXIT_OK
        }
        TriangularizationOutcome::IrreducibleBlock { level, offset, dim, certificate } => {
            out.insert("outcome".into(), json!("irreducible_block"));
            out.insert(
                "block".into(),
                json!({ "level": level, "offset": offset, "dim": dim, "certificate": certificate_json(certificate) }),
            );
            EXIT_NEGATIVE
        }
        TriangularizationOutcome::Unknown { level, offset, dim } => {
            out.insert("outcome".into(), json!("unknown"));
            out.insert("block".into(), json!({ "level": level, "offset": offset, "dim": dim }));
            EXIT_UNKNOWN
        }
    };
    Ok((code, out))
}

fn verify_report<S: Scalar>(gens: &[Matrix<S>], doc: &Document, field: &FieldDescriptor) -> CommandResult {
    validate_generators(gens).map_err(Ok)?;
    let value = doc.flag.as_ref().ok_or_else(|| Err(InputError::at("$.flag", "verify needs a \"flag\" matrix")))?;
    let t: Matrix<S> = exact_matrix(value, field, "$.flag").map_err(Err)?;
    if t.n() != gens[0].n() {
        return Err(Err(InputError::at("$.flag", format!("flag must be {0}x{0}", gens[0].n()))));
    }
    let (valid, reason) = match Flag::new(t) {
        Ok(flag) if verify_flag(gens, &flag) => (true, None),
        Ok(_) => (false, Some("some conjugated generator is not upper triangular")),
        Err(_) => (false, Some("flag matrix is singular")),
    };
    let out = body(vec![("valid", json!(valid)), ("reason", json!(reason))]);
    Ok((if valid { EXIT_OK } else { EXIT_NEGATIVE }, out))
}

fn complex_json(m: &NumericMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn unitarize(doc: &Document, settings: &Settings) -> Outcome {
    let gens = match numeric_generators(doc) {
        Ok(g) => g,
        Err(e) => return input_error("unitarize", &e),
    };
    match block_unitarize(&gens, settings.cap, settings.tol) {
        Ok(r) => {
            let worst = r.residuals.iter().copied().fold(0.0, f64::max);
            let within = worst <= settings.tol;
            let value = json!({
                "command": "unitarize",
                "field": "C",
                "n": gens[0].nrows(),
                "generator_count": gens.len(),
                "cap": settings.cap,
                "tol": settings.tol,
                "block_dims": r.block_dims,
                "kinds": r.kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
                "residuals": r.residuals,
                "off_block": r.off_block,
                "group_order": r.group_order,
                "similarity": complex_json(&r.similarity),
                "within_tol": within,
            });
            outcome(if within { EXIT_OK } else { EXIT_UNKNOWN }, value)
        }
        Err(e) => engine_error("unitarize", &e),
    }
}

/// Suite report without its timing, so reruns compare byte for byte.
pub fn suite_json(report: &SuiteReport) -> Value {
    json!({
        "criterion": report.criterion,
        "name": report.name,
        "passed": report.passed,
        "total": report.total,
        "ok": report.ok(),
        "detail": report.detail,
        "failures": report.failures,
    })
}

fn selftest(seed: u64, criteria: &[u32]) -> Outcome {
    let mut selected: Vec<u32> =
        if criteria.is_empty() { (1..=DETERMINISM_CRITERION).collect() } else { criteria.to_vec() };
    selected.sort_unstable();
    selected.dedup();
    let determinism = selected.contains(&DETERMINISM_CRITERION);
    let suites: Vec<u32> = if determinism && selected == [DETERMINISM_CRITERION] {
        SUITE_CRITERIA.collect()
    } else {
        selected.iter().copied().filter(|c| SUITE_CRITERIA.contains(c)).collect()
    };
    let mut rows = Vec::new();
    let mut first_pass = Vec::new();
    for &c in &suites {
        let report = run_criterion(c, seed).expect("suite criteria are in range");
        let rendered = render(&suite_json(&report));
        if selected.contains(&c) {
            rows.push(suite_json(&report));
        }
        first_pass.push((c, rendered));
    }
    if determinism {
        let mut mismatched = Vec::new();
        for (c, rendered) in &first_pass {
            let again = render(&suite_json(&run_criterion(*c, seed).expect("suite criteria are in range")));
            if &again != rendered {
                mismatched.push(format!("criterion {c}: rerun report differs"));
            }
        }
        let total = first_pass.len();
        rows.push(json!({
            "criterion": DETERMINISM_CRITERION,
            "name": "determinism",
            "passed": total - mismatched.len(),
            "total": total,
            "ok": mismatched.is_empty() && total > 0,
            "detail": format!("{total} suite reports rerun with seed {seed}"),
            "failures": mismatched,
        }));
    }
    let all = rows.iter().all(|r| r["ok"] == json!(true));
    let value = json!({ "command": "selftest", "seed": seed, "criteria": rows, "all_passed": all });
    outcome(if all { EXIT_OK } else { EXIT_NEGATIVE }, value)
}

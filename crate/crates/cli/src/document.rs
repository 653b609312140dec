//! Input documents: `{"field": ..., "generators": [...], "options": {...}}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{Map, Value};
use trigona::unitarize::NumericMatrix;
use trigona::{FieldDescriptor, Matrix, Scalar};

/// Input error with a location: line and column for syntax errors, a JSON
/// path for semantic ones.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub path: Option<String>,
}

impl InputError {
    pub fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { message: message.into(), line: None, column: None, path: Some(path.into()) }
    }

    pub fn plain(message: impl Into<String>) -> Self {
        InputError { message: message.into(), line: None, column: None, path: None }
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.line, &self.column, &self.path) {
            (Some(l), Some(c), _) => write!(f, "line {l}, column {c}: {}", self.message),
            (_, _, Some(p)) => write!(f, "{p}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Exact(FieldDescriptor),
    Complex,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Options {
    pub cap: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub field: FieldSpec,
    pub generators: Vec<Value>,
    pub flag: Option<Value>,
    pub options: Options,
}

pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError {
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
        path: None,
    })?;
    let Value::Object(root) = value else {
        return Err(InputError::at("$", "document must be an object"));
    };
    for key in root.keys() {
        if !matches!(key.as_str(), "field" | "generators" | "options" | "flag") {
            return Err(InputError::at(format!("$.{key}"), "unknown key"));
        }
    }
    let field = parse_field(root.get("field").ok_or_else(|| InputError::at("$.field", "missing"))?)?;
    let generators = match root.get("generators") {
        Some(Value::Array(list)) if !list.is_empty() => list.clone(),
        Some(Value::Array(_)) => return Err(InputError::at("$.generators", "empty generator list")),
        Some(_) => return Err(InputError::at("$.generators", "expected an array of matrices")),
        None => return Err(InputError::at("$.generators", "missing")),
    };
    let options = match root.get("options") {
        None | Some(Value::Null) => Options::default(),
        Some(Value::Object(map)) => parse_options(map)?,
        Some(_) => return Err(InputError::at("$.options", "expected an object")),
    };
    Ok(Document { field, generators, flag: root.get("flag").cloned(), options })
}

fn parse_field(value: &Value) -> Result<FieldSpec, InputError> {
    let kind = match value {
        Value::String(s) => s.as_str(),
        Value::Object(map) => map
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| InputError::at("$.field.kind", "expected a string"))?,
        _ => return Err(InputError::at("$.field", "expected an object")),
    };
    match kind {
        "Q" => Ok(FieldSpec::Exact(FieldDescriptor::Rational)),
        "C" | "complex" => Ok(FieldSpec::Complex),
        "GFp" => {
            let p = value
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| InputError::at("$.field.p", "expected a positive integer"))?;
            FieldDescriptor::prime(p).map(FieldSpec::Exact).map_err(|e| InputError::at("$.field.p", e.to_string()))
        }
        other => Err(InputError::at("$.field.kind", format!("unknown field kind {other:?}"))),
    }
}

fn parse_options(map: &Map<String, Value>) -> Result<Options, InputError> {
    let mut options = Options::default();
    for (key, value) in map {
        let path = format!("$.options.{key}");
        match key.as_str() {
            "cap" => {
                let cap = value
                    .as_u64()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| InputError::at(&path, "expected a positive integer"))?;
                options.cap = Some(cap as usize);
            }
            "tol" => {
                let tol = value
                    .as_f64()
                    .filter(|t| *t > 0.0)
                    .ok_or_else(|| InputError::at(&path, "expected a positive number"))?;
                options.tol = Some(tol);
            }
            "seed" => {
                options.seed =
                    Some(value.as_u64().ok_or_else(|| InputError::at(&path, "expected an unsigned integer"))?)
            }
            _ => return Err(InputError::at(path, "unknown option")),
        }
    }
    Ok(options)
}

fn rows_of<'a>(value: &'a Value, path: &str) -> Result<Vec<&'a Vec<Value>>, InputError> {
    let Value::Array(rows) = value else {
        return Err(InputError::at(path, "expected a matrix (array of rows)"));
    };
    if rows.is_empty() {
        return Err(InputError::at(path, "empty matrix"));
    }
    let n = rows.len();
    rows.iter()
        .enumerate()
        .map(|(i, row)| match row {
            Value::Array(entries) if entries.len() == n => Ok(entries),
            Value::Array(entries) => Err(InputError::at(
                format!("{path}[{i}]"),
                format!("row has {} entries, matrix must be {n}x{n}", entries.len()),
            )),
            _ => Err(InputError::at(format!("{path}[{i}]"), "expected an array of entries")),
        })
        .collect()
}

fn exact_entry<S: Scalar>(value: &Value, field: &FieldDescriptor, path: &str) -> Result<S, InputError> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(num) if num.is_i64() || num.is_u64() => num.to_string(),
        _ => return Err(InputError::at(path, "expected an integer or a string such as \"-3/4\"")),
    };
    S::parse(&text, field).map_err(|e| InputError::at(path, e.to_string()))
}

pub fn exact_matrix<S: Scalar>(value: &Value, field: &FieldDescriptor, path: &str) -> Result<Matrix<S>, InputError> {
    let rows = rows_of(value, path)?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| exact_entry(x, field, &format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<S>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(field, parsed).map_err(|e| InputError::at(path, e.to_string()))
}

/// Generators of one common size.
pub fn exact_generators<S: Scalar>(doc: &Document, field: &FieldDescriptor) -> Result<Vec<Matrix<S>>, InputError> {
    let gens = doc
        .generators
        .iter()
        .enumerate()
        .map(|(k, g)| exact_matrix(g, field, &format!("$.generators[{k}]")))
        .collect::<Result<Vec<Matrix<S>>, _>>()?;
    check_sizes(gens.iter().map(Matrix::n))?;
    Ok(gens)
}

fn check_sizes(sizes: impl Iterator<Item = usize>) -> Result<(), InputError> {
    let mut first = None;
    for (k, n) in sizes.enumerate() {
        match first {
            None => first = Some(n),
            Some(m) if m != n => {
                return Err(InputError::at(format!("$.generators[{k}]"), format!("size {n}x{n} differs from {m}x{m}")))
            }
            _ => {}
        }
    }
    Ok(())
}

fn number(value: &Value, path: &str) -> Result<f64, InputError> {
    value.as_f64().ok_or_else(|| InputError::at(path, "expected a number"))
}

fn complex_entry(value: &Value, path: &str) -> Result<Complex64, InputError> {
    match value {
        Value::Number(_) => Ok(Complex64::new(number(value, path)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            Ok(Complex64::new(number(&pair[0], &format!("{path}[0]"))?, number(&pair[1], &format!("{path}[1]"))?))
        }
        _ => Err(InputError::at(path, "expected [re, im] or a real number")),
    }
}

pub fn numeric_generators(doc: &Document) -> Result<Vec<NumericMatrix>, InputError> {
    let gens = doc
        .generators
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let path = format!("$.generators[{k}]");
            let rows = rows_of(g, &path)?;
            let n = rows.len();
            let mut entries = Vec::with_capacity(n * n);
            for (i, row) in rows.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    entries.push(complex_entry(x, &format!("{path}[{i}][{j}]"))?);
                }
            }
            Ok(DMatrix::from_row_slice(n, n, &entries))
        })
        .collect::<Result<Vec<NumericMatrix>, InputError>>()?;
    check_sizes(gens.iter().map(|g| g.nrows()))?;
    Ok(gens)
}

//! JSON file formats.
//!
//! A MatrixFile is `{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}`
//! with an optional `"hermitian": bool` tag. Reports are written as canonical
//! JSON: object keys sorted, floats printed with 17 significant digits, so
//! equal reports are byte-identical.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<bool>,
}

impl MatrixFile {
    pub fn from_matrix(a: &CMatrix, hermitian: Option<bool>) -> Self {
        let data = (0..a.nrows())
            .map(|i| {
                (0..a.ncols())
                    .map(|j| [a[(i, j)].re, a[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            rows: a.nrows(),
            cols: a.ncols(),
            data,
            hermitian,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows {
            return Err(Error::InvalidArgument(format!(
                "declared {} rows, found {}",
                self.rows,
                self.data.len()
            )));
        }
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.cols
                )));
            }
            if row.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has a non-finite entry"
                )));
            }
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i][j];
            Complex64::new(re, im)
        }))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed matrix file: {e}")))
    }
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    MatrixFile::parse(&text)?.to_matrix()
}

pub fn matrix_value(a: &CMatrix, hermitian: Option<bool>) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(a, hermitian)).expect("matrix serializes")
}

pub fn vector_value(v: &CVector) -> Value {
    Value::Array(
        v.iter()
            .map(|z| Value::Array(vec![float(z.re), float(z.im)]))
            .collect(),
    )
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Canonical text: sorted keys, two-space indent, floats as `{:.16e}`.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                write!(out, "{:.16e}", n.as_f64().expect("finite float")).unwrap();
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            // numeric leaves and complex pairs stay on one line
            if items.iter().all(|v| !v.is_object() && !v.is_array()) || items.iter().all(is_pair) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                out.push_str(if k > 0 { ",\n" } else { "\n" });
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            if !items.is_empty() {
                out.push('\n');
                indent(out, depth);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.iter().enumerate() {
                out.push_str(if k > 0 { ",\n" } else { "\n" });
                indent(out, depth + 1);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*key], depth + 1);
            }
            if !map.is_empty() {
                out.push('\n');
                indent(out, depth);
            }
            out.push('}');
        }
    }
}

fn is_pair(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number))
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Report envelope: command echo, seed, configuration and result.
pub fn report(command: Value, seed: Option<u64>, config: Value, result: Value) -> Value {
    let mut map = Map::new();
    map.insert(
        "schema_version".into(),
        Value::String(SCHEMA_VERSION.into()),
    );
    map.insert("command".into(), command);
    map.insert("seed".into(), seed.map(Value::from).unwrap_or(Value::Null));
    map.insert("config".into(), config);
    map.insert("result".into(), result);
    Value::Object(map)
}

/// Writes `text` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

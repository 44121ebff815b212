use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use twospin::{Complex64, Mat4, Vec4};

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn vector(v: &Vec4) -> Value {
    Value::Array(v.0.iter().map(|z| complex(*z)).collect())
}

pub fn matrix(m: &Mat4) -> Value {
    Value::Array(m.0.iter().map(|row| Value::Array(row.iter().map(|z| complex(*z)).collect())).collect())
}

/// Shortest decimal that reads back to the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x:?}")
}

pub fn parse_state(text: &str) -> Result<Vec4, String> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| format!("invalid state file: {e}"))?;
    if pairs.len() != 4 {
        return Err(format!("state must have 4 components, found {}", pairs.len()));
    }
    Ok(twospin::CVec(std::array::from_fn(|k| Complex64::new(pairs[k][0], pairs[k][1]))))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

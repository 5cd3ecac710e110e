//! JSON formats for matrices and vectors.
//!
//! A matrix is `{"n": 3, "entries": [[...], ...]}` and a vector is
//! `{"entries": [...]}`. Entries are numbers or `"p/q"` strings; in rational
//! mode numbers are read through their decimal text, so `0.1` is exactly
//! `1/10`.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{ConeVector, NonnegMatrix};
use crate::scalar::{parse_rational, Field};

pub fn parse_scalar<T: Field>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => Ok(T::from_rational(&parse_rational(s)?)),
        Value::Number(num) if T::is_exact() => Ok(T::from_rational(&parse_rational(&num.to_string())?)),
        Value::Number(num) => num
            .as_f64()
            .and_then(T::from_f64)
            .ok_or_else(|| Error::Input(format!("`{num}` is not a finite number"))),
        other => Err(Error::Input(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

fn entries(doc: &Value) -> Result<&Vec<Value>> {
    doc.get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("missing array field \"entries\"".into()))
}

fn parse_row<T: Field>(row: &Value) -> Result<Vec<T>> {
    row.as_array()
        .ok_or_else(|| Error::Input("matrix rows must be arrays".into()))?
        .iter()
        .map(parse_scalar)
        .collect()
}

pub fn matrix_from_json<T: Field>(doc: &Value) -> Result<NonnegMatrix<T>> {
    let rows = entries(doc)?
        .iter()
        .map(parse_row)
        .collect::<Result<Vec<Vec<T>>>>()?;
    if let Some(n) = doc.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| Error::Input("\"n\" must be a nonnegative integer".into()))?;
        if n as usize != rows.len() {
            return Err(Error::Input(format!("\"n\" is {n} but {} rows were given", rows.len())));
        }
    }
    NonnegMatrix::from_rows(rows)
}

pub fn vector_from_json<T: Field>(doc: &Value) -> Result<ConeVector<T>> {
    let v = entries(doc)?.iter().map(parse_scalar).collect::<Result<Vec<T>>>()?;
    ConeVector::new(v)
}

pub fn matrix_from_str<T: Field>(text: &str) -> Result<NonnegMatrix<T>> {
    matrix_from_json(&parse_document(text)?)
}

pub fn vector_from_str<T: Field>(text: &str) -> Result<ConeVector<T>> {
    vector_from_json(&parse_document(text)?)
}

fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))
}

pub fn matrix_to_json<T: Field>(p: &NonnegMatrix<T>) -> Value {
    serde_json::json!({ "n": p.n(), "entries": p.matrix().to_json() })
}

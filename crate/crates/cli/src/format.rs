//! JSON conventions: floats rounded to 12 significant digits, exact
//! rationals as `"p/q"` strings, sorted keys, and a SHA-256 digest of the
//! canonical inputs.

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits. Non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_nan() {
        return Value::String("nan".into());
    }
    if x.is_infinite() {
        return Value::String(if x > 0.0 { "inf" } else { "-inf" }.into());
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    // -0 and 0 print differently
    json!(if rounded == 0.0 { 0.0 } else { rounded })
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

/// Human-readable rendering with the same rounding as [`float`].
pub fn float_text(x: f64) -> String {
    match float(x) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

/// Compact JSON with keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    // serde_json's Map is ordered by key unless preserve_order is enabled
    serde_json::to_string(v).expect("JSON values serialize")
}

pub fn digest(inputs: &Value) -> String {
    hex::encode(Sha256::digest(canonical(inputs).as_bytes()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub warnings: Vec<String>,
    pub version: String,
}

impl ReportEnvelope {
    pub fn new(command: &str, inputs: &Value, results: Value, warnings: Vec<String>) -> Self {
        ReportEnvelope {
            command: command.to_string(),
            inputs_digest: digest(inputs),
            results,
            warnings,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

/// Left-aligned two column table.
pub fn table(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<w$}  {v}\n"));
    }
    out
}

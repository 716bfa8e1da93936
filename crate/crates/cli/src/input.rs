//! File formats. Every path accepts `-` for standard input.

use std::collections::BTreeMap;
use std::io::Read;

use catdyn::exact_linalg::ExactMatrix;
use catdyn::growth_estimator::PositiveSequence;
use catdyn::quiver_hereditary::Quiver;
use catdyn::variety_dynamics::{EndoAction, LineBundleData, NefFlag};
use catdyn::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::format;

pub fn read_source(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

pub fn parse_json(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::Parse(msg.into()))
}

/// `"7"`, `"-2/3"`, `"0.25"`, `"1.5e-3"`, all exact.
pub fn parse_rational_str(s: &str) -> CliResult<BigRational> {
    let s = s.trim();
    let bad = || parse_err(format!("not a number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(parse_err(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

pub fn parse_rational(v: &Value) -> CliResult<BigRational> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(BigRational::from_integer(u.into()))
            } else {
                parse_rational_str(&n.to_string())
            }
        }
        Value::String(s) => parse_rational_str(s),
        other => Err(parse_err(format!("expected a number, got {other}"))),
    }
}

/// `{"rows": [[...], ...]}` or a bare array of rows.
pub fn parse_matrix(v: &Value) -> CliResult<ExactMatrix> {
    let rows = match v {
        Value::Object(o) => o.get("rows").ok_or_else(|| parse_err("matrix object needs \"rows\""))?,
        other => other,
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| parse_err("matrix rows must be an array"))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err("each row must be an array"))?
                .iter()
                .map(parse_rational)
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ExactMatrix::from_rows(rows)?)
}

pub fn matrix_json(m: &ExactMatrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(format::rational).collect()))
            .collect(),
    )
}

/// JSON `{"n_start", "values"}`, a JSON array, or one value per line.
pub fn parse_sequence_text(text: &str) -> CliResult<PositiveSequence> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return parse_sequence(&parse_json(text)?);
    }
    let vals = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_rational_str)
        .collect::<CliResult<Vec<_>>>()?;
    Ok(PositiveSequence::from_exact(1, &vals)?)
}

pub fn parse_sequence(v: &Value) -> CliResult<PositiveSequence> {
    let (n_start, values) = match v {
        Value::Object(o) => {
            let n_start = match o.get("n_start") {
                None => 1,
                Some(n) => n
                    .as_u64()
                    .ok_or_else(|| parse_err("n_start must be a nonnegative integer"))?
                    as usize,
            };
            let values = o.get("values").ok_or_else(|| parse_err("sequence needs \"values\""))?;
            (n_start, values)
        }
        other => (1, other),
    };
    let vals = values
        .as_array()
        .ok_or_else(|| parse_err("sequence values must be an array"))?
        .iter()
        .map(parse_rational)
        .collect::<CliResult<Vec<_>>>()?;
    Ok(PositiveSequence::from_exact(n_start, &vals)?)
}

fn get_usize(o: &Map<String, Value>, key: &str) -> CliResult<usize> {
    o.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("missing or invalid \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what} must be a JSON object")))
}

/// Entries of an object keyed `"0"`, `"1"`, ..., or of an array.
fn indexed(v: &Value, what: &str) -> CliResult<BTreeMap<usize, Value>> {
    match v {
        Value::Array(a) => Ok(a.iter().cloned().enumerate().collect()),
        Value::Object(o) => o
            .iter()
            .map(|(k, v)| {
                let i = k
                    .parse::<usize>()
                    .map_err(|_| parse_err(format!("{what} key {k:?} is not an index")))?;
                Ok((i, v.clone()))
            })
            .collect(),
        _ => Err(parse_err(format!("{what} must be an object or array"))),
    }
}

pub fn parse_endo(v: &Value) -> CliResult<EndoAction> {
    let o = as_object(v, "endo file")?;
    let dim = get_usize(o, "dim")?;
    let actions = indexed(o.get("actions").ok_or_else(|| parse_err("missing \"actions\""))?, "actions")?;
    if actions.keys().copied().ne(0..actions.len()) {
        return Err(parse_err("actions must be indexed 0..=dim without gaps"));
    }
    let mats = actions.values().map(parse_matrix).collect::<CliResult<Vec<_>>>()?;
    let mut e = EndoAction::new(dim, mats)?;
    if let Some(labels) = o.get("labels").filter(|l| !l.is_null()) {
        let labels = indexed(labels, "labels")?
            .into_values()
            .map(|l| {
                l.as_array()
                    .ok_or_else(|| parse_err("labels must be arrays of strings"))?
                    .iter()
                    .map(|s| {
                        s.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| parse_err("labels must be strings"))
                    })
                    .collect::<CliResult<Vec<_>>>()
            })
            .collect::<CliResult<Vec<_>>>()?;
        e = e.with_labels(labels)?;
    }
    Ok(e)
}

pub fn endo_json(e: &EndoAction) -> Value {
    json!({
        "dim": e.dim(),
        "actions": e.actions().iter().map(matrix_json).collect::<Vec<_>>(),
        "labels": e.labels(),
    })
}

pub fn parse_linebundle(v: &Value) -> CliResult<LineBundleData> {
    let o = as_object(v, "line bundle file")?;
    let dim = get_usize(o, "dim")?;
    let c1 = parse_matrix(o.get("c1_action").ok_or_else(|| parse_err("missing \"c1_action\""))?)?;
    let nef: NefFlag = match o.get("nef") {
        None => NefFlag::Unknown,
        Some(Value::String(s)) => s.parse()?,
        Some(other) => return Err(parse_err(format!("nef must be a string, got {other}"))),
    };
    let mut cohomology = BTreeMap::new();
    if let Some(c) = o.get("cohomology").filter(|c| !c.is_null()) {
        for (k, seq) in indexed(c, "cohomology")? {
            cohomology.insert(k, parse_sequence(&seq)?);
        }
    }
    Ok(LineBundleData::new(dim, c1, nef, cohomology)?)
}

pub fn linebundle_json(lb: &LineBundleData) -> Value {
    let coh: Map<String, Value> = lb
        .cohomology()
        .iter()
        .map(|(k, s)| (k.to_string(), sequence_json(s)))
        .collect();
    json!({
        "dim": lb.dim(),
        "c1_action": matrix_json(lb.c1_action()),
        "nef": lb.nef().to_string(),
        "cohomology": coh,
    })
}

/// Sequences are digested by their logarithms, rounded like every other
/// float.
pub fn sequence_json(s: &PositiveSequence) -> Value {
    json!({"n_start": s.n_start(), "logs": format::floats(s.logs())})
}

pub fn parse_quiver(v: &Value) -> CliResult<Quiver> {
    let o = as_object(v, "quiver file")?;
    let n = get_usize(o, "vertices")?;
    let arrows = o
        .get("arrows")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"arrows\" array"))?
        .iter()
        .map(|a| match a.as_array().map(|p| p.as_slice()) {
            Some([i, j]) => match (i.as_u64(), j.as_u64()) {
                (Some(i), Some(j)) => Ok((i as usize, j as usize)),
                _ => Err(parse_err(format!("arrow endpoints must be positive integers: {a}"))),
            },
            _ => Err(parse_err(format!("arrow must be a pair [i, j]: {a}"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Quiver::from_one_based(n, &arrows)?)
}

pub fn quiver_json(q: &Quiver) -> Value {
    let mut arrows: Vec<(usize, usize)> = q.arrows().iter().map(|&(i, j)| (i + 1, j + 1)).collect();
    arrows.sort_unstable();
    json!({"vertices": q.vertex_count(), "arrows": arrows})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(p.into(), r.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational_str("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational_str("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational_str("-1.5e-2").unwrap(), q(-3, 200));
        assert_eq!(parse_rational_str("12").unwrap(), q(12, 1));
        assert_eq!(parse_rational_str(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational(&json!(0.1)).unwrap(), q(1, 10));
        for bad in ["", "abc", "1/0", "1..2", "-", "1e"] {
            assert!(parse_rational_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn matrices() {
        let m = parse_matrix(&json!({"rows": [[1, "1/3"], ["0.25", -2]]})).unwrap();
        assert_eq!(m.get(0, 1), &q(1, 3));
        assert_eq!(m.get(1, 0), &q(1, 4));
        let e = parse_matrix(&json!({"rows": [[1, 2], [3]]})).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(parse_matrix(&json!({"cols": []})).is_err());
    }

    #[test]
    fn sequences() {
        let s = parse_sequence_text("1\n3\n\n6\n10\n15\n21\n28\n36\n45\n").unwrap();
        assert_eq!((s.n_start(), s.len()), (1, 9));
        let s = parse_sequence_text("{\"n_start\": 5, \"values\": [1, 2.5, 3, 4, 5, 6, 7, 8]}").unwrap();
        assert_eq!((s.n_start(), s.len()), (5, 8));
        assert_eq!(parse_sequence_text("1\n0\n1\n1\n1\n1\n1\n1\n").unwrap_err().exit_code(), 3);
        assert_eq!(parse_sequence_text("1\n2\n").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn files() {
        let e = parse_endo(&json!({
            "dim": 1,
            "actions": {"0": {"rows": [[1]]}, "1": {"rows": [[2]]}},
        }))
        .unwrap();
        assert_eq!(e.dim(), 1);
        let lb = parse_linebundle(&json!({
            "dim": 2,
            "c1_action": [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
            "nef": "nef",
            "cohomology": {"0": {"n_start": 1, "values": [3, 6, 10, 15, 21, 28, 36, 45]}},
        }))
        .unwrap();
        assert_eq!(lb.cohomology().len(), 1);
        let quiver = parse_quiver(&json!({"vertices": 2, "arrows": [[1, 2], [1, 2]]})).unwrap();
        assert_eq!(quiver.arrow_count(0, 1), 2);
        assert!(parse_quiver(&json!({"vertices": 2, "arrows": [[1, 2], [2, 1]]})).is_err());
    }
}

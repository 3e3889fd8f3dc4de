//! JSON encodings of scalars, labels, elements and matrices.
//!
//! Rationals are strings (`"12"`, `"-3/4"`) so they survive any JSON reader
//! exactly; floats are plain numbers. A tangent element is
//! `{"label": {"t": [..], "s": [..]}, "coeffs": [{"index": [1, 3], "value": ..}, ..]}`
//! where `index` lists the elements of the basis subset and omitted indices are zero.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::anchor::CubeElement;
use crate::error::{Error, Result};
use crate::hypercube::{Subset, TimeLabel};
use crate::hyperlin::{CubeMatrix, TwoByTwo};
use crate::ring::{Real, Scalar};
use crate::talg::{Tangent, Vector};

fn malformed(what: impl Into<String>) -> Error {
    Error::Json(what.into())
}

/// Scalars with a JSON and a plain-text representation.
pub trait ScalarJson: Scalar {
    /// Whether literals must be exact (no decimals).
    const EXACT: bool;
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self>;
    /// Parses a command-line literal.
    fn parse_text(text: &str) -> Result<Self>;
}

impl ScalarJson for BigRational {
    const EXACT: bool = true;

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) => Self::parse_text(s),
            Value::Number(n) if n.is_i64() || n.is_u64() => Self::parse_text(&n.to_string()),
            other => Err(malformed(format!("expected an exact rational, found {other}"))),
        }
    }

    /// Integers and fractions `p/q`; decimals are rejected.
    fn parse_text(text: &str) -> Result<Self> {
        let text = text.trim();
        let invalid = || Error::InvalidLiteral(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| invalid())?;
        let den = BigInt::from_str(den).map_err(|_| invalid())?;
        if den == BigInt::from(0) {
            return Err(invalid());
        }
        Ok(BigRational::new(num, den))
    }
}

impl ScalarJson for Real<f64> {
    const EXACT: bool = false;

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(self.value())
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.value().to_string()))
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Number(n) => n
                .as_f64()
                .map(Real::new)
                .ok_or_else(|| malformed(format!("number {n} out of range"))),
            Value::String(s) => Self::parse_text(s),
            other => Err(malformed(format!("expected a number, found {other}"))),
        }
    }

    /// Decimal literals, or exact fractions `p/q` rounded once.
    fn parse_text(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains('/') {
            return Self::from_rational(&BigRational::parse_text(text)?);
        }
        f64::from_str(text)
            .map(Real::new)
            .map_err(|_| Error::InvalidLiteral(text.to_string()))
    }
}

/// Parses a comma-separated scalar list such as `1,-2,3/4`.
pub fn parse_list<S: ScalarJson>(text: &str) -> Result<Vec<S>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(S::parse_text).collect()
}

pub fn subset_to_json(subset: Subset) -> Value {
    json!(subset.elements())
}

pub fn subset_from_json(value: &Value, dim: usize) -> Result<Subset> {
    let items = value
        .as_array()
        .ok_or_else(|| malformed("subset must be an array of elements"))?;
    let elements = items
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|e| e as usize)
                .ok_or_else(|| malformed(format!("subset element {v} is not a positive integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    Subset::from_elements(&elements, dim)
}

fn scalars_to_json<S: ScalarJson>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(S::to_json).collect())
}

fn scalars_from_json<S: ScalarJson>(value: &Value) -> Result<Vec<S>> {
    value
        .as_array()
        .ok_or_else(|| malformed("expected an array of scalars"))?
        .iter()
        .map(S::from_json)
        .collect()
}

fn field<'a>(value: &'a Value, name: &str) -> Result<&'a Value> {
    value
        .get(name)
        .ok_or_else(|| malformed(format!("missing field `{name}`")))
}

pub fn label_to_json<S: ScalarJson>(label: &TimeLabel<S>) -> Value {
    json!({ "t": scalars_to_json(label.t()), "s": scalars_to_json(label.s()) })
}

pub fn label_from_json<S: ScalarJson>(value: &Value) -> Result<TimeLabel<S>> {
    TimeLabel::new(
        scalars_from_json(field(value, "t")?)?,
        scalars_from_json(field(value, "s")?)?,
    )
}

fn coeffs_to_json<P>(coeffs: &[P], dim: usize, value: impl Fn(&P) -> Value) -> Value {
    Value::Array(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let subset = Subset::new(i as u32, dim).expect("index fits the dimension");
                json!({ "index": subset_to_json(subset), "value": value(c) })
            })
            .collect(),
    )
}

fn coeffs_from_json<P: Clone>(
    value: &Value,
    dim: usize,
    zero: P,
    parse: impl Fn(&Value) -> Result<P>,
) -> Result<Vec<P>> {
    let mut coeffs = vec![zero; 1 << dim];
    let items = value
        .as_array()
        .ok_or_else(|| malformed("coefficients must be an array"))?;
    for item in items {
        let subset = subset_from_json(field(item, "index")?, dim)?;
        coeffs[subset.index()] = parse(field(item, "value")?)?;
    }
    Ok(coeffs)
}

pub fn tangent_to_json<S: ScalarJson>(x: &Tangent<S>) -> Value {
    json!({
        "label": label_to_json(x.label()),
        "coeffs": coeffs_to_json(x.coeffs(), x.order(), S::to_json),
    })
}

pub fn tangent_from_json<S: ScalarJson>(value: &Value) -> Result<Tangent<S>> {
    let label: TimeLabel<S> = label_from_json(field(value, "label")?)?;
    let coeffs = coeffs_from_json(field(value, "coeffs")?, label.order(), S::zero(), S::from_json)?;
    Tangent::new(label, coeffs)
}

/// Vector-valued elements; each value is an array of scalars of width `width`.
pub fn vector_tangent_to_json<S: ScalarJson>(x: &Tangent<S, Vector<S>>) -> Value {
    json!({
        "label": label_to_json(x.label()),
        "coeffs": coeffs_to_json(x.coeffs(), x.order(), |v| scalars_to_json(&v.0)),
    })
}

pub fn vector_tangent_from_json<S: ScalarJson>(value: &Value, width: usize) -> Result<Tangent<S, Vector<S>>> {
    let label: TimeLabel<S> = label_from_json(field(value, "label")?)?;
    let coeffs = coeffs_from_json(
        field(value, "coeffs")?,
        label.order(),
        Vector(vec![S::zero(); width]),
        |v| {
            let xs = scalars_from_json(v)?;
            if xs.len() == width {
                Ok(Vector(xs))
            } else {
                Err(Error::DimensionMismatch {
                    expected: width,
                    found: xs.len(),
                })
            }
        },
    )?;
    Tangent::new(label, coeffs)
}

pub fn matrix_to_json<S: ScalarJson>(m: &CubeMatrix<S>) -> Value {
    json!({
        "dim": m.dim(),
        "entries": Value::Array(m.rows().map(scalars_to_json).collect()),
    })
}

pub fn matrix_from_json<S: ScalarJson>(value: &Value) -> Result<CubeMatrix<S>> {
    let dim = field(value, "dim")?
        .as_u64()
        .ok_or_else(|| malformed("`dim` must be a non-negative integer"))? as usize;
    let rows = field(value, "entries")?
        .as_array()
        .ok_or_else(|| malformed("`entries` must be an array of rows"))?;
    let mut entries = Vec::new();
    for row in rows {
        entries.extend(scalars_from_json(row)?);
    }
    CubeMatrix::new(dim, entries)
}

pub fn cube_to_json<S: ScalarJson>(y: &CubeElement<S>) -> Value {
    json!({ "dim": y.dim(), "values": coeffs_to_json(y.values(), y.dim(), S::to_json) })
}

/// Blocks `[[[a, b], [c, d]], ..]`, first factor first.
pub fn blocks_from_json<S: ScalarJson>(value: &Value) -> Result<Vec<TwoByTwo<S>>> {
    let items = value
        .as_array()
        .ok_or_else(|| malformed("blocks must be an array of 2x2 matrices"))?;
    items
        .iter()
        .map(|block| {
            let rows = block
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| malformed(format!("block {block} is not a 2x2 matrix")))?;
            let row = |r: &Value| -> Result<(S, S)> {
                match scalars_from_json::<S>(r)?.as_slice() {
                    [x, y] => Ok((x.clone(), y.clone())),
                    _ => Err(malformed(format!("block row {r} must have two entries"))),
                }
            };
            let (a, b) = row(&rows[0])?;
            let (c, d) = row(&rows[1])?;
            Ok(TwoByTwo::new(a, b, c, d))
        })
        .collect()
}

pub fn blocks_to_json<S: ScalarJson>(blocks: &[TwoByTwo<S>]) -> Value {
    Value::Array(
        blocks
            .iter()
            .map(|b| json!([[b.a.to_json(), b.b.to_json()], [b.c.to_json(), b.d.to_json()]]))
            .collect(),
    )
}

/// `{"name": value, ..}` for a scalar binding map, keys sorted.
pub fn bindings_to_json<'a, S: ScalarJson + 'a>(pairs: impl IntoIterator<Item = (&'a String, &'a S)>) -> Value {
    let mut sorted: Vec<_> = pairs.into_iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    Value::Object(sorted.into_iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<Map<_, _>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn rational_literals() {
        assert_eq!(Q::parse_text(" -6/4 ").unwrap(), q(-3, 2));
        assert_eq!(Q::parse_text("12").unwrap(), q(12, 1));
        assert!(matches!(Q::parse_text("0.25"), Err(Error::InvalidLiteral(_))));
        assert!(Q::parse_text("1/0").is_err());
        assert_eq!(q(-3, 2).to_json(), json!("-3/2"));
        assert_eq!(q(12, 1).to_json(), json!("12"));
        assert_eq!(Q::from_json(&json!(7)).unwrap(), q(7, 1));
        assert!(Q::from_json(&json!(0.5)).is_err());
        assert_eq!(parse_list::<Q>("1,-2,3/4").unwrap(), vec![q(1, 1), q(-2, 1), q(3, 4)]);
    }

    #[test]
    fn float_literals() {
        let x = Real::<f64>::parse_text("0.25").unwrap();
        assert_eq!(x.value(), 0.25);
        assert_eq!(Real::<f64>::parse_text("1/4").unwrap(), x);
        assert_eq!(x.to_json(), json!(0.25));
    }

    #[test]
    fn tangent_round_trip() {
        let label = TimeLabel::new(vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(-1, 3)]).unwrap();
        let x = Tangent::new(label, vec![q(1, 1), q(0, 1), q(5, 2), q(-1, 1)]).unwrap();
        let v = tangent_to_json(&x);
        assert_eq!(v["coeffs"][3]["index"], json!([1, 2]));
        assert_eq!(tangent_from_json::<Q>(&v).unwrap(), x);

        let sparse = json!({
            "label": {"t": ["1", "2"], "s": ["0", "-1/3"]},
            "coeffs": [{"index": [2], "value": "5/2"}]
        });
        let y = tangent_from_json::<Q>(&sparse).unwrap();
        assert_eq!(y.coeffs(), &[q(0, 1), q(0, 1), q(5, 2), q(0, 1)]);
    }

    #[test]
    fn vector_round_trip() {
        let label = TimeLabel::new(vec![q(1, 1)], vec![q(0, 1)]).unwrap();
        let x = Tangent::new(label, vec![Vector(vec![q(1, 1), q(2, 1)]), Vector(vec![q(3, 1), q(4, 1)])]).unwrap();
        let v = vector_tangent_to_json(&x);
        assert_eq!(vector_tangent_from_json::<Q>(&v, 2).unwrap(), x);
        assert!(vector_tangent_from_json::<Q>(&v, 3).is_err());
    }

    #[test]
    fn matrices_and_blocks() {
        let m = CubeMatrix::new(1, vec![q(1, 1), q(2, 1), q(3, 1), q(4, 1)]).unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v, json!({"dim": 1, "entries": [["1", "2"], ["3", "4"]]}));
        assert_eq!(matrix_from_json::<Q>(&v).unwrap(), m);

        let blocks = blocks_from_json::<Q>(&json!([[[1, 2], [3, 4]], [["1/2", 0], [0, 1]]])).unwrap();
        assert_eq!(blocks[1], TwoByTwo::new(q(1, 2), q(0, 1), q(0, 1), q(1, 1)));
        assert_eq!(blocks_from_json::<Q>(&blocks_to_json(&blocks)).unwrap(), blocks);
        assert!(blocks_from_json::<Q>(&json!([[[1, 2, 3], [3, 4]]])).is_err());
    }

    #[test]
    fn subsets() {
        let s = subset_from_json(&json!([3, 1]), 3).unwrap();
        assert_eq!(s.bits(), 0b101);
        assert!(subset_from_json(&json!([4]), 3).is_err());
        assert_eq!(subset_to_json(s), json!([1, 3]));
    }
}

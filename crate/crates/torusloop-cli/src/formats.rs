//! JSON file formats for lattices, spans, loops and series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;
use torusloop::foundation::{IntMatrix, RatVec};
use torusloop::lattice::Lattice;
use torusloop::loops::PLPath;
use torusloop::reps::Label;
use torusloop::series::FracSeries;
use torusloop::span::LatticeSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("field {field}: {msg}")]
    Field { field: String, msg: String },
    #[error("validation error {name}: {msg}")]
    Validation { name: String, msg: String },
}

fn field(name: &str, msg: impl Into<String>) -> FormatError {
    FormatError::Field { field: name.to_string(), msg: msg.into() }
}

/// Names the violated invariant by the error variant.
pub fn validation<E: std::fmt::Debug + std::fmt::Display>(e: E) -> FormatError {
    let debug = format!("{e:?}");
    let name = debug.split(['(', ' ', '{']).next().unwrap_or_default().to_string();
    FormatError::Validation { name, msg: e.to_string() }
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse { line: e.line(), column: e.column(), msg: e.to_string() })
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (q != BigInt::from(0)).then(|| BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn get<'a>(obj: &'a Value, name: &str) -> Result<&'a Value, FormatError> {
    obj.get(name).ok_or_else(|| field(name, "missing"))
}

fn int_matrix(v: &Value, name: &str) -> Result<IntMatrix, FormatError> {
    let rows = v.as_array().ok_or_else(|| field(name, "expected an array of rows"))?;
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| field(name, "expected an array of integers"))?
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| field(name, "expected integers")),
                    Value::String(s) => s.parse().map_err(|_| field(name, "expected integers")),
                    _ => Err(field(name, "expected integers")),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.first().map_or(0, |r| r.len());
    if rows.is_empty() || rows.iter().any(|r| r.len() != n) {
        return Err(field(name, "rows must be non-empty and of equal length"));
    }
    Ok(IntMatrix::from_rows(&rows))
}

fn rat_vec(v: &Value, name: &str) -> Result<RatVec, FormatError> {
    v.as_array()
        .ok_or_else(|| field(name, "expected an array of \"p/q\" strings"))?
        .iter()
        .map(|x| match x {
            Value::String(s) => parse_rational(s).ok_or_else(|| field(name, format!("bad rational {s:?}"))),
            Value::Number(n) => n.as_i64().map(|k| BigRational::from_integer(k.into())).ok_or_else(|| field(name, "bad number")),
            _ => Err(field(name, "expected \"p/q\" strings")),
        })
        .collect()
}

pub fn lattice_from_value(v: &Value) -> Result<Lattice, FormatError> {
    let gram = int_matrix(get(v, "gram")?, "gram")?;
    if !gram.is_square() {
        return Err(field("gram", "must be square"));
    }
    let mut l = Lattice::new(gram).map_err(validation)?;
    if let Some(name) = v.get("name") {
        l = l.named(name.as_str().ok_or_else(|| field("name", "expected a string"))?);
    }
    Ok(l)
}

pub fn parse_lattice(text: &str) -> Result<Lattice, FormatError> {
    lattice_from_value(&parse_json(text)?)
}

pub fn span_from_value(v: &Value) -> Result<LatticeSpan, FormatError> {
    let lat = |name: &str| -> Result<Lattice, FormatError> {
        let g = int_matrix(get(v, name)?, name)?;
        if !g.is_square() {
            return Err(field(name, "must be square"));
        }
        Lattice::new(g).map_err(validation)
    };
    let (gamma, white, black) = (lat("gamma")?, lat("white")?, lat("black")?);
    let ew = int_matrix(get(v, "embedW")?, "embedW")?;
    let eb = int_matrix(get(v, "embedB")?, "embedB")?;
    LatticeSpan::new(gamma, white, black, ew, eb).map_err(validation)
}

pub fn parse_span(text: &str) -> Result<LatticeSpan, FormatError> {
    span_from_value(&parse_json(text)?)
}

/// A loop file: its lift and optional matching datum.
pub fn loop_from_value(v: &Value, rank: usize) -> Result<(PLPath, Option<RatVec>), FormatError> {
    let ts = rat_vec(get(v, "breakpoints")?, "breakpoints")?;
    let vals = get(v, "values")?.as_array().ok_or_else(|| field("values", "expected an array of vectors"))?;
    let vals: Vec<RatVec> = vals.iter().map(|x| rat_vec(x, "values")).collect::<Result<_, _>>()?;
    if vals.iter().any(|x| x.len() != rank) {
        return Err(field("values", format!("vectors must have length {rank}")));
    }
    let path = PLPath::new(ts, vals).map_err(validation)?;
    let mq = match v.get("mq") {
        None | Some(Value::Null) => None,
        Some(m) => {
            let m = rat_vec(m, "mq")?;
            if m.len() != rank {
                return Err(field("mq", format!("must have length {rank}")));
            }
            Some(m)
        }
    };
    Ok((path, mq))
}

pub fn rat_json(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn vec_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(k) => json!(k),
        None => Value::String(x.to_string()),
    }
}

pub fn ints_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints_json(r)).collect())
}

pub fn lattice_json(l: &Lattice) -> Value {
    let mut o = Map::new();
    if let Some(n) = l.name() {
        o.insert("name".into(), json!(n));
    }
    o.insert("gram".into(), matrix_json(l.gram()));
    Value::Object(o)
}

pub fn span_json(s: &LatticeSpan) -> Value {
    json!({
        "gamma": matrix_json(s.gamma.gram()),
        "white": matrix_json(s.white.gram()),
        "black": matrix_json(s.black.gram()),
        "embedW": matrix_json(&s.embed_w),
        "embedB": matrix_json(&s.embed_b),
    })
}

pub fn loop_json(path: &PLPath, mq: Option<&[BigRational]>) -> Value {
    let mut o = Map::new();
    o.insert("breakpoints".into(), vec_json(path.breakpoints()));
    o.insert("values".into(), Value::Array(path.values().iter().map(|v| vec_json(v)).collect()));
    if let Some(m) = mq {
        o.insert("mq".into(), vec_json(m));
    }
    Value::Object(o)
}

pub fn series_json(s: &FracSeries) -> Value {
    json!({ "denom": s.denom(), "startExp": s.start(), "coeffs": ints_json(s.coeffs()) })
}

pub fn label_json(l: &Label) -> Value {
    let mut o = Map::new();
    o.insert("l".into(), vec_json(&l.l));
    if let Some(chi) = &l.chi {
        o.insert("chi".into(), ints_json(chi));
    }
    o.insert("m".into(), json!(l.m));
    Value::Object(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use torusloop::foundation::rat;
    use torusloop::span::builtin_span;

    #[test]
    fn lattice_files() {
        let a1 = parse_lattice(r#"{"gram": [[2]]}"#).unwrap();
        assert_eq!(a1.gram(), &IntMatrix::from_i64(&[vec![2]]));
        match parse_lattice(r#"{"gram": [[2,1],[0,2]]}"#) {
            Err(FormatError::Validation { name, .. }) => assert_eq!(name, "NotSymmetric"),
            other => panic!("{other:?}"),
        }
        match parse_lattice("{\"gram\": \n [[2]") {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_lattice(r#"{"gramm": [[2]]}"#), Err(FormatError::Field { .. })));
    }

    #[test]
    fn span_roundtrip() {
        let s = builtin_span("rank1-72").unwrap();
        let text = span_json(&s).to_string();
        assert_eq!(parse_span(&text).unwrap(), s);
        let bad = r#"{"gamma": [[72]], "white": [[18]], "black": [[8]], "embedW": [[2]], "embedB": [[2]]}"#;
        match parse_span(bad) {
            Err(FormatError::Validation { name, .. }) => assert_eq!(name, "NotIsometry"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn loop_roundtrip() {
        let v = parse_json(r#"{"breakpoints": ["0", "1/2", "1"], "values": [["0"], ["1/3"], ["1"]], "mq": ["1/2"]}"#).unwrap();
        let (p, mq) = loop_from_value(&v, 1).unwrap();
        assert_eq!(p.eval(&rat(1, 4)), vec![rat(1, 6)]);
        assert_eq!(mq, Some(vec![rat(1, 2)]));
        assert_eq!(loop_from_value(&loop_json(&p, mq.as_deref()), 1).unwrap(), (p, mq));
        assert_eq!(rat_json(&rat(3, 1)), json!("3/1"));
    }
}

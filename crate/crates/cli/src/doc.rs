//! JSON documents exchanged by the CLI.
//!
//! Every document is an object `{"kind", "metadata", "payload"}`. Complex
//! numbers are `[re, im]` (a bare number is read as real), matrices are
//! row-major arrays of rows. Output is canonical (see [`canonical_string`]),
//! so a document written, read and written again is byte-identical.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use ratreal_core::matrix::zeros;
use ratreal_core::{ComplexMatrix, FactorData, Realization, ScalarRational};
use serde_json::{json, Map, Value};

/// Malformed input; maps to the parse-error exit code.
#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Realization,
    Factor,
    ScalarRational,
    Gain,
    Certificate,
    OddBlocks,
    PoBlocks,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Realization => "realization",
            Kind::Factor => "factor",
            Kind::ScalarRational => "scalar_rational",
            Kind::Gain => "gain",
            Kind::Certificate => "certificate",
            Kind::OddBlocks => "odd_blocks",
            Kind::PoBlocks => "po_blocks",
        }
    }

    fn parse(s: &str) -> Result<Self, ParseError> {
        Ok(match s {
            "realization" => Kind::Realization,
            "factor" => Kind::Factor,
            "scalar_rational" => Kind::ScalarRational,
            "gain" => Kind::Gain,
            "certificate" => Kind::Certificate,
            "odd_blocks" => Kind::OddBlocks,
            "po_blocks" => Kind::PoBlocks,
            other => return Err(bad(format!("unknown document kind {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OddBlocks {
    pub t1: ComplexMatrix,
    pub t2: ComplexMatrix,
    pub t3: ComplexMatrix,
    pub b1: ComplexMatrix,
    pub b2: ComplexMatrix,
    pub coupling: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoBlocks {
    pub tn: ComplexMatrix,
    pub tp: ComplexMatrix,
    pub b: ComplexMatrix,
}

/// Which condition a certificate document claims.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateDoc {
    Gp(ComplexMatrix),
    Axis(ComplexMatrix),
    Odd(ComplexMatrix),
    Gpe { h1: ComplexMatrix, h2: ComplexMatrix },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Realization(Realization),
    Factor(FactorData),
    ScalarRational(ScalarRational),
    Gain(ComplexMatrix),
    Certificate(CertificateDoc),
    OddBlocks(OddBlocks),
    PoBlocks(PoBlocks),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Realization(_) => Kind::Realization,
            Payload::Factor(_) => Kind::Factor,
            Payload::ScalarRational(_) => Kind::ScalarRational,
            Payload::Gain(_) => Kind::Gain,
            Payload::Certificate(_) => Kind::Certificate,
            Payload::OddBlocks(_) => Kind::OddBlocks,
            Payload::PoBlocks(_) => Kind::PoBlocks,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub metadata: BTreeMap<String, String>,
    pub payload: Payload,
}

impl Document {
    pub fn new(payload: Payload) -> Self {
        Document {
            metadata: BTreeMap::new(),
            payload,
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_value(&self) -> Value {
        let payload = match &self.payload {
            Payload::Realization(r) => json!({
                "a": matrix_value(r.a()),
                "b": matrix_value(r.b()),
                "c": matrix_value(r.c()),
                "d": matrix_value(r.d()),
            }),
            Payload::Factor(f) => json!({
                "ahat": matrix_value(&f.ahat),
                "bhat": matrix_value(&f.bhat),
                "chat": matrix_value(&f.chat),
                "dhat": matrix_value(&f.dhat),
            }),
            Payload::ScalarRational(g) => json!({
                "numerator_roots": g.numerator_roots().iter().map(|z| complex_value(*z)).collect::<Vec<_>>(),
                "denominator_roots": g.denominator_roots().iter().map(|z| complex_value(*z)).collect::<Vec<_>>(),
                "gain": complex_value(g.gain()),
            }),
            Payload::Gain(k) => json!({ "k": matrix_value(k) }),
            Payload::Certificate(c) => match c {
                CertificateDoc::Gp(h) => json!({ "type": "gp", "hhat": matrix_value(h) }),
                CertificateDoc::Axis(h) => json!({ "type": "axis", "hhat": matrix_value(h) }),
                CertificateDoc::Odd(h) => json!({ "type": "odd", "hhat": matrix_value(h) }),
                CertificateDoc::Gpe { h1, h2 } => json!({
                    "type": "gpe",
                    "h1": matrix_value(h1),
                    "h2": matrix_value(h2),
                }),
            },
            Payload::OddBlocks(o) => {
                let mut v = json!({
                    "t1": matrix_value(&o.t1),
                    "t2": matrix_value(&o.t2),
                    "t3": matrix_value(&o.t3),
                    "b1": matrix_value(&o.b1),
                    "b2": matrix_value(&o.b2),
                });
                if let Some(m) = &o.coupling {
                    v["coupling"] = matrix_value(m);
                }
                v
            }
            Payload::PoBlocks(p) => json!({
                "tn": matrix_value(&p.tn),
                "tp": matrix_value(&p.tp),
                "b": matrix_value(&p.b),
            }),
        };
        json!({
            "kind": self.payload.kind().as_str(),
            "metadata": self.metadata,
            "payload": payload,
        })
    }

    pub fn from_value(v: &Value) -> Result<Self, ParseError> {
        let obj = v.as_object().ok_or_else(|| bad("document must be a JSON object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("document has no string \"kind\""))?;
        let kind = Kind::parse(kind)?;
        let metadata = match obj.get("metadata") {
            None | Some(Value::Null) => BTreeMap::new(),
            Some(Value::Object(m)) => m
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => Ok((k.clone(), s.clone())),
                    _ => Err(bad(format!("metadata value for {k:?} is not a string"))),
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(bad("metadata must be an object of strings")),
        };
        let p = obj
            .get("payload")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("document has no \"payload\" object"))?;
        let payload = match kind {
            Kind::Realization => Payload::Realization(parse_realization(p)?),
            Kind::Factor => Payload::Factor(parse_factor(p)?),
            Kind::ScalarRational => Payload::ScalarRational(parse_scalar(p)?),
            Kind::Gain => {
                let raw = raw_matrix(field(p, "k")?, "k")?;
                let (rows, cols) = (raw.len(), raw.first().map_or(0, Vec::len));
                Payload::Gain(shaped(raw, rows, cols, "k")?)
            }
            Kind::Certificate => Payload::Certificate(parse_certificate(p)?),
            Kind::OddBlocks => Payload::OddBlocks(parse_odd(p)?),
            Kind::PoBlocks => Payload::PoBlocks(parse_po(p)?),
        };
        Ok(Document { metadata, payload })
    }

    pub fn to_canonical_string(&self) -> String {
        canonical_string(&self.to_value())
    }

    pub fn parse_str(text: &str) -> Result<Self, ParseError> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn read(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }
}

/// Nesting depth of arrays, `None` if an object occurs anywhere inside.
fn array_depth(v: &Value) -> Option<usize> {
    match v {
        Value::Object(_) => None,
        Value::Array(items) => items
            .iter()
            .try_fold(0, |d, x| array_depth(x).map(|e| d.max(e)))
            .map(|d| d + 1),
        _ => Some(0),
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            // sorted here so the output does not depend on the map type
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        // complex numbers, root lists and matrix rows stay on one line
        Value::Array(items) if array_depth(v).is_some_and(|d| d <= 2) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Canonical text: keys sorted at every level, two-space indent, short
/// arrays inline, trailing newline.
pub fn canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn complex_value(z: Complex64) -> Value {
    json!([finite(z.re), finite(z.im)])
}

/// Non-finite numbers have no JSON form; they become `null`, which the
/// reader rejects.
fn finite(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_value(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn parse_complex(v: &Value, what: &str) -> Result<Complex64, ParseError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(|| bad(format!("{what}: number out of range"))),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(bad(format!("{what}: expected [re, im] numbers"))),
            }
        }
        _ => Err(bad(format!("{what}: expected a number or [re, im]"))),
    }
}

fn field<'a>(p: &'a Map<String, Value>, name: &str) -> Result<&'a Value, ParseError> {
    p.get(name).ok_or_else(|| bad(format!("payload is missing {name:?}")))
}

fn raw_rows(v: &Value) -> usize {
    v.as_array().map_or(0, Vec::len)
}

fn raw_matrix(v: &Value, name: &str) -> Result<Vec<Vec<Complex64>>, ParseError> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad(format!("{name}: expected an array of rows")))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| bad(format!("{name}: row {i} is not an array")))?;
            row.iter()
                .enumerate()
                .map(|(j, z)| parse_complex(z, &format!("{name}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

/// Checks a raw matrix against the shape implied by the other blocks.
fn shaped(
    raw: Vec<Vec<Complex64>>,
    rows: usize,
    cols: usize,
    name: &str,
) -> Result<ComplexMatrix, ParseError> {
    if raw.len() != rows {
        return Err(bad(format!("{name}: expected {rows} rows, found {}", raw.len())));
    }
    if let Some((i, r)) = raw.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(bad(format!("{name}: row {i} has {} entries, expected {cols}", r.len())));
    }
    let mut m = zeros(rows, cols);
    for (i, row) in raw.into_iter().enumerate() {
        for (j, z) in row.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m)
}

fn get(p: &Map<String, Value>, name: &str, rows: usize, cols: usize) -> Result<ComplexMatrix, ParseError> {
    shaped(raw_matrix(field(p, name)?, name)?, rows, cols, name)
}

/// Row count of a square block.
fn side(p: &Map<String, Value>, name: &str) -> Result<usize, ParseError> {
    Ok(raw_rows(field(p, name)?))
}

/// Column count read from the first row, `None` for an empty matrix.
fn width(p: &Map<String, Value>, name: &str) -> Result<Option<usize>, ParseError> {
    Ok(raw_matrix(field(p, name)?, name)?.first().map(Vec::len))
}

fn core_err(e: ratreal_core::Error) -> ParseError {
    bad(e.to_string())
}

fn parse_realization(p: &Map<String, Value>) -> Result<Realization, ParseError> {
    let n = side(p, "a")?;
    let out = side(p, "d")?;
    let inputs = match width(p, "d")? {
        Some(m) => m,
        None => width(p, "b")?.unwrap_or(0),
    };
    Realization::new(
        get(p, "a", n, n)?,
        get(p, "b", n, inputs)?,
        get(p, "c", out, n)?,
        get(p, "d", out, inputs)?,
    )
    .map_err(core_err)
}

fn parse_factor(p: &Map<String, Value>) -> Result<FactorData, ParseError> {
    let n = side(p, "ahat")?;
    let q = side(p, "dhat")?;
    FactorData::new(
        get(p, "ahat", n, n)?,
        get(p, "bhat", n, q)?,
        get(p, "chat", q, n)?,
        get(p, "dhat", q, q)?,
    )
    .map_err(core_err)
}

fn parse_roots(v: &Value, name: &str) -> Result<Vec<Complex64>, ParseError> {
    v.as_array()
        .ok_or_else(|| bad(format!("{name}: expected an array")))?
        .iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &format!("{name}[{i}]")))
        .collect()
}

fn parse_scalar(p: &Map<String, Value>) -> Result<ScalarRational, ParseError> {
    let num = match p.get("numerator_roots") {
        Some(v) => parse_roots(v, "numerator_roots")?,
        None => Vec::new(),
    };
    let den = match p.get("denominator_roots") {
        Some(v) => parse_roots(v, "denominator_roots")?,
        None => Vec::new(),
    };
    let gain = parse_complex(field(p, "gain")?, "gain")?;
    ScalarRational::new(num, den, gain).map_err(core_err)
}

fn parse_certificate(p: &Map<String, Value>) -> Result<CertificateDoc, ParseError> {
    let ty = field(p, "type")?
        .as_str()
        .ok_or_else(|| bad("certificate type must be a string"))?;
    let square = |name: &str| -> Result<ComplexMatrix, ParseError> {
        let n = side(p, name)?;
        get(p, name, n, n)
    };
    Ok(match ty {
        "gp" => CertificateDoc::Gp(square("hhat")?),
        "axis" => CertificateDoc::Axis(square("hhat")?),
        "odd" => CertificateDoc::Odd(square("hhat")?),
        "gpe" => CertificateDoc::Gpe {
            h1: square("h1")?,
            h2: square("h2")?,
        },
        other => return Err(bad(format!("unknown certificate type {other:?}"))),
    })
}

fn parse_odd(p: &Map<String, Value>) -> Result<OddBlocks, ParseError> {
    let nu = side(p, "t1")?;
    let rest = side(p, "t2")?;
    let q = side(p, "t3")?;
    let coupling = match p.get("coupling") {
        None | Some(Value::Null) => None,
        Some(v) => Some(shaped(raw_matrix(v, "coupling")?, nu, rest, "coupling")?),
    };
    Ok(OddBlocks {
        t1: get(p, "t1", nu, nu)?,
        t2: get(p, "t2", rest, rest)?,
        t3: get(p, "t3", q, q)?,
        b1: get(p, "b1", nu, q)?,
        b2: get(p, "b2", rest, q)?,
        coupling,
    })
}

fn parse_po(p: &Map<String, Value>) -> Result<PoBlocks, ParseError> {
    let n = side(p, "tn")?;
    let q = side(p, "tp")?;
    Ok(PoBlocks {
        tn: get(p, "tn", n, n)?,
        tp: get(p, "tp", q, q)?,
        b: get(p, "b", n, q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratreal_core::matrix::real_matrix;

    fn l1_doc() -> Document {
        let r = Realization::from_system_matrix(
            &real_matrix(3, 3, &[-1.0, 1.0, 1.0, 0.0, 1.0, -1.0, 1.0, 1.0, 1.0]),
            2,
        )
        .unwrap();
        Document::new(Payload::Realization(r)).with_meta("note", "L1")
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let text = l1_doc().to_canonical_string();
        let again = Document::parse_str(&text).unwrap();
        assert_eq!(again, l1_doc());
        assert_eq!(again.to_canonical_string(), text);
    }

    #[test]
    fn keys_come_out_sorted() {
        let text = l1_doc().to_canonical_string();
        let kind = text.find("\"kind\"").unwrap();
        let meta = text.find("\"metadata\"").unwrap();
        let payload = text.find("\"payload\"").unwrap();
        assert!(kind < meta && meta < payload);
        assert!(text.find("\"a\"").unwrap() < text.find("\"d\"").unwrap());
    }

    #[test]
    fn bare_numbers_are_real() {
        let doc = Document::parse_str(
            r#"{"kind":"factor","payload":{"ahat":[[-1]],"bhat":[[1]],"chat":[[1]],"dhat":[[1]]}}"#,
        )
        .unwrap();
        let Payload::Factor(f) = doc.payload else { panic!() };
        assert_eq!(f.ahat[(0, 0)], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn static_gain_round_trips() {
        let r = Realization::static_gain(real_matrix(1, 2, &[1.0, 2.0]));
        let doc = Document::new(Payload::Realization(r));
        let again = Document::parse_str(&doc.to_canonical_string()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn shape_errors_are_reported() {
        let err = Document::parse_str(
            r#"{"kind":"realization","payload":{"a":[[0]],"b":[[1],[2]],"c":[[1]],"d":[[0]]}}"#,
        )
        .unwrap_err();
        assert!(err.0.contains("b: expected 1 rows"), "{err}");
        assert!(Document::parse_str(r#"{"kind":"matrix","payload":{}}"#).is_err());
        assert!(Document::parse_str("not json").is_err());
    }

    #[test]
    fn layout_keeps_rows_on_one_line() {
        let text = canonical_string(&json!({"z": [[[1.0, 0.0], [2.0, -0.5]]], "a": {"y": 1, "x": []}}));
        assert_eq!(
            text,
            "{\n  \"a\": {\n    \"x\": [],\n    \"y\": 1\n  },\n  \"z\": [\n    [[1.0, 0.0], [2.0, -0.5]]\n  ]\n}\n"
        );
    }

    #[test]
    fn empty_metadata_is_written() {
        let doc = Document::new(Payload::Gain(real_matrix(1, 1, &[-1.0])));
        let v = doc.to_value();
        assert_eq!(v["metadata"], json!({}));
        assert_eq!(v["payload"]["k"], json!([[[-1.0, 0.0]]]));
    }
}

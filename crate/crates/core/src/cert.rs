//! JSON certificates for spreads and avsps.
//!
//! Output is canonical: object keys sorted, integers only, two-space indentation,
//! trailing newline. Field elements are written as their integer codes.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::avsp::{Avsp, AvspContext};
use crate::bridge::Provenance;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{Point, Subspace};
use crate::quadric::{QuadraticForm, QuadricKind};
use crate::spread::Spread;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Spread(Spread),
    Avsp(Avsp),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Spread(_) => "spread",
            Payload::Avsp(_) => "avsp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub payload: Payload,
    pub provenance: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    schema_version: String,
    kind: String,
    payload: Value,
    #[serde(default)]
    provenance: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadric {
    field: RawField,
    dim: usize,
    gram: Vec<Vec<u32>>,
    e: Option<u8>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpread {
    quadric: RawQuadric,
    members: Vec<Vec<Vec<u32>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    quadric: RawQuadric,
    pi: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAvsp {
    field: RawField,
    ambient_dim: usize,
    #[serde(rename = "H")]
    h: Vec<Vec<u32>>,
    members: Vec<Vec<Vec<u32>>>,
    context: Option<RawContext>,
}

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

impl Certificate {
    pub fn new(payload: Payload, provenance: Option<Value>) -> Self {
        Certificate { payload, provenance }
    }

    pub fn to_value(&self) -> Value {
        let payload = match &self.payload {
            Payload::Spread(s) => spread_to_json(s),
            Payload::Avsp(a) => avsp_to_json(a),
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "kind": self.payload.kind(),
            "payload": payload,
            "provenance": self.provenance.clone().unwrap_or(Value::Null),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses and validates a certificate; structural errors are [`Error::Format`],
    /// mathematical ones keep their own variant.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawCertificate = serde_json::from_str(text).map_err(format_err)?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema_version {:?}", raw.schema_version)));
        }
        let payload = match raw.kind.as_str() {
            "spread" => Payload::Spread(spread_from_json(raw.payload)?),
            "avsp" => Payload::Avsp(avsp_from_json(raw.payload)?),
            other => return Err(Error::Format(format!("unknown certificate kind {other:?}"))),
        };
        let provenance = raw.provenance.filter(|v| !v.is_null());
        Ok(Certificate { payload, provenance })
    }
}

pub fn field_to_json(f: &Field) -> Value {
    json!({ "p": f.p(), "k": f.k(), "modulus": f.modulus() })
}

fn field_from_raw(raw: &RawField) -> Result<Field> {
    Field::new(raw.p, raw.k, Some(&raw.modulus))
}

pub fn rows_to_json(rows: &[Vec<Elem>]) -> Value {
    json!(rows)
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    rows_to_json(s.rows())
}

fn elems(f: &Field, v: &[u32]) -> Result<Vec<Elem>> {
    v.iter().map(|&c| f.check(c)).collect()
}

fn subspace_from_raw(f: &Field, n: usize, rows: &[Vec<u32>]) -> Result<Subspace> {
    let rows = rows.iter().map(|r| elems(f, r)).collect::<Result<Vec<_>>>()?;
    Subspace::from_rows(f, n, &rows)
}

pub fn quadric_to_json(form: &QuadraticForm) -> Value {
    json!({
        "field": field_to_json(form.field()),
        "dim": form.dim(),
        "gram": form.gram(),
        "e": form.kind().map(|k| k.e()),
    })
}

fn quadric_from_raw(raw: &RawQuadric) -> Result<QuadraticForm> {
    let f = field_from_raw(&raw.field)?;
    if raw.gram.len() != raw.dim + 1 {
        return Err(Error::DimensionMismatch { expected: raw.dim + 1, found: raw.gram.len() });
    }
    let gram = raw.gram.iter().map(|r| elems(&f, r)).collect::<Result<Vec<_>>>()?;
    let kind = raw
        .e
        .map(|e| QuadricKind::from_e(e).ok_or_else(|| Error::Format(format!("invalid quadric type e = {e}"))))
        .transpose()?;
    QuadraticForm::new(&f, gram, kind)
}

pub fn spread_to_json(s: &Spread) -> Value {
    json!({
        "quadric": quadric_to_json(s.quadric()),
        "members": s.members().iter().map(subspace_to_json).collect::<Vec<_>>(),
    })
}

pub fn spread_from_json(v: Value) -> Result<Spread> {
    let raw: RawSpread = serde_json::from_value(v).map_err(format_err)?;
    let form = quadric_from_raw(&raw.quadric)?;
    let members =
        raw.members.iter().map(|m| subspace_from_raw(form.field(), form.dim(), m)).collect::<Result<Vec<_>>>()?;
    Spread::new(form, members)
}

pub fn avsp_to_json(a: &Avsp) -> Value {
    let context = a.context().map(|c| json!({ "quadric": quadric_to_json(&c.quadric), "pi": subspace_to_json(&c.pi) }));
    json!({
        "field": field_to_json(a.field()),
        "ambient_dim": a.ambient(),
        "H": subspace_to_json(a.hyperplane()),
        "members": a.members().iter().map(subspace_to_json).collect::<Vec<_>>(),
        "context": context,
    })
}

pub fn avsp_from_json(v: Value) -> Result<Avsp> {
    let raw: RawAvsp = serde_json::from_value(v).map_err(format_err)?;
    let f = field_from_raw(&raw.field)?;
    let n = raw.ambient_dim;
    let h = subspace_from_raw(&f, n, &raw.h)?;
    let members = raw.members.iter().map(|m| subspace_from_raw(&f, n, m)).collect::<Result<Vec<_>>>()?;
    let context = raw
        .context
        .as_ref()
        .map(|c| -> Result<AvspContext> {
            Ok(AvspContext { quadric: quadric_from_raw(&c.quadric)?, pi: subspace_from_raw(&f, n, &c.pi)? })
        })
        .transpose()?;
    Avsp::new(&f, n, h, members, context)
}

pub fn point_to_json(p: &Point) -> Value {
    json!(p.coords())
}

pub fn provenance_to_json(p: &Provenance) -> Value {
    json!({
        "direction": p.direction,
        "sigma_last_index": p.sigma_last_index,
        "P": point_to_json(&p.point),
        "U": subspace_to_json(&p.u),
        "coordinate_map": rows_to_json(&p.coordinate_map),
        "point_candidates": p.point_candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Mode, SolveOptions};
    use crate::spread::find_spreads;

    fn q4_spread() -> Spread {
        let f = Field::of_order(2).unwrap();
        let form = QuadraticForm::standard(4, QuadricKind::Parabolic, &f).unwrap();
        find_spreads(&form, Mode::First, SolveOptions::default()).unwrap().spreads.remove(0)
    }

    #[test]
    fn spread_round_trip_is_byte_stable() {
        let cert = Certificate::new(Payload::Spread(q4_spread()), None);
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"kind\"").unwrap() < text.find("\"payload\"").unwrap());
        assert!(!text.contains('.'));
    }

    #[test]
    fn keys_are_sorted() {
        let v = quadric_to_json(q4_spread().quadric());
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["dim", "e", "field", "gram"]);
    }

    #[test]
    fn malformed_certificates() {
        assert!(matches!(Certificate::from_json("{"), Err(Error::Format(_))));
        let cert = Certificate::new(Payload::Spread(q4_spread()), None);
        let mut v = cert.to_value();
        v["schema_version"] = json!("2");
        assert!(matches!(Certificate::from_json(&v.to_string()), Err(Error::Format(_))));
        let mut v = cert.to_value();
        v["kind"] = json!("ovoid");
        assert!(matches!(Certificate::from_json(&v.to_string()), Err(Error::Format(_))));
        let mut v = cert.to_value();
        v["payload"]["extra"] = json!(1);
        assert!(matches!(Certificate::from_json(&v.to_string()), Err(Error::Format(_))));
        let mut v = cert.to_value();
        v["payload"]["members"][0][0][0] = json!(7);
        assert_eq!(Certificate::from_json(&v.to_string()), Err(Error::InvalidElement(7)));
        let mut v = cert.to_value();
        v["payload"]["quadric"]["e"] = json!(0);
        assert!(matches!(Certificate::from_json(&v.to_string()), Err(Error::ParityMismatch { .. })));
    }
}

//! JSON descriptors for PAVs, e.g. `{"kind":"ultra","place":"T-2","c":"1"}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::place::{fmt_place, parse_place, residue_field, Place};
use crate::fields::{parse_element, FieldDescriptor};
use crate::scalar::{fmt_rational, parse_rational, Rational};

use super::{Pav, PavKind, Scale};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field '{}'", key)))
}

/// Strings and plain JSON numbers are both accepted where text is expected.
fn text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(bad(format!("expected a string or number, got {}", v))),
    }
}

fn rational_field(v: &Value, key: &str) -> Result<Rational> {
    let s = text(get(v, key)?)?;
    parse_rational(&s).ok_or_else(|| bad(format!("'{}' is not a rational", s)))
}

fn place_of(field: &FieldDescriptor, v: &Value) -> Result<Place> {
    let s = match (v.get("place"), v.get("p")) {
        (Some(p), _) | (None, Some(p)) => text(p)?,
        _ => return Err(bad("missing field 'place'")),
    };
    parse_place(field, &s)
}

impl Pav {
    pub fn to_json(&self) -> Value {
        let pl = |p: &Place| fmt_place(&self.field, p);
        match &self.kind {
            PavKind::Trivial => json!({"kind": "trivial"}),
            PavKind::Arch { emb, eps } => json!({"kind": "arch", "emb": emb, "eps": fmt_rational(eps)}),
            PavKind::Ultra { place, c } => json!({"kind": "ultra", "place": pl(place), "c": c.to_string()}),
            PavKind::UltraDegenerate { place } => json!({"kind": "ultradeg", "place": pl(place)}),
            PavKind::Gauss { base, center, slope } => json!({
                "kind": "gauss",
                "base": base.to_json(),
                "center": base.field.fmt_element(center),
                "slope": fmt_rational(slope),
            }),
            PavKind::Composite { place, residue } => json!({
                "kind": "composite",
                "place": pl(place),
                "residue": residue.to_json(),
            }),
        }
    }

    pub fn from_json(field: &FieldDescriptor, v: &Value) -> Result<Pav> {
        let kind = get(v, "kind")?.as_str().ok_or_else(|| bad("'kind' must be a string"))?;
        match kind {
            "trivial" => Ok(Pav::trivial(field)),
            "arch" => {
                let emb = match v.get("emb") {
                    None => 0,
                    Some(e) => e.as_u64().ok_or_else(|| bad("'emb' must be a nonnegative integer"))? as usize,
                };
                let eps = match v.get("eps") {
                    None => Rational::from_integer(1.into()),
                    Some(_) => rational_field(v, "eps")?,
                };
                Pav::arch(field, emb, eps)
            }
            "ultra" => {
                let c = Scale::parse(&text(get(v, "c")?)?)?;
                Pav::ultra(field, place_of(field, v)?, c)
            }
            "ultradeg" => Pav::ultra_degenerate(field, place_of(field, v)?),
            "gauss" => {
                let bf = field.base().ok_or_else(|| Error::FieldMismatch("Gauss PAV needs a function field".into()))?;
                let base = Pav::from_json(bf, get(v, "base")?)?;
                let center = match v.get("center") {
                    None => bf.zero(),
                    Some(c) => parse_element(&text(c)?, bf)?,
                };
                Pav::gauss(field, base, center, rational_field(v, "slope")?)
            }
            "composite" => {
                let place = place_of(field, v)?;
                let rf = residue_field(field, &place)?;
                let residue = Pav::from_json(&rf, get(v, "residue")?)?;
                Pav::compose(field, place, residue)
            }
            other => Err(bad(format!("unknown PAV kind '{}'", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::parse_field;

    #[test]
    fn round_trips() {
        let cases = [
            ("Q", r#"{"kind":"ultradeg","p":5}"#),
            ("Q", r#"{"kind":"arch","eps":"1/2"}"#),
            ("Q(i)", r#"{"kind":"ultra","place":"5#1","c":"log(5)"}"#),
            ("Q(T)", r#"{"kind":"ultra","place":"T-2","c":"1"}"#),
            ("Q(T)", r#"{"kind":"gauss","base":{"kind":"ultra","p":3,"c":1},"center":"1","slope":"1/2"}"#),
            ("Q(T)", r#"{"kind":"composite","place":"T^2-2","residue":{"kind":"arch","emb":1}}"#),
            ("Q(S)(T)", r#"{"kind":"composite","place":"T-S","residue":{"kind":"ultra","place":"inf","c":"2"}}"#),
        ];
        for (f, s) in cases {
            let k = parse_field(f).unwrap();
            let v = Pav::from_json(&k, &serde_json::from_str(s).unwrap()).unwrap();
            let j = v.to_json();
            assert_eq!(Pav::from_json(&k, &j).unwrap(), v, "{}", j);
        }
    }

    #[test]
    fn rejects_bad_descriptors() {
        let q = parse_field("Q").unwrap();
        for s in [r#"{"kind":"arch","eps":"2"}"#, r#"{"kind":"ultra","p":4,"c":"1"}"#, r#"{"kind":"bogus"}"#, r#"{"p":5}"#] {
            assert!(Pav::from_json(&q, &serde_json::from_str(s).unwrap()).is_err(), "{}", s);
        }
    }
}

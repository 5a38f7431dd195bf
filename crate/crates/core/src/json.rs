//! JSON encodings. Scalars are strings (`"p/q"`, `"p/q+r/s*sqrt2"`); objects
//! are written with sorted keys, so serialization is canonical.
//!
//! | type | shape |
//! |---|---|
//! | LexVector | `["1", "0", "-1/2+sqrt2"]` |
//! | HahnPoly | `[["3/2", ["1","0"]], …]` |
//! | HahnFraction | `{"num": HahnPoly, "den": HahnPoly}` |
//! | Point | `{"n", "m", "exponent_field": "Q"\|"Qsqrt2", "signs": [1,-1,…], "images": [HahnFraction…]}` |
//! | Polynomial | `{"n": 3, "expr": "x1^2*x3 - 7/2"}` or a bare expression string |
//! | tuple | `[LexVector…]` |
//! | matrix | `[[1,0],[1,1]]` |
//! | descriptor | `{"kind": "IFG", "I": [1], "F": [2], "G": [3]}`, `{"kind": "HT", "H": […], "T": […]}`, anchored kinds add `"anchor": tuple` |

use std::collections::BTreeSet;

use serde_json::{json, Map, Value as Json};

use crate::atlas::{Check, PointReport, USetDescriptor, USetKind};
use crate::chart::{ClauseResult, MonomialMap, Prop31Report, Status};
use crate::error::{Error, Result};
use crate::hahn::{HahnFraction, HahnPoly, SignData};
use crate::lex::LexVector;
use crate::parse::parse_polynomial;
use crate::point::{ExponentField, Point, Value};
use crate::poly::Polynomial;
use crate::scalar::{parse_rat, QuadExt, Rat};

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn as_array<'a>(v: &'a Json, what: &str) -> Result<&'a Vec<Json>> {
    v.as_array().ok_or_else(|| invalid(format!("{what}: expected an array")))
}

fn field<'a>(v: &'a Json, key: &str) -> Result<&'a Json> {
    v.get(key).ok_or_else(|| invalid(format!("missing field {key:?}")))
}

fn as_usize(v: &Json, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| invalid(format!("{what}: expected a non-negative integer")))
}

pub fn scalar_to_json(x: &QuadExt) -> Json {
    Json::String(x.to_string())
}

pub fn scalar_from_json(v: &Json) -> Result<QuadExt> {
    v.as_str().ok_or_else(|| invalid("scalar: expected a string"))?.parse()
}

pub fn rat_to_json(x: &Rat) -> Json {
    Json::String(x.to_string())
}

pub fn rat_from_json(v: &Json) -> Result<Rat> {
    parse_rat(v.as_str().ok_or_else(|| invalid("coefficient: expected a string"))?)
}

pub fn lex_to_json(v: &LexVector) -> Json {
    Json::Array(v.coords().iter().map(scalar_to_json).collect())
}

pub fn lex_from_json(v: &Json) -> Result<LexVector> {
    Ok(LexVector::new(
        as_array(v, "lex vector")?.iter().map(scalar_from_json).collect::<Result<_>>()?,
    ))
}

pub fn hahn_poly_to_json(p: &HahnPoly) -> Json {
    Json::Array(p.terms().map(|(e, c)| json!([rat_to_json(c), lex_to_json(e)])).collect())
}

pub fn hahn_poly_from_json(v: &Json, rank: usize) -> Result<HahnPoly> {
    let mut terms = Vec::new();
    for t in as_array(v, "series")? {
        let pair = as_array(t, "series term")?;
        if pair.len() != 2 {
            return Err(invalid("series term: expected [coefficient, exponent]"));
        }
        terms.push((rat_from_json(&pair[0])?, lex_from_json(&pair[1])?));
    }
    HahnPoly::from_terms(rank, terms)
}

pub fn fraction_to_json(f: &HahnFraction) -> Json {
    json!({"num": hahn_poly_to_json(f.num()), "den": hahn_poly_to_json(f.den())})
}

pub fn fraction_from_json(v: &Json, rank: usize) -> Result<HahnFraction> {
    HahnFraction::new(
        hahn_poly_from_json(field(v, "num")?, rank)?,
        hahn_poly_from_json(field(v, "den")?, rank)?,
    )
}

pub fn point_to_json(p: &Point) -> Json {
    json!({
        "n": p.n(),
        "m": p.m(),
        "exponent_field": p.field().name(),
        "signs": p.signs().axis_signs,
        "images": p.images().iter().map(fraction_to_json).collect::<Vec<_>>(),
    })
}

pub fn point_from_json(v: &Json) -> Result<Point> {
    let n = as_usize(field(v, "n")?, "n")?;
    let m = as_usize(field(v, "m")?, "m")?;
    let exponent_field = match field(v, "exponent_field")?.as_str() {
        Some("Q") => ExponentField::Q,
        Some("Qsqrt2") => ExponentField::QSqrt2,
        _ => return Err(invalid("exponent_field must be \"Q\" or \"Qsqrt2\"")),
    };
    let signs = match v.get("signs") {
        None | Some(Json::Null) => SignData::positive(m),
        Some(s) => SignData::new(
            as_array(s, "signs")?
                .iter()
                .map(|x| match x.as_i64() {
                    Some(1) => Ok(1),
                    Some(-1) => Ok(-1),
                    _ => Err(invalid("signs must be 1 or -1")),
                })
                .collect::<Result<_>>()?,
        )?,
    };
    if signs.rank() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: signs.rank(),
        });
    }
    let images: Vec<HahnFraction> = as_array(field(v, "images")?, "images")?
        .iter()
        .map(|f| fraction_from_json(f, m))
        .collect::<Result<_>>()?;
    if images.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: images.len(),
        });
    }
    Point::new(exponent_field, images, signs)
}

pub fn polynomial_to_json(p: &Polynomial) -> Json {
    json!({"n": p.nvars(), "expr": p.to_string()})
}

/// Accepts `{"n", "expr"}` or a bare expression string in `n` variables.
pub fn polynomial_from_json(v: &Json, n: Option<usize>) -> Result<Polynomial> {
    match v {
        Json::String(s) => parse_polynomial(s, n.ok_or_else(|| invalid("polynomial string needs a variable count"))?),
        _ => {
            let n = as_usize(field(v, "n")?, "n")?;
            let expr = field(v, "expr")?.as_str().ok_or_else(|| invalid("expr: expected a string"))?;
            parse_polynomial(expr, n)
        }
    }
}

pub fn tuple_to_json(t: &[LexVector]) -> Json {
    Json::Array(t.iter().map(lex_to_json).collect())
}

pub fn tuple_from_json(v: &Json) -> Result<Vec<LexVector>> {
    let t: Vec<LexVector> = as_array(v, "tuple")?.iter().map(lex_from_json).collect::<Result<_>>()?;
    if t.windows(2).any(|w| w[0].rank() != w[1].rank()) {
        return Err(invalid("tuple entries have different ranks"));
    }
    Ok(t)
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Finite(x) => lex_to_json(x),
        Value::Infinity => Json::String("inf".into()),
    }
}

pub fn matrix_to_json(m: &MonomialMap) -> Json {
    json!(m.rows())
}

pub fn matrix_from_json(v: &Json) -> Result<MonomialMap> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|r| {
            as_array(r, "matrix row")?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| invalid("matrix entries must be integers")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialMap::new(rows)
}

fn index_set(v: &Json, key: &str) -> Result<BTreeSet<usize>> {
    match v.get(key) {
        None | Some(Json::Null) => Ok(BTreeSet::new()),
        Some(s) => as_array(s, key)?
            .iter()
            .map(|x| as_usize(x, key).map_err(|e| Error::MalformedDescriptor(e.to_string())))
            .collect(),
    }
}

pub fn descriptor_to_json(d: &USetDescriptor) -> Json {
    let ids = |s: &BTreeSet<usize>| json!(s.iter().collect::<Vec<_>>());
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(d.kind.name()));
    if d.kind.is_ht() {
        obj.insert("H".into(), ids(&d.h));
        obj.insert("T".into(), ids(&d.t));
    } else {
        obj.insert("I".into(), ids(&d.i));
        obj.insert("F".into(), ids(&d.f));
        obj.insert("G".into(), ids(&d.g));
    }
    if let Some(a) = &d.anchor {
        obj.insert("anchor".into(), tuple_to_json(a));
    }
    Json::Object(obj)
}

pub fn descriptor_from_json(v: &Json) -> Result<USetDescriptor> {
    let kind = v
        .get("kind")
        .and_then(Json::as_str)
        .ok_or_else(|| Error::MalformedDescriptor("missing kind".into()))?;
    let kind = USetKind::parse(kind)?;
    let anchor = match v.get("anchor") {
        None | Some(Json::Null) => None,
        Some(a) => Some(tuple_from_json(a).map_err(|e| Error::MalformedDescriptor(e.to_string()))?),
    };
    Ok(USetDescriptor {
        kind,
        i: index_set(v, "I")?,
        f: index_set(v, "F")?,
        g: index_set(v, "G")?,
        h: index_set(v, "H")?,
        t: index_set(v, "T")?,
        anchor,
    })
}

fn status_from_str(s: &str) -> Result<Status> {
    match s {
        "pass" => Ok(Status::Pass),
        "fail" => Ok(Status::Fail),
        "skipped" => Ok(Status::Skipped),
        other => Err(invalid(format!("unknown status {other:?}"))),
    }
}

pub fn prop31_from_json(v: &Json) -> Result<Prop31Report> {
    let clauses = as_array(v, "report")?
        .iter()
        .map(|c| {
            Ok(ClauseResult {
                clause: field(c, "clause")?.as_str().ok_or_else(|| invalid("clause"))?.to_string(),
                status: status_from_str(field(c, "status")?.as_str().unwrap_or_default())?,
                witness: field(c, "witness")?.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Prop31Report { clauses })
}

pub fn point_report_from_json(v: &Json) -> Result<PointReport> {
    let checks = as_array(field(v, "checks")?, "checks")?
        .iter()
        .map(|c| {
            Ok(Check {
                name: field(c, "name")?.as_str().ok_or_else(|| invalid("name"))?.to_string(),
                status: status_from_str(field(c, "status")?.as_str().unwrap_or_default())?,
                witness: field(c, "witness")?.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(PointReport {
        point_id: field(v, "point_id")?.as_str().ok_or_else(|| invalid("point_id"))?.to_string(),
        checks,
    })
}

/// Pretty-printed, sorted-key serialization.
pub fn canonical(v: &Json) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

pub fn parse_text(text: &str) -> Result<Json> {
    serde_json::from_str(text).map_err(|e| invalid(format!("invalid JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;

    #[test]
    fn point_round_trip() {
        let d = example::delta();
        let text = canonical(&point_to_json(&d));
        let back = point_from_json(&parse_text(&text).unwrap()).unwrap();
        assert!(back.point_equal(&d));
        assert_eq!(canonical(&point_to_json(&back)), text);
    }

    #[test]
    fn scalar_strings() {
        let v = LexVector::new(vec![QuadExt::sqrt2(), QuadExt::new(crate::scalar::rat(1, 2), crate::scalar::rat_int(-3))]);
        let j = lex_to_json(&v);
        assert_eq!(j, json!(["0+1*sqrt2", "1/2-3*sqrt2"]));
        assert_eq!(lex_from_json(&j).unwrap(), v);
    }

    #[test]
    fn descriptor_round_trip() {
        let v = parse_text(r#"{"kind":"aIFG","I":[1],"F":[2],"G":[3],"anchor":[["0"],["0"],["0"],["1"],["1"]]}"#).unwrap();
        let d = descriptor_from_json(&v).unwrap();
        assert_eq!(d.kind, USetKind::AIfg);
        assert_eq!(descriptor_to_json(&d), v);
        assert!(descriptor_from_json(&json!({"kind": "XYZ"})).is_err());
    }

    #[test]
    fn rejects_bad_points() {
        let mut v = point_to_json(&example::delta());
        v["exponent_field"] = json!("R");
        assert!(point_from_json(&v).is_err());
        let mut v = point_to_json(&example::delta());
        v["n"] = json!(4);
        assert!(point_from_json(&v).is_err());
    }
}

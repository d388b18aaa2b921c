use serde_json::{json, Value};

use super::trace::{CurveKind, CurvePoint, CurvePolyline};
use crate::error::{Error, Result};
use crate::precision::{format_real, Complex, PrecisionContext};

/// `{kind, points: [{re, im, s, density, cdf}]}` with every number written
/// as a decimal string; coordinates carry `digits` significant digits.
pub fn write_curve_json(curve: &CurvePolyline, digits: u32) -> Value {
    let points: Vec<Value> = curve
        .points
        .iter()
        .map(|p| {
            json!({
                "re": format_real(&p.z.re, digits),
                "im": format_real(&p.z.im, digits),
                "s": format!("{:e}", p.s),
                "density": format!("{:e}", p.density),
                "cdf": format!("{:e}", p.cdf),
            })
        })
        .collect();
    json!({ "kind": curve.kind.name(), "points": points })
}

/// Reads one curve document or an array of them.
pub fn read_curve_json(doc: &Value, ctx: &PrecisionContext) -> Result<Vec<CurvePolyline>> {
    match doc {
        Value::Array(items) => items.iter().map(|v| read_one(v, ctx)).collect(),
        Value::Object(_) => Ok(vec![read_one(doc, ctx)?]),
        _ => Err(Error::Io("curve document must be an object or an array".into())),
    }
}

fn read_one(v: &Value, ctx: &PrecisionContext) -> Result<CurvePolyline> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .and_then(CurveKind::parse)
        .ok_or_else(|| Error::Io("curve document lacks a valid kind".into()))?;
    let pts = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Io("curve document lacks points".into()))?;
    let field = |p: &Value, key: &str| -> Result<String> {
        p.get(key)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| Error::Io(format!("point lacks string field {key}")))
    };
    let real = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|e| Error::Io(format!("{s}: {e}"))) };
    let mut points = Vec::with_capacity(pts.len());
    for p in pts {
        let re = ctx.parse(&field(p, "re")?)?;
        let im = ctx.parse(&field(p, "im")?)?;
        points.push(CurvePoint {
            z: Complex::new(re, im),
            s: real(&field(p, "s")?)?,
            density: real(&field(p, "density")?)?,
            cdf: real(&field(p, "cdf")?)?,
        });
    }
    Ok(CurvePolyline { kind, points })
}

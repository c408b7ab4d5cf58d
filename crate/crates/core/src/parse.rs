//! Text formats for points, block points, growth functions and faces.

use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::faces::FaceDescriptor;
use crate::geometry::Point3;
use crate::gfun::GFunction;

fn reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a real number: {t:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("not a finite number: {t:?}")))
            }
        })
        .collect()
}

/// `x,y,z`.
pub fn parse_point(s: &str) -> Result<Point3> {
    match reals(s)?[..] {
        [x, y, z] => Ok(Point3::new(x, y, z)),
        ref v => Err(Error::Parse(format!("a point needs 3 coordinates, got {}", v.len()))),
    }
}

/// `x1,y1,z1;x2,y2,z2;...`.
pub fn parse_block_point(s: &str) -> Result<BlockPoint> {
    let blocks = s.split(';').map(parse_point).collect::<Result<Vec<_>>>()?;
    Ok(BlockPoint::new(blocks))
}

/// `sqrt`, `power:<alpha>`, `entropy`, `log` or `identity`.
pub fn parse_gfunction(s: &str) -> Result<GFunction> {
    let s = s.trim();
    let g = match s.to_ascii_lowercase().as_str() {
        "sqrt" => GFunction::sqrt(),
        "entropy" | "entropyneginf" => GFunction::EntropyNegInf,
        "log" | "loginf" => GFunction::LogInf,
        "identity" | "id" => GFunction::Identity,
        other => {
            let alpha =
                other.strip_prefix("power:").ok_or_else(|| Error::Parse(format!("unknown growth function {s:?}")))?;
            let alpha: f64 = alpha.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            GFunction::power(alpha)?
        }
    };
    Ok(g)
}

/// A face name; `FBeta` takes its parameter as `FBeta:<beta>`.
pub fn parse_face(s: &str) -> Result<FaceDescriptor> {
    let s = s.trim();
    let face = match s {
        "Full" => FaceDescriptor::Full,
        "FInf" => FaceDescriptor::FInf,
        "FNegInf" => FaceDescriptor::FNegInf,
        "FNe" => FaceDescriptor::FNe,
        "Zero" => FaceDescriptor::Zero,
        other => {
            let beta = other.strip_prefix("FBeta:").ok_or_else(|| Error::Parse(format!("unknown face {s:?}")))?;
            let beta: f64 = beta.parse().map_err(|_| Error::Parse(format!("bad beta in {s:?}")))?;
            FaceDescriptor::beta(beta)?
        }
    };
    Ok(face)
}

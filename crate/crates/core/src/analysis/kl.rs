use serde::{Deserialize, Serialize};

use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::linalg::AffineSpace;

use super::sequences::{tightness_sequence, SequenceKind};

/// Closed convex cone `C₁` of the squared-distance function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ConeSpec {
    /// `K_exp^m`.
    ExpProduct { m: usize },
    /// All of `R^n`.
    Whole { n: usize },
}

impl ConeSpec {
    fn dim(&self) -> usize {
        match *self {
            ConeSpec::ExpProduct { m } => 3 * m,
            ConeSpec::Whole { n } => n,
        }
    }

    fn project(&self, y: &BlockPoint) -> Result<BlockPoint> {
        match self {
            ConeSpec::ExpProduct { .. } => y.project_cone(),
            ConeSpec::Whole { .. } => Ok(y.clone()),
        }
    }
}

/// `f(y) = d(y, C₁)² + d(y, C₂)²` and `‖∇f(y)‖`.
pub fn kl_quotient(y: &BlockPoint, c1: ConeSpec, c2: &AffineSpace) -> Result<(f64, f64)> {
    if !y.is_finite() {
        return Err(Error::NonFinite("kl_quotient point"));
    }
    if c1.dim() != y.dim() {
        return Err(Error::LengthMismatch { expected: c1.dim(), got: y.dim() });
    }
    if c2.ambient_dim() != y.dim() {
        return Err(Error::LengthMismatch { expected: c2.ambient_dim(), got: y.dim() });
    }
    let r1 = y.sub(&c1.project(y)?);
    let r2 = y.sub(&c2.project(y)?);
    let f = r1.norm().powi(2) + r2.norm().powi(2);
    let grad = r1.add(&r2).scale(2.0);
    Ok((f, grad.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KlPoint {
    pub k: f64,
    pub f_value: f64,
    pub subgrad_norm: f64,
    /// `‖∇f‖ / (2√f)`, the KL test quantity for exponent 1/2 with `c = 1`.
    pub quotient: f64,
}

/// KL test quantity at the midpoint of `w^k` and its projection onto K,
/// with `C₂ = span{e_x, e_z}` so that `C₁ ∩ C₂ = F_{-∞}`.
pub fn kl_sequence_point(k: f64) -> Result<KlPoint> {
    let w = tightness_sequence(SequenceKind::EntropicA, k)?.w;
    let pw = crate::geometry::project(w)?.primal;
    let y = BlockPoint::single((w + pw) * 0.5);
    let plane = AffineSpace::new(&[0.0; 3], &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]])?;
    let (f, g) = kl_quotient(&y, ConeSpec::ExpProduct { m: 1 }, &plane)?;
    if !(f > 0.0) {
        return Err(Error::DegenerateFit(format!("f vanished at k = {k}")));
    }
    Ok(KlPoint { k, f_value: f, subgrad_norm: g, quotient: g / (2.0 * f.sqrt()) })
}

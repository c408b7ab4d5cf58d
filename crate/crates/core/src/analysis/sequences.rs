use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::face_frame;
use crate::geometry::{distance, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SequenceKind {
    /// `w^k = (ln k / k, 0, 1)` against the face `F_{-∞}`.
    EntropicA,
    /// `w^k = P_{ẑ⊥} v^k` with `v^k = (1 - β + 1/k, 1, e^{1-β+1/k})` against `F_β`.
    BetaB { beta: f64 },
    /// `w^k = (-1, 1/k, 0)` against `F_∞`.
    LogC,
    /// `q^k = (-η/2, η/(2k), 0)` against `F_∞`.
    NonHoelder { eta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequencePoint {
    pub w: Point3,
    /// Distance from `w` to the face.
    pub lhs: f64,
    /// Distance from `w` to K (or to `v^k` for `BetaB`).
    pub rhs_input: f64,
    /// `ln rhs_input`, falling back to the analytic bound when `rhs_input` underflows.
    pub ln_rhs_input: f64,
}

// e^h - 1 - h without cancellation.
fn expm1_minus_id(h: f64) -> f64 {
    if h.abs() < 0.1 {
        let mut term = h * h / 2.0;
        let mut sum = term;
        for n in 3..30 {
            term *= h / n as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        h.exp_m1() - h
    }
}

/// Point `k` (a real `>= 1`) of one of the tightness sequences.
pub fn tightness_sequence(kind: SequenceKind, k: f64) -> Result<SequencePoint> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("sequence index must be >= 1, got {k}")));
    }
    match kind {
        SequenceKind::EntropicA => {
            if k < 3.0 {
                return Err(Error::InvalidArgument("EntropicA needs k >= 3".into()));
            }
            let a = k.ln() / k;
            let w = Point3::new(a, 0.0, 1.0);
            let d = distance(w)?;
            Ok(SequencePoint { w, lhs: a, rhs_input: d, ln_rhs_input: d.ln().max(-k.ln()) })
        }
        SequenceKind::BetaB { beta } => {
            let frame = face_frame(beta)?;
            let h = 1.0 / k;
            let v = Point3::new(1.0 - beta + h, 1.0, (1.0 - beta + h).exp());
            let zv = -expm1_minus_id(h);
            let pv = frame.p_hat.x * h + frame.p_hat.z * (1.0 - beta).exp() * h.exp_m1();
            let zn2 = frame.z_hat.norm_sq();
            let w = v - frame.z_hat * (zv / zn2);
            let rhs = zv.abs() / zn2.sqrt();
            Ok(SequencePoint { w, lhs: pv.abs() / frame.p_hat.norm(), rhs_input: rhs, ln_rhs_input: rhs.ln() })
        }
        SequenceKind::LogC => {
            let w = Point3::new(-1.0, 1.0 / k, 0.0);
            let d = distance(w)?;
            let ln = if d > 0.0 { d.ln() } else { -k - k.ln() };
            Ok(SequencePoint { w, lhs: 1.0 / k, rhs_input: d, ln_rhs_input: ln })
        }
        SequenceKind::NonHoelder { eta } => {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
            }
            let y = eta / (2.0 * k);
            let w = Point3::new(-eta / 2.0, y, 0.0);
            let d = distance(w)?;
            let ln = if d > 0.0 { d.ln() } else { y.ln() - k };
            Ok(SequencePoint { w, lhs: y, rhs_input: d, ln_rhs_input: ln })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::{project_face, FaceDescriptor};

    #[test]
    fn series_matches_direct() {
        for h in [1e-3f64, 0.05, 0.09] {
            let direct = h.exp_m1() - h;
            assert!((expm1_minus_id(h) - direct).abs() < 1e-8 * direct);
        }
    }

    #[test]
    fn examples() {
        let p = tightness_sequence(SequenceKind::EntropicA, 10.0).unwrap();
        assert_eq!(p.lhs, 10f64.ln() / 10.0);
        let p = tightness_sequence(SequenceKind::LogC, 5.0).unwrap();
        assert_eq!(p.lhs, 0.2);
        assert!(p.rhs_input <= (-5.0f64).exp() / 5.0);
        assert!(tightness_sequence(SequenceKind::EntropicA, 2.0).is_err());
        assert!(tightness_sequence(SequenceKind::LogC, 0.5).is_err());
    }

    #[test]
    fn beta_sequence_matches_explicit_vectors() {
        let beta = 1.0;
        let frame = face_frame(beta).unwrap();
        for k in [5.0, 50.0, 500.0] {
            let p = tightness_sequence(SequenceKind::BetaB { beta }, k).unwrap();
            let v = Point3::new(1.0 - beta + 1.0 / k, 1.0, (1.0 - beta + 1.0 / k).exp());
            let w = v - frame.z_hat * (frame.z_hat.dot(v) / frame.z_hat.norm_sq());
            let u = project_face(FaceDescriptor::FBeta { beta }, w).unwrap();
            assert!((p.w - w).max_abs() < 1e-12);
            assert!((p.rhs_input - w.dist(v)).abs() < 1e-10);
            assert!((p.lhs - w.dist(u)).abs() < 1e-10);
        }
    }
}

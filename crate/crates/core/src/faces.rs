//! Faces of the exponential cone: classification from exposing vectors,
//! frame vectors, closed-form projections and the hyperplane/ray distance
//! decomposition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, dual_contains, MembershipStatus, Point3, R_MAX};

/// A face of K_exp.
///
/// `FBeta(b)` is the ray spanned by `(1 - b, 1, e^(1-b))`, `FInf` is the ray
/// `{(x, 0, 0) : x <= 0}`, `FNegInf` the two-dimensional face
/// `{x <= 0, y = 0, z >= 0}` and `FNe` the non-exposed ray `{(0, 0, t)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "face")]
pub enum FaceDescriptor {
    Full,
    FBeta { beta: f64 },
    FInf,
    FNegInf,
    FNe,
    Zero,
}

impl FaceDescriptor {
    pub fn beta(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(FaceDescriptor::FBeta { beta })
    }

    /// The only face of K_exp that is not exposed.
    pub fn non_exposed() -> Self {
        FaceDescriptor::FNe
    }

    pub fn dim(&self) -> usize {
        match self {
            FaceDescriptor::Full => 3,
            FaceDescriptor::FNegInf => 2,
            FaceDescriptor::FBeta { .. } | FaceDescriptor::FInf | FaceDescriptor::FNe => 1,
            FaceDescriptor::Zero => 0,
        }
    }

    /// Every proper face of K_exp is polyhedral.
    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, FaceDescriptor::Full)
    }

    /// Generator of a one-dimensional face.
    pub fn generator(&self) -> Option<Point3> {
        match *self {
            FaceDescriptor::FBeta { beta } => Some(f_hat(beta)),
            FaceDescriptor::FInf => Some(Point3::new(-1.0, 0.0, 0.0)),
            FaceDescriptor::FNe => Some(Point3::new(0.0, 0.0, 1.0)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FaceDescriptor::Full => "Full",
            FaceDescriptor::FBeta { .. } => "FBeta",
            FaceDescriptor::FInf => "FInf",
            FaceDescriptor::FNegInf => "FNegInf",
            FaceDescriptor::FNe => "FNe",
            FaceDescriptor::Zero => "Zero",
        }
    }
}

impl fmt::Display for FaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceDescriptor::FBeta { beta } => write!(f, "FBeta({beta})"),
            other => f.write_str(other.name()),
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta.abs() > R_MAX {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

/// Classify the face `K ∩ z⊥` exposed by `z ∈ K*`.
pub fn classify_exposing(z: Point3, tol: f64) -> Result<FaceDescriptor> {
    z.check_finite("exposing vector")?;
    let n = z.norm();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let u = z / n;
    let m = dual_contains(u, tol)?;
    match m.status {
        MembershipStatus::Outside => return Err(Error::NotInDualCone { violation: m.violation }),
        MembershipStatus::Interior => return Ok(FaceDescriptor::Zero),
        MembershipStatus::Boundary => {}
    }
    if u.x.abs() < tol {
        if u.z > tol {
            Ok(FaceDescriptor::FInf)
        } else if u.y > tol {
            Ok(FaceDescriptor::FNegInf)
        } else {
            Err(Error::NotInDualCone { violation: m.violation })
        }
    } else {
        FaceDescriptor::beta(z.y / z.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaceFrame {
    pub z_hat: Point3,
    pub f_hat: Point3,
    pub p_hat: Point3,
}

fn z_hat(beta: f64) -> Point3 {
    Point3::new(1.0, beta, -(beta - 1.0).exp())
}

fn f_hat(beta: f64) -> Point3 {
    Point3::new(1.0 - beta, 1.0, (1.0 - beta).exp())
}

pub fn face_frame(beta: f64) -> Result<FaceFrame> {
    check_beta(beta)?;
    let z_hat = z_hat(beta);
    let f_hat = f_hat(beta);
    Ok(FaceFrame { z_hat, f_hat, p_hat: z_hat.cross(f_hat) })
}

/// Projection onto a face. `Full` delegates to the cone projection.
pub fn project_face(face: FaceDescriptor, p: Point3) -> Result<Point3> {
    p.check_finite("point")?;
    Ok(match face {
        FaceDescriptor::Full => geometry::project(p)?.primal,
        FaceDescriptor::FBeta { beta } => {
            check_beta(beta)?;
            project_ray(f_hat(beta), p)
        }
        FaceDescriptor::FInf => Point3::new(p.x.min(0.0), 0.0, 0.0),
        FaceDescriptor::FNe => Point3::new(0.0, 0.0, p.z.max(0.0)),
        FaceDescriptor::FNegInf => Point3::new(p.x.min(0.0), 0.0, p.z.max(0.0)),
        FaceDescriptor::Zero => Point3::ORIGIN,
    })
}

fn project_ray(f: Point3, p: Point3) -> Point3 {
    f * (p.dot(f).max(0.0) / f.norm_sq())
}

pub fn distance_to_face(face: FaceDescriptor, p: Point3) -> Result<f64> {
    if face == FaceDescriptor::Full {
        return geometry::distance(p);
    }
    Ok(p.dist(project_face(face, p)?))
}

/// Projection onto the hyperplane `z⊥`.
pub fn project_hyperplane(z: Point3, p: Point3) -> Point3 {
    p - z * (p.dot(z) / z.norm_sq())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// For `v`, `w = P_{ẑ⊥} v` and `u = P_{F_β} w`: the distances `‖w − v‖` and `‖w − u‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceDecomposition {
    pub dist_to_hyperplane: f64,
    pub dist_within_hyperplane: f64,
    pub f_inner_sign: Sign,
}

pub fn distance_decomposition(beta: f64, v: Point3) -> Result<DistanceDecomposition> {
    v.check_finite("point")?;
    let frame = face_frame(beta)?;
    let zv = frame.z_hat.dot(v);
    let fv = frame.f_hat.dot(v);
    let dist_within_hyperplane = if fv >= 0.0 {
        frame.p_hat.dot(v).abs() / frame.p_hat.norm()
    } else {
        project_hyperplane(frame.z_hat, v).norm()
    };
    Ok(DistanceDecomposition {
        dist_to_hyperplane: zv.abs() / frame.z_hat.norm(),
        dist_within_hyperplane,
        f_inner_sign: Sign::of(fv),
    })
}

/// Membership of `z` in the dual of a face (as a cone in R³).
pub fn face_dual_contains(face: FaceDescriptor, z: Point3, tol: f64) -> Result<bool> {
    z.check_finite("dual point")?;
    Ok(match face {
        FaceDescriptor::Full => dual_contains(z, tol)?.is_member(),
        FaceDescriptor::FNegInf => z.x <= tol && z.z >= -tol,
        FaceDescriptor::Zero => true,
        ray => {
            let f = ray.generator().expect("ray face").normalized()?;
            z.dot(f) >= -tol
        }
    })
}

/// `F ∩ z⊥` for `z` in the dual of `F`.
pub fn intersect_face(face: FaceDescriptor, z: Point3, tol: f64) -> Result<FaceDescriptor> {
    z.check_finite("exposing vector")?;
    let n = z.norm();
    if n <= tol {
        return Ok(face);
    }
    let u = z / n;
    if !face_dual_contains(face, u, tol)? {
        return Err(Error::FaceMismatch { face: face.to_string(), z: z.to_string() });
    }
    Ok(match face {
        FaceDescriptor::Full => classify_exposing(u, tol)?,
        FaceDescriptor::FNegInf => {
            let kills_x = u.x < -tol;
            let kills_z = u.z > tol;
            match (kills_x, kills_z) {
                (true, true) => FaceDescriptor::Zero,
                (true, false) => FaceDescriptor::FNe,
                (false, true) => FaceDescriptor::FInf,
                (false, false) => FaceDescriptor::FNegInf,
            }
        }
        FaceDescriptor::Zero => FaceDescriptor::Zero,
        ray => {
            let f = ray.generator().expect("ray face").normalized()?;
            if u.dot(f) > tol {
                FaceDescriptor::Zero
            } else {
                ray
            }
        }
    })
}

/// Whether `p` lies in the face, up to `tol`.
pub fn face_contains(face: FaceDescriptor, p: Point3, tol: f64) -> Result<bool> {
    match face {
        FaceDescriptor::Full => Ok(geometry::contains(p, tol)?.is_member()),
        _ => Ok(distance_to_face(face, p)? <= tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    #[test]
    fn classify_examples() {
        let tol = 1e-9;
        assert_eq!(classify_exposing(Point3::new(-1.0, -1.0, 1.0), tol).unwrap(), FaceDescriptor::FBeta { beta: 1.0 });
        assert_eq!(classify_exposing(Point3::new(0.0, 1.0, 1.0), tol).unwrap(), FaceDescriptor::FInf);
        assert_eq!(classify_exposing(Point3::new(0.0, 1.0, 0.0), tol).unwrap(), FaceDescriptor::FNegInf);
        assert_eq!(classify_exposing(Point3::new(-1.0, 0.0, 1.0), tol).unwrap(), FaceDescriptor::Zero);
        assert!(classify_exposing(Point3::ORIGIN, tol).is_err());
        assert!(classify_exposing(Point3::new(1.0, 0.0, 0.0), tol).is_err());
        assert!(classify_exposing(Point3::new(-1.0, 0.0, 0.0), tol).is_err());
    }

    #[test]
    fn frame_at_one() {
        let f = face_frame(1.0).unwrap();
        assert_eq!(f.z_hat, Point3::new(1.0, 1.0, -1.0));
        assert_eq!(f.f_hat, Point3::new(0.0, 1.0, 1.0));
        assert_eq!(f.p_hat, Point3::new(2.0, -1.0, 1.0));
    }

    #[test]
    fn frame_at_zero_matches_display() {
        let f = face_frame(0.0).unwrap();
        let display = Point3::new(1.0 / E, -E - 1.0 / E, 1.0);
        assert!((f.p_hat - display).max_abs() < 1e-14);
        assert_abs_diff_eq!(f.z_hat.dot(f.f_hat), 0.0, epsilon = 1e-15);
        // General closed form of p̂.
        for beta in [-3.0, -0.5, 0.0, 0.7, 2.0, 6.0] {
            let f = face_frame(beta).unwrap();
            let closed = Point3::new(
                beta * (1.0 - beta).exp() + (beta - 1.0).exp(),
                -(1.0 - beta).exp() - (1.0 - beta) * (beta - 1.0).exp(),
                beta * beta - beta + 1.0,
            );
            assert!((f.p_hat - closed).max_abs() < 1e-12 * closed.max_abs());
        }
    }

    #[test]
    fn frame_range_guard() {
        assert!(face_frame(700.0).is_ok());
        assert!(matches!(face_frame(701.0), Err(Error::BetaOutOfRange(_))));
        assert!(face_frame(f64::NAN).is_err());
    }

    #[test]
    fn project_face_examples() {
        assert_eq!(
            project_face(FaceDescriptor::FNegInf, Point3::new(-1.0, 7.0, 3.0)).unwrap(),
            Point3::new(-1.0, 0.0, 3.0)
        );
        let p = project_face(FaceDescriptor::FBeta { beta: 1.0 }, Point3::new(0.0, 1.0, 1.0)).unwrap();
        assert!((p - Point3::new(0.0, 1.0, 1.0)).max_abs() < 1e-15);
        assert_eq!(project_face(FaceDescriptor::FInf, Point3::new(2.0, -1.0, 5.0)).unwrap(), Point3::ORIGIN);
        assert_eq!(project_face(FaceDescriptor::FNe, Point3::new(2.0, -1.0, 5.0)).unwrap(), Point3::new(0.0, 0.0, 5.0));
        assert_eq!(project_face(FaceDescriptor::Zero, Point3::new(2.0, -1.0, 5.0)).unwrap(), Point3::ORIGIN);
    }

    #[test]
    fn decomposition_examples() {
        let d = distance_decomposition(1.0, Point3::new(0.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(d.dist_to_hyperplane, 0.0);
        assert_abs_diff_eq!(d.dist_within_hyperplane, 0.0);
        assert_eq!(d.f_inner_sign, Sign::Positive);

        let v = Point3::new(1.0, 1.0, E);
        let d = distance_decomposition(1.0, v).unwrap();
        assert_abs_diff_eq!(d.dist_to_hyperplane, (2.0 - E).abs() / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.dist_within_hyperplane, (1.0 + E) / 6f64.sqrt(), epsilon = 1e-15);

        let w = project_hyperplane(Point3::new(1.0, 1.0, -1.0), v);
        let u = project_face(FaceDescriptor::FBeta { beta: 1.0 }, w).unwrap();
        assert_abs_diff_eq!(w.dist(u), d.dist_within_hyperplane, epsilon = 1e-10);
        assert_abs_diff_eq!(w.dist(v), d.dist_to_hyperplane, epsilon = 1e-10);
    }

    #[test]
    fn negative_branch_uses_hyperplane_norm() {
        let v = Point3::new(-1.0, -1.0, -1.0);
        let frame = face_frame(1.0).unwrap();
        assert!(frame.f_hat.dot(v) < 0.0);
        let d = distance_decomposition(1.0, v).unwrap();
        assert_eq!(d.f_inner_sign, Sign::Negative);
        assert_abs_diff_eq!(d.dist_within_hyperplane, project_hyperplane(frame.z_hat, v).norm(), epsilon = 1e-15);
    }

    #[test]
    fn intersections() {
        let tol = 1e-9;
        let f = FaceDescriptor::FNegInf;
        assert_eq!(intersect_face(f, Point3::new(-1.0, 3.0, 1.0), tol).unwrap(), FaceDescriptor::Zero);
        assert_eq!(intersect_face(f, Point3::new(-1.0, 3.0, 0.0), tol).unwrap(), FaceDescriptor::FNe);
        assert_eq!(intersect_face(f, Point3::new(0.0, -3.0, 1.0), tol).unwrap(), FaceDescriptor::FInf);
        assert_eq!(intersect_face(f, Point3::new(0.0, -3.0, 0.0), tol).unwrap(), FaceDescriptor::FNegInf);
        assert!(intersect_face(f, Point3::new(1.0, 0.0, 0.0), tol).is_err());
        let ray = FaceDescriptor::FBeta { beta: 1.0 };
        assert_eq!(intersect_face(ray, Point3::new(0.0, 1.0, 0.0), tol).unwrap(), FaceDescriptor::Zero);
        assert_eq!(intersect_face(ray, Point3::new(1.0, 0.0, 0.0), tol).unwrap(), ray);
        assert_eq!(
            intersect_face(FaceDescriptor::Full, Point3::new(0.0, 1.0, 0.0), tol).unwrap(),
            FaceDescriptor::FNegInf
        );
    }

    #[test]
    fn serde_shape() {
        let s = serde_json::to_string(&FaceDescriptor::FBeta { beta: 1.0 }).unwrap();
        assert_eq!(s, r#"{"face":"FBeta","beta":1.0}"#);
        let s = serde_json::to_string(&FaceDescriptor::FNegInf).unwrap();
        assert_eq!(s, r#"{"face":"FNegInf"}"#);
        let back: FaceDescriptor = serde_json::from_str(r#"{"face":"FInf"}"#).unwrap();
        assert_eq!(back, FaceDescriptor::FInf);
    }
}

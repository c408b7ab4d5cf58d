use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::faces::{project_face, FaceDescriptor};
use crate::geometry::Point3;
use crate::linalg::AffineSpace;

use super::chain::FacialReductionChain;
use super::problem::FeasibilityProblem;

pub const ORACLE_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Dykstra's algorithm for `P_{A ∩ B} x`, stopping once the iterates in both
/// sets move less than `tol`. A final gap between the two sets larger than
/// `√tol (1 + ‖x‖)` is reported as divergence.
pub fn dykstra<PA, PB>(x: &BlockPoint, pa: PA, pb: PB, tol: f64, cap: usize) -> Result<BlockPoint>
where
    PA: Fn(&BlockPoint) -> Result<BlockPoint>,
    PB: Fn(&BlockPoint) -> Result<BlockPoint>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("oracle point"));
    }
    let mut xk = x.clone();
    let mut p = BlockPoint::zeros(x.m());
    let mut q = BlockPoint::zeros(x.m());
    let mut y_prev = x.clone();
    let mut change = f64::INFINITY;
    for it in 1..=cap {
        let xp = xk.add(&p);
        let y = pa(&xp)?;
        p = xp.sub(&y);
        let yq = y.add(&q);
        let xn = pb(&yq)?;
        q = yq.sub(&xn);
        change = xn.dist(&xk).max(y.dist(&y_prev));
        let gap = xn.dist(&y);
        xk = xn;
        y_prev = y;
        if !xk.is_finite() {
            return Err(Error::Divergence { iterations: it, change });
        }
        if change < tol {
            if gap > tol.sqrt() * (1.0 + x.norm()) {
                return Err(Error::Divergence { iterations: it, change: gap });
            }
            return Ok(xk);
        }
    }
    Err(Error::Divergence { iterations: cap, change })
}

/// `d(x, (L + a) ∩ K)` by Dykstra between `K` and `L + a`.
pub fn distance_to_intersection(x: &BlockPoint, problem: &FeasibilityProblem, tol: f64) -> Result<f64> {
    check_dims(x, problem)?;
    let aff = problem.affine()?;
    let limit = dykstra(x, |v| v.project_cone(), |v| aff.project(v), tol, MAX_ITERATIONS)?;
    Ok(x.dist(&limit))
}

fn check_dims(x: &BlockPoint, problem: &FeasibilityProblem) -> Result<()> {
    if x.m() != problem.m {
        return Err(Error::LengthMismatch { expected: problem.dim(), got: x.dim() });
    }
    Ok(())
}

fn project_faces(faces: &[FaceDescriptor], v: &BlockPoint) -> Result<BlockPoint> {
    Ok(BlockPoint::new(faces.iter().zip(&v.blocks).map(|(f, b)| project_face(*f, *b)).collect::<Result<Vec<_>>>()?))
}

fn face_span(face: FaceDescriptor) -> Vec<Point3> {
    match face {
        FaceDescriptor::Full => {
            vec![Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0), Point3::new(0.0, 0.0, 1.0)]
        }
        FaceDescriptor::FNegInf => vec![Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 0.0, 1.0)],
        FaceDescriptor::Zero => vec![],
        ray => vec![ray.generator().expect("ray face")],
    }
}

/// Whether the terminal face of `chain` lies inside `L + a`, in which case
/// it equals `(L + a) ∩ K`.
pub fn terminal_in_affine(problem: &FeasibilityProblem, chain: &FacialReductionChain) -> Result<bool> {
    let aff = problem.affine()?;
    let origin = BlockPoint::zeros(problem.m);
    if aff.distance(&origin)? > 1e-9 * (1.0 + problem.a.norm()) {
        return Ok(false);
    }
    for (j, face) in chain.terminal().iter().enumerate() {
        for g in face_span(*face) {
            let mut v = BlockPoint::zeros(problem.m);
            v.blocks[j] = g / g.norm();
            if aff.distance(&v)? > 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Projection onto `(L + a) ∩ K` through the terminal face: in closed form
/// when the face lies in `L + a`, else by Dykstra between the face and `L + a`.
pub struct ChainOracle {
    faces: Vec<FaceDescriptor>,
    aff: AffineSpace,
    closed_form: bool,
    tol: f64,
}

impl ChainOracle {
    pub fn new(problem: &FeasibilityProblem, chain: &FacialReductionChain, tol: f64) -> Result<Self> {
        if chain.terminal().len() != problem.m {
            return Err(Error::LengthMismatch { expected: problem.m, got: chain.terminal().len() });
        }
        Ok(ChainOracle {
            faces: chain.terminal().to_vec(),
            aff: problem.affine()?,
            closed_form: terminal_in_affine(problem, chain)?,
            tol,
        })
    }

    pub fn is_closed_form(&self) -> bool {
        self.closed_form
    }

    pub fn project(&self, x: &BlockPoint) -> Result<BlockPoint> {
        if x.m() != self.faces.len() {
            return Err(Error::LengthMismatch { expected: 3 * self.faces.len(), got: x.dim() });
        }
        if self.closed_form {
            project_faces(&self.faces, x)
        } else {
            dykstra(x, |v| project_faces(&self.faces, v), |v| self.aff.project(v), self.tol, MAX_ITERATIONS)
        }
    }

    pub fn distance(&self, x: &BlockPoint) -> Result<f64> {
        Ok(x.dist(&self.project(x)?))
    }

    /// Iterative distance through the terminal face, ignoring the closed form.
    pub fn iterative_distance(&self, x: &BlockPoint) -> Result<f64> {
        let limit = dykstra(x, |v| project_faces(&self.faces, v), |v| self.aff.project(v), self.tol, MAX_ITERATIONS)?;
        Ok(x.dist(&limit))
    }
}

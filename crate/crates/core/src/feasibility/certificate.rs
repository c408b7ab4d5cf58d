use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::faces::FaceDescriptor;
use crate::geometry::{dual_contains, Point3};

use super::problem::FeasibilityProblem;

/// Evaluation budget of one certificate search.
pub const SEARCH_BUDGET: usize = 100_000;

/// Tolerance for dual membership and orthogonality of certificates.
pub const CERT_TOL: f64 = 1e-9;

const REFINE_STARTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome")]
pub enum CertificateSearch {
    Found {
        z: BlockPoint,
        /// Number of valid certificates merged into `z`.
        merged: usize,
        evaluations: usize,
    },
    /// The sweep was exhaustive and found nothing.
    NoneFound { evaluations: usize },
}

impl CertificateSearch {
    pub fn certificate(&self) -> Option<&BlockPoint> {
        match self {
            CertificateSearch::Found { z, .. } => Some(z),
            CertificateSearch::NoneFound { .. } => None,
        }
    }
}

/// How far `z` is from the dual of `face`; zero iff inside.
pub fn face_dual_violation(face: FaceDescriptor, z: Point3) -> Result<f64> {
    z.check_finite("dual point")?;
    Ok(match face {
        FaceDescriptor::Full => dual_contains(z, CERT_TOL)?.violation,
        FaceDescriptor::FNegInf => z.x.max(-z.z).max(0.0),
        FaceDescriptor::Zero => 0.0,
        ray => {
            let f = ray.generator().expect("ray face").normalized()?;
            (-z.dot(f)).max(0.0)
        }
    })
}

fn violation(faces: &[FaceDescriptor], z: &BlockPoint) -> Result<f64> {
    let mut v: f64 = 0.0;
    for (f, b) in faces.iter().zip(&z.blocks) {
        v = v.max(face_dual_violation(*f, *b)?);
    }
    Ok(v)
}

fn reduces(faces: &[FaceDescriptor], z: &BlockPoint) -> bool {
    let n = z.norm();
    faces.iter().zip(&z.blocks).any(|(f, b)| *f == FaceDescriptor::Full && b.norm() > CERT_TOL * n)
}

/// Whether `z` is a certificate for the faces `faces`: blockwise in the face
/// duals, orthogonal to `L` and `a`, and nonzero on some full block.
pub fn is_certificate(problem: &FeasibilityProblem, faces: &[FaceDescriptor], z: &BlockPoint) -> Result<bool> {
    if z.m() != problem.m || faces.len() != problem.m {
        return Err(Error::LengthMismatch { expected: problem.m, got: z.m().min(faces.len()) });
    }
    let n = z.norm();
    if n == 0.0 {
        return Ok(false);
    }
    let u = z.scale(1.0 / n);
    Ok(violation(faces, &u)? <= CERT_TOL && problem.orthogonality_residual(&u) <= CERT_TOL && reduces(faces, &u))
}

pub(crate) struct Sweep {
    pub valid: Vec<BlockPoint>,
    /// Valid special rays lying in `S` without projection.
    pub exact: Vec<BlockPoint>,
    pub evaluations: usize,
    pub exhaustive: bool,
}

struct Searcher<'a> {
    faces: &'a [FaceDescriptor],
    s: DMatrix<f64>,
    evaluations: usize,
    valid: Vec<BlockPoint>,
    exact: Vec<BlockPoint>,
    near: Vec<(f64, DVector<f64>)>,
}

impl Searcher<'_> {
    fn point(&self, c: &DVector<f64>) -> Result<BlockPoint> {
        BlockPoint::from_flat((&self.s * c).as_slice())
    }

    fn score(&mut self, c: &DVector<f64>) -> Result<Option<f64>> {
        let n = c.norm();
        if !(n > 1e-12) {
            return Ok(None);
        }
        self.evaluations += 1;
        let z = self.point(&(c / n))?;
        Ok(Some(violation(self.faces, &z)?))
    }

    fn try_coords(&mut self, c: DVector<f64>) -> Result<()> {
        let Some(v) = self.score(&c)? else { return Ok(()) };
        let c = c.normalize();
        if v <= CERT_TOL {
            let z = self.point(&c)?;
            if reduces(self.faces, &z) {
                self.valid.push(z);
            }
        } else if v < 0.05 {
            self.near.push((v, c));
        }
        Ok(())
    }

    fn try_vector(&mut self, v: &[f64]) -> Result<()> {
        let v = DVector::from_column_slice(v);
        let c = self.s.transpose() * &v;
        let in_s = (&self.s * &c - &v).norm() <= CERT_TOL * v.norm();
        let before = self.valid.len();
        self.try_coords(c)?;
        if in_s && self.valid.len() > before {
            self.exact.push(self.valid[before].clone());
        }
        Ok(())
    }

    // Pattern search on the unit sphere of S, minimizing the dual violation.
    fn refine(&mut self, mut c: DVector<f64>, mut v: f64, budget: usize) -> Result<()> {
        let d = c.len();
        let mut step = 0.05;
        while step > 1e-14 && v > CERT_TOL && self.evaluations < budget {
            let mut moved = false;
            for j in 0..d {
                for sign in [1.0, -1.0] {
                    let mut t = c.clone();
                    t[j] += sign * step;
                    if let Some(tv) = self.score(&t)? {
                        if tv < v {
                            c = t.normalize();
                            v = tv;
                            moved = true;
                        }
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if v <= CERT_TOL {
            let z = self.point(&c)?;
            if reduces(self.faces, &z) {
                self.valid.push(z);
            }
        }
        Ok(())
    }
}

/// All certificates met by the sweep over `S = L⊥ ∩ {a}⊥`.
pub(crate) fn sweep(problem: &FeasibilityProblem, faces: &[FaceDescriptor]) -> Result<Sweep> {
    if faces.len() != problem.m {
        return Err(Error::LengthMismatch { expected: problem.m, got: faces.len() });
    }
    let s = problem.certificate_space()?;
    let d = s.ncols();
    if d == 0 || !faces.contains(&FaceDescriptor::Full) {
        return Ok(Sweep { valid: Vec::new(), exact: Vec::new(), evaluations: 0, exhaustive: true });
    }
    let n = problem.dim();
    let mut se = Searcher { faces, s, evaluations: 0, valid: Vec::new(), exact: Vec::new(), near: Vec::new() };

    let specials = [
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.0, 1.0, 1.0),
        Point3::new(-1.0, 0.0, 1.0),
        Point3::new(-1.0, -1.0, 1.0),
    ];
    let emit = |j: usize, p: Point3, se: &mut Searcher| -> Result<()> {
        let mut v = vec![0.0; n];
        v[3 * j..3 * j + 3].copy_from_slice(&p.to_array());
        se.try_vector(&v)
    };
    for j in 0..problem.m {
        for p in specials {
            emit(j, p, &mut se)?;
        }
    }
    // Products of special rays across blocks.
    if problem.m > 1 {
        let mut idx = vec![0usize; problem.m];
        'outer: loop {
            let mut v = vec![0.0; n];
            for (j, &i) in idx.iter().enumerate() {
                if i > 0 {
                    v[3 * j..3 * j + 3].copy_from_slice(&specials[i - 1].normalized()?.to_array());
                }
            }
            if idx.iter().filter(|&&i| i > 0).count() > 1 {
                se.try_vector(&v)?;
            }
            for i in idx.iter_mut() {
                *i += 1;
                if *i <= specials.len() {
                    continue 'outer;
                }
                *i = 0;
            }
            break;
        }
    }
    se.exact.dedup();
    let exact = std::mem::take(&mut se.exact);
    for j in 0..problem.m {
        for i in 0..=1200 {
            let t = -30.0 + 0.05 * i as f64;
            emit(j, Point3::new(-1.0, t, (-t - 1.0).exp()), &mut se)?;
        }
    }

    match d {
        1 => {
            se.try_coords(DVector::from_element(1, 1.0))?;
            se.try_coords(DVector::from_element(1, -1.0))?;
        }
        2 => {
            for i in 0..3600 {
                let th = std::f64::consts::TAU * i as f64 / 3600.0;
                se.try_coords(DVector::from_vec(vec![th.cos(), th.sin()]))?;
            }
        }
        3 => {
            let count = 20_000;
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            for i in 0..count {
                let y = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let r = (1.0 - y * y).sqrt();
                let th = golden * i as f64;
                se.try_coords(DVector::from_vec(vec![r * th.cos(), y, r * th.sin()]))?;
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let random_budget = SEARCH_BUDGET * 3 / 4;
            while se.evaluations < random_budget {
                let c = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
                se.try_coords(c)?;
            }
        }
    }

    let mut near = std::mem::take(&mut se.near);
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    near.truncate(REFINE_STARTS);
    for (v, c) in near {
        se.refine(c, v, SEARCH_BUDGET)?;
    }
    let exhaustive = problem.m == 1 && d <= 3;
    Ok(Sweep { valid: se.valid, exact, evaluations: se.evaluations, exhaustive })
}

// A point of L + a in the interior of every full block and in the face of
// every other block; its existence rules out further certificates.
pub(crate) fn pps_witness(problem: &FeasibilityProblem, faces: &[FaceDescriptor]) -> Result<Option<BlockPoint>> {
    let aff = problem.affine()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7177);
    let sample = |f: FaceDescriptor, scale: f64, rng: &mut ChaCha8Rng| -> Point3 {
        let u: f64 = rand::Rng::gen_range(rng, 0.1..1.0);
        let v: f64 = rand::Rng::gen_range(rng, -2.0..2.0);
        match f {
            FaceDescriptor::Full => Point3::new(v, u, u * v.exp() + u) * scale,
            FaceDescriptor::FNegInf => Point3::new(-u, 0.0, u + v.abs()) * scale,
            FaceDescriptor::Zero => Point3::ORIGIN,
            ray => ray.generator().expect("ray face") * (u * scale),
        }
    };
    for i in 0..2000 {
        let scale = 10f64.powi(i % 7 - 3);
        let t = BlockPoint::new(faces.iter().map(|f| sample(*f, scale, &mut rng)).collect());
        let x = aff.project(&t)?;
        let mut ok = true;
        for (f, b) in faces.iter().zip(&x.blocks) {
            ok &= match f {
                FaceDescriptor::Full => {
                    crate::geometry::contains(*b, CERT_TOL)?.status == crate::geometry::MembershipStatus::Interior
                }
                other => crate::faces::face_contains(*other, *b, CERT_TOL * b.norm().max(1.0))?,
            };
            if !ok {
                break;
            }
        }
        if ok {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn merge(valid: &[BlockPoint]) -> BlockPoint {
    let m = valid[0].m();
    let mut sum = BlockPoint::zeros(m);
    for z in valid {
        sum = sum.add(&z.scale(1.0 / z.norm()));
    }
    let n = sum.norm();
    let mut u = sum.scale(1.0 / n);
    for b in &mut u.blocks {
        if b.norm() < 1e-12 {
            *b = Point3::ORIGIN;
        }
    }
    u
}

/// A certificate `z ∈ F* ∩ L⊥ ∩ {a}⊥` exposing a strictly smaller face.
///
/// All certificates met by the sweep are merged, so the result exposes the
/// smallest face reachable in one step. A search that finds nothing and was
/// not exhaustive is reported as [`Error::Inconclusive`].
pub fn find_certificate(problem: &FeasibilityProblem, faces: &[FaceDescriptor]) -> Result<CertificateSearch> {
    let sw = sweep(problem, faces)?;
    if sw.valid.is_empty() {
        return if sw.exhaustive || pps_witness(problem, faces)?.is_some() {
            Ok(CertificateSearch::NoneFound { evaluations: sw.evaluations })
        } else {
            Err(Error::Inconclusive { evaluations: sw.evaluations })
        };
    }
    // Sampled points hug the flat parts of the dual boundary and bias the
    // merge, so exact special rays win when there are any.
    for set in [&sw.exact, &sw.valid] {
        if set.is_empty() {
            continue;
        }
        let merged = merge(set);
        if is_certificate(problem, faces, &merged)? {
            return Ok(CertificateSearch::Found { z: merged, merged: set.len(), evaluations: sw.evaluations });
        }
    }
    // Rounding in the merge can push a boundary certificate out; fall back to
    // the candidate touching the most full blocks.
    let best = sw
        .valid
        .iter()
        .max_by_key(|z| {
            z.blocks.iter().zip(faces).filter(|(b, f)| **f == FaceDescriptor::Full && b.norm() > CERT_TOL).count()
        })
        .expect("nonempty");
    Ok(CertificateSearch::Found { z: best.scale(1.0 / best.norm()), merged: 1, evaluations: sw.evaluations })
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::{
    classify_exposing, distance_decomposition, distance_to_face, project_face, project_hyperplane, FaceDescriptor,
};
use crate::frf::{Coefficient, FACE_TOL};
use crate::geometry::Point3;
use crate::gfun::GFunction;

/// Boundary sampling for [`estimate_gamma`].
///
/// Sheet points are `s v(r) / ‖v(r)‖` with `v(r) = (r, 1, e^r)`, `r` uniform on
/// `[-r_max, r_max]` and `s` log-uniform over `norm_decades` decades below `η`.
/// The two-dimensional face `y = 0` is sampled with the same norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaGrid {
    pub norm_points: usize,
    pub dir_points: usize,
    pub r_max: f64,
    pub norm_decades: f64,
}

impl Default for GammaGrid {
    fn default() -> Self {
        GammaGrid { norm_points: 60, dir_points: 801, r_max: 40.0, norm_decades: 8.0 }
    }
}

impl GammaGrid {
    fn validate(&self) -> Result<()> {
        if self.norm_points < 1
            || self.dir_points < 2
            || !(self.r_max > 0.0 && self.r_max <= 700.0)
            || !(self.norm_decades >= 0.0)
        {
            return Err(Error::InvalidArgument(format!("bad gamma grid {self:?}")));
        }
        Ok(())
    }
}

/// Infimum over sheet samples with `|r| <= r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandInfimum {
    pub r_max: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaEstimate {
    pub gamma_hat: f64,
    /// The infimum keeps collapsing as the sampled range of `r` widens.
    pub vanishing: bool,
    pub argmin_witness: Point3,
    pub samples_used: usize,
    pub g: GFunction,
    pub eta: f64,
    pub bands: Vec<BandInfimum>,
}

fn sheet_unit(r: f64) -> Point3 {
    let v = Point3::new(r, 1.0, r.exp());
    v / v.norm()
}

fn same_face(a: FaceDescriptor, b: FaceDescriptor) -> bool {
    match (a, b) {
        (FaceDescriptor::FBeta { beta: x }, FaceDescriptor::FBeta { beta: y }) => {
            (x - y).abs() <= 1e-9 * x.abs().max(1.0)
        }
        _ => a == b,
    }
}

pub fn estimate_gamma(
    z: Point3,
    face: FaceDescriptor,
    g: GFunction,
    eta: f64,
    grid: &GammaGrid,
) -> Result<GammaEstimate> {
    estimate_gamma_with(z, face, g, eta, grid, |_, _| {})
}

/// Like [`estimate_gamma`], reporting every admissible sample and its ratio.
pub fn estimate_gamma_with(
    z: Point3,
    face: FaceDescriptor,
    g: GFunction,
    eta: f64,
    grid: &GammaGrid,
    mut on_sample: impl FnMut(Point3, f64),
) -> Result<GammaEstimate> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
    }
    g.validate()?;
    grid.validate()?;
    let classified = classify_exposing(z, FACE_TOL)?;
    if !same_face(face, classified) {
        return Err(Error::FaceMismatch { face: face.to_string(), z: z.to_string() });
    }
    let zn = z.normalized()?;
    let exclusion = 1e-14 * eta;

    let pieces = |v: Point3| -> Result<(f64, f64)> {
        if let FaceDescriptor::FBeta { beta } = face {
            let d = distance_decomposition(beta, v)?;
            Ok((d.dist_to_hyperplane, d.dist_within_hyperplane))
        } else {
            let w = project_hyperplane(zn, v);
            let u = project_face(face, w)?;
            Ok((zn.dot(v).abs(), w.dist(u)))
        }
    };

    let norms: Vec<f64> = (0..grid.norm_points)
        .map(|j| {
            let frac = if grid.norm_points == 1 { 0.0 } else { j as f64 / (grid.norm_points - 1) as f64 };
            eta * 10f64.powf(-grid.norm_decades * frac)
        })
        .collect();

    let band_edges: Vec<f64> = (1..=4).map(|i| grid.r_max * i as f64 / 4.0).collect();
    let mut band_inf = vec![f64::INFINITY; band_edges.len()];
    let mut best = f64::INFINITY;
    let mut witness = Point3::ORIGIN;
    let mut witness_r = 0.0f64;
    let mut used = 0usize;

    let mut visit = |v: Point3, r: Option<f64>| -> Result<()> {
        if distance_to_face(face, v)? <= exclusion {
            return Ok(());
        }
        let (dv, du) = pieces(v)?;
        if du <= exclusion {
            return Ok(());
        }
        let ratio = g.eval(dv)? / du;
        used += 1;
        on_sample(v, ratio);
        for (edge, inf) in band_edges.iter().zip(band_inf.iter_mut()) {
            if r.is_none_or(|r| r.abs() <= *edge) {
                *inf = inf.min(ratio);
            }
        }
        if ratio < best {
            best = ratio;
            witness = v;
            witness_r = r.unwrap_or(0.0);
        }
        Ok(())
    };

    for i in 0..grid.dir_points {
        let r = -grid.r_max + 2.0 * grid.r_max * i as f64 / (grid.dir_points - 1) as f64;
        let dir = sheet_unit(r);
        for &s in &norms {
            visit(dir * s, Some(r))?;
        }
    }
    if face != FaceDescriptor::FNegInf {
        let n = (grid.dir_points / 4).max(2);
        for i in 0..n {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / (n - 1) as f64;
            let dir = Point3::new(-theta.cos(), 0.0, theta.sin());
            for &s in &norms {
                visit(dir * s, None)?;
            }
        }
    }

    if used == 0 {
        return Err(Error::EmptySample(format!("no admissible boundary samples for {face} at eta = {eta}")));
    }
    let half = band_inf[1];
    let vanishing = best < 1e-3 * half && witness_r.abs() >= 0.75 * grid.r_max;
    Ok(GammaEstimate {
        gamma_hat: best,
        vanishing,
        argmin_witness: witness,
        samples_used: used,
        g,
        eta,
        bands: band_edges.into_iter().zip(band_inf).map(|(r_max, ratio)| BandInfimum { r_max, ratio }).collect(),
    })
}

/// Step table of `κ(t) = max{2 t^{1-α}, 2/γ̂(t)}` at the given breakpoints,
/// made monotone by a running maximum.
pub fn kappa_table(
    z: Point3,
    face: FaceDescriptor,
    g: GFunction,
    breakpoints: &[f64],
    grid: &GammaGrid,
) -> Result<Coefficient> {
    let alpha = g.alpha();
    let mut values = Vec::with_capacity(breakpoints.len());
    let mut running: f64 = 0.0;
    for &t in breakpoints {
        let est = estimate_gamma(z, face, g, t, grid)?;
        if !(est.gamma_hat > 0.0) || est.vanishing {
            return Err(Error::InvalidArgument(format!("gamma vanishes for {face} at eta = {t}; no finite kappa")));
        }
        running = running.max((2.0 * t.powf(1.0 - alpha)).max(2.0 / est.gamma_hat));
        values.push(running);
    }
    Coefficient::step_table(breakpoints.to_vec(), values)
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::{classify_exposing, distance_to_face, FaceDescriptor};
use crate::frf::FACE_TOL;
use crate::geometry::{distance, Point3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    /// Least-squares slope of `ln d(q, F)` against `ln d(q, K)`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest `d(q, K)` used.
    pub sample_range: (f64, f64),
    /// Slope over the third of the samples closest to the face.
    pub tail_slope: f64,
    /// Samples whose distance to K underflowed to zero.
    pub dropped: usize,
}

impl ExponentFit {
    /// Whether the data look like a single Hölder exponent.
    pub fn is_hoelderian(&self) -> bool {
        self.dropped == 0 && self.slope > 0.0 && self.r_squared >= 0.98 && self.tail_slope >= 0.5 * self.slope
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) || !(syy > 0.0) {
        return Err(Error::DegenerateFit("no spread in sampled distances".into()));
    }
    let slope = sxy / sxx;
    let r2 = (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0);
    Ok((slope, my - slope * mx, r2))
}

/// Perturbs the face point `(η/2) f` along the in-hyperplane normal `z × f`
/// by log-spaced magnitudes in `[1e-4 η, 1e-1 η]` and regresses
/// `ln d(q, F)` on `ln d(q, K)`. Of the two signs the one closer to K is used.
pub fn fit_exponent(z: Point3, face: FaceDescriptor, eta: f64, samples: usize) -> Result<ExponentFit> {
    if samples < 10 {
        return Err(Error::InvalidArgument(format!("fit_exponent needs at least 10 samples, got {samples}")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
    }
    let classified = classify_exposing(z, FACE_TOL)?;
    let matches = match (face, classified) {
        (FaceDescriptor::FBeta { beta: a }, FaceDescriptor::FBeta { beta: b }) => {
            (a - b).abs() <= 1e-9 * a.abs().max(1.0)
        }
        (a, b) => a == b,
    };
    if !matches {
        return Err(Error::FaceMismatch { face: face.to_string(), z: z.to_string() });
    }
    let f = match face {
        FaceDescriptor::FNegInf => Point3::new(0.0, 0.0, 1.0),
        other => {
            other.generator().ok_or_else(|| Error::InvalidArgument(format!("no perturbation family for {other}")))?
        }
    }
    .normalized()?;
    let dir = z.cross(f).normalized()?;
    let base = f * (0.5 * eta);

    let deltas: Vec<f64> =
        (0..samples).map(|i| eta * 10f64.powf(-4.0 + 3.0 * i as f64 / (samples - 1) as f64)).collect();
    let probe = |sign: f64, delta: f64| -> Result<(f64, f64)> {
        let q = base + dir * (sign * delta);
        Ok((distance_to_face(face, q)?, distance(q)?))
    };

    let mut sign = 1.0;
    let (f_plus, k_plus) = probe(1.0, deltas[0])?;
    let (f_minus, k_minus) = probe(-1.0, deltas[0])?;
    if f_plus <= 0.0 || (f_minus > 0.0 && k_minus < k_plus) {
        sign = -1.0;
    }

    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    let mut dropped = 0;
    for &d in &deltas {
        let (df, dk) = probe(sign, d)?;
        if df > 0.0 && dk > 0.0 {
            xs.push(dk.ln());
            ys.push(df.ln());
        } else {
            dropped += 1;
        }
    }
    if xs.len() < 3 {
        return Err(Error::DegenerateFit(format!("only {} usable samples", xs.len())));
    }
    let (slope, intercept, r_squared) = least_squares(&xs, &ys)?;
    let tail = (xs.len() / 3).max(3);
    let tail_slope = least_squares(&xs[..tail], &ys[..tail]).map(|t| t.0).unwrap_or(0.0);
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min).exp();
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
    Ok(ExponentFit { slope, intercept, r_squared, sample_range: (lo, hi), tail_slope, dropped })
}

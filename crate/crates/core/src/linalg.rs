//! Subspaces and affine spaces of R^n backed by orthonormal bases.

use nalgebra::{DMatrix, DVector};

use crate::block::BlockPoint;
use crate::error::{Error, Result};

/// Relative singular-value cutoff for numerical rank.
pub const RANK_TOL: f64 = 1e-10;

fn matrix_from_columns(n: usize, vectors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    for v in vectors {
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: v.len() });
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("basis vector"));
        }
    }
    Ok(DMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]))
}

/// Orthonormal basis (as columns) of the span of `vectors`.
pub fn orthonormal_span(n: usize, vectors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if vectors.is_empty() {
        return Ok(DMatrix::zeros(n, 0));
    }
    let a = matrix_from_columns(n, vectors)?;
    let svd = a.svd(true, false);
    let u = svd.u.ok_or(Error::NonConvergence { iterations: 0, residual: f64::NAN })?;
    let smax = svd.singular_values.max();
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| smax > 0.0 && svd.singular_values[i] > RANK_TOL * smax).collect();
    Ok(DMatrix::from_fn(n, keep.len(), |i, j| clean(u[(i, keep[j])])))
}

// Drops SVD round-off so that coordinate-aligned subspaces stay exact.
fn clean(c: f64) -> f64 {
    if c.abs() <= 1e-14 {
        0.0
    } else {
        c
    }
}

pub fn rank(n: usize, vectors: &[Vec<f64>]) -> Result<usize> {
    Ok(orthonormal_span(n, vectors)?.ncols())
}

/// Orthonormal basis of the orthogonal complement of the span of `vectors`.
pub fn orthogonal_complement(n: usize, vectors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let q = orthonormal_span(n, vectors)?;
    let mut cols: Vec<DVector<f64>> = q.column_iter().map(|c| c.into_owned()).collect();
    let r = cols.len();
    // Gram-Schmidt (twice) on the coordinate axes, taking the largest residual each round.
    while cols.len() < n {
        let mut best: Option<DVector<f64>> = None;
        for i in 0..n {
            let mut v = DVector::<f64>::zeros(n);
            v[i] = 1.0;
            for _ in 0..2 {
                for c in &cols {
                    v -= c * c.dot(&v);
                }
            }
            if best.as_ref().is_none_or(|b| v.norm() > b.norm() + 1e-12) {
                best = Some(v);
            }
        }
        let v = best.expect("n > 0");
        cols.push(&v / v.norm());
    }
    Ok(DMatrix::from_fn(n, n - r, |i, j| clean(cols[r + j][i])))
}

/// The affine space `L + a` with an orthonormal basis of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSpace {
    pub anchor: DVector<f64>,
    pub basis: DMatrix<f64>,
    /// Orthonormal basis of `L⊥`.
    pub normal: DMatrix<f64>,
}

impl AffineSpace {
    pub fn new(anchor: &[f64], spanning: &[Vec<f64>]) -> Result<Self> {
        if anchor.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("anchor"));
        }
        let n = anchor.len();
        Ok(AffineSpace {
            anchor: DVector::from_column_slice(anchor),
            basis: orthonormal_span(n, spanning)?,
            normal: orthogonal_complement(n, spanning)?,
        })
    }

    /// All of R^n.
    pub fn whole(n: usize) -> Self {
        AffineSpace { anchor: DVector::zeros(n), basis: DMatrix::identity(n, n), normal: DMatrix::zeros(n, 0) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.anchor.len()
    }

    /// Dimension of `L`.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn project_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        let d = x - &self.anchor;
        &self.anchor + &self.basis * (self.basis.transpose() * d)
    }

    pub fn project(&self, x: &BlockPoint) -> Result<BlockPoint> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::LengthMismatch { expected: self.ambient_dim(), got: x.dim() });
        }
        let v = DVector::from_vec(x.to_flat());
        BlockPoint::from_flat(self.project_vec(&v).as_slice())
    }

    /// `‖N^T (x − a)‖` with `N` spanning `L⊥`; exact zeros survive for
    /// points built to lie in `L + a`.
    pub fn distance(&self, x: &BlockPoint) -> Result<f64> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::LengthMismatch { expected: self.ambient_dim(), got: x.dim() });
        }
        let d = DVector::from_vec(x.to_flat()) - &self.anchor;
        let r = self.normal.transpose() * d;
        let scale = r.amax();
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok(scale * (r / scale).norm())
    }
}

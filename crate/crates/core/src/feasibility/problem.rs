use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, rank, AffineSpace};

#[derive(Deserialize)]
struct RawProblem {
    m: usize,
    #[serde(rename = "L_basis")]
    l_basis: Vec<Vec<f64>>,
    a: Vec<f64>,
}

/// Find `x ∈ (L + a) ∩ K` for `K = K_exp^m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityProblem {
    pub m: usize,
    #[serde(rename = "L_basis")]
    pub l_basis: Vec<BlockPoint>,
    pub a: BlockPoint,
}

impl FeasibilityProblem {
    pub fn new(m: usize, l_basis: Vec<BlockPoint>, a: BlockPoint) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let n = 3 * m;
        if a.m() != m {
            return Err(Error::LengthMismatch { expected: n, got: a.dim() });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("anchor"));
        }
        for b in &l_basis {
            if b.m() != m {
                return Err(Error::LengthMismatch { expected: n, got: b.dim() });
            }
            if !b.is_finite() {
                return Err(Error::NonFinite("basis vector"));
            }
        }
        if l_basis.len() > n {
            return Err(Error::InvalidArgument(format!("{} basis vectors in dimension {n}", l_basis.len())));
        }
        let flat: Vec<Vec<f64>> = l_basis.iter().map(BlockPoint::to_flat).collect();
        let r = rank(n, &flat)?;
        if r != l_basis.len() {
            return Err(Error::InvalidArgument(format!(
                "L_basis is linearly dependent (rank {r} for {} vectors)",
                l_basis.len()
            )));
        }
        Ok(FeasibilityProblem { m, l_basis, a })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(s)?;
        let n = 3 * raw.m;
        let basis = raw
            .l_basis
            .iter()
            .map(|v| {
                if v.len() != n {
                    return Err(Error::LengthMismatch { expected: n, got: v.len() });
                }
                BlockPoint::from_flat(v)
            })
            .collect::<Result<Vec<_>>>()?;
        if raw.a.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: raw.a.len() });
        }
        let a = BlockPoint::from_flat(&raw.a)?;
        FeasibilityProblem::new(raw.m, basis, a)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Ambient dimension `3m`.
    pub fn dim(&self) -> usize {
        3 * self.m
    }

    pub fn affine(&self) -> Result<AffineSpace> {
        let flat: Vec<Vec<f64>> = self.l_basis.iter().map(BlockPoint::to_flat).collect();
        AffineSpace::new(&self.a.to_flat(), &flat)
    }

    /// Orthonormal basis (columns) of `L⊥ ∩ {a}⊥`.
    pub fn certificate_space(&self) -> Result<DMatrix<f64>> {
        let mut vs: Vec<Vec<f64>> = self.l_basis.iter().map(BlockPoint::to_flat).collect();
        vs.push(self.a.to_flat());
        orthogonal_complement(self.dim(), &vs)
    }

    /// Largest `|cos ∠(z, b)|` over the basis of `L` and `a`.
    pub fn orthogonality_residual(&self, z: &BlockPoint) -> f64 {
        let n = z.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.l_basis
            .iter()
            .chain(std::iter::once(&self.a))
            .filter(|b| b.norm() > 0.0)
            .map(|b| z.dot(b).abs() / (n * b.norm()))
            .fold(0.0, f64::max)
    }
}

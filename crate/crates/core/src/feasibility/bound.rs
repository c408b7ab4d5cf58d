use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::{classify_exposing, FaceDescriptor};
use crate::frf::{diamond_chain, frf_for_exposed, frf_nonexposed, lift_frf, product_frf, Coefficient, FrfExpr};
use crate::gfun::GFunction;

use super::certificate::CERT_TOL;
use super::chain::FacialReductionChain;

/// `ε + φ(ε, M)` together with the simplified product form when available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssembledBound {
    pub full: FrfExpr,
    /// `M`, the radius of the ball the bound is stated on.
    pub b_radius: f64,
    /// `ĝ_{ℓ-1}(ε)` for sane products.
    pub dominating: Option<FrfExpr>,
}

impl AssembledBound {
    /// A bound given directly as an expression in `ε`.
    pub fn from_expr(full: FrfExpr, b_radius: f64) -> Result<Self> {
        full.validate()?;
        check_radius(b_radius)?;
        Ok(AssembledBound { full, b_radius, dominating: None })
    }

    pub fn eval(&self, eps: f64) -> Result<f64> {
        self.full.eval(eps, self.b_radius)
    }

    pub fn eval_dominating(&self, eps: f64) -> Result<Option<f64>> {
        self.dominating.as_ref().map(|d| d.eval(eps, self.b_radius)).transpose()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")))
    }
}

/// `ĝ_j(ε)` with `ĝ = √g₋∞`.
pub fn hat_g(level: usize) -> FrfExpr {
    (0..level).fold(FrfExpr::eps(), |e, _| FrfExpr::g(GFunction::sqrt(), FrfExpr::g(GFunction::EntropyNegInf, e)))
}

/// One facial residual function per chain step.
pub fn chain_frfs(chain: &FacialReductionChain) -> Result<Vec<FrfExpr>> {
    let one = Coefficient::one();
    let mut out = Vec::with_capacity(chain.d_pps);
    for (i, z) in chain.exposing.iter().enumerate() {
        let mut blocks = Vec::with_capacity(z.m());
        for (j, b) in z.blocks.iter().enumerate() {
            let face = chain.faces[i][j];
            let next = chain.faces[i + 1][j];
            let zero = b.norm() <= CERT_TOL * z.norm();
            let psi = match face {
                FaceDescriptor::Full if zero => FrfExpr::eps(),
                FaceDescriptor::Full => {
                    let exposed = classify_exposing(*b, CERT_TOL)?;
                    frf_for_exposed(exposed, *b, &one, None)?
                }
                FaceDescriptor::FNegInf if !zero && next == FaceDescriptor::FNe => {
                    frf_nonexposed(*b, GFunction::EntropyNegInf, &one)?
                }
                _ => lift_frf(&FrfExpr::eps(), GFunction::EntropyNegInf, &one)?,
            };
            blocks.push(psi);
        }
        out.push(if blocks.len() == 1 {
            blocks.pop().expect("one block")
        } else {
            product_frf(&blocks, GFunction::EntropyNegInf, &one)?
        });
    }
    Ok(out)
}

/// `ε + φ(ε, M)` with `φ = ψ_{ℓ-1} ♦ ⋯ ♦ ψ_1`, where `frfs[i]` belongs to
/// chain step `i`. With no steps `φ = ε`.
pub fn assemble_bound(chain: &FacialReductionChain, frfs: &[FrfExpr], b_radius: f64) -> Result<AssembledBound> {
    check_radius(b_radius)?;
    if frfs.len() != chain.d_pps {
        return Err(Error::LengthMismatch { expected: chain.d_pps, got: frfs.len() });
    }
    for psi in frfs {
        psi.validate()?;
    }
    let phi = if frfs.is_empty() {
        FrfExpr::eps()
    } else {
        let display: Vec<FrfExpr> = frfs.iter().rev().cloned().collect();
        diamond_chain(&display)?
    };
    let dominating = (chain.faces[0].len() > 1 && chain.sane).then(|| hat_g(chain.d_pps));
    Ok(AssembledBound { full: FrfExpr::sum(vec![FrfExpr::eps(), phi]), b_radius, dominating })
}

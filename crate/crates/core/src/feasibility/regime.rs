use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::FaceDescriptor;
use crate::gfun::GFunction;

use super::certificate::{sweep, CERT_TOL};
use super::chain::FacialReductionChain;
use super::problem::FeasibilityProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime")]
pub enum Regime {
    Lipschitz,
    Hoelder {
        exponent: f64,
    },
    Entropic,
    LogType,
    /// `κ ĝ_level(ε)` with `ĝ = √g₋∞`.
    MixedEntropicHoelder {
        level: usize,
    },
}

impl Regime {
    /// Residual function whose growth constant sets the tightness threshold.
    pub fn growth_function(&self) -> GFunction {
        match *self {
            Regime::Lipschitz => GFunction::Identity,
            Regime::Hoelder { exponent } => GFunction::Power { alpha: exponent },
            Regime::Entropic | Regime::MixedEntropicHoelder { .. } => GFunction::EntropyNegInf,
            Regime::LogType => GFunction::LogInf,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Lipschitz => f.write_str("Lipschitz"),
            Regime::Hoelder { exponent } => write!(f, "Hoelder({exponent})"),
            Regime::Entropic => f.write_str("Entropic"),
            Regime::LogType => f.write_str("LogType"),
            Regime::MixedEntropicHoelder { level } => write!(f, "MixedEntropicHoelder({level})"),
        }
    }
}

/// Whether `L⊥ ∩ {a}⊥ ∩ K*` holds a vector with `z_x = 0`, `z_y > 0`, `z_z > 0`.
pub fn has_lipschitz_certificate(problem: &FeasibilityProblem) -> Result<bool> {
    if problem.m != 1 {
        return Err(Error::InvalidArgument("the F_∞ certificate test is for a single block".into()));
    }
    let sw = sweep(problem, &[FaceDescriptor::Full])?;
    Ok(sw.valid.iter().any(|z| {
        let b = z.blocks[0] / z.norm();
        b.x.abs() <= CERT_TOL && b.y > CERT_TOL && b.z > CERT_TOL
    }))
}

/// Error-bound regime of a chain.
pub fn classify_regime(chain: &FacialReductionChain, problem: &FeasibilityProblem) -> Result<Regime> {
    if chain.d_pps == 0 {
        return Ok(Regime::Lipschitz);
    }
    if problem.m == 1 {
        return match chain.terminal()[0] {
            FaceDescriptor::FNegInf => Ok(Regime::Entropic),
            FaceDescriptor::FBeta { .. } => Ok(Regime::Hoelder { exponent: 0.5 }),
            FaceDescriptor::FInf => {
                if has_lipschitz_certificate(problem)? {
                    Ok(Regime::Lipschitz)
                } else {
                    Ok(Regime::LogType)
                }
            }
            FaceDescriptor::Zero => Ok(Regime::Lipschitz),
            other => Err(Error::UnsupportedRegime(format!("unexpected terminal face {other}"))),
        };
    }
    if chain.sane {
        Ok(Regime::MixedEntropicHoelder { level: chain.d_pps })
    } else {
        Err(Error::UnsupportedRegime(format!(
            "product chain with an F_∞ block ({} blocks, {} steps)",
            problem.m, chain.d_pps
        )))
    }
}

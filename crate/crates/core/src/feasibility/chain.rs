use serde::{Deserialize, Serialize};

use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::faces::{intersect_face, FaceDescriptor};

use super::certificate::{find_certificate, is_certificate, CertificateSearch, CERT_TOL};
use super::problem::FeasibilityProblem;

/// Faces `F₁ ⊋ F₂ ⊋ … ⊋ F_ℓ` with the certificates `z_i` exposing them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacialReductionChain {
    /// `faces[i]` holds the blockwise faces of `F_{i+1}`.
    pub faces: Vec<Vec<FaceDescriptor>>,
    /// `exposing[i]` maps `faces[i]` to `faces[i + 1]`.
    pub exposing: Vec<BlockPoint>,
    pub d_pps: usize,
    /// No block of any face is `F_∞`.
    pub sane: bool,
    /// Certificates merged at each step.
    pub merged: Vec<usize>,
}

impl FacialReductionChain {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn terminal(&self) -> &[FaceDescriptor] {
        self.faces.last().expect("chain has at least one face")
    }

    /// Re-checks every invariant against `problem`.
    pub fn validate(&self, problem: &FeasibilityProblem) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(format!("invalid chain: {msg}")));
        if self.faces.is_empty() || self.exposing.len() + 1 != self.faces.len() {
            return bad(format!("{} faces with {} certificates", self.faces.len(), self.exposing.len()));
        }
        if self.faces[0].iter().any(|f| *f != FaceDescriptor::Full) || self.faces[0].len() != problem.m {
            return bad("first face must be the whole cone".into());
        }
        if self.d_pps != self.faces.len() - 1 || self.d_pps > problem.m {
            return bad(format!("d_pps = {} for {} faces and m = {}", self.d_pps, self.faces.len(), problem.m));
        }
        for (i, z) in self.exposing.iter().enumerate() {
            if !is_certificate(problem, &self.faces[i], z)? {
                return bad(format!("z_{} is not a certificate for F_{}", i + 1, i + 1));
            }
            let next = step(&self.faces[i], z)?;
            if next != self.faces[i + 1] {
                return bad(format!("F_{} differs from F_{} ∩ z⊥", i + 2, i + 1));
            }
        }
        let sane = !self.faces.iter().flatten().any(|f| *f == FaceDescriptor::FInf);
        if sane != self.sane {
            return bad("sane flag out of date".into());
        }
        Ok(())
    }
}

fn step(faces: &[FaceDescriptor], z: &BlockPoint) -> Result<Vec<FaceDescriptor>> {
    let n = z.norm();
    faces.iter().zip(&z.blocks).map(|(f, b)| intersect_face(*f, *b / n, CERT_TOL)).collect()
}

/// Facial reduction with [`find_certificate`] until no full block can be
/// reduced further.
pub fn build_chain(problem: &FeasibilityProblem) -> Result<FacialReductionChain> {
    let mut faces = vec![vec![FaceDescriptor::Full; problem.m]];
    let mut exposing = Vec::new();
    let mut merged = Vec::new();
    loop {
        let current = faces.last().expect("nonempty");
        if exposing.len() == problem.m {
            break;
        }
        match find_certificate(problem, current)? {
            CertificateSearch::NoneFound { .. } => break,
            CertificateSearch::Found { z, merged: k, .. } => {
                let next = step(current, &z)?;
                if &next == current {
                    break;
                }
                faces.push(next);
                exposing.push(z);
                merged.push(k);
            }
        }
    }
    let sane = !faces.iter().flatten().any(|f| *f == FaceDescriptor::FInf);
    let d_pps = faces.len() - 1;
    Ok(FacialReductionChain { faces, exposing, d_pps, sane, merged })
}

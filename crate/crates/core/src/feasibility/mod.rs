//! Feasibility problems `(L + a) ∩ K` over products of exponential cones.

mod bound;
mod certificate;
mod chain;
mod oracle;
mod problem;
mod regime;
mod verify;

pub use bound::{assemble_bound, chain_frfs, hat_g, AssembledBound};
pub use certificate::{
    face_dual_violation, find_certificate, is_certificate, CertificateSearch, CERT_TOL, SEARCH_BUDGET,
};
pub use chain::{build_chain, FacialReductionChain};
pub use oracle::{distance_to_intersection, dykstra, terminal_in_affine, ChainOracle, MAX_ITERATIONS, ORACLE_TOL};
pub use problem::FeasibilityProblem;
pub use regime::{classify_regime, has_lipschitz_certificate, Regime};
pub use verify::{sequence_depth, verify_bound, ErrorBoundReport, VerifyOptions, RHS_FLOOR};

use serde::Serialize;

use crate::error::Result;
use crate::frf::FrfExpr;

/// Chain, regime, assembled bound and its empirical check for one problem.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub chain: FacialReductionChain,
    pub regime: Regime,
    pub bound: AssembledBound,
    pub report: ErrorBoundReport,
}

pub fn analyze(problem: &FeasibilityProblem, opts: &VerifyOptions) -> Result<Analysis> {
    let chain = build_chain(problem)?;
    let regime = classify_regime(&chain, problem)?;
    let bound = assemble_bound(&chain, &chain_frfs(&chain)?, opts.b_radius)?;
    let report = verify_bound(problem, &chain, regime, &bound, opts)?;
    Ok(Analysis { chain, regime, bound, report })
}

/// `2ε`, the bound of a Lipschitzian error bound with no reduction step.
pub fn lipschitz_trial(b_radius: f64) -> Result<AssembledBound> {
    AssembledBound::from_expr(FrfExpr::sum(vec![FrfExpr::eps(), FrfExpr::eps()]), b_radius)
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analysis::{tightness_sequence, SequenceKind};
use crate::block::BlockPoint;
use crate::error::{Error, Result};
use crate::faces::FaceDescriptor;
use crate::gfun::{growth_constant, LogGrid};

use super::bound::AssembledBound;
use super::chain::FacialReductionChain;
use super::oracle::{ChainOracle, ORACLE_TOL};
use super::problem::FeasibilityProblem;
use super::regime::Regime;

/// Floor applied to the right-hand side before dividing.
pub const RHS_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub b_radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { b_radius: 2.0, samples: 4096, seed: 0, tol: ORACLE_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBoundReport {
    pub regime: Regime,
    /// Smallest `κ` with `d(x, (L+a) ∩ K) ≤ κ·bound(ε(x))` on every sample.
    pub kappa_fit: f64,
    /// `max(lhs − κ_fit·rhs)` over the samples.
    pub max_violation: f64,
    pub samples: usize,
    /// Sample attaining `κ_fit`.
    pub worst: BlockPoint,
    /// `log10` of the largest sequence index used.
    pub sequence_depth: f64,
    /// `min lhs / (κ_fit·rhs)` along the tightness sequence.
    pub tightness_ratio: Option<f64>,
    pub tight: Option<bool>,
    /// `κ_fit(samples) / κ_fit(samples / 2)`.
    pub kappa_growth: Option<f64>,
    pub regime_mismatch: bool,
    pub closed_form_oracle: bool,
    pub seed: u64,
}

/// `log10 k_max` of the sequence part for a given sample count.
pub fn sequence_depth(samples: usize) -> f64 {
    (samples as f64 / 1024.0).powi(4).clamp(1.0, 300.0)
}

fn sequence_points(regime: Regime, chain: &FacialReductionChain, count: usize, depth: f64) -> Result<Vec<BlockPoint>> {
    if chain.terminal().len() != 1 || count == 0 {
        return Ok(Vec::new());
    }
    let (kind, lo, hi, log) = match (regime, chain.terminal()[0]) {
        (Regime::Entropic, _) => (SequenceKind::EntropicA, 1.0, depth.max(1.0), true),
        (Regime::Hoelder { .. }, FaceDescriptor::FBeta { beta }) => {
            (SequenceKind::BetaB { beta }, 0.5, depth.clamp(1.0, 5.0), true)
        }
        (Regime::LogType, _) => (SequenceKind::LogC, 2.0, (50.0 * depth).clamp(10.0, 600.0), false),
        _ => return Ok(Vec::new()),
    };
    (0..count)
        .map(|i| {
            let s = if count == 1 { 1.0 } else { i as f64 / (count - 1) as f64 };
            let k = if log { 10f64.powf(lo + (hi - lo) * s) } else { lo + (hi - lo) * s };
            Ok(BlockPoint::single(tightness_sequence(kind, k)?.w))
        })
        .collect()
}

fn random_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Result<BlockPoint> {
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
    let r = radius * rng.gen::<f64>().powf(1.0 / n as f64);
    BlockPoint::from_flat(&v.iter().map(|c| c * r / norm).collect::<Vec<_>>())
}

struct Fit {
    kappa: f64,
    violation: f64,
    worst: BlockPoint,
    seq: Vec<(f64, f64)>,
    depth: f64,
}

fn fit(
    problem: &FeasibilityProblem,
    chain: &FacialReductionChain,
    regime: Regime,
    bound: &AssembledBound,
    oracle: &ChainOracle,
    opts: &VerifyOptions,
    samples: usize,
) -> Result<Fit> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let aff = problem.affine()?;
    let n = problem.dim();
    let depth = sequence_depth(samples);
    let seq = sequence_points(regime, chain, samples / 4, depth)?;
    let n_near = samples / 4;
    let n_rand = samples.saturating_sub(seq.len() + n_near);

    let mut points = Vec::with_capacity(samples);
    for _ in 0..n_rand {
        points.push(random_ball(&mut rng, n, opts.b_radius)?);
    }
    for _ in 0..n_near {
        let base = oracle.project(&random_ball(&mut rng, n, opts.b_radius)?)?;
        let delta = opts.b_radius * 10f64.powf(-8.0 * rng.gen::<f64>());
        let x = base.add(&random_ball(&mut rng, n, delta)?);
        if x.norm() <= opts.b_radius {
            points.push(x);
        }
    }
    let n_plain = points.len();
    points.extend(seq);

    let mut rows = Vec::with_capacity(points.len());
    for x in &points {
        let lhs = oracle.distance(x)?;
        let eps = x.cone_distance()?.max(aff.distance(x)?);
        let rhs = bound.eval(eps)?.max(RHS_FLOOR);
        rows.push((lhs, rhs));
    }
    let (mut kappa, mut worst) = (0.0, 0);
    for (i, (l, r)) in rows.iter().enumerate() {
        if l / r > kappa {
            kappa = l / r;
            worst = i;
        }
    }
    let violation = rows.iter().map(|(l, r)| l - kappa * r).fold(f64::NEG_INFINITY, f64::max);
    Ok(Fit { kappa, violation, worst: points[worst].clone(), seq: rows[n_plain..].to_vec(), depth })
}

/// Fits `κ` for `d(x, (L+a) ∩ K) ≤ κ·bound(max{d(x,K), d(x,L+a)})` on
/// random points of `B(M)`, perturbations of solutions and the regime's
/// tightness sequence, then repeats with half of the samples to expose
/// `κ` growth.
pub fn verify_bound(
    problem: &FeasibilityProblem,
    chain: &FacialReductionChain,
    regime: Regime,
    bound: &AssembledBound,
    opts: &VerifyOptions,
) -> Result<ErrorBoundReport> {
    if opts.samples < 16 {
        return Err(Error::InvalidArgument(format!("verify needs at least 16 samples, got {}", opts.samples)));
    }
    if !(opts.b_radius > 0.0 && opts.b_radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {}", opts.b_radius)));
    }
    chain.validate(problem)?;
    let oracle = ChainOracle::new(problem, chain, opts.tol)?;
    let full = fit(problem, chain, regime, bound, &oracle, opts, opts.samples)?;
    let small = fit(problem, chain, regime, bound, &oracle, opts, opts.samples / 2)?;
    let kappa_growth = (small.kappa > 0.0).then(|| full.kappa / small.kappa);

    let (tightness_ratio, tight) = if full.seq.is_empty() || full.kappa == 0.0 {
        (None, None)
    } else {
        let ratio =
            full.seq.iter().filter(|(l, _)| *l > 0.0).map(|(l, r)| l / (full.kappa * r)).fold(f64::INFINITY, f64::min);
        let lg = growth_constant(regime.growth_function(), &LogGrid::default())?;
        (Some(ratio), Some(ratio >= 1.0 / (2.0 * lg)))
    };
    Ok(ErrorBoundReport {
        regime,
        kappa_fit: full.kappa,
        max_violation: full.violation,
        samples: opts.samples,
        worst: full.worst,
        sequence_depth: full.depth,
        tightness_ratio,
        tight,
        kappa_growth,
        regime_mismatch: kappa_growth.is_some_and(|g| g > 10.0),
        closed_form_oracle: oracle.is_closed_form(),
        seed: opts.seed,
    })
}

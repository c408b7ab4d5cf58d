//! Facial residual function expressions.
//!
//! An [`FrfExpr`] is an immutable tree describing a function `ψ(ε, t)`. Trees
//! serialize to JSON as `{"node": <kind>, ...children}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faces::{classify_exposing, intersect_face, FaceDescriptor};
use crate::geometry::Point3;
use crate::gfun::GFunction;

/// Tolerance used when matching a face against its exposing vector.
pub const FACE_TOL: f64 = 1e-9;

/// Monotone nondecreasing coefficient `c(t) >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Coefficient {
    Constant {
        value: f64,
    },
    /// `a + b t`.
    Linear {
        a: f64,
        b: f64,
    },
    /// `c t^p`.
    PowerLaw {
        c: f64,
        p: f64,
    },
    Max {
        parts: Vec<Coefficient>,
    },
    /// Value of the first breakpoint `>= t`; the last value past the table.
    StepTable {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Coefficient {
    pub fn constant(value: f64) -> Self {
        Coefficient::Constant { value }
    }

    pub fn one() -> Self {
        Coefficient::constant(1.0)
    }

    pub fn step_table(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let c = Coefficient::StepTable { breakpoints, values };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = |v: f64, what: &str| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("coefficient {what} must be finite and >= 0, got {v}")))
            }
        };
        match self {
            Coefficient::Constant { value } => nonneg(*value, "value"),
            Coefficient::Linear { a, b } => {
                nonneg(*a, "a")?;
                nonneg(*b, "b")
            }
            Coefficient::PowerLaw { c, p } => {
                nonneg(*c, "c")?;
                nonneg(*p, "p")
            }
            Coefficient::Max { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidArgument("empty coefficient max".into()));
                }
                parts.iter().try_for_each(Coefficient::validate)
            }
            Coefficient::StepTable { breakpoints, values } => {
                if breakpoints.is_empty() || breakpoints.len() != values.len() {
                    return Err(Error::InvalidArgument(
                        "step table needs equal nonzero numbers of breakpoints and values".into(),
                    ));
                }
                for w in breakpoints.windows(2) {
                    if !(w[0] < w[1]) {
                        return Err(Error::InvalidArgument("step table breakpoints must increase".into()));
                    }
                }
                for w in values.windows(2) {
                    if !(w[0] <= w[1]) {
                        return Err(Error::InvalidArgument("step table values must be nondecreasing".into()));
                    }
                }
                breakpoints.iter().try_for_each(|&b| nonneg(b, "breakpoint"))?;
                values.iter().try_for_each(|&v| nonneg(v, "value"))
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Coefficient::Constant { value } => *value,
            Coefficient::Linear { a, b } => a + b * t,
            Coefficient::PowerLaw { c, p } => {
                if *p == 0.0 {
                    *c
                } else {
                    c * t.powf(*p)
                }
            }
            Coefficient::Max { parts } => parts.iter().map(|c| c.eval(t)).fold(0.0, f64::max),
            Coefficient::StepTable { breakpoints, values } => {
                let i = breakpoints.partition_point(|&b| b < t);
                values[i.min(values.len() - 1)]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum FrfExpr {
    Eps,
    Const {
        value: f64,
    },
    Sum {
        terms: Vec<FrfExpr>,
    },
    Max {
        terms: Vec<FrfExpr>,
    },
    Scale {
        factor: f64,
        child: Box<FrfExpr>,
    },
    TCoeff {
        coeff: Coefficient,
        child: Box<FrfExpr>,
    },
    GApply {
        g: GFunction,
        child: Box<FrfExpr>,
    },
    /// `left(ε + right(ε, t), t)`.
    Diamond {
        left: Box<FrfExpr>,
        right: Box<FrfExpr>,
    },
    /// `outer(inner(ε, t), t)`.
    Compose {
        outer: Box<FrfExpr>,
        inner: Box<FrfExpr>,
    },
    /// `m3 child(m1 ε, m2 t)`.
    Rescale {
        m1: f64,
        m2: f64,
        m3: f64,
        child: Box<FrfExpr>,
    },
}

impl FrfExpr {
    pub fn eps() -> Self {
        FrfExpr::Eps
    }

    pub fn constant(value: f64) -> Self {
        FrfExpr::Const { value }
    }

    pub fn sum(terms: Vec<FrfExpr>) -> Self {
        FrfExpr::Sum { terms }
    }

    pub fn max(terms: Vec<FrfExpr>) -> Self {
        FrfExpr::Max { terms }
    }

    pub fn scale(factor: f64, child: FrfExpr) -> Self {
        FrfExpr::Scale { factor, child: Box::new(child) }
    }

    pub fn tcoeff(coeff: Coefficient, child: FrfExpr) -> Self {
        FrfExpr::TCoeff { coeff, child: Box::new(child) }
    }

    pub fn g(g: GFunction, child: FrfExpr) -> Self {
        FrfExpr::GApply { g, child: Box::new(child) }
    }

    pub fn diamond(left: FrfExpr, right: FrfExpr) -> Self {
        FrfExpr::Diamond { left: Box::new(left), right: Box::new(right) }
    }

    pub fn compose(outer: FrfExpr, inner: FrfExpr) -> Self {
        FrfExpr::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }

    pub fn eval(&self, eps: f64, t: f64) -> Result<f64> {
        eval_frf(self, eps, t)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} must be finite and > 0, got {v}")))
            }
        };
        match self {
            FrfExpr::Eps => Ok(()),
            FrfExpr::Const { value } => {
                if value.is_finite() && *value >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("constant must be finite and >= 0, got {value}")))
                }
            }
            FrfExpr::Sum { terms } | FrfExpr::Max { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidArgument("sum/max node without terms".into()));
                }
                terms.iter().try_for_each(FrfExpr::validate)
            }
            FrfExpr::Scale { factor, child } => {
                positive(*factor, "scale factor")?;
                child.validate()
            }
            FrfExpr::TCoeff { coeff, child } => {
                coeff.validate()?;
                child.validate()
            }
            FrfExpr::GApply { g, child } => {
                g.validate()?;
                child.validate()
            }
            FrfExpr::Diamond { left, right } => {
                left.validate()?;
                right.validate()
            }
            FrfExpr::Compose { outer, inner } => {
                outer.validate()?;
                inner.validate()
            }
            FrfExpr::Rescale { m1, m2, m3, child } => {
                positive(*m1, "m1")?;
                positive(*m2, "m2")?;
                positive(*m3, "m3")?;
                child.validate()
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let e: FrfExpr = serde_json::from_str(s)?;
        e.validate()?;
        Ok(e)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    fn eval_inner(&self, eps: f64, t: f64) -> Result<f64> {
        Ok(match self {
            FrfExpr::Eps => eps,
            FrfExpr::Const { value } => *value,
            FrfExpr::Sum { terms } => {
                let mut s = 0.0;
                for e in terms {
                    s += e.eval_inner(eps, t)?;
                }
                s
            }
            FrfExpr::Max { terms } => {
                let mut m = f64::NEG_INFINITY;
                for e in terms {
                    m = m.max(e.eval_inner(eps, t)?);
                }
                m
            }
            FrfExpr::Scale { factor, child } => factor * child.eval_inner(eps, t)?,
            FrfExpr::TCoeff { coeff, child } => coeff.eval(t) * child.eval_inner(eps, t)?,
            FrfExpr::GApply { g, child } => g.eval(child.eval_inner(eps, t)?)?,
            FrfExpr::Diamond { left, right } => left.eval_inner(eps + right.eval_inner(eps, t)?, t)?,
            FrfExpr::Compose { outer, inner } => outer.eval_inner(inner.eval_inner(eps, t)?, t)?,
            FrfExpr::Rescale { m1, m2, m3, child } => m3 * child.eval_inner(m1 * eps, m2 * t)?,
        })
    }
}

/// `ψ(ε, t)`.
pub fn eval_frf(psi: &FrfExpr, eps: f64, t: f64) -> Result<f64> {
    for (v, what) in [(eps, "epsilon"), (t, "t")] {
        if v.is_nan() {
            return Err(Error::NonFinite("frf argument"));
        }
        if v < 0.0 {
            return Err(Error::InvalidArgument(format!("{what} must be >= 0, got {v}")));
        }
    }
    psi.eval_inner(eps, t)
}

/// `M3 ψ(M1 ε, M2 t)`; nested rescales are merged.
pub fn rescale(psi: &FrfExpr, m1: f64, m2: f64, m3: f64) -> Result<FrfExpr> {
    for (m, what) in [(m1, "M1"), (m2, "M2"), (m3, "M3")] {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidArgument(format!("{what} must be finite and > 0, got {m}")));
        }
    }
    Ok(match psi {
        FrfExpr::Rescale { m1: a, m2: b, m3: c, child } => {
            FrfExpr::Rescale { m1: a * m1, m2: b * m2, m3: c * m3, child: child.clone() }
        }
        other => FrfExpr::Rescale { m1, m2, m3, child: Box::new(other.clone()) },
    })
}

/// `ψ_m ♦ (ψ_{m-1} ♦ (… ♦ ψ_1))` for the list `[ψ_m, …, ψ_1]`, written in
/// the same order as the expression.
pub fn diamond_chain(psis: &[FrfExpr]) -> Result<FrfExpr> {
    let (first, rest) =
        psis.split_last().ok_or_else(|| Error::InvalidArgument("diamond chain needs at least one function".into()))?;
    Ok(rest.iter().rev().fold(first.clone(), |phi, psi| FrfExpr::diamond(psi.clone(), phi)))
}

// σ(t) max{ε, g(2ε)}
fn amenable_argument(g: GFunction, sigma: &Coefficient) -> FrfExpr {
    FrfExpr::tcoeff(
        sigma.clone(),
        FrfExpr::max(vec![FrfExpr::eps(), FrfExpr::g(g, FrfExpr::scale(2.0, FrfExpr::eps()))]),
    )
}

/// `Σ ψ_i(σ(t) max{ε, g(2ε)}, t)`.
pub fn product_frf(block_frfs: &[FrfExpr], g: GFunction, sigma: &Coefficient) -> Result<FrfExpr> {
    if block_frfs.is_empty() {
        return Err(Error::InvalidArgument("product needs at least one block".into()));
    }
    g.validate()?;
    sigma.validate()?;
    let inner = amenable_argument(g, sigma);
    Ok(FrfExpr::sum(block_frfs.iter().map(|psi| FrfExpr::compose(psi.clone(), inner.clone())).collect()))
}

/// `ε + ψ(σ(t) max{ε, g(2ε)}, t)`.
pub fn lift_frf(psi: &FrfExpr, g: GFunction, sigma: &Coefficient) -> Result<FrfExpr> {
    g.validate()?;
    sigma.validate()?;
    Ok(FrfExpr::sum(vec![FrfExpr::eps(), FrfExpr::compose(psi.clone(), amenable_argument(g, sigma))]))
}

/// The growth function attached to an exposed face by default.
pub fn default_g(face: FaceDescriptor, z: Point3) -> Result<GFunction> {
    match face {
        FaceDescriptor::FBeta { .. } => Ok(GFunction::sqrt()),
        FaceDescriptor::FInf if z.y > FACE_TOL * z.norm() => Ok(GFunction::Identity),
        FaceDescriptor::FInf => Ok(GFunction::LogInf),
        FaceDescriptor::FNegInf => Ok(GFunction::EntropyNegInf),
        FaceDescriptor::Zero => Ok(GFunction::Identity),
        other => Err(Error::FaceMismatch { face: other.to_string(), z: z.to_string() }),
    }
}

/// `max{ε, ε/‖z‖} + κ(t) g(ε + max{ε, ε/‖z‖})`.
///
/// `g` defaults per face; for `FNegInf` a power `α < 1` may replace the
/// entropy, other faces accept only their default.
pub fn frf_for_exposed(face: FaceDescriptor, z: Point3, kappa: &Coefficient, g: Option<GFunction>) -> Result<FrfExpr> {
    let classified = classify_exposing(z, FACE_TOL)?;
    let same = match (face, classified) {
        (FaceDescriptor::FBeta { beta: a }, FaceDescriptor::FBeta { beta: b }) => {
            (a - b).abs() <= 1e-9 * a.abs().max(1.0)
        }
        (a, b) => a == b,
    };
    if !same {
        return Err(Error::FaceMismatch { face: face.to_string(), z: z.to_string() });
    }
    kappa.validate()?;
    let default = default_g(face, z)?;
    let g = match g {
        None => default,
        Some(g) if g == default => g,
        Some(GFunction::Power { alpha }) if face == FaceDescriptor::FNegInf && alpha < 1.0 => GFunction::power(alpha)?,
        Some(other) => {
            return Err(Error::InvalidArgument(format!("{other} is not a valid growth function for {face}")));
        }
    };
    let m = FrfExpr::max(vec![FrfExpr::eps(), FrfExpr::scale(1.0 / z.norm(), FrfExpr::eps())]);
    let residual = FrfExpr::tcoeff(kappa.clone(), FrfExpr::g(g, FrfExpr::sum(vec![FrfExpr::eps(), m.clone()])));
    Ok(FrfExpr::sum(vec![m, residual]))
}

/// `σ(t) ε + σ(t) g(ε)` for `z` exposing the non-exposed ray inside `F_{-∞}`.
pub fn frf_nonexposed(z: Point3, g: GFunction, sigma: &Coefficient) -> Result<FrfExpr> {
    let inner = intersect_face(FaceDescriptor::FNegInf, z, FACE_TOL)
        .map_err(|_| Error::FaceMismatch { face: FaceDescriptor::FNe.to_string(), z: z.to_string() })?;
    if inner != FaceDescriptor::FNe {
        return Err(Error::FaceMismatch { face: FaceDescriptor::FNe.to_string(), z: z.to_string() });
    }
    match g {
        GFunction::EntropyNegInf => {}
        GFunction::Power { alpha } if alpha < 1.0 => g.validate()?,
        other => return Err(Error::InvalidArgument(format!("{other} is not valid for the non-exposed face"))),
    }
    sigma.validate()?;
    Ok(FrfExpr::sum(vec![
        FrfExpr::tcoeff(sigma.clone(), FrfExpr::eps()),
        FrfExpr::tcoeff(sigma.clone(), FrfExpr::g(g, FrfExpr::eps())),
    ]))
}

/// Ambient cone of a tagged FRF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cone")]
pub enum Ambient {
    Block,
    Product { m: usize },
}

/// Which face, exposing vector and cone an FRF belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrfTag {
    pub faces: Vec<FaceDescriptor>,
    pub exposing: Vec<f64>,
    pub ambient: Ambient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedFrf {
    pub tag: FrfTag,
    pub expr: FrfExpr,
}

/// Outcome of scanning the defining conditions of an FRF on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrfConditions {
    pub nonnegative: bool,
    pub zero_at_origin: bool,
    pub monotone_eps: bool,
    pub monotone_t: bool,
}

impl FrfConditions {
    pub fn all(&self) -> bool {
        self.nonnegative && self.zero_at_origin && self.monotone_eps && self.monotone_t
    }
}

/// Checks nonnegativity, `ψ(0, t) = 0` and monotonicity on `eps_grid × t_grid`
/// (both grids sorted ascending).
pub fn check_frf_conditions(psi: &FrfExpr, eps_grid: &[f64], t_grid: &[f64]) -> Result<FrfConditions> {
    let mut c = FrfConditions { nonnegative: true, zero_at_origin: true, monotone_eps: true, monotone_t: true };
    let slack = |a: f64| 1e-12 * a.abs().max(1.0);
    let mut prev_row: Option<Vec<f64>> = None;
    for &t in t_grid {
        if eval_frf(psi, 0.0, t)? != 0.0 {
            c.zero_at_origin = false;
        }
        let row = eps_grid.iter().map(|&e| eval_frf(psi, e, t)).collect::<Result<Vec<_>>>()?;
        for (i, &v) in row.iter().enumerate() {
            if !(v >= 0.0) {
                c.nonnegative = false;
            }
            if i > 0 && v < row[i - 1] - slack(v) {
                c.monotone_eps = false;
            }
        }
        if let Some(prev) = &prev_row {
            if row.iter().zip(prev).any(|(&v, &p)| v < p - slack(v)) {
                c.monotone_t = false;
            }
        }
        prev_row = Some(row);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfun::INV_E2;
    use approx::assert_abs_diff_eq;

    fn sqrt_eps() -> FrfExpr {
        FrfExpr::g(GFunction::sqrt(), FrfExpr::eps())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_frf(&FrfExpr::eps(), 3.0, 100.0).unwrap(), 3.0);
        let d = FrfExpr::diamond(FrfExpr::eps(), FrfExpr::eps());
        assert_eq!(eval_frf(&d, 1.5, 7.0).unwrap(), 3.0);
        let d = FrfExpr::diamond(sqrt_eps(), sqrt_eps());
        assert_abs_diff_eq!(eval_frf(&d, 0.25, 1.0).unwrap(), (0.25f64 + 0.5).sqrt(), epsilon = 1e-15);
        assert!(eval_frf(&FrfExpr::eps(), -1.0, 0.0).is_err());
        assert!(eval_frf(&FrfExpr::eps(), 1.0, f64::NAN).is_err());
    }

    #[test]
    fn exposed_examples() {
        let one = Coefficient::one();
        let z = Point3::new(-1.0, -1.0, 1.0);
        let psi = frf_for_exposed(FaceDescriptor::FBeta { beta: 1.0 }, z, &one, None).unwrap();
        assert_abs_diff_eq!(eval_frf(&psi, 1.0, 5.0).unwrap(), 1.0 + 2f64.sqrt(), epsilon = 1e-14);

        let z = Point3::new(0.0, 1.0, 1.0);
        let psi = frf_for_exposed(FaceDescriptor::FInf, z, &one, None).unwrap();
        assert_abs_diff_eq!(eval_frf(&psi, 1.0, 5.0).unwrap(), 3.0, epsilon = 1e-14);

        let z = Point3::new(0.0, 0.0, 1.0);
        let psi = frf_for_exposed(FaceDescriptor::FInf, z, &one, None).unwrap();
        let expected = 0.01 + GFunction::LogInf.eval(0.02).unwrap();
        assert_abs_diff_eq!(eval_frf(&psi, 0.01, 1.0).unwrap(), expected, epsilon = 1e-15);

        let z = Point3::new(0.0, 1.0, 0.0);
        for g in [None, Some(GFunction::power(0.3).unwrap())] {
            let psi = frf_for_exposed(FaceDescriptor::FNegInf, z, &one, g).unwrap();
            assert_eq!(eval_frf(&psi, 0.0, 10.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn exposed_rejects_mismatch() {
        let one = Coefficient::one();
        assert!(frf_for_exposed(FaceDescriptor::FInf, Point3::new(0.0, 1.0, 0.0), &one, None).is_err());
        assert!(frf_for_exposed(FaceDescriptor::FBeta { beta: 2.0 }, Point3::new(-1.0, -1.0, 1.0), &one, None).is_err());
        assert!(frf_for_exposed(
            FaceDescriptor::FBeta { beta: 1.0 },
            Point3::new(-1.0, -1.0, 1.0),
            &one,
            Some(GFunction::Identity)
        )
        .is_err());
        assert!(frf_for_exposed(FaceDescriptor::FNegInf, Point3::new(1.0, 1.0, 0.0), &one, None).is_err());
    }

    #[test]
    fn nonexposed_examples() {
        let z = Point3::new(-1.0, 0.0, 0.0);
        let one = Coefficient::one();
        let psi = frf_nonexposed(z, GFunction::sqrt(), &one).unwrap();
        assert_abs_diff_eq!(eval_frf(&psi, 4.0, 1.0).unwrap(), 6.0);
        assert_eq!(eval_frf(&psi, 0.0, 1.0).unwrap(), 0.0);
        let psi = frf_nonexposed(z, GFunction::EntropyNegInf, &Coefficient::constant(2.0)).unwrap();
        assert_abs_diff_eq!(eval_frf(&psi, INV_E2, 1.0).unwrap(), 2.0 * INV_E2 + 4.0 * INV_E2, epsilon = 1e-15);
        assert!(frf_nonexposed(Point3::new(-1.0, 0.0, 1.0), GFunction::sqrt(), &one).is_err());
        assert!(frf_nonexposed(z, GFunction::Identity, &one).is_err());
    }

    #[test]
    fn rescale_examples() {
        let psi = sqrt_eps();
        let same = rescale(&psi, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(eval_frf(&same, 0.7, 2.0).unwrap(), eval_frf(&psi, 0.7, 2.0).unwrap());
        let r = rescale(&FrfExpr::eps(), 2.0, 1.0, 3.0).unwrap();
        assert_eq!(eval_frf(&r, 0.5, 1.0).unwrap(), 3.0);
        let r = rescale(&psi, 4.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(eval_frf(&r, 0.09, 1.0).unwrap(), 2.0 * 0.3, epsilon = 1e-15);
        assert!(rescale(&psi, 0.0, 1.0, 1.0).is_err());
        let nested = rescale(&r, 2.0, 3.0, 5.0).unwrap();
        assert!(matches!(nested, FrfExpr::Rescale { m1, m2, m3, .. } if m1 == 8.0 && m2 == 3.0 && m3 == 5.0));
    }

    #[test]
    fn chain_examples() {
        let id = FrfExpr::eps();
        assert_eq!(diamond_chain(std::slice::from_ref(&id)).unwrap(), id);
        let c = diamond_chain(&[sqrt_eps(), id.clone()]).unwrap();
        assert_abs_diff_eq!(eval_frf(&c, 0.3, 1.0).unwrap(), 0.6f64.sqrt(), epsilon = 1e-15);
        let g = FrfExpr::g(GFunction::EntropyNegInf, FrfExpr::eps());
        let c = diamond_chain(&[g.clone(), g]).unwrap();
        let want = GFunction::EntropyNegInf.eval(INV_E2 + 2.0 * INV_E2).unwrap();
        assert_abs_diff_eq!(eval_frf(&c, INV_E2, 3.0).unwrap(), want, epsilon = 1e-15);
        assert!(diamond_chain(&[]).is_err());
    }

    #[test]
    fn product_examples() {
        let one = Coefficient::one();
        let psi = sqrt_eps();
        let p = product_frf(std::slice::from_ref(&psi), GFunction::Identity, &one).unwrap();
        assert_abs_diff_eq!(eval_frf(&p, 0.2, 1.0).unwrap(), 0.4f64.sqrt(), epsilon = 1e-15);
        let p = product_frf(&[FrfExpr::eps(), FrfExpr::eps()], GFunction::Identity, &one).unwrap();
        assert_abs_diff_eq!(eval_frf(&p, 0.2, 1.0).unwrap(), 0.8, epsilon = 1e-15);
        let p = product_frf(&[psi.clone(), psi], GFunction::sqrt(), &one).unwrap();
        let want = 2.0 * (0.125f64).powf(0.25);
        assert_abs_diff_eq!(eval_frf(&p, 1.0 / 16.0, 1.0).unwrap(), want, epsilon = 1e-14);
    }

    #[test]
    fn lift_examples() {
        let one = Coefficient::one();
        let l = lift_frf(&FrfExpr::constant(0.0), GFunction::EntropyNegInf, &one).unwrap();
        assert_eq!(eval_frf(&l, 0.3, 1.0).unwrap(), 0.3);
        let l = lift_frf(&FrfExpr::eps(), GFunction::Identity, &one).unwrap();
        assert_abs_diff_eq!(eval_frf(&l, 0.3, 1.0).unwrap(), 0.9, epsilon = 1e-15);
        let kappa = 4.0;
        let sigma = Coefficient::Linear { a: 1.0, b: 1.0 };
        let g = GFunction::EntropyNegInf;
        let l = lift_frf(&FrfExpr::scale(kappa, FrfExpr::eps()), g, &sigma).unwrap();
        let (e, t): (f64, f64) = (0.01, 2.0);
        let want = e + kappa * 3.0 * e.max(g.eval(2.0 * e).unwrap());
        assert_abs_diff_eq!(eval_frf(&l, e, t).unwrap(), want, epsilon = 1e-15);
    }

    #[test]
    fn step_table_ceiling() {
        let c = Coefficient::step_table(vec![1.0, 2.0, 4.0], vec![1.0, 3.0, 5.0]).unwrap();
        assert_eq!(c.eval(0.0), 1.0);
        assert_eq!(c.eval(1.0), 1.0);
        assert_eq!(c.eval(1.5), 3.0);
        assert_eq!(c.eval(4.0), 5.0);
        assert_eq!(c.eval(9.0), 5.0);
        assert!(Coefficient::step_table(vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(Coefficient::step_table(vec![1.0, 2.0], vec![2.0, 1.0]).is_err());
        assert!(Coefficient::step_table(vec![], vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let psi = frf_for_exposed(
            FaceDescriptor::FBeta { beta: 1.0 },
            Point3::new(-1.0, -1.0, 1.0),
            &Coefficient::one(),
            None,
        )
        .unwrap();
        let s = psi.to_json().unwrap();
        assert_eq!(FrfExpr::from_json(&s).unwrap(), psi);
        assert!(FrfExpr::from_json(r#"{"node":"scale","factor":-1,"child":{"node":"eps"}}"#).is_err());
        assert!(FrfExpr::from_json(r#"{"node":"sum","terms":[]}"#).is_err());
        assert!(FrfExpr::from_json(r#"{"node":"nope"}"#).is_err());
        let e = FrfExpr::from_json(r#"{"node":"g_apply","g":{"kind":"Power","alpha":0.5},"child":{"node":"eps"}}"#)
            .unwrap();
        assert_eq!(eval_frf(&e, 4.0, 0.0).unwrap(), 2.0);
    }
}

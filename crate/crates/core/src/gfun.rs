//! Residual growth functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `e^{-2}`, the branch point of both logarithmic growth functions.
pub const INV_E2: f64 = 0.1353352832366127;

/// `e^2`.
pub const E2: f64 = 7.38905609893065;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GFunction {
    /// `t^alpha` with `alpha` in (0, 1].
    Power {
        alpha: f64,
    },
    /// `-t ln t` on (0, e^-2], `t + e^-2` beyond.
    EntropyNegInf,
    /// `-1 / ln t` on (0, e^-2], `1/4 + (e^2 / 4) t` beyond.
    LogInf,
    Identity,
}

impl GFunction {
    pub fn power(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(GFunction::Power { alpha })
    }

    pub fn sqrt() -> Self {
        GFunction::Power { alpha: 0.5 }
    }

    /// Exponent `alpha` with `g >= |.|^alpha` near zero (1 for the non-power shapes).
    pub fn alpha(&self) -> f64 {
        match *self {
            GFunction::Power { alpha } => alpha,
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let GFunction::Power { alpha } = *self {
            check_alpha(alpha)?;
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Err(Error::NonFinite("g argument"));
        }
        if t < 0.0 {
            return Err(Error::InvalidArgument(format!("g is defined on t >= 0, got {t}")));
        }
        self.validate()?;
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match *self {
            GFunction::Power { alpha } => t.powf(alpha),
            GFunction::EntropyNegInf => {
                if t <= INV_E2 {
                    -t * t.ln()
                } else {
                    t + INV_E2
                }
            }
            GFunction::LogInf => {
                if t <= INV_E2 {
                    -1.0 / t.ln()
                } else {
                    0.25 + 0.25 * E2 * t
                }
            }
            GFunction::Identity => t,
        }
    }
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::Power { alpha } => write!(f, "Power({alpha})"),
            GFunction::EntropyNegInf => f.write_str("EntropyNegInf"),
            GFunction::LogInf => f.write_str("LogInf"),
            GFunction::Identity => f.write_str("Identity"),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("power exponent must lie in (0, 1], got {alpha}")))
    }
}

/// Logarithmic grid on `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub lower: f64,
    pub upper: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn new(lower: f64, upper: f64, points: usize) -> Result<Self> {
        if !(lower > 0.0 && upper > lower && upper.is_finite()) || points < 2 {
            return Err(Error::InvalidArgument(format!("bad log grid [{lower}, {upper}] with {points} points")));
        }
        Ok(LogGrid { lower, upper, points })
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let (a, b) = (self.lower.ln(), self.upper.ln());
        let n = self.points - 1;
        (0..=n).map(move |i| (a + (b - a) * i as f64 / n as f64).exp())
    }
}

impl Default for LogGrid {
    fn default() -> Self {
        LogGrid { lower: 1e-12, upper: 10.0, points: 10_000 }
    }
}

/// Smallest `L` with `g(2t) <= L g(t)` on the grid.
///
/// For the two logarithmic shapes the minorization `t <= g(t)` is checked on
/// the same grid and a violation is an error.
pub fn growth_constant(g: GFunction, grid: &LogGrid) -> Result<f64> {
    g.validate()?;
    if grid.upper < 1.0 {
        return Err(Error::InvalidArgument("growth grid must reach t >= 1".into()));
    }
    let check_minor = matches!(g, GFunction::EntropyNegInf | GFunction::LogInf);
    let mut l: f64 = 0.0;
    for t in grid.iter() {
        let gt = g.eval_unchecked(t);
        if check_minor && gt < t {
            return Err(Error::InvalidArgument(format!("{g} fails t <= g(t) at t = {t}")));
        }
        l = l.max(g.eval_unchecked(2.0 * t) / gt);
    }
    Ok(l)
}

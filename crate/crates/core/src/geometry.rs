//! Membership, boundary parametrization and Euclidean projection for the
//! exponential cone
//!
//! K = cl{(x, y, z) : y > 0, z >= y e^(x/y)}
//!
//! and its dual K* = cl{(x, y, z) : x < 0, e z >= -x e^(y/x)}.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for membership tests.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Exponents are kept inside this range so that `e^r` stays finite.
pub const R_MAX: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn check_finite(self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Unit vector in the same direction; errors on the zero vector.
    pub fn normalized(self) -> Result<Point3> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self / n)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, o: Point3) {
        *self = *self + o;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Point3 {
    fn sub_assign(&mut self, o: Point3) {
        *self = *self - o;
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Point3> for f64 {
    type Output = Point3;
    fn mul(self, p: Point3) -> Point3 {
        p * self
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipStatus {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub status: MembershipStatus,
    /// Residual of the defining inequalities; zero for points of the set.
    pub violation: f64,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.status != MembershipStatus::Outside
    }
}

/// Result of projecting a point onto K and onto -K*.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoreauPair {
    pub primal: Point3,
    pub polar: Point3,
}

impl MoreauPair {
    /// Distance from the input to K.
    pub fn distance(&self) -> f64 {
        self.polar.norm()
    }
}

/// `y * e^r`, saturating to infinity instead of overflowing inside `exp`.
pub(crate) fn y_exp(y: f64, r: f64) -> f64 {
    if r > 709.0 {
        f64::INFINITY
    } else {
        y * r.exp()
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

fn classify(violation: f64, interior: bool, tol: f64) -> Membership {
    if interior {
        Membership { status: MembershipStatus::Interior, violation: 0.0 }
    } else if violation <= tol {
        Membership { status: MembershipStatus::Boundary, violation }
    } else {
        Membership { status: MembershipStatus::Outside, violation }
    }
}

pub fn contains(p: Point3, tol: f64) -> Result<Membership> {
    check_tol(tol)?;
    p.check_finite("point")?;
    let quadrant = p.y.abs().max(p.x.max(0.0)).max((-p.z).max(0.0));
    if p.y > 0.0 {
        let slack = p.z - y_exp(p.y, p.x / p.y);
        let violation = (-slack).max(0.0).min(quadrant);
        Ok(classify(violation, p.y > tol && slack > tol, tol))
    } else {
        Ok(classify(quadrant, false, tol))
    }
}

pub fn dual_contains(z: Point3, tol: f64) -> Result<Membership> {
    check_tol(tol)?;
    z.check_finite("dual point")?;
    let quadrant = z.x.abs().max((-z.y).max(0.0)).max((-z.z).max(0.0));
    if z.x < 0.0 {
        let slack = z.z - y_exp(-z.x, z.y / z.x - 1.0);
        let violation = (-slack).max(0.0).min(quadrant);
        Ok(classify(violation, z.x < -tol && slack > tol, tol))
    } else {
        Ok(classify(quadrant, false, tol))
    }
}

/// The boundary point `(y r, y, y e^r)` of the smooth sheet.
pub fn boundary_point(y: f64, r: f64) -> Result<Point3> {
    if !(y.is_finite() && r.is_finite()) {
        return Err(Error::NonFinite("boundary parameters"));
    }
    if y <= 0.0 {
        return Err(Error::InvalidArgument(format!("boundary_point needs y > 0, got {y}")));
    }
    let p = Point3::new(y * r, y, y_exp(y, r));
    p.check_finite("boundary point")?;
    Ok(p)
}

pub fn distance(p: Point3) -> Result<f64> {
    Ok(project(p)?.distance())
}

fn in_cone_exact(p: Point3) -> bool {
    (p.y > 0.0 && p.z >= y_exp(p.y, p.x / p.y)) || (p.y == 0.0 && p.x <= 0.0 && p.z >= 0.0)
}

fn in_dual_exact(d: Point3) -> bool {
    (d.x < 0.0 && d.z >= y_exp(-d.x, d.y / d.x - 1.0)) || (d.x == 0.0 && d.y >= 0.0 && d.z >= 0.0)
}

pub fn project(p: Point3) -> Result<MoreauPair> {
    p.check_finite("point")?;
    if in_cone_exact(p) {
        return Ok(MoreauPair { primal: p, polar: Point3::ORIGIN });
    }
    if in_dual_exact(-p) {
        return Ok(MoreauPair { primal: Point3::ORIGIN, polar: p });
    }
    if p.x <= 0.0 && p.y <= 0.0 {
        return Ok(MoreauPair {
            primal: Point3::new(p.x, 0.0, p.z.max(0.0)),
            polar: Point3::new(0.0, p.y, p.z.min(0.0)),
        });
    }
    let s = p.norm();
    let pair = project_sheet(p / s)?;
    Ok(MoreauPair { primal: pair.primal * s, polar: pair.polar * s })
}

// Direction of the sheet ray with ratio x/y = r, scaled so no entry overflows.
fn sheet_dir(r: f64) -> Point3 {
    if r <= 0.0 {
        Point3::new(r, 1.0, r.exp())
    } else {
        let e = (-r).exp();
        Point3::new(r * e, e, 1.0)
    }
}

// Outward normal at the same ray; -normal_dir(r) lies on the boundary of K*.
fn normal_dir(r: f64) -> Point3 {
    if r >= 0.0 {
        Point3::new(1.0, 1.0 - r, -(-r).exp())
    } else {
        let e = r.exp();
        Point3::new(e, (1.0 - r) * e, -1.0)
    }
}

// Zero exactly when q lies in span{v(r), n(r)}.
fn stationarity(q: Point3, r: f64) -> f64 {
    q.dot(sheet_dir(r).cross(normal_dir(r)))
}

fn bisect(q: Point3, mut a: f64, mut ha: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let hm = stationarity(q, m);
        if hm == 0.0 {
            return m;
        }
        if (hm > 0.0) == (ha > 0.0) {
            a = m;
            ha = hm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

// Moreau pair for a root r, if the signs identify it as the projection.
fn sheet_pair(q: Point3, r: f64) -> Option<(MoreauPair, f64)> {
    let v = sheet_dir(r);
    let n = normal_dir(r);
    let t = q.dot(v);
    let mu = q.dot(n);
    if t <= 0.0 || mu < -1e-12 {
        return None;
    }
    let primal = v * (t / v.norm_sq());
    let polar = n * (mu.max(0.0) / n.norm_sq());
    let residual = (q - primal - polar).max_abs();
    Some((MoreauPair { primal, polar }, residual))
}

const SHEET_RESIDUAL: f64 = 1e-10;

fn project_sheet(q: Point3) -> Result<MoreauPair> {
    let seed = (q.x / q.y.max(1e-3)).clamp(-30.0, 30.0);
    let mut best_residual = f64::INFINITY;
    let mut evaluations = 0usize;

    let mut offsets = Vec::with_capacity(64);
    let mut d = 0.0;
    let mut step = 0.05;
    while d < 2.0 * R_MAX {
        d += step;
        offsets.push(d);
        if d > 1.0 {
            step *= 1.3;
        }
    }

    let try_bracket = |a: f64, ha: f64, b: f64, hb: f64, best: &mut f64| -> Option<MoreauPair> {
        if ha == 0.0 || (ha > 0.0) != (hb > 0.0) {
            let r = if ha == 0.0 { a } else { bisect(q, a, ha, b) };
            if let Some((pair, res)) = sheet_pair(q, r) {
                if res <= SHEET_RESIDUAL {
                    return Some(pair);
                }
                *best = best.min(res);
            }
        }
        None
    };

    let h_seed = stationarity(q, seed);
    let (mut lo, mut hlo) = (seed, h_seed);
    let (mut hi, mut hhi) = (seed, h_seed);
    for &off in &offsets {
        if lo > -R_MAX {
            let r = (seed - off).max(-R_MAX);
            let h = stationarity(q, r);
            evaluations += 1;
            if let Some(pair) = try_bracket(lo, hlo, r, h, &mut best_residual) {
                return Ok(pair);
            }
            lo = r;
            hlo = h;
        }
        if hi < R_MAX {
            let r = (seed + off).min(R_MAX);
            let h = stationarity(q, r);
            evaluations += 1;
            if let Some(pair) = try_bracket(hi, hhi, r, h, &mut best_residual) {
                return Ok(pair);
            }
            hi = r;
            hhi = h;
        }
    }

    // Dense scan in case two roots shared an expansion interval.
    let n = 56_000;
    let dr = 2.0 * R_MAX / n as f64;
    let mut a = -R_MAX;
    let mut ha = stationarity(q, a);
    for i in 1..=n {
        let b = -R_MAX + i as f64 * dr;
        let hb = stationarity(q, b);
        evaluations += 1;
        if let Some(pair) = try_bracket(a, ha, b, hb, &mut best_residual) {
            return Ok(pair);
        }
        a = b;
        ha = hb;
    }

    // Root beyond r = R_MAX, where the sheet ray is numerically (0, 0, 1);
    // it sits near r = 1 - q_y / q_x for small q_x > 0.
    let (mut a, mut ha) = (R_MAX, stationarity(q, R_MAX));
    while a < 1e300 {
        let b = 4.0 * a;
        let hb = stationarity(q, b);
        evaluations += 1;
        if let Some(pair) = try_bracket(a, ha, b, hb, &mut best_residual) {
            return Ok(pair);
        }
        a = b;
        ha = hb;
    }

    // Root beyond r = -R_MAX: the sheet is numerically the y = 0 face.
    let primal = Point3::new(q.x, q.y, q.z.max(0.0));
    let polar = Point3::new(0.0, 0.0, q.z.min(0.0));
    if q.y > 0.0 && y_exp(q.y, q.x / q.y) <= DEFAULT_TOL {
        return Ok(MoreauPair { primal, polar });
    }

    Err(Error::NonConvergence { iterations: evaluations, residual: best_residual })
}

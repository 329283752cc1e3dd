//! Charts, Finsler metrics, the Hilbert form and its Reeb field.

use std::f64::consts::PI;

use num_dual::Dual;
use serde::{Deserialize, Serialize};

use crate::error::{FinlapError, Result};
use crate::Scalar;

/// Sphere points with `sin φ` below this are treated as poles.
pub const POLE_TOL: f64 = 1e-12;
/// Largest accepted 1-norm condition estimate of the contact system.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    /// `(x, y) ∈ [0,1)²`, both periodic.
    Torus,
    /// `(φ, θ)` with `φ ∈ (0,π)` and `θ` periodic of period `2π`.
    Sphere,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub x1: f64,
    pub x2: f64,
    pub chart: Chart,
}

fn reduce(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

impl ChartPoint {
    pub fn torus(x: f64, y: f64) -> Self {
        Self { x1: reduce(x, 1.0), x2: reduce(y, 1.0), chart: Chart::Torus }
    }

    pub fn sphere(phi: f64, theta: f64) -> Result<Self> {
        check_pole(Chart::Sphere, phi)?;
        Ok(Self { x1: phi, x2: reduce(theta, 2.0 * PI), chart: Chart::Sphere })
    }

    pub fn generic(x1: f64, x2: f64) -> Self {
        Self { x1, x2, chart: Chart::Generic }
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

pub(crate) fn check_pole(chart: Chart, phi: f64) -> Result<()> {
    if chart == Chart::Sphere && (!(phi > 0.0 && phi < PI) || phi.sin() < POLE_TOL) {
        return Err(FinlapError::PoleSingularity { phi });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub v1: f64,
    pub v2: f64,
}

impl TangentVector {
    pub fn new(v1: f64, v2: f64) -> Self {
        Self { v1, v2 }
    }

    pub fn components(&self) -> [f64; 2] {
        [self.v1, self.v2]
    }

    pub fn euclidean_len(&self) -> f64 {
        self.v1.hypot(self.v2)
    }
}

/// A Finsler metric on a two-dimensional chart.
///
/// `norm` must be positively homogeneous of degree one in `v` and strongly convex.
/// `fiber_direction` fixes the bijection between the fiber angle `ψ ∈ [0, 2π)` and rays
/// of `T_xM`; the default is the Euclidean chart angle.
pub trait FinslerMetric: Send + Sync {
    fn chart(&self) -> Chart;

    fn norm<D: Scalar>(&self, x: [D; 2], v: [D; 2]) -> D;

    fn fiber_direction<D: Scalar>(&self, _x: [D; 2], psi: D) -> [D; 2] {
        [psi.cos(), psi.sin()]
    }
}

impl<M: FinslerMetric> FinslerMetric for &M {
    fn chart(&self) -> Chart {
        (**self).chart()
    }
    fn norm<D: Scalar>(&self, x: [D; 2], v: [D; 2]) -> D {
        (**self).norm(x, v)
    }
    fn fiber_direction<D: Scalar>(&self, x: [D; 2], psi: D) -> [D; 2] {
        (**self).fiber_direction(x, psi)
    }
}

#[inline]
pub(crate) fn seed<D: Scalar>(x: D) -> Dual<D> {
    Dual::new(x, D::from(1.0))
}

#[inline]
pub(crate) fn lift<D: Scalar>(x: D) -> Dual<D> {
    Dual::new(x, D::from(0.0))
}

pub fn finsler_norm<M: FinslerMetric>(metric: &M, x: &ChartPoint, v: &TangentVector) -> f64 {
    metric.norm(x.coords(), v.components())
}

/// `(∂F/∂v¹, ∂F/∂v²)` by forward-mode differentiation, generic in the number type.
pub fn vertical_derivative_at<D: Scalar, M: FinslerMetric>(metric: &M, x: [D; 2], v: [D; 2]) -> [D; 2] {
    let xl = [lift(x[0]), lift(x[1])];
    let d1 = metric.norm(xl, [seed(v[0]), lift(v[1])]).eps;
    let d2 = metric.norm(xl, [lift(v[0]), seed(v[1])]).eps;
    [d1, d2]
}

/// The vertical derivative `d_vF` as a covector.
pub fn vertical_derivative<M: FinslerMetric>(metric: &M, x: &ChartPoint, v: &TangentVector) -> Result<[f64; 2]> {
    if v.euclidean_len() == 0.0 {
        return Err(FinlapError::ZeroVector);
    }
    Ok(vertical_derivative_at(metric, x.coords(), v.components()))
}

/// Central-difference vertical derivative with step `1e-6·|v|`.
pub fn vertical_derivative_fd<M: FinslerMetric>(metric: &M, x: &ChartPoint, v: &TangentVector) -> Result<[f64; 2]> {
    let len = v.euclidean_len();
    if len == 0.0 {
        return Err(FinlapError::ZeroVector);
    }
    let h = 1e-6 * len;
    let xc = x.coords();
    let f = |a: f64, b: f64| metric.norm(xc, [a, b]);
    Ok([
        (f(v.v1 + h, v.v2) - f(v.v1 - h, v.v2)) / (2.0 * h),
        (f(v.v1, v.v2 + h) - f(v.v1, v.v2 - h)) / (2.0 * h),
    ])
}

/// Hilbert form components `(f1, f2)` at the fiber point `ψ`, without chart checks.
pub fn hilbert_components<D: Scalar, M: FinslerMetric>(metric: &M, x: [D; 2], psi: D) -> [D; 2] {
    let v = metric.fiber_direction(x, psi);
    vertical_derivative_at(metric, x, v)
}

pub fn hilbert_form<M: FinslerMetric>(metric: &M, x: &ChartPoint, psi: f64) -> Result<[f64; 2]> {
    check_pole(metric.chart(), x.x1)?;
    Ok(hilbert_components(metric, x.coords(), psi))
}

/// Hilbert form with its first derivatives: `dA = ∂ψf1 dψ∧dx1 + ∂ψf2 dψ∧dx2 + c dx1∧dx2`.
#[derive(Clone, Copy, Debug)]
pub struct ContactData<D> {
    pub f: [D; 2],
    pub dpsi_f: [D; 2],
    /// `∂1 f2 − ∂2 f1`
    pub c: D,
}

impl<D: Scalar> ContactData<D> {
    /// `f1 ∂ψf2 − f2 ∂ψf1`, the coefficient of `A∧dA` in `dψ∧dx1∧dx2`.
    pub fn liouville(&self) -> D {
        self.f[0] * self.dpsi_f[1] - self.f[1] * self.dpsi_f[0]
    }
}

pub fn contact_data<D: Scalar, M: FinslerMetric>(metric: &M, x: [D; 2], psi: D) -> ContactData<D> {
    let xl = [lift(x[0]), lift(x[1])];
    let by_psi = hilbert_components(metric, xl, seed(psi));
    let by_x1 = hilbert_components(metric, [seed(x[0]), lift(x[1])], lift(psi));
    let by_x2 = hilbert_components(metric, [lift(x[0]), seed(x[1])], lift(psi));
    ContactData {
        f: [by_psi[0].re, by_psi[1].re],
        dpsi_f: [by_psi[0].eps, by_psi[1].eps],
        c: by_x1[1].eps - by_x2[0].eps,
    }
}

fn solve3<D: Scalar>(mut a: [[D; 3]; 3], mut b: [D; 3]) -> Option<[D; 3]> {
    for col in 0..3 {
        let mut p = col;
        for r in col + 1..3 {
            if a[r][col].re().abs() > a[p][col].re().abs() {
                p = r;
            }
        }
        if a[p][col].re() == 0.0 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for c in col..3 {
                a[r][c] = a[r][c] - f * a[col][c];
            }
            b[r] = b[r] - f * b[col];
        }
    }
    let mut x = [D::from(0.0); 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for c in r + 1..3 {
            s = s - a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

fn norm1(a: &[[f64; 3]; 3]) -> f64 {
    (0..3).map(|c| (0..3).map(|r| a[r][c].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `‖A‖₁‖A⁻¹‖₁`, infinite for singular matrices.
pub fn condition_1(a: &[[f64; 3]; 3]) -> f64 {
    let mut inv = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        match solve3(*a, e) {
            Some(col) => (0..3).for_each(|r| inv[r][k] = col[r]),
            None => return f64::INFINITY,
        }
    }
    let c = norm1(a) * norm1(&inv);
    if c.is_finite() {
        c
    } else {
        f64::INFINITY
    }
}

/// Rows of the contact system `A(X) = 1`, `i_X dA = 0` in the frame `(∂x1, ∂x2, ∂ψ)`.
///
/// The three equations from `i_X dA = 0` have rank two; the `∂ψ` row is always kept and
/// the better conditioned of the two horizontal rows completes the system.
pub fn contact_system<D: Scalar>(cd: &ContactData<D>) -> [[D; 3]; 3] {
    let z = D::from(0.0);
    let [f1, f2] = cd.f;
    let [p1, p2] = cd.dpsi_f;
    let third = if p1.re().abs() >= p2.re().abs() { [z, -cd.c, p1] } else { [cd.c, z, p2] };
    [[f1, f2, z], [-p1, -p2, z], third]
}

/// Solve for the Reeb field, returning it together with the contact data used.
pub fn reeb_generic<D: Scalar, M: FinslerMetric>(metric: &M, x: [D; 2], psi: D) -> Result<([D; 3], ContactData<D>)> {
    let cd = contact_data(metric, x, psi);
    let sys = contact_system(&cd);
    let re = sys.map(|row| row.map(|v| v.re()));
    let condition = condition_1(&re);
    if !(condition <= CONDITION_LIMIT) {
        return Err(FinlapError::SingularContactForm { condition });
    }
    let one = D::from(1.0);
    let z = D::from(0.0);
    let x = solve3(sys, [one, z, z]).ok_or(FinlapError::SingularContactForm { condition: f64::INFINITY })?;
    Ok((x, cd))
}

/// Components of the Reeb field in the frame `(∂x1, ∂x2, ∂ψ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReebVector {
    pub x1: f64,
    pub x2: f64,
    pub psi: f64,
}

impl ReebVector {
    pub fn components(&self) -> [f64; 3] {
        [self.x1, self.x2, self.psi]
    }
}

pub fn reeb_field<M: FinslerMetric>(metric: &M, x: &ChartPoint, psi: f64) -> Result<ReebVector> {
    check_pole(metric.chart(), x.x1)?;
    let (r, _) = reeb_generic(metric, x.coords(), psi)?;
    Ok(ReebVector { x1: r[0], x2: r[1], psi: r[2] })
}

/// Residuals `[A(X) − 1, dA(X,∂x1), dA(X,∂x2), dA(X,∂ψ)]` with `dA` taken from central
/// differences of the Hilbert form (step `h`), independently of the solve.
pub fn contact_residuals<M: FinslerMetric>(metric: &M, x: &ChartPoint, psi: f64, h: f64) -> Result<[f64; 4]> {
    let r = reeb_field(metric, x, psi)?.components();
    let [a, b] = x.coords();
    let f = hilbert_components(metric, [a, b], psi);
    let diff = |da: f64, db: f64, dp: f64| {
        let p = hilbert_components(metric, [a + da, b + db], psi + dp);
        let m = hilbert_components(metric, [a - da, b - db], psi - dp);
        [(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)]
    };
    let d1 = diff(h, 0.0, 0.0);
    let d2 = diff(0.0, h, 0.0);
    let dp = diff(0.0, 0.0, h);
    let c = d1[1] - d2[0];
    Ok([
        f[0] * r[0] + f[1] * r[1] - 1.0,
        dp[0] * r[2] - c * r[1],
        dp[1] * r[2] + c * r[0],
        -dp[0] * r[0] - dp[1] * r[1],
    ])
}

//! The angle density `ρ` and volume density `w` splitting the Liouville form `A∧dA`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{FinlapError, Result};
use crate::geometry::{check_pole, contact_data, lift, reeb_generic, seed, ChartPoint, FinslerMetric};
use crate::grid::BaseGrid;
use crate::Scalar;

pub const DEFAULT_FIBER_NODES: usize = 256;

/// Periodic trapezoid rule on the fiber circle, nodes `2πk/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberQuadrature {
    nodes: Vec<f64>,
    weight: f64,
}

impl FiberQuadrature {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(FinlapError::InvalidConfig("fiber quadrature needs at least one node".into()));
        }
        let nodes = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        Ok(Self { nodes, weight: 2.0 * PI / n as f64 })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn weights(&self) -> Vec<f64> {
        vec![self.weight; self.nodes.len()]
    }
}

impl Default for FiberQuadrature {
    fn default() -> Self {
        Self::new(DEFAULT_FIBER_NODES).expect("positive node count")
    }
}

fn density_error<D: Scalar>(x: &[D; 2], psi: f64, h: f64) -> FinlapError {
    FinlapError::NonPositiveDensity { x1: x[0].re(), x2: x[1].re(), psi, h }
}

/// Orientation sign of the fiber, read at `ψ = 0`.
fn orientation<M: FinslerMetric>(metric: &M, x: [f64; 2]) -> Result<f64> {
    let j0 = contact_data(metric, x, 0.0).liouville();
    if !(j0.abs() > 0.0) || !j0.is_finite() {
        return Err(density_error(&x, 0.0, j0));
    }
    Ok(j0.signum())
}

/// The coefficient `h` of `A∧dA` in `dψ∧dx1∧dx2`, oriented so that `h > 0`.
pub fn liouville_density<M: FinslerMetric>(metric: &M, x: &ChartPoint, psi: f64) -> Result<f64> {
    check_pole(metric.chart(), x.x1)?;
    let c = x.coords();
    let sign = orientation(metric, c)?;
    let h = sign * contact_data(metric, c, psi).liouville();
    if !(h > 0.0) {
        return Err(density_error(&c, psi, h));
    }
    Ok(h)
}

/// `ρ(ψ_k)` on the fiber nodes and `w` at one base point.
#[derive(Clone, Debug, Serialize)]
pub struct AngleVolume {
    pub x1: f64,
    pub x2: f64,
    pub w: f64,
    pub psi: Vec<f64>,
    pub rho: Vec<f64>,
    #[serde(skip)]
    weight: f64,
}

impl AngleVolume {
    /// `∫ρ dψ` by the same quadrature; `2π` up to rounding.
    pub fn rho_integral(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.weight
    }
}

pub fn angle_and_volume<M: FinslerMetric>(metric: &M, x: &ChartPoint, quad: &FiberQuadrature) -> Result<AngleVolume> {
    check_pole(metric.chart(), x.x1)?;
    let c = x.coords();
    let sign = orientation(metric, c)?;
    let mut h = Vec::with_capacity(quad.len());
    for &psi in quad.nodes() {
        let hk = sign * contact_data(metric, c, psi).liouville();
        if !(hk > 0.0) {
            return Err(density_error(&c, psi, hk));
        }
        h.push(hk);
    }
    let w = h.iter().sum::<f64>() * quad.weight() / (2.0 * PI);
    let rho = h.iter().map(|v| v / w).collect();
    Ok(AngleVolume { x1: c[0], x2: c[1], w, psi: quad.nodes().to_vec(), rho, weight: quad.weight() })
}

/// `∫ w dx1 dx2` over the grid.
pub fn total_volume<M: FinslerMetric>(metric: &M, grid: &BaseGrid, quad: &FiberQuadrature) -> Result<f64> {
    let mut total = 0.0;
    for (p, wt) in grid.points.iter().zip(&grid.weights) {
        total += wt * fiber_moments(metric, *p, quad, false)?.w;
    }
    Ok(total)
}

/// Fiber averages at one base point: `w`, `a^{ij} = (1/π)∫X^iX^jρ dψ` and optionally the
/// drift `b^i = (1/π)∫(X·∇X^i)ρ dψ`, with `∇` over `(x1, x2, ψ)`.
#[derive(Clone, Copy, Debug)]
pub struct FiberMoments<D> {
    pub w: D,
    pub a: [[D; 2]; 2],
    pub b: Option<[D; 2]>,
}

pub fn fiber_moments<D: Scalar, M: FinslerMetric>(
    metric: &M,
    x: [D; 2],
    quad: &FiberQuadrature,
    drift: bool,
) -> Result<FiberMoments<D>> {
    let n = quad.len();
    let mut hs = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n);
    let mut gs = Vec::with_capacity(if drift { n } else { 0 });
    for &psi in quad.nodes() {
        let psi_d = D::from(psi);
        if drift {
            let (rp, cd) = reeb_generic(metric, [lift(x[0]), lift(x[1])], seed(psi_d))?;
            let (r1, _) = reeb_generic(metric, [seed(x[0]), lift(x[1])], lift(psi_d))?;
            let (r2, _) = reeb_generic(metric, [lift(x[0]), seed(x[1])], lift(psi_d))?;
            let xv = rp.map(|v| v.re);
            let g: [D; 2] = std::array::from_fn(|i| xv[0] * r1[i].eps + xv[1] * r2[i].eps + xv[2] * rp[i].eps);
            hs.push(cd.liouville().re);
            xs.push(xv);
            gs.push(g);
        } else {
            let (xv, cd) = reeb_generic(metric, x, psi_d)?;
            hs.push(cd.liouville());
            xs.push(xv);
        }
    }
    let sign = hs[0].re().signum();
    for (k, h) in hs.iter_mut().enumerate() {
        *h = *h * sign;
        if !(h.re() > 0.0) {
            return Err(density_error(&x, quad.nodes()[k], h.re()));
        }
    }
    let zero = D::from(0.0);
    let wq = quad.weight();
    let w = hs.iter().fold(zero, |acc, h| acc + *h) * (wq / (2.0 * PI));
    let mut a = [[zero; 2]; 2];
    let mut b = [zero; 2];
    for k in 0..n {
        let rho = hs[k] / w * (wq / PI);
        let xv = xs[k];
        a[0][0] += xv[0] * xv[0] * rho;
        a[0][1] += xv[0] * xv[1] * rho;
        a[1][1] += xv[1] * xv[1] * rho;
        if drift {
            b[0] += gs[k][0] * rho;
            b[1] += gs[k][1] * rho;
        }
    }
    a[1][0] = a[0][1];
    Ok(FiberMoments { w, a, b: drift.then_some(b) })
}

//! Katok–Ziller deformations: Randers metrics built from a Riemannian metric `g` and a
//! Killing field `V` through the dual Hamiltonian `‖p‖_{g*} + ε p(V)`.

use std::f64::consts::PI;

use crate::error::{FinlapError, Result};
use crate::fields::{
    g_apply, g_inverse, CoordinateField1, CoordinateField2, FlatTorus, RiemannianMetric2D, RoundSphere,
    VectorField2D,
};
use crate::geometry::{Chart, ChartPoint, FinslerMetric, TangentVector};
use crate::Scalar;

/// Fraction of the degeneracy bound `(sup g(V,V))^{-1/2}` that `ε` may reach.
pub const EPS_SAFETY: f64 = 0.95;
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug)]
pub struct RandersData<G, V> {
    pub g: G,
    pub v: V,
    pub eps: f64,
}

/// How the fiber angle maps to rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberParam {
    /// Euclidean chart angle, `v = (cos ψ, sin ψ)`.
    ChartAngle,
    /// `v = (cos θ, sin θ/√(1−ε²))`, the unit circle of the torus preset.
    Torus,
    /// `v = (sin ψ/√(1−ε²sin²φ), cos ψ/sin φ)` in `(φ, θ)` components.
    Sphere,
}

#[derive(Clone, Copy, Debug)]
pub struct KatokZiller<G, V> {
    pub data: RandersData<G, V>,
    pub param: FiberParam,
}

pub type KzTorus = KatokZiller<FlatTorus, CoordinateField1>;
pub type KzSphere = KatokZiller<RoundSphere, CoordinateField2>;

fn sample_points(chart: Chart) -> Vec<[f64; 2]> {
    let n = 64;
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = ((i as f64 + 0.5) / n as f64, j as f64 / n as f64);
            pts.push(match chart {
                Chart::Sphere => [PI * a, 2.0 * PI * b],
                _ => [a, b],
            });
        }
    }
    pts
}

/// `sup g(V, V)` sampled on a 64×64 grid of the chart.
pub fn sup_gvv<G: RiemannianMetric2D, V: VectorField2D>(g: &G, v: &V) -> f64 {
    sample_points(g.chart())
        .into_iter()
        .map(|x| {
            let vv = v.at::<f64>(x);
            g_apply(&g.g::<f64>(x), vv, vv)
        })
        .fold(0.0, f64::max)
}

/// Largest admissible `ε` for the data.
pub fn eps_bound<G: RiemannianMetric2D, V: VectorField2D>(g: &G, v: &V) -> f64 {
    EPS_SAFETY / sup_gvv(g, v).sqrt()
}

/// The Katok–Ziller metric of `data`, with the chart-angle fiber parametrization.
pub fn kz_metric<G: RiemannianMetric2D, V: VectorField2D>(data: RandersData<G, V>) -> Result<KatokZiller<G, V>> {
    KatokZiller::with_param(data, FiberParam::ChartAngle)
}

/// The torus preset: flat metric, `V = ∂/∂x`.
pub fn kz_torus(eps: f64) -> Result<KzTorus> {
    KatokZiller::with_param(RandersData { g: FlatTorus, v: CoordinateField1, eps }, FiberParam::Torus)
}

/// The sphere preset: round metric, `V = ∂/∂θ`.
pub fn kz_sphere(eps: f64) -> Result<KzSphere> {
    KatokZiller::with_param(RandersData { g: RoundSphere, v: CoordinateField2, eps }, FiberParam::Sphere)
}

impl<G: RiemannianMetric2D, V: VectorField2D> KatokZiller<G, V> {
    pub fn with_param(data: RandersData<G, V>, param: FiberParam) -> Result<Self> {
        let bound = eps_bound(&data.g, &data.v);
        if !(data.eps >= 0.0 && data.eps < bound) {
            return Err(FinlapError::ConvexityViolation { eps: data.eps, bound });
        }
        Ok(Self { data, param })
    }

    pub fn eps(&self) -> f64 {
        self.data.eps
    }

    /// Pointwise convexity check `ε²g(V,V) < 1`.
    pub fn check_point(&self, x: &ChartPoint) -> Result<()> {
        let c = x.coords();
        let v = self.data.v.at::<f64>(c);
        let gvv = g_apply(&self.data.g.g::<f64>(c), v, v);
        if self.data.eps * self.data.eps * gvv >= 1.0 {
            return Err(FinlapError::ConvexityViolation { eps: self.data.eps, bound: 1.0 / gvv.sqrt() });
        }
        Ok(())
    }

    /// The Riemannian norm `√g(v,v)`.
    pub fn riemannian_norm(&self, x: &ChartPoint, v: &TangentVector) -> f64 {
        let vv = v.components();
        g_apply(&self.data.g.g::<f64>(x.coords()), vv, vv).sqrt()
    }
}

impl<G: RiemannianMetric2D, V: VectorField2D> FinslerMetric for KatokZiller<G, V> {
    fn chart(&self) -> Chart {
        self.data.g.chart()
    }

    fn norm<D: Scalar>(&self, x: [D; 2], v: [D; 2]) -> D {
        let g = self.data.g.g(x);
        let kv = self.data.v.at(x);
        let e = self.data.eps;
        let gvv = g_apply(&g, kv, kv);
        let gvx = g_apply(&g, kv, v);
        let gxx = g_apply(&g, v, v);
        let den = -gvv * (e * e) + 1.0;
        ((gxx * den + gvx * gvx * (e * e)).sqrt() - gvx * e) / den
    }

    fn fiber_direction<D: Scalar>(&self, x: [D; 2], psi: D) -> [D; 2] {
        let e = self.data.eps;
        match self.param {
            FiberParam::ChartAngle => [psi.cos(), psi.sin()],
            FiberParam::Torus => [psi.cos(), psi.sin() / (1.0 - e * e).sqrt()],
            FiberParam::Sphere => {
                let s = x[0].sin();
                let r = (-(s * s) * (e * e) + 1.0).sqrt();
                [psi.sin() / r, psi.cos() / s]
            }
        }
    }
}

/// `H_ε(x, p) = ‖p‖_{g*} + ε p(V)`.
pub fn kz_dual_hamiltonian<G: RiemannianMetric2D, V: VectorField2D>(data: &RandersData<G, V>, x: &ChartPoint, p: [f64; 2]) -> f64 {
    let c = x.coords();
    let gi = g_inverse(&data.g.g::<f64>(c));
    let kv = data.v.at::<f64>(c);
    g_apply(&gi, p, p).sqrt() + data.eps * (p[0] * kv[0] + p[1] * kv[1])
}

/// `F_ε(x, v)` by inverting the Legendre map `p ↦ ∇_p(½H_ε²)` with damped Newton steps.
pub fn legendre_inversion_oracle<G: RiemannianMetric2D, V: VectorField2D>(
    data: &RandersData<G, V>,
    x: &ChartPoint,
    v: &TangentVector,
) -> Result<f64> {
    let vv = v.components();
    if v.euclidean_len() == 0.0 {
        return Err(FinlapError::ZeroVector);
    }
    let c = x.coords();
    let g = data.g.g::<f64>(c);
    let gi = g_inverse(&g);
    let kv = data.v.at::<f64>(c);
    let e = data.eps;
    let scale = vv[0].abs().max(vv[1].abs());

    // value H, gradient ∇H and residual of the Legendre equation
    let eval = |p: [f64; 2]| {
        let gp = [gi[0][0] * p[0] + gi[0][1] * p[1], gi[1][0] * p[0] + gi[1][1] * p[1]];
        let n = (p[0] * gp[0] + p[1] * gp[1]).sqrt();
        let h = n + e * (p[0] * kv[0] + p[1] * kv[1]);
        let dh = [gp[0] / n + e * kv[0], gp[1] / n + e * kv[1]];
        let res = [h * dh[0] - vv[0], h * dh[1] - vv[1]];
        (h, dh, gp, n, res)
    };
    let rnorm = |r: [f64; 2]| r[0].hypot(r[1]);

    let mut p = [g[0][0] * vv[0] + g[0][1] * vv[1], g[1][0] * vv[0] + g[1][1] * vv[1]];
    for _ in 0..NEWTON_MAX_ITER {
        let (h, dh, gp, n, res) = eval(p);
        if rnorm(res) <= NEWTON_TOL * scale {
            return Ok(h);
        }
        let n3 = n * n * n;
        let mut jac = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                jac[i][j] = dh[i] * dh[j] + h * (gi[i][j] / n - gp[i] * gp[j] / n3);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step = [
            (jac[1][1] * res[0] - jac[0][1] * res[1]) / det,
            (-jac[1][0] * res[0] + jac[0][0] * res[1]) / det,
        ];
        let r0 = rnorm(res);
        let mut t = 1.0;
        loop {
            let trial = [p[0] - t * step[0], p[1] - t * step[1]];
            let (_, _, _, _, rt) = eval(trial);
            if rnorm(rt) < r0 || t < 1e-4 {
                p = trial;
                break;
            }
            t *= 0.5;
        }
    }
    let (h, _, _, _, res) = eval(p);
    if rnorm(res) <= NEWTON_TOL * scale {
        return Ok(h);
    }
    Err(FinlapError::NewtonDivergence { iterations: NEWTON_MAX_ITER })
}

//! The Finsler–Laplace operator `Δ^F = a^{ij}∂_{ij} + b^i∂_i` and its diagnostics.

use num_dual::{Dual, Dual64};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fiber::{fiber_moments, FiberQuadrature};
use crate::fields::{g_det, g_inverse, jet2, RiemannianMetric2D, ScalarField};
use crate::geometry::{check_pole, lift, seed, Chart, ChartPoint, FinslerMetric};
use crate::grid::BaseGrid;
use crate::Scalar;

/// Operator coefficients at one base point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorCoefficients {
    pub x1: f64,
    pub x2: f64,
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub b1: f64,
    pub b2: f64,
    pub w: f64,
}

impl OperatorCoefficients {
    pub fn a(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a12, self.a22]]
    }

    pub fn symbol(&self) -> SymbolMetric {
        SymbolMetric::from_dual(self.a())
    }

    /// Smallest eigenvalue of the `a` matrix.
    pub fn ellipticity(&self) -> f64 {
        let tr = self.a11 + self.a22;
        let det = self.a11 * self.a22 - self.a12 * self.a12;
        0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
    }
}

/// The dual tensor `a^{ij}` and the Riemannian metric it defines on the base.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymbolMetric {
    pub dual: [[f64; 2]; 2],
    pub metric: [[f64; 2]; 2],
}

impl SymbolMetric {
    pub fn from_dual(a: [[f64; 2]; 2]) -> Self {
        Self { dual: a, metric: g_inverse(&a) }
    }

    /// `max |a·g − I|`.
    pub fn identity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let s: f64 = (0..2).map(|k| self.dual[i][k] * self.metric[k][j]).sum();
                r = r.max((s - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        r
    }

    /// Riemannian density `√det g` of the symbol metric.
    pub fn volume_density(&self) -> f64 {
        g_det(&self.metric).sqrt()
    }
}

/// A metric together with the fiber rule used to average over its fibers.
#[derive(Clone, Debug)]
pub struct FinslerLaplacian<M> {
    pub metric: M,
    pub quad: FiberQuadrature,
}

impl<M: FinslerMetric> FinslerLaplacian<M> {
    pub fn new(metric: M, quad: FiberQuadrature) -> Self {
        Self { metric, quad }
    }

    pub fn with_default_quadrature(metric: M) -> Self {
        Self::new(metric, FiberQuadrature::default())
    }

    pub fn chart(&self) -> Chart {
        self.metric.chart()
    }

    pub fn coefficients(&self, x: &ChartPoint) -> Result<OperatorCoefficients> {
        self.coefficients_at(x.coords())
    }

    pub fn coefficients_at(&self, x: [f64; 2]) -> Result<OperatorCoefficients> {
        check_pole(self.chart(), x[0])?;
        let m = fiber_moments(&self.metric, x, &self.quad, true)?;
        let b = m.b.unwrap_or([0.0; 2]);
        Ok(OperatorCoefficients {
            x1: x[0],
            x2: x[1],
            a11: m.a[0][0],
            a12: m.a[0][1],
            a22: m.a[1][1],
            b1: b[0],
            b2: b[1],
            w: m.w,
        })
    }

    /// Coefficients on many points, evaluated in parallel, in input order.
    pub fn coefficient_field(&self, points: &[[f64; 2]]) -> Result<Vec<OperatorCoefficients>> {
        points.par_iter().map(|p| self.coefficients_at(*p)).collect()
    }

    /// `(a^{ij}, w)` only, in parallel.
    pub fn symbol_field(&self, points: &[[f64; 2]]) -> Result<Vec<([[f64; 2]; 2], f64)>> {
        points
            .par_iter()
            .map(|p| {
                check_pole(self.chart(), p[0])?;
                let m = fiber_moments(&self.metric, *p, &self.quad, false)?;
                Ok((m.a, m.w))
            })
            .collect()
    }

    /// `Δ^F f` at `x`.
    pub fn apply<F: ScalarField>(&self, f: &F, x: &ChartPoint) -> Result<f64> {
        Ok(apply_laplacian(&self.coefficients(x)?, f, x.coords()))
    }
}

pub fn second_order_coeffs<M: FinslerMetric>(metric: &M, x: &ChartPoint, quad: &FiberQuadrature) -> Result<[f64; 3]> {
    check_pole(metric.chart(), x.x1)?;
    let m = fiber_moments(metric, x.coords(), quad, false)?;
    Ok([m.a[0][0], m.a[0][1], m.a[1][1]])
}

pub fn drift_coeffs<M: FinslerMetric>(metric: &M, x: &ChartPoint, quad: &FiberQuadrature) -> Result<[f64; 2]> {
    check_pole(metric.chart(), x.x1)?;
    let m = fiber_moments(metric, x.coords(), quad, true)?;
    Ok(m.b.unwrap_or([0.0; 2]))
}

/// `a^{ij}∂_{ij}f + b^i∂_if` with exact derivatives of `f`.
pub fn apply_laplacian<F: ScalarField>(c: &OperatorCoefficients, f: &F, x: [f64; 2]) -> f64 {
    let j = jet2(f, x);
    c.a11 * j.hess[0][0] + 2.0 * c.a12 * j.hess[0][1] + c.a22 * j.hess[1][1] + c.b1 * j.grad[0] + c.b2 * j.grad[1]
}

/// A symbol tensor `a^{ij}` with a volume density `w`, differentiable in the base point.
pub trait SymbolVolume: Send + Sync {
    fn symbol_volume<D: Scalar>(&self, x: [D; 2]) -> Result<([[D; 2]; 2], D)>;
}

impl<M: FinslerMetric> SymbolVolume for FinslerLaplacian<M> {
    fn symbol_volume<D: Scalar>(&self, x: [D; 2]) -> Result<([[D; 2]; 2], D)> {
        check_pole(self.chart(), x[0].re())?;
        let m = fiber_moments(&self.metric, x, &self.quad, false)?;
        Ok((m.a, m.w))
    }
}

/// `(g^{-1}, √det g)` of a Riemannian metric.
#[derive(Clone, Copy, Debug, Default)]
pub struct RiemannianSymbol<G>(pub G);

impl<G: RiemannianMetric2D> SymbolVolume for RiemannianSymbol<G> {
    fn symbol_volume<D: Scalar>(&self, x: [D; 2]) -> Result<([[D; 2]; 2], D)> {
        let g = self.0.g(x);
        Ok((g_inverse(&g), g_det(&g).sqrt()))
    }
}

/// Scalar fields whose evaluation may fail.
pub trait FallibleField: Send + Sync {
    fn value<D: Scalar>(&self, x: [D; 2]) -> Result<D>;
}

impl<F: ScalarField> FallibleField for F {
    fn value<D: Scalar>(&self, x: [D; 2]) -> Result<D> {
        Ok(self.eval(x))
    }
}

fn gradient_at<D: Scalar, F: FallibleField>(f: &F, x: [D; 2]) -> Result<[D; 2]> {
    let d1 = f.value([seed(x[0]), lift(x[1])])?;
    let d2 = f.value([lift(x[0]), seed(x[1])])?;
    Ok([d1.eps, d2.eps])
}

fn weighted_laplacian_impl<S: SymbolVolume, F: FallibleField>(s: &S, f: &F, x: [f64; 2]) -> Result<f64> {
    let mut div = 0.0;
    let mut w0 = 1.0;
    for i in 0..2 {
        let xi: [Dual64; 2] = std::array::from_fn(|k| Dual::new(x[k], if k == i { 1.0 } else { 0.0 }));
        let (a, w) = s.symbol_volume(xi)?;
        let g = gradient_at(f, xi)?;
        let flux = w * (a[i][0] * g[0] + a[i][1] * g[1]);
        div += flux.eps;
        w0 = w.re;
    }
    Ok(div / w0)
}

/// `Δ_{g,ω}f = (1/w)∂_i(w a^{ij}∂_jf)`: the operator with symbol `a`, symmetric for `w dx`
/// and vanishing on constants.
pub fn weighted_laplacian<S: SymbolVolume, F: ScalarField>(s: &S, f: &F, x: [f64; 2]) -> Result<f64> {
    weighted_laplacian_impl(s, f, x)
}

/// `1/a` with `a² = w/v_g`, `v_g = (det a^{ij})^{-1/2}` the symbol-metric density.
struct InverseAmplitude<'a, S>(&'a S);

impl<S: SymbolVolume> FallibleField for InverseAmplitude<'_, S> {
    fn value<D: Scalar>(&self, x: [D; 2]) -> Result<D> {
        let (a, w) = self.0.symbol_volume(x)?;
        Ok((w * g_det(&a).sqrt()).sqrt().recip())
    }
}

/// Amplitude `a = √(w/v_g)` conjugating `Δ_{g,ω}` to a Schrödinger operator.
pub fn conjugating_amplitude<S: SymbolVolume>(s: &S, x: [f64; 2]) -> Result<f64> {
    Ok(InverseAmplitude(s).value::<f64>(x)?.recip())
}

/// `V = a·Δ_{g,ω}(a^{-1})`.
pub fn schrodinger_potential<S: SymbolVolume>(s: &S, x: [f64; 2]) -> Result<f64> {
    let lap = weighted_laplacian_impl(s, &InverseAmplitude(s), x)?;
    Ok(conjugating_amplitude(s, x)? * lap)
}

/// The same potential from nested central differences with step `h`.
pub fn schrodinger_potential_fd<S: SymbolVolume>(s: &S, x: [f64; 2], h: f64) -> Result<f64> {
    let inv = |p: [f64; 2]| InverseAmplitude(s).value::<f64>(p);
    let flux = |p: [f64; 2], i: usize| -> Result<f64> {
        let (a, w) = s.symbol_volume::<f64>(p)?;
        let mut g = [0.0; 2];
        for (j, gj) in g.iter_mut().enumerate() {
            let (mut pp, mut pm) = (p, p);
            pp[j] += h;
            pm[j] -= h;
            *gj = (inv(pp)? - inv(pm)?) / (2.0 * h);
        }
        Ok(w * (a[i][0] * g[0] + a[i][1] * g[1]))
    };
    let mut div = 0.0;
    for i in 0..2 {
        let (mut pp, mut pm) = (x, x);
        pp[i] += h;
        pm[i] -= h;
        div += (flux(pp, i)? - flux(pm, i)?) / (2.0 * h);
    }
    let (_, w) = s.symbol_volume::<f64>(x)?;
    Ok(div / w / inv(x)?)
}

/// Operator coefficients sampled on a base grid, for repeated integrals.
#[derive(Clone, Debug)]
pub struct OperatorField {
    pub coeffs: Vec<OperatorCoefficients>,
    pub weights: Vec<f64>,
}

impl OperatorField {
    pub fn new<M: FinslerMetric>(lap: &FinslerLaplacian<M>, grid: &BaseGrid) -> Result<Self> {
        Ok(Self { coeffs: lap.coefficient_field(&grid.points)?, weights: grid.weights.clone() })
    }

    fn sum(&self, f: impl Fn(&OperatorCoefficients, [f64; 2]) -> f64) -> f64 {
        self.coeffs.iter().zip(&self.weights).map(|(c, wt)| wt * c.w * f(c, [c.x1, c.x2])).sum()
    }

    /// `E(u) = ∫ a^{ij}∂_iu∂_ju w dx`.
    pub fn energy<F: ScalarField>(&self, u: &F) -> f64 {
        self.sum(|c, p| {
            let g = jet2(u, p).grad;
            c.a11 * g[0] * g[0] + 2.0 * c.a12 * g[0] * g[1] + c.a22 * g[1] * g[1]
        })
    }

    /// `∫ u v w dx`.
    pub fn mass<F: ScalarField, G: ScalarField>(&self, u: &F, v: &G) -> f64 {
        self.sum(|_, p| u.eval(p) * v.eval(p))
    }

    /// `E(u)/∫u²w dx`.
    pub fn rayleigh<F: ScalarField>(&self, u: &F) -> f64 {
        self.energy(u) / self.mass(u, u)
    }

    /// `⟨−Δu, u⟩ = −∫ u Δu w dx`.
    pub fn pairing<F: ScalarField>(&self, u: &F) -> f64 {
        -self.sum(|c, p| u.eval(p) * apply_laplacian(c, u, p))
    }

    /// `∫(fΔg − gΔf) w dx`.
    pub fn green_defect<F: ScalarField, G: ScalarField>(&self, f: &F, g: &G) -> f64 {
        self.sum(|c, p| f.eval(p) * apply_laplacian(c, g, p) - g.eval(p) * apply_laplacian(c, f, p))
    }
}

/// `E(u) = ∫ a^{ij}∂_iu∂_ju w dx` over the grid.
pub fn energy<M: FinslerMetric, F: ScalarField>(lap: &FinslerLaplacian<M>, u: &F, grid: &BaseGrid) -> Result<f64> {
    let sym = lap.symbol_field(&grid.points)?;
    let mut e = 0.0;
    for ((p, wt), (a, w)) in grid.points.iter().zip(&grid.weights).zip(&sym) {
        let g = jet2(u, *p).grad;
        let q = a[0][0] * g[0] * g[0] + 2.0 * a[0][1] * g[0] * g[1] + a[1][1] * g[1] * g[1];
        e += wt * q * w;
    }
    Ok(e)
}

/// `∫(fΔg − gΔf) w dx` over the grid.
pub fn green_defect<M: FinslerMetric, F: ScalarField, G: ScalarField>(
    lap: &FinslerLaplacian<M>,
    f: &F,
    g: &G,
    grid: &BaseGrid,
) -> Result<f64> {
    Ok(OperatorField::new(lap, grid)?.green_defect(f, g))
}

/// The metric `e^{f(x)}F(x, v)`.
#[derive(Clone, Debug)]
pub struct ConformalMetric<M, F> {
    pub metric: M,
    pub factor: F,
}

pub fn conformal_rescale<M: FinslerMetric, F: ScalarField>(metric: M, f: F) -> ConformalMetric<M, F> {
    ConformalMetric { metric, factor: f }
}

impl<M: FinslerMetric, F: ScalarField> FinslerMetric for ConformalMetric<M, F> {
    fn chart(&self) -> Chart {
        self.metric.chart()
    }
    fn norm<D: Scalar>(&self, x: [D; 2], v: [D; 2]) -> D {
        self.factor.eval(x).exp() * self.metric.norm(x, v)
    }
    fn fiber_direction<D: Scalar>(&self, x: [D; 2], psi: D) -> [D; 2] {
        self.metric.fiber_direction(x, psi)
    }
}

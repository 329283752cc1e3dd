//! Scalar fields, Riemannian metrics and vector fields on charts, generic in the number
//! type so they can be differentiated automatically.

use std::f64::consts::PI;

use num_dual::{Dual2, HyperDual};

use crate::geometry::{Chart, FinslerMetric};
use crate::special::legendre_p;
use crate::Scalar;

pub trait ScalarField: Send + Sync {
    fn eval<D: Scalar>(&self, x: [D; 2]) -> D;
}

impl<F: ScalarField> ScalarField for &F {
    fn eval<D: Scalar>(&self, x: [D; 2]) -> D {
        (**self).eval(x)
    }
}

/// Value, gradient and Hessian of a field at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

pub fn jet2<F: ScalarField>(f: &F, x: [f64; 2]) -> Jet2 {
    let d11 = f.eval([Dual2::new(x[0], 1.0, 0.0), Dual2::from_re(x[1])]);
    let d22 = f.eval([Dual2::from_re(x[0]), Dual2::new(x[1], 1.0, 0.0)]);
    let d12 = f.eval([HyperDual::new(x[0], 1.0, 0.0, 0.0), HyperDual::new(x[1], 0.0, 1.0, 0.0)]);
    Jet2 {
        value: d11.re,
        grad: [d11.v1, d22.v1],
        hess: [[d11.v2, d12.eps1eps2], [d12.eps1eps2, d22.v2]],
    }
}

pub fn gradient<F: ScalarField>(f: &F, x: [f64; 2]) -> (f64, [f64; 2]) {
    let j = jet2(f, x);
    (j.value, j.grad)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn eval<D: Scalar>(&self, _x: [D; 2]) -> D {
        D::from(self.0)
    }
}

/// A trigonometric polynomial on the unit-square torus,
/// `Σ c·cos(2π(px + qy)) + s·sin(2π(px + qy))`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    pub terms: Vec<TrigTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigTerm {
    pub p: i32,
    pub q: i32,
    pub cos: f64,
    pub sin: f64,
}

impl TrigPoly {
    pub fn new(terms: Vec<TrigTerm>) -> Self {
        Self { terms }
    }

    pub fn single(p: i32, q: i32, cos: f64, sin: f64) -> Self {
        Self { terms: vec![TrigTerm { p, q, cos, sin }] }
    }

    /// `amp·cos(2πk·x_axis)`.
    pub fn cos_axis(axis: usize, k: i32, amp: f64) -> Self {
        let (p, q) = if axis == 0 { (k, 0) } else { (0, k) };
        Self::single(p, q, amp, 0.0)
    }

    pub fn sin_axis(axis: usize, k: i32, amp: f64) -> Self {
        let (p, q) = if axis == 0 { (k, 0) } else { (0, k) };
        Self::single(p, q, 0.0, amp)
    }

    pub fn plus(mut self, other: TrigPoly) -> Self {
        self.terms.extend(other.terms);
        self
    }
}

impl ScalarField for TrigPoly {
    fn eval<D: Scalar>(&self, x: [D; 2]) -> D {
        let mut s = D::from(0.0);
        for t in &self.terms {
            let arg = (x[0] * t.p as f64 + x[1] * t.q as f64) * (2.0 * PI);
            if t.cos != 0.0 {
                s += arg.cos() * t.cos;
            }
            if t.sin != 0.0 {
                s += arg.sin() * t.sin;
            }
        }
        s
    }
}

/// Real spherical harmonic sums on the `(φ, θ)` chart:
/// `Σ P_l^m(cos φ)(c·cos mθ + s·sin mθ)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HarmonicSum {
    pub terms: Vec<HarmonicTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicTerm {
    pub l: usize,
    pub m: usize,
    pub cos: f64,
    pub sin: f64,
}

impl HarmonicSum {
    pub fn new(terms: Vec<HarmonicTerm>) -> Self {
        Self { terms }
    }

    /// `P_l^m(cos φ) cos(mθ)`, the real part of the unnormalized `Y_l^m`.
    pub fn ylm(l: usize, m: usize) -> Self {
        Self { terms: vec![HarmonicTerm { l, m, cos: 1.0, sin: 0.0 }] }
    }
}

impl ScalarField for HarmonicSum {
    fn eval<D: Scalar>(&self, x: [D; 2]) -> D {
        let mut s = D::from(0.0);
        for t in &self.terms {
            let p = legendre_p(t.l, t.m, x[0]);
            let arg = x[1] * t.m as f64;
            s += p * (arg.cos() * t.cos + arg.sin() * t.sin);
        }
        s
    }
}

/// `exp(f)` as a field, used for conformal factors.
#[derive(Clone, Debug)]
pub struct Exp<F>(pub F);

impl<F: ScalarField> ScalarField for Exp<F> {
    fn eval<D: Scalar>(&self, x: [D; 2]) -> D {
        self.0.eval(x).exp()
    }
}

/// A Riemannian metric `g = [[g11, g12], [g12, g22]]` on a chart.
pub trait RiemannianMetric2D: Send + Sync {
    fn chart(&self) -> Chart;
    fn g<D: Scalar>(&self, x: [D; 2]) -> [[D; 2]; 2];
}

pub trait VectorField2D: Send + Sync {
    fn at<D: Scalar>(&self, x: [D; 2]) -> [D; 2];
}

pub fn g_apply<D: Scalar>(g: &[[D; 2]; 2], u: [D; 2], v: [D; 2]) -> D {
    u[0] * (g[0][0] * v[0] + g[0][1] * v[1]) + u[1] * (g[1][0] * v[0] + g[1][1] * v[1])
}

pub fn g_det<D: Scalar>(g: &[[D; 2]; 2]) -> D {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

pub fn g_inverse<D: Scalar>(g: &[[D; 2]; 2]) -> [[D; 2]; 2] {
    let d = g_det(g);
    [[g[1][1] / d, -g[0][1] / d], [-g[1][0] / d, g[0][0] / d]]
}

/// The flat metric on the unit-square torus.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlatTorus;

impl RiemannianMetric2D for FlatTorus {
    fn chart(&self) -> Chart {
        Chart::Torus
    }
    fn g<D: Scalar>(&self, _x: [D; 2]) -> [[D; 2]; 2] {
        let (o, z) = (D::from(1.0), D::from(0.0));
        [[o, z], [z, o]]
    }
}

/// `dφ² + sin²φ dθ²`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RoundSphere;

impl RiemannianMetric2D for RoundSphere {
    fn chart(&self) -> Chart {
        Chart::Sphere
    }
    fn g<D: Scalar>(&self, x: [D; 2]) -> [[D; 2]; 2] {
        let s = x[0].sin();
        let z = D::from(0.0);
        [[D::from(1.0), z], [z, s * s]]
    }
}

/// A non-conformally-flat anisotropic metric on the torus.
#[derive(Clone, Copy, Debug)]
pub struct AnisotropicTorus {
    pub amplitude: f64,
}

impl Default for AnisotropicTorus {
    fn default() -> Self {
        Self { amplitude: 0.3 }
    }
}

impl RiemannianMetric2D for AnisotropicTorus {
    fn chart(&self) -> Chart {
        Chart::Torus
    }
    fn g<D: Scalar>(&self, x: [D; 2]) -> [[D; 2]; 2] {
        let a = self.amplitude;
        let tx = x[0] * (2.0 * PI);
        let ty = x[1] * (2.0 * PI);
        let g11 = tx.cos() * a + 2.0;
        let g12 = (tx + ty).sin() * (0.5 * a);
        let g22 = ty.sin() * a + tx.cos() * (0.5 * a) + 1.5;
        [[g11, g12], [g12, g22]]
    }
}

/// `∂/∂x1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoordinateField1;

impl VectorField2D for CoordinateField1 {
    fn at<D: Scalar>(&self, _x: [D; 2]) -> [D; 2] {
        [D::from(1.0), D::from(0.0)]
    }
}

/// `∂/∂x2`, the rotation field `∂/∂θ` on the sphere chart.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoordinateField2;

impl VectorField2D for CoordinateField2 {
    fn at<D: Scalar>(&self, _x: [D; 2]) -> [D; 2] {
        [D::from(0.0), D::from(1.0)]
    }
}

/// The Finsler metric `√g(v, v)` of a Riemannian metric.
#[derive(Clone, Copy, Debug, Default)]
pub struct Riemannian<G>(pub G);

impl<G: RiemannianMetric2D> FinslerMetric for Riemannian<G> {
    fn chart(&self) -> Chart {
        self.0.chart()
    }
    fn norm<D: Scalar>(&self, x: [D; 2], v: [D; 2]) -> D {
        g_apply(&self.0.g(x), v, v).sqrt()
    }
}

/// Lie derivative `(L_V g)_{ij} = V^k∂_k g_{ij} + g_{kj}∂_iV^k + g_{ik}∂_jV^k` by central
/// differences with step `h`.
pub fn lie_derivative_fd<G: RiemannianMetric2D, V: VectorField2D>(g: &G, v: &V, x: [f64; 2], h: f64) -> [[f64; 2]; 2] {
    let shift = |k: usize, s: f64| {
        let mut y = x;
        y[k] += s;
        y
    };
    let dg: Vec<[[f64; 2]; 2]> = (0..2)
        .map(|k| {
            let (p, m) = (g.g::<f64>(shift(k, h)), g.g::<f64>(shift(k, -h)));
            let mut d = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    d[i][j] = (p[i][j] - m[i][j]) / (2.0 * h);
                }
            }
            d
        })
        .collect();
    let dv: Vec<[f64; 2]> = (0..2)
        .map(|i| {
            let (p, m) = (v.at::<f64>(shift(i, h)), v.at::<f64>(shift(i, -h)));
            [(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)]
        })
        .collect();
    let g0 = g.g::<f64>(x);
    let v0 = v.at::<f64>(x);
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = 0.0;
            for k in 0..2 {
                s += v0[k] * dg[k][i][j] + g0[k][j] * dv[i][k] + g0[i][k] * dv[j][k];
            }
            out[i][j] = s;
        }
    }
    out
}

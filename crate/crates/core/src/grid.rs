//! Tensor-product quadrature grids on the base charts.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::Chart;
use crate::special::gauss_legendre_nodes;

/// Points and weights of a quadrature for `∫ g dx1 dx2` over a chart.
#[derive(Clone, Debug)]
pub struct BaseGrid {
    pub chart: Chart,
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl BaseGrid {
    /// `n × n` periodic trapezoid on `[0,1)²`.
    pub fn torus(n: usize) -> Self {
        let h = 1.0 / n as f64;
        let mut points = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                points.push([i as f64 * h, j as f64 * h]);
            }
        }
        Self { chart: Chart::Torus, weights: vec![h * h; n * n], points }
    }

    /// Gauss–Legendre in `cos φ` (`n_phi` nodes) times a periodic trapezoid in `θ`.
    pub fn sphere(n_phi: usize, n_theta: usize) -> Result<Self> {
        let (t, wt) = gauss_legendre_nodes(n_phi)?;
        let h = 2.0 * PI / n_theta as f64;
        let mut points = Vec::with_capacity(n_phi * n_theta);
        let mut weights = Vec::with_capacity(n_phi * n_theta);
        for (tk, wk) in t.iter().zip(&wt) {
            let phi = tk.acos();
            for j in 0..n_theta {
                points.push([phi, j as f64 * h]);
                weights.push(wk / phi.sin() * h);
            }
        }
        Ok(Self { chart: Chart::Sphere, points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

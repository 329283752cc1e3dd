//! Small-`ε` behaviour of the Katok–Ziller sphere spectrum.

use serde::Serialize;

use crate::error::{FinlapError, Result};
use crate::solvers::sphere::{SphereProfile, DEFAULT_L_MAX, DEFAULT_N_QUAD};
use crate::spectral::{CLUSTER_ABS_TOL, CLUSTER_REL_TOL};

/// Claimed `ε²` coefficient of the eigenvalue branch through `−l(l+1)`:
/// `m²/(2(2l−1))·(2(l+1) + 3l(l−1)/(2l+3)) + 3l(l−1)/(2(2l−1))·(1 + (l²+l−1)/((2l+3)(2l−1)))`.
pub fn perturbation_coefficient(l: i64, m: i64) -> Result<f64> {
    if l < 1 || m < 0 || m > l {
        return Err(FinlapError::InvalidIndex { l, m });
    }
    let (l, m) = (l as f64, m as f64);
    let a = m * m / (2.0 * (2.0 * l - 1.0)) * (2.0 * (l + 1.0) + 3.0 * l * (l - 1.0) / (2.0 * l + 3.0));
    let b = 3.0 * l * (l - 1.0) / (2.0 * (2.0 * l - 1.0))
        * (1.0 + (l * l + l - 1.0) / ((2.0 * l + 3.0) * (2.0 * l - 1.0)));
    Ok(a + b)
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeCheck {
    pub l: usize,
    pub m: usize,
    pub eps: Vec<f64>,
    /// Tracked eigenvalues of `−Δ`.
    pub eigenvalues: Vec<f64>,
    /// `(l(l+1) − μ(ε))/ε²`, the `ε²` slope of the `Δ` eigenvalue.
    pub slopes: Vec<f64>,
    pub numeric_slope: f64,
    pub formula_value: f64,
    /// Relative error, or the absolute error when the formula vanishes.
    pub rel_err: f64,
}

/// Polynomial extrapolation of `s(ε)` to `ε = 0` in the variable `ε²` (Neville).
pub fn richardson_to_zero(eps: &[f64], s: &[f64]) -> f64 {
    let x: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let mut p = s.to_vec();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
        }
    }
    p[0]
}

/// Follow the branch from `l(l+1)` through the ascending `eps_samples` by nearest-value
/// continuation inside block `m`.
pub fn track_branch(l: usize, m: usize, eps_samples: &[f64], l_max: usize, n_quad: usize) -> Result<Vec<f64>> {
    let mut prev = (l * (l + 1)) as f64;
    let mut out = Vec::with_capacity(eps_samples.len());
    for &eps in eps_samples {
        let vals = SphereProfile::kz(eps, n_quad, 256)?.block_spectrum(m, l_max, usize::MAX)?.eigenvalues;
        let mut by_dist: Vec<f64> = vals.clone();
        by_dist.sort_by(|a, b| (a - prev).abs().total_cmp(&(b - prev).abs()));
        let best = by_dist[0];
        if let Some(&second) = by_dist.get(1) {
            if (second - best).abs() <= (CLUSTER_REL_TOL * best.abs()).max(CLUSTER_ABS_TOL) {
                return Err(FinlapError::EigenvalueTracking { l, m, eps });
            }
        }
        out.push(best);
        prev = best;
    }
    Ok(out)
}

/// Numerical `ε²` slope of the `(l, m)` branch against [`perturbation_coefficient`].
pub fn perturbation_slope_check(l: usize, m: usize, eps_samples: &[f64]) -> Result<SlopeCheck> {
    perturbation_slope_check_with(l, m, eps_samples, DEFAULT_L_MAX, DEFAULT_N_QUAD)
}

pub fn perturbation_slope_check_with(
    l: usize,
    m: usize,
    eps_samples: &[f64],
    l_max: usize,
    n_quad: usize,
) -> Result<SlopeCheck> {
    let formula_value = perturbation_coefficient(l as i64, m as i64)?;
    if eps_samples.is_empty() || eps_samples.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(FinlapError::InvalidConfig("eps samples must lie in (0, 1)".into()));
    }
    let mut eps = eps_samples.to_vec();
    eps.sort_by(|a, b| a.total_cmp(b));
    let eigenvalues = track_branch(l, m, &eps, l_max, n_quad)?;
    let ll = (l * (l + 1)) as f64;
    let slopes: Vec<f64> = eps.iter().zip(&eigenvalues).map(|(e, mu)| (ll - mu) / (e * e)).collect();
    let numeric_slope = richardson_to_zero(&eps, &slopes);
    let rel_err = if formula_value == 0.0 {
        numeric_slope.abs()
    } else {
        ((numeric_slope - formula_value) / formula_value).abs()
    };
    Ok(SlopeCheck { l, m, eps, eigenvalues, slopes, numeric_slope, formula_value, rel_err })
}

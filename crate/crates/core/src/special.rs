//! Associated Legendre functions, spherical-harmonic norms and Gauss–Legendre rules.
//!
//! `P_l^m` follows the Abramowitz–Stegun convention including the Condon–Shortley phase,
//! so `P_1^1(cos φ) = −sin φ`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{FinlapError, Result};
use crate::Scalar;

fn check(l: i64, m: i64) -> Result<()> {
    if m < 0 || m > l {
        return Err(FinlapError::InvalidIndex { l, m });
    }
    Ok(())
}

/// `P_l^m(cos φ)` for `0 ≤ m ≤ l`, generic in the number type. Indices are not checked.
pub fn legendre_p<D: Scalar>(l: usize, m: usize, phi: D) -> D {
    if m > l {
        return D::from(0.0);
    }
    let x = phi.cos();
    let s = phi.sin();
    // P_m^m = (−1)^m (2m−1)!! sin^m φ
    let mut pmm = D::from(1.0);
    for k in 1..=m {
        pmm = pmm * s * (-(2.0 * k as f64 - 1.0));
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * pmm * (2.0 * m as f64 + 1.0);
    for ll in m + 2..=l {
        let next = (x * cur * (2.0 * ll as f64 - 1.0) - prev * ((ll + m - 1) as f64)) / ((ll - m) as f64);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn assoc_legendre(l: i64, m: i64, phi: f64) -> Result<f64> {
    check(l, m)?;
    Ok(legendre_p(l as usize, m as usize, phi))
}

/// `∂_φ P_l^m(cos φ)` from `sin φ ∂_φP_l^m = l cos φ P_l^m − (l+m) P_{l−1}^m`.
pub fn assoc_legendre_dphi(l: i64, m: i64, phi: f64) -> Result<f64> {
    check(l, m)?;
    let (l, m) = (l as usize, m as usize);
    let p = legendre_p(l, m, phi);
    let pm1 = if l >= 1 && m < l { legendre_p(l - 1, m, phi) } else { 0.0 };
    Ok((l as f64 * phi.cos() * p - (l + m) as f64 * pm1) / phi.sin())
}

/// Values and φ-derivatives of `P_l^m(cos φ)` for `l = m..=l_max`.
pub fn legendre_column(m: usize, l_max: usize, phi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, s) = (phi.cos(), phi.sin());
    let mut vals = Vec::with_capacity(l_max + 1 - m);
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -(2.0 * k as f64 - 1.0) * s;
    }
    vals.push(pmm);
    if l_max > m {
        vals.push(x * (2 * m + 1) as f64 * pmm);
    }
    for l in m + 2..=l_max {
        let i = l - m;
        let next = ((2 * l - 1) as f64 * x * vals[i - 1] - (l + m - 1) as f64 * vals[i - 2]) / (l - m) as f64;
        vals.push(next);
    }
    let ders = (m..=l_max)
        .map(|l| {
            let i = l - m;
            let prev = if i >= 1 { vals[i - 1] } else { 0.0 };
            (l as f64 * x * vals[i] - (l + m) as f64 * prev) / s
        })
        .collect();
    (vals, ders)
}

/// `‖Y_l^m‖ = √(4π/(2l+1)·(l+m)!/(l−m)!)`, the `L²` norm of `P_l^m(cos φ)e^{imθ}` on the round sphere.
pub fn ylm_norm(l: i64, m: i64) -> Result<f64> {
    let am = m.abs();
    check(l, am)?;
    Ok(ylm_norm_sq(l as usize, am as usize).sqrt())
}

pub(crate) fn ylm_norm_sq(l: usize, m: usize) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio *= k as f64;
    }
    4.0 * std::f64::consts::PI / (2 * l + 1) as f64 * ratio
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_poly(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss–Legendre nodes (ascending) and weights on `[−1, 1]`.
///
/// Nodes come from the eigenvalues of the Jacobi matrix and are polished by Newton steps
/// on `P_n`; weights use `2/((1−x²)P_n'(x)²)` at the polished nodes.
pub fn gauss_legendre_nodes(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(FinlapError::InvalidConfig("Gauss–Legendre rule needs n ≥ 1".into()));
    }
    if n == 1 {
        return Ok((vec![0.0], vec![2.0]));
    }
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = legendre_poly(n, *x);
            let step = p / dp;
            *x -= step;
            if step.abs() < 1e-17 {
                break;
            }
        }
        let (_, dp) = legendre_poly(n, *x);
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    // exact antisymmetry of the rule
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

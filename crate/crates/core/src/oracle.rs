//! Brute-force eigenvalue oracle for small pencils, independent of the main solver.
//!
//! For `M` positive definite the number of eigenvalues of `S c = λ M c` below `σ` equals
//! the number of negative pivots in the `LDLᵀ` factorization of `S − σM` (Sylvester's law
//! of inertia). Bisection on that count isolates every eigenvalue.

use crate::error::{FinlapError, Result};
use crate::spectral::SymMatrix;

/// Number of eigenvalues strictly below `sigma`.
pub fn count_below(s: &SymMatrix, m: &SymMatrix, sigma: f64) -> usize {
    let n = s.n();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| s.get(i, j) - sigma * m.get(i, j)).collect()).collect();
    let scale = a.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let mut negative = 0;
    for k in 0..n {
        let mut d = a[k][k];
        if d == 0.0 {
            d = -f64::EPSILON * scale;
        }
        if d < 0.0 {
            negative += 1;
        }
        for i in k + 1..n {
            let f = a[i][k] / d;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..=i {
                a[i][j] -= f * a[k][j];
            }
        }
        for i in k + 1..n {
            for j in i + 1..n {
                a[i][j] = a[j][i];
            }
        }
    }
    negative
}

/// All eigenvalues, ascending, each located to absolute width `tol` by bisection.
pub fn bisection_eigenvalues(s: &SymMatrix, m: &SymMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = s.n();
    if m.n() != n {
        return Err(FinlapError::DimensionMismatch(n, m.n()));
    }
    let smax = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| s.get(i, j).abs()).fold(0.0, f64::max);
    let mmin = (0..n).map(|i| m.get(i, i)).fold(f64::INFINITY, f64::min);
    if !(mmin > 0.0) {
        return Err(FinlapError::NotPositiveDefinite);
    }
    let mut lo = -1.0;
    while count_below(s, m, lo) > 0 {
        lo *= 2.0;
        if lo < -1e300 {
            return Err(FinlapError::NoConvergence { iterations: 1000 });
        }
    }
    let mut hi = (n as f64 * smax / mmin).max(1.0);
    while count_below(s, m, hi) < n {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(FinlapError::NoConvergence { iterations: 1000 });
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if count_below(s, m, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

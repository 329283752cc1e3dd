//! Dense symmetric generalized eigenproblems `S c = λ M c` and Rayleigh quotients.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use serde::Serialize;

use crate::error::{FinlapError, Result};

/// Relative gap below which neighbouring eigenvalues share a multiplicity cluster.
pub const CLUSTER_REL_TOL: f64 = 1e-6;
/// Absolute floor of the cluster gap, for eigenvalues near zero.
pub const CLUSTER_ABS_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const MAX_QR_ITER: usize = 100_000;

/// A dense symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    /// From row-major data; rejects asymmetry above `1e-12·max(1, max|a_ij|)`.
    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(FinlapError::DimensionMismatch(data.len(), n * n));
        }
        Self::from_matrix(DMatrix::from_row_slice(n, n, data))
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(FinlapError::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let scale = m.amax().max(1.0);
        let asym = (&m - m.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(FinlapError::NotSymmetric { asymmetry: asym });
        }
        Ok(Self { m })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::from_matrix(DMatrix::from_fn(n, n, f))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self { m: DMatrix::from_diagonal(&DVector::from_row_slice(d)) }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn max_asymmetry(&self) -> f64 {
        (&self.m - self.m.transpose()).amax()
    }

    pub fn mul_vec(&self, c: &[f64]) -> Vec<f64> {
        (&self.m * DVector::from_column_slice(c)).as_slice().to_vec()
    }

    pub fn quad_form(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(u, &self.mul_vec(v))
    }

    /// Block-diagonal sum of several matrices.
    pub fn block_diagonal(blocks: &[SymMatrix]) -> Self {
        let n: usize = blocks.iter().map(SymMatrix::n).sum();
        let mut m = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            m.view_mut((off, off), (b.n(), b.n())).copy_from(&b.m);
            off += b.n();
        }
        Self { m }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A group of numerically equal eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub start: usize,
    pub size: usize,
    pub value: f64,
}

/// Eigenpairs in ascending order with their multiplicity clusters.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Coefficient columns, `M`-orthonormal; empty for closed-form spectra.
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    pub basis: String,
}

impl SpectralResult {
    pub fn from_values(mut eigenvalues: Vec<f64>, basis: impl Into<String>) -> Self {
        eigenvalues.sort_by(|a, b| a.total_cmp(b));
        let clusters = cluster(&eigenvalues);
        Self { eigenvalues, clusters, vectors: Vec::new(), basis: basis.into() }
    }

    /// Cluster size for every eigenvalue.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = vec![0; self.eigenvalues.len()];
        for c in &self.clusters {
            out[c.start..c.start + c.size].iter_mut().for_each(|m| *m = c.size);
        }
        out
    }

    /// Representative value of each cluster, ascending.
    pub fn distinct(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.value).collect()
    }
}

/// Group sorted eigenvalues whose neighbours differ by less than
/// `max(1e-6·|λ|, 1e-10)`.
pub fn cluster(sorted: &[f64]) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        match out.last_mut() {
            Some(c) if (v - sorted[i - 1]).abs() <= (CLUSTER_REL_TOL * v.abs()).max(CLUSTER_ABS_TOL) => {
                c.size += 1;
            }
            _ => out.push(Cluster { start: i, size: 1, value: v }),
        }
    }
    for c in &mut out {
        c.value = sorted[c.start..c.start + c.size].iter().sum::<f64>() / c.size as f64;
    }
    out
}

fn cholesky(m: &SymMatrix) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m.m.clone()).ok_or(FinlapError::NotPositiveDefinite)
}

/// The `k` smallest eigenpairs of `S c = λ M c`.
///
/// `M = LLᵀ` reduces the problem to `L⁻¹SL⁻ᵀ y = λ y`, which is tridiagonalized and
/// diagonalized by implicit QR; `c = L⁻ᵀy`.
pub fn solve_sym_gen_eig(s: &SymMatrix, m: &SymMatrix, k: usize) -> Result<SpectralResult> {
    let n = s.n();
    if m.n() != n {
        return Err(FinlapError::DimensionMismatch(s.n(), m.n()));
    }
    let chol = cholesky(m)?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&s.m).ok_or(FinlapError::NotPositiveDefinite)?;
    let c = l.solve_lower_triangular(&x.transpose()).ok_or(FinlapError::NotPositiveDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(c, f64::EPSILON, MAX_QR_ITER)
        .ok_or(FinlapError::NoConvergence { iterations: MAX_QR_ITER })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = k.min(n);
    let lt = l.transpose();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        eigenvalues.push(eig.eigenvalues[i]);
        let y = eig.eigenvectors.column(i).into_owned();
        let cvec = lt.solve_upper_triangular(&y).ok_or(FinlapError::NotPositiveDefinite)?;
        vectors.push(cvec.as_slice().to_vec());
    }
    let clusters = cluster(&eigenvalues);
    Ok(SpectralResult { eigenvalues, clusters, vectors, basis: String::new() })
}

/// `‖S c − λ M c‖ / ‖c‖`.
pub fn eigen_residual(s: &SymMatrix, m: &SymMatrix, lambda: f64, c: &[f64]) -> f64 {
    let sc = s.mul_vec(c);
    let mc = m.mul_vec(c);
    let r: f64 = sc.iter().zip(&mc).map(|(a, b)| (a - lambda * b).powi(2)).sum();
    r.sqrt() / dot(c, c).sqrt()
}

/// `cᵀSc / cᵀMc`.
pub fn rayleigh_quotient(s: &SymMatrix, m: &SymMatrix, c: &[f64]) -> Result<f64> {
    if c.iter().all(|v| *v == 0.0) {
        return Err(FinlapError::ZeroVector);
    }
    Ok(s.quad_form(c, c) / m.quad_form(c, c))
}

pub const RAYLEIGH_MAX_ITER: usize = 500;
const BLOCK_SIZE: usize = 4;

/// Minimize the Rayleigh quotient over vectors `M`-orthogonal to `orthogonal_to`, for `S`
/// positive semidefinite (an energy matrix).
///
/// Shift-invert block inverse iteration with `S + σM` and a Rayleigh–Ritz step on a
/// block of `BLOCK_SIZE` vectors; the constraint is imposed exactly at every step
/// through the projected solve `z − W G⁻¹ Uᵀ M z`, where `W = (S+σM)⁻¹MU` and `G = UᵀMW`.
pub fn minimize_rayleigh(s: &SymMatrix, m: &SymMatrix, orthogonal_to: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = s.n();
    if m.n() != n {
        return Err(FinlapError::DimensionMismatch(n, m.n()));
    }
    let trace = |a: &SymMatrix| (0..n).map(|i| a.get(i, i)).sum::<f64>();
    let sigma = 1e-3 * trace(s).abs().max(f64::MIN_POSITIVE) / trace(m);
    let shifted = SymMatrix { m: &s.m + &m.m * sigma };
    let chol = cholesky(&shifted)?;
    let solve = |b: &DVector<f64>| chol.solve(b);

    let u: Vec<DVector<f64>> = orthogonal_to.iter().map(|v| DVector::from_column_slice(v)).collect();
    let mu: Vec<DVector<f64>> = u.iter().map(|v| &m.m * v).collect();
    let w: Vec<DVector<f64>> = mu.iter().map(&solve).collect();
    let p = u.len();
    let g = DMatrix::from_fn(p, p, |i, j| u[i].dot(&(&m.m * &w[j])));
    let g_lu = g.lu();

    let project = |z: DVector<f64>| -> DVector<f64> {
        if p == 0 {
            return z;
        }
        let rhs = DVector::from_fn(p, |i, _| mu[i].dot(&z));
        let coef = g_lu.solve(&rhs).unwrap_or_else(|| DVector::zeros(p));
        let mut out = z;
        for j in 0..p {
            out -= &w[j] * coef[j];
        }
        out
    };
    let m_project = |z: DVector<f64>| -> DVector<f64> {
        if p == 0 {
            return z;
        }
        let gu = DMatrix::from_fn(p, p, |i, j| u[i].dot(&mu[j]));
        let rhs = DVector::from_fn(p, |i, _| mu[i].dot(&z));
        let coef = gu.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(p));
        let mut out = z;
        for j in 0..p {
            out -= &u[j] * coef[j];
        }
        out
    };

    // residual modulo span(MU)
    let remove_span = |r: DVector<f64>| -> DVector<f64> {
        if p == 0 {
            return r;
        }
        let gram = DMatrix::from_fn(p, p, |i, j| mu[i].dot(&mu[j]));
        let rhs = DVector::from_fn(p, |i, _| mu[i].dot(&r));
        let coef = gram.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(p));
        let mut out = r;
        for j in 0..p {
            out -= &mu[j] * coef[j];
        }
        out
    };

    let mdot = |a: &DVector<f64>, b: &DVector<f64>| a.dot(&(&m.m * b));
    // M-orthonormal basis of the span of `cols`, dropping near-dependent columns
    let orthonormalize = |cols: Vec<DVector<f64>>| -> Vec<DVector<f64>> {
        let mut out: Vec<DVector<f64>> = Vec::with_capacity(cols.len());
        for mut c in cols {
            let n0 = mdot(&c, &c).sqrt();
            for _ in 0..2 {
                for q in &out {
                    c -= q * mdot(q, &c);
                }
            }
            let nc = mdot(&c, &c).sqrt();
            if nc > 1e-10 * n0 && nc > 0.0 {
                out.push(c / nc);
            }
        }
        out
    };

    let b = BLOCK_SIZE.min(n.saturating_sub(p)).max(1);
    let start: Vec<DVector<f64>> = (0..b)
        .map(|k| m_project(DVector::from_fn(n, |i, _| 1.0 + 0.1 * ((i as f64 + 1.0) * (0.7 + k as f64)).sin())))
        .collect();
    let mut x = orthonormalize(start);
    if x.is_empty() {
        return Err(FinlapError::ZeroVector);
    }
    let mut lambda = mdot(&x[0], &x[0]).recip() * x[0].dot(&(&s.m * &x[0]));
    for _ in 0..RAYLEIGH_MAX_ITER {
        let z = orthonormalize(x.iter().map(|v| m_project(project(solve(&(&m.m * v))))).collect());
        if z.is_empty() {
            return Err(FinlapError::ZeroVector);
        }
        // Rayleigh–Ritz on the block
        let k = z.len();
        let h = DMatrix::from_fn(k, k, |i, j| z[i].dot(&(&s.m * &z[j])));
        let eig = SymmetricEigen::try_new((&h + h.transpose()) * 0.5, f64::EPSILON, MAX_QR_ITER)
            .ok_or(FinlapError::NoConvergence { iterations: MAX_QR_ITER })?;
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        x = order
            .iter()
            .map(|&c| z.iter().enumerate().fold(DVector::zeros(n), |acc, (i, zi)| acc + zi * eig.eigenvectors[(i, c)]))
            .collect();
        let new_lambda = eig.eigenvalues[order[0]];
        let res = remove_span(&s.m * &x[0] - &m.m * &x[0] * new_lambda).norm() / x[0].norm();
        let scale = s.m.amax().max(m.m.amax() * new_lambda.abs());
        let settled = (new_lambda - lambda).abs() <= 1e-15 * new_lambda.abs().max(1.0);
        lambda = new_lambda;
        if res <= 1e-11 * scale || (settled && res <= 1e-9 * scale) {
            return Ok((lambda, x[0].as_slice().to_vec()));
        }
    }
    Err(FinlapError::NoConvergence { iterations: RAYLEIGH_MAX_ITER })
}

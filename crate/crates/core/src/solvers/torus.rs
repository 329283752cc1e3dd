//! Torus spectra: the closed form for the Katok–Ziller torus and a Fourier–Galerkin
//! discretization for arbitrary metrics on the unit-square chart.

use std::f64::consts::PI;

use crate::error::{FinlapError, Result};
use crate::fiber::FiberQuadrature;
use crate::geometry::{Chart, FinslerMetric};
use crate::laplace::FinslerLaplacian;
use crate::spectral::{solve_sym_gen_eig, SpectralResult, SymMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusSpectrumRequest {
    pub eps: f64,
    pub p_max: u32,
    pub q_max: u32,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(FinlapError::InvalidConfig(format!("eps must lie in [0, 1), got {eps}")));
    }
    Ok(())
}

/// `(a11, a22)` of the Katok–Ziller torus.
pub fn kz_torus_coefficients(eps: f64) -> (f64, f64) {
    let r = (1.0 - eps * eps).sqrt();
    (2.0 * r * r * r / (1.0 + r), 2.0 * r * r / (1.0 + r))
}

/// `λ(p,q) = 4π²·2(1−ε²)/(1+√(1−ε²))·(√(1−ε²)p² + q²)`.
pub fn torus_eigenvalue(eps: f64, p: i64, q: i64) -> f64 {
    let (a11, a22) = kz_torus_coefficients(eps);
    4.0 * PI * PI * (a11 * (p * p) as f64 + a22 * (q * q) as f64)
}

/// All `λ(p,q)` with `|p| ≤ p_max`, `|q| ≤ q_max`, ascending.
pub fn torus_spectrum_closed_form(req: &TorusSpectrumRequest) -> Result<SpectralResult> {
    check_eps(req.eps)?;
    let (pm, qm) = (req.p_max as i64, req.q_max as i64);
    let mut vals = Vec::new();
    for p in -pm..=pm {
        for q in -qm..=qm {
            vals.push(torus_eigenvalue(req.eps, p, q));
        }
    }
    Ok(SpectralResult::from_values(vals, format!("closed form |p|<={pm}, |q|<={qm}")))
}

/// Real Fourier basis on `[0,1)`: `1, cos 2πpx, sin 2πpx (p < N/2), cos πNx`, with first
/// and second derivatives.
pub fn basis_1d(n: usize, x: f64) -> [Vec<f64>; 3] {
    let mut out = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut push = |f: [f64; 3]| (0..3).for_each(|i| out[i].push(f[i]));
    push([1.0, 0.0, 0.0]);
    for p in 1..n / 2 {
        let k = 2.0 * PI * p as f64;
        let (s, c) = (k * x).sin_cos();
        push([c, -k * s, -k * k * c]);
        push([s, k * c, -k * k * s]);
    }
    let k = PI * n as f64;
    let (s, c) = (k * x).sin_cos();
    push([c, -k * s, -k * k * c]);
    out
}

/// Stiffness and mass matrices of the tensor Fourier basis.
#[derive(Clone, Debug)]
pub struct TorusGalerkin {
    pub n: usize,
    pub stiffness: SymMatrix,
    pub mass: SymMatrix,
}

impl TorusGalerkin {
    /// Assemble with `n` basis functions per axis on a `2n × 2n` trapezoid grid.
    pub fn assemble<M: FinslerMetric>(lap: &FinslerLaplacian<M>, n: usize) -> Result<Self> {
        if lap.chart() != Chart::Torus {
            return Err(FinlapError::WrongChart("Fourier–Galerkin needs the torus chart"));
        }
        if n < 2 || n % 2 != 0 {
            return Err(FinlapError::InvalidConfig(format!("basis size per axis must be even and >= 2, got {n}")));
        }
        let g = 2 * n;
        let h = 1.0 / g as f64;
        let pts: Vec<[f64; 2]> = (0..g).flat_map(|i| (0..g).map(move |j| [i as f64 * h, j as f64 * h])).collect();
        let sym = lap.symbol_field(&pts)?;
        let wq = h * h;
        // c[term][ix*g + iy]
        let mut c = vec![vec![0.0; g * g]; 4];
        for (k, (a, w)) in sym.iter().enumerate() {
            c[0][k] = wq * a[0][0] * w;
            c[1][k] = wq * a[0][1] * w;
            c[2][k] = wq * a[1][1] * w;
            c[3][k] = wq * w;
        }
        let tab: Vec<[Vec<f64>; 3]> = (0..g).map(|i| basis_1d(n, i as f64 * h)).collect();
        let val = |p: usize, i: usize| tab[i][0][p];
        let der = |p: usize, i: usize| tab[i][1][p];

        let nn = n * n;
        let mut s = vec![0.0; nn * nn];
        let mut mm = vec![0.0; nn * nn];
        // Σ_{x,y} C(x,y) X1_p(x) X2_p'(x) Y1_q(y) Y2_q'(y) into target[(p,q),(p',q')]
        let contract = |target: &mut [f64], coef: &[f64], x1: &dyn Fn(usize, usize) -> f64, x2: &dyn Fn(usize, usize) -> f64, y1: &dyn Fn(usize, usize) -> f64, y2: &dyn Fn(usize, usize) -> f64| {
            let mut t = vec![0.0; n * n * g];
            for p in 0..n {
                for p2 in 0..n {
                    let row = &mut t[(p * n + p2) * g..(p * n + p2 + 1) * g];
                    for ix in 0..g {
                        let f = x1(p, ix) * x2(p2, ix);
                        if f == 0.0 {
                            continue;
                        }
                        let cr = &coef[ix * g..(ix + 1) * g];
                        for iy in 0..g {
                            row[iy] += f * cr[iy];
                        }
                    }
                }
            }
            let yy: Vec<f64> = (0..n)
                .flat_map(|q| (0..n).flat_map(move |q2| (0..g).map(move |iy| (q, q2, iy))))
                .map(|(q, q2, iy)| y1(q, iy) * y2(q2, iy))
                .collect();
            for p in 0..n {
                for p2 in 0..n {
                    let row = &t[(p * n + p2) * g..(p * n + p2 + 1) * g];
                    for q in 0..n {
                        for q2 in 0..n {
                            let ys = &yy[(q * n + q2) * g..(q * n + q2 + 1) * g];
                            let v: f64 = row.iter().zip(ys).map(|(a, b)| a * b).sum();
                            target[(p * n + q) * nn + p2 * n + q2] += v;
                        }
                    }
                }
            }
        };
        contract(&mut s, &c[0], &der, &der, &val, &val);
        contract(&mut s, &c[1], &der, &val, &val, &der);
        contract(&mut s, &c[1], &val, &der, &der, &val);
        contract(&mut s, &c[2], &val, &val, &der, &der);
        contract(&mut mm, &c[3], &val, &val, &val, &val);
        for i in 0..nn {
            for j in 0..i {
                let a = 0.5 * (s[i * nn + j] + s[j * nn + i]);
                s[i * nn + j] = a;
                s[j * nn + i] = a;
                let b = 0.5 * (mm[i * nn + j] + mm[j * nn + i]);
                mm[i * nn + j] = b;
                mm[j * nn + i] = b;
            }
        }
        Ok(Self { n, stiffness: SymMatrix::from_row_major(nn, &s)?, mass: SymMatrix::from_row_major(nn, &mm)? })
    }
}

/// The `k` smallest eigenvalues of `−Δ` from the Fourier–Galerkin discretization.
pub fn torus_spectrum_numerical<M: FinslerMetric>(
    metric: M,
    n: usize,
    k: usize,
    quad: FiberQuadrature,
) -> Result<SpectralResult> {
    let lap = FinslerLaplacian::new(metric, quad);
    let gal = TorusGalerkin::assemble(&lap, n)?;
    let mut res = solve_sym_gen_eig(&gal.stiffness, &gal.mass, k)?;
    res.basis = format!("real Fourier tensor basis, {n} per axis");
    Ok(res)
}

/// `K_kl = −∫ φ_k Δ^F φ_l w dx`, assembled from the full operator including the drift,
/// on a `2n × 2n` grid. Symmetric only as far as the operator is.
pub fn strong_form_matrix<M: FinslerMetric>(lap: &FinslerLaplacian<M>, n: usize) -> Result<Vec<Vec<f64>>> {
    let g = 2 * n;
    let h = 1.0 / g as f64;
    let pts: Vec<[f64; 2]> = (0..g).flat_map(|i| (0..g).map(move |j| [i as f64 * h, j as f64 * h])).collect();
    let coeffs = lap.coefficient_field(&pts)?;
    let tab: Vec<[Vec<f64>; 3]> = (0..g).map(|i| basis_1d(n, i as f64 * h)).collect();
    let nn = n * n;
    let mut k = vec![vec![0.0; nn]; nn];
    for (idx, c) in coeffs.iter().enumerate() {
        let (ix, iy) = (idx / g, idx % g);
        let (bx, by) = (&tab[ix], &tab[iy]);
        let wq = h * h * c.w;
        let lap_vals: Vec<f64> = (0..nn)
            .map(|l| {
                let (p, q) = (l / n, l % n);
                c.a11 * bx[2][p] * by[0][q]
                    + 2.0 * c.a12 * bx[1][p] * by[1][q]
                    + c.a22 * bx[0][p] * by[2][q]
                    + c.b1 * bx[1][p] * by[0][q]
                    + c.b2 * bx[0][p] * by[1][q]
            })
            .collect();
        for (kk, row) in k.iter_mut().enumerate() {
            let phi = bx[0][kk / n] * by[0][kk % n];
            if phi == 0.0 {
                continue;
            }
            for (l, v) in row.iter_mut().enumerate() {
                *v -= wq * phi * lap_vals[l];
            }
        }
    }
    Ok(k)
}

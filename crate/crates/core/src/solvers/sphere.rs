//! Per-azimuthal-mode Galerkin spectra on the sphere chart.
//!
//! When the coefficients depend on `φ` only and `a^{φθ} = 0`, the modes `e^{imθ}`
//! decouple. Each block uses the normalized basis `P_l^m(cos φ)/‖Y_l^m‖`, `l = m..=l_max`,
//! with Gauss–Legendre quadrature in `cos φ`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FinlapError, Result};
use crate::fiber::FiberQuadrature;
use crate::geometry::{Chart, FinslerMetric};
use crate::katok_ziller::kz_sphere;
use crate::fields::HarmonicSum;
use crate::laplace::{apply_laplacian, FinslerLaplacian};
use crate::special::{gauss_legendre_nodes, legendre_column, ylm_norm_sq};
use crate::spectral::{solve_sym_gen_eig, SpectralResult, SymMatrix};

pub const DEFAULT_L_MAX: usize = 30;
pub const DEFAULT_N_QUAD: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereSpectrumRequest {
    pub eps: f64,
    pub m: usize,
    pub l_max: usize,
    pub n_quad: usize,
    pub k: usize,
    pub fiber_nodes: usize,
}

impl SphereSpectrumRequest {
    pub fn new(eps: f64, m: usize) -> Self {
        Self { eps, m, l_max: DEFAULT_L_MAX, n_quad: DEFAULT_N_QUAD, k: usize::MAX, fiber_nodes: 256 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.eps) {
            return Err(FinlapError::InvalidConfig(format!("eps must lie in [0, 1), got {}", self.eps)));
        }
        if self.m > self.l_max {
            return Err(FinlapError::InvalidConfig(format!("m = {} exceeds l_max = {}", self.m, self.l_max)));
        }
        if self.n_quad == 0 || self.fiber_nodes == 0 {
            return Err(FinlapError::InvalidConfig("quadrature sizes must be positive".into()));
        }
        Ok(())
    }
}

/// Operator coefficients sampled at the Gauss nodes in `φ`.
#[derive(Clone, Debug)]
pub struct SphereProfile {
    pub phi: Vec<f64>,
    /// Gauss weights divided by `sin φ`, so that `Σ weight·g(φ_k) ≈ ∫₀^π g dφ`.
    pub weight: Vec<f64>,
    pub a_phiphi: Vec<f64>,
    pub a_thetatheta: Vec<f64>,
    pub w: Vec<f64>,
}

impl SphereProfile {
    pub fn from_laplacian<M: FinslerMetric>(lap: &FinslerLaplacian<M>, n_quad: usize) -> Result<Self> {
        if lap.chart() != Chart::Sphere {
            return Err(FinlapError::WrongChart("sphere Galerkin needs the sphere chart"));
        }
        let (t, wt) = gauss_legendre_nodes(n_quad)?;
        let phi: Vec<f64> = t.iter().map(|v| v.acos()).collect();
        let pts: Vec<[f64; 2]> = phi.iter().map(|p| [*p, 0.0]).collect();
        let sym = lap.symbol_field(&pts)?;
        for (p, (a, _)) in phi.iter().zip(&sym) {
            if a[0][1].abs() > 1e-12 * (a[0][0].abs() + a[1][1].abs()) {
                return Err(FinlapError::NonSeparable { phi: *p, a12: a[0][1] });
            }
        }
        Ok(Self {
            weight: wt.iter().zip(&phi).map(|(w, p)| w / p.sin()).collect(),
            a_phiphi: sym.iter().map(|(a, _)| a[0][0]).collect(),
            a_thetatheta: sym.iter().map(|(a, _)| a[1][1]).collect(),
            w: sym.iter().map(|(_, w)| *w).collect(),
            phi,
        })
    }

    /// Profile of the Katok–Ziller sphere.
    pub fn kz(eps: f64, n_quad: usize, fiber_nodes: usize) -> Result<Self> {
        let lap = FinslerLaplacian::new(kz_sphere(eps)?, FiberQuadrature::new(fiber_nodes)?);
        Self::from_laplacian(&lap, n_quad)
    }

    /// `∫∫ w dφ dθ`.
    pub fn volume(&self) -> f64 {
        2.0 * PI * self.weight.iter().zip(&self.w).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Stiffness and mass matrices of block `m`.
    pub fn block(&self, m: usize, l_max: usize) -> Result<(SymMatrix, SymMatrix)> {
        if m > l_max {
            return Err(FinlapError::InvalidIndex { l: l_max as i64, m: m as i64 });
        }
        let nb = l_max - m + 1;
        let norms: Vec<f64> = (m..=l_max).map(|l| ylm_norm_sq(l, m).sqrt()).collect();
        let mut s = vec![0.0; nb * nb];
        let mut mm = vec![0.0; nb * nb];
        let m2 = (m * m) as f64;
        for k in 0..self.phi.len() {
            let (mut p, mut dp) = legendre_column(m, l_max, self.phi[k]);
            for i in 0..nb {
                p[i] /= norms[i];
                dp[i] /= norms[i];
            }
            let base = 2.0 * PI * self.weight[k] * self.w[k];
            let cd = base * self.a_phiphi[k];
            let cv = base * m2 * self.a_thetatheta[k];
            for i in 0..nb {
                for j in 0..=i {
                    s[i * nb + j] += cd * dp[i] * dp[j] + cv * p[i] * p[j];
                    mm[i * nb + j] += base * p[i] * p[j];
                }
            }
        }
        for i in 0..nb {
            for j in 0..i {
                s[j * nb + i] = s[i * nb + j];
                mm[j * nb + i] = mm[i * nb + j];
            }
        }
        Ok((SymMatrix::from_row_major(nb, &s)?, SymMatrix::from_row_major(nb, &mm)?))
    }

    pub fn block_spectrum(&self, m: usize, l_max: usize, k: usize) -> Result<SpectralResult> {
        let (s, mm) = self.block(m, l_max)?;
        let mut res = solve_sym_gen_eig(&s, &mm, k)?;
        res.basis = format!("P_l^{m}(cos phi)/||Y_l^{m}||, l = {m}..={l_max}");
        Ok(res)
    }
}

/// The `k` smallest eigenvalues of `−Δ` restricted to the mode `e^{imθ}`.
pub fn sphere_spectrum_galerkin(req: &SphereSpectrumRequest) -> Result<SpectralResult> {
    req.validate()?;
    SphereProfile::kz(req.eps, req.n_quad, req.fiber_nodes)?.block_spectrum(req.m, req.l_max, req.k)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereEigen {
    pub value: f64,
    /// Signed azimuthal number; `±m` appear as separate entries.
    pub m: i64,
    /// `m +` position inside the block, the degree of the round-sphere harmonic the
    /// branch emanates from.
    pub l_guess: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereSpectrum {
    pub eps: f64,
    pub m_max: usize,
    pub l_max: usize,
    pub n_quad: usize,
    pub entries: Vec<SphereEigen>,
    pub result: SpectralResult,
}

/// Merge the blocks `m = 0..=m_max` into one spectrum, counting `m > 0` twice.
pub fn merge_blocks(profile: &SphereProfile, m_max: usize, l_max: usize, k: usize) -> Result<Vec<SphereEigen>> {
    let blocks: Vec<(usize, SpectralResult)> = (0..=m_max.min(l_max))
        .into_par_iter()
        .map(|m| profile.block_spectrum(m, l_max, usize::MAX).map(|r| (m, r)))
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for (m, r) in blocks {
        for (i, &value) in r.eigenvalues.iter().enumerate() {
            let l_guess = m + i;
            entries.push(SphereEigen { value, m: m as i64, l_guess });
            if m > 0 {
                entries.push(SphereEigen { value, m: -(m as i64), l_guess });
            }
        }
    }
    entries.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.l_guess.cmp(&b.l_guess)).then(b.m.cmp(&a.m)));
    entries.truncate(k);
    Ok(entries)
}

pub fn sphere_spectrum_merged(
    eps: f64,
    m_max: usize,
    l_max: usize,
    n_quad: usize,
    k: usize,
    fiber_nodes: usize,
) -> Result<SphereSpectrum> {
    SphereSpectrumRequest { eps, m: m_max, l_max, n_quad, k, fiber_nodes }.validate()?;
    let profile = SphereProfile::kz(eps, n_quad, fiber_nodes)?;
    let entries = merge_blocks(&profile, m_max, l_max, k)?;
    let result = SpectralResult::from_values(
        entries.iter().map(|e| e.value).collect(),
        format!("merged azimuthal blocks m = -{m_max}..={m_max}, l_max = {l_max}"),
    );
    Ok(SphereSpectrum { eps, m_max, l_max, n_quad, entries, result })
}

/// `K_ij = −2π∫ P̃_i Δ^F(P̃_j cos mθ)|_{θ=0} w dφ` from the full operator, drift included.
pub fn strong_form_block<M: FinslerMetric>(
    lap: &FinslerLaplacian<M>,
    m: usize,
    l_max: usize,
    n_quad: usize,
) -> Result<Vec<Vec<f64>>> {
    let (t, wt) = gauss_legendre_nodes(n_quad)?;
    let nb = l_max + 1 - m;
    let norms: Vec<f64> = (m..=l_max).map(|l| ylm_norm_sq(l, m).sqrt()).collect();
    let mut k = vec![vec![0.0; nb]; nb];
    for (tk, wk) in t.iter().zip(&wt) {
        let phi = tk.acos();
        let c = lap.coefficients_at([phi, 0.0])?;
        let (p, _) = legendre_column(m, l_max, phi);
        let lp: Vec<f64> = (m..=l_max)
            .map(|l| apply_laplacian(&c, &HarmonicSum::ylm(l, m), [phi, 0.0]))
            .collect();
        let base = 2.0 * PI * wk / phi.sin() * c.w;
        for i in 0..nb {
            for j in 0..nb {
                k[i][j] -= base * p[i] / norms[i] * lp[j] / norms[j];
            }
        }
    }
    Ok(k)
}

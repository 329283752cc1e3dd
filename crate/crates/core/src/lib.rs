//! Finsler–Laplace operators on surfaces.
//!
//! A [`FinslerMetric`] on a two-dimensional chart determines a Hilbert form and its
//! Reeb field on the circle bundle of rays. Averaging the squared Reeb derivative over
//! each fiber against the normalized angle density gives a second-order operator
//! `a^{ij}∂_{ij} + b^i∂_i` which is symmetric for the fiber volume `w`. The crate
//! assembles those coefficients by fiber quadrature, builds Galerkin discretizations on
//! the torus and the sphere, and solves the resulting generalized eigenproblems.
//!
//! Katok–Ziller (Randers) deformations of the flat torus and the round sphere are
//! provided as presets. The runnable programs under `examples/` walk through each
//! capability; the `finlap` binary exposes the same pipelines from the command line.

pub mod cli;
pub mod error;
pub mod export;
pub mod fiber;
pub mod fields;
pub mod geometry;
pub mod grid;
pub mod katok_ziller;
pub mod laplace;
pub mod oracle;
pub mod solvers;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{FinlapError, Result};
pub use fiber::{angle_and_volume, liouville_density, total_volume, AngleVolume, FiberQuadrature};
pub use geometry::{
    finsler_norm, hilbert_form, reeb_field, vertical_derivative, Chart, ChartPoint, FinslerMetric,
    ReebVector, TangentVector,
};
pub use katok_ziller::{kz_sphere, kz_torus, KatokZiller, RandersData};
pub use laplace::{FinslerLaplacian, OperatorCoefficients, SymbolMetric};
pub use spectral::{solve_sym_gen_eig, SpectralResult, SymMatrix};

use num_dual::DualNum;

/// Number types the geometric pipeline is generic over: `f64` and the dual numbers
/// used for automatic differentiation.
pub trait Scalar: DualNum<Primitive = f64> + Copy + Send + Sync {}

impl<T: DualNum<Primitive = f64> + Copy + Send + Sync> Scalar for T {}

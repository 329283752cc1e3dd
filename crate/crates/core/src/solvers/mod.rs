//! Spectral pipelines for the torus and the sphere presets.

pub mod perturbation;
pub mod sphere;
pub mod torus;

pub use perturbation::{perturbation_coefficient, perturbation_slope_check, SlopeCheck};
pub use sphere::{sphere_spectrum_galerkin, sphere_spectrum_merged, SphereProfile, SphereSpectrum, SphereSpectrumRequest};
pub use torus::{
    torus_eigenvalue, torus_spectrum_closed_form, torus_spectrum_numerical, TorusGalerkin, TorusSpectrumRequest,
};

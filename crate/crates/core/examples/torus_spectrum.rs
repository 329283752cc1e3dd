//! Katok–Ziller torus: closed-form spectrum against a Fourier–Galerkin solve.

use finlap::fiber::FiberQuadrature;
use finlap::solvers::torus::{torus_spectrum_closed_form, torus_spectrum_numerical, TorusSpectrumRequest};
use finlap::{kz_torus, Result};

fn main() -> Result<()> {
    let eps = 0.5;
    let exact = torus_spectrum_closed_form(&TorusSpectrumRequest { eps, p_max: 4, q_max: 4 })?;
    let numeric = torus_spectrum_numerical(kz_torus(eps)?, 16, 30, FiberQuadrature::new(128)?)?;

    println!("eps = {eps}, {}", numeric.basis);
    println!("{:>4} {:>20} {:>20} {:>10}", "i", "closed form", "galerkin", "rel err");
    for (i, (a, b)) in exact.eigenvalues.iter().zip(&numeric.eigenvalues).enumerate() {
        let err = if *a == 0.0 { b.abs() } else { ((a - b) / a).abs() };
        println!("{i:>4} {a:>20.12} {b:>20.12} {err:>10.2e}");
    }
    Ok(())
}

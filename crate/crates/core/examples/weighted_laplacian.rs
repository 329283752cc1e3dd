//! The Finsler–Laplacian equals the weighted Laplacian of its symbol metric and volume;
//! conjugating by the amplitude leaves a Schrödinger potential, zero on the torus preset.

use finlap::fields::{HarmonicSum, TrigPoly};
use finlap::laplace::{schrodinger_potential, schrodinger_potential_fd, weighted_laplacian};
use finlap::{kz_sphere, kz_torus, ChartPoint, FinslerLaplacian, Result};

fn main() -> Result<()> {
    let torus = FinslerLaplacian::with_default_quadrature(kz_torus(0.4)?);
    let f = TrigPoly::single(1, 2, 0.7, -0.3);
    let x = [0.21, 0.64];
    let direct = torus.apply(&f, &ChartPoint::torus(x[0], x[1]))?;
    println!("torus: apply {direct:.12}, weighted {:.12}", weighted_laplacian(&torus, &f, x)?);
    println!("torus: V = {:.3e}", schrodinger_potential(&torus, x)?);

    let sphere = FinslerLaplacian::with_default_quadrature(kz_sphere(0.4)?);
    let g = HarmonicSum::ylm(2, 1);
    for phi in [0.4, 1.0, 1.5707963267948966] {
        let x = [phi, 0.3];
        let direct = sphere.apply(&g, &ChartPoint::sphere(phi, 0.3)?)?;
        println!(
            "sphere phi {phi:.3}: apply {direct:.10}, weighted {:.10}, V {:.8} (fd {:.8})",
            weighted_laplacian(&sphere, &g, x)?,
            schrodinger_potential(&sphere, x)?,
            schrodinger_potential_fd(&sphere, x, 1e-3)?
        );
    }
    Ok(())
}

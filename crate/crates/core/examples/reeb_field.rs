//! Hilbert form and Reeb field along one fiber of the sphere preset, with the contact
//! residuals `A(X) − 1` and `i_X dA` from finite differences.

use std::f64::consts::PI;

use finlap::geometry::contact_residuals;
use finlap::{hilbert_form, kz_sphere, reeb_field, ChartPoint, Result};

fn main() -> Result<()> {
    let metric = kz_sphere(0.4)?;
    let x = ChartPoint::sphere(1.1, 0.3)?;
    for k in 0..8 {
        let psi = 2.0 * PI * k as f64 / 8.0;
        let a = hilbert_form(&metric, &x, psi)?;
        let r = reeb_field(&metric, &x, psi)?;
        let res = contact_residuals(&metric, &x, psi, 1e-5)?;
        let worst = res.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "psi {psi:.3}  A = ({:+.6}, {:+.6})  X = ({:+.6}, {:+.6}, {:+.6})  residual {worst:.1e}",
            a[0], a[1], r.x1, r.x2, r.psi
        );
    }
    Ok(())
}

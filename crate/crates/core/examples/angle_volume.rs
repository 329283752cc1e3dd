//! Angle density on one fiber and the total Finsler volume of the sphere preset.

use std::f64::consts::PI;

use finlap::grid::BaseGrid;
use finlap::{angle_and_volume, kz_sphere, total_volume, ChartPoint, FiberQuadrature, Result};

fn main() -> Result<()> {
    let quad = FiberQuadrature::new(64)?;
    for eps in [0.0, 0.3, 0.6] {
        let metric = kz_sphere(eps)?;
        let av = angle_and_volume(&metric, &ChartPoint::sphere(PI / 2.0, 0.0)?, &quad)?;
        let (lo, hi) = av.rho.iter().fold((f64::MAX, f64::MIN), |(a, b), &r| (a.min(r), b.max(r)));
        let vol = total_volume(&metric, &BaseGrid::sphere(32, 4)?, &quad)?;
        println!(
            "eps {eps}: w(equator) = {:.6}, rho in [{lo:.4}, {hi:.4}], int rho = {:.15}, vol = {vol:.12} (4 pi/(1-eps^2) = {:.12})",
            av.w,
            av.rho_integral(),
            4.0 * PI / (1.0 - eps * eps)
        );
    }
    Ok(())
}

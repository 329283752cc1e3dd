//! First nonzero eigenvalue of the Katok–Ziller sphere and the product with its volume.

use std::f64::consts::PI;

use finlap::solvers::sphere::sphere_spectrum_merged;
use finlap::Result;

fn main() -> Result<()> {
    println!("{:>5} {:>14} {:>14} {:>14} {:>12}", "eps", "lambda1", "2-2eps^2", "lambda1*vol", "8 pi");
    for eps in [0.0, 0.1, 0.3, 0.5, 0.7] {
        let spec = sphere_spectrum_merged(eps, 3, 20, 80, 8, 128)?;
        let lambda1 = spec.result.distinct()[1];
        let vol = 4.0 * PI / (1.0 - eps * eps);
        println!("{eps:>5} {lambda1:>14.10} {:>14.10} {:>14.10} {:>12.8}", 2.0 - 2.0 * eps * eps, lambda1 * vol, 8.0 * PI);
    }

    let spec = sphere_spectrum_merged(0.3, 3, 20, 80, 12, 128)?;
    println!("\neps = 0.3, lowest merged eigenvalues:");
    for e in &spec.entries {
        println!("  m = {:>2}  l = {:>2}  {:.10}", e.m, e.l_guess, e.value);
    }
    Ok(())
}

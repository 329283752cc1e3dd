//! Gauss–Legendre rules, associated Legendre functions and the orthogonality of the
//! normalized harmonics.

use finlap::special::{assoc_legendre, gauss_legendre_nodes, ylm_norm};
use finlap::Result;

fn main() -> Result<()> {
    let (x, w) = gauss_legendre_nodes(8)?;
    for (xi, wi) in x.iter().zip(&w) {
        println!("node {xi:+.16}  weight {wi:.16}");
    }
    for k in [2, 8, 14, 15, 16] {
        let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
        let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
        println!("int x^{k}: {q:.16} exact {exact:.16}");
    }

    let (t, wt) = gauss_legendre_nodes(40)?;
    println!("\n<Y_l^m, Y_l'^m> for m = 2:");
    for l in 2..6i64 {
        let row: Vec<String> = (2..6i64)
            .map(|lp| {
                let mut s = 0.0;
                for (ti, wi) in t.iter().zip(&wt) {
                    let phi = ti.acos();
                    s += wi * assoc_legendre(l, 2, phi).unwrap() * assoc_legendre(lp, 2, phi).unwrap();
                }
                format!("{:+.2e}", 2.0 * std::f64::consts::PI * s / (ylm_norm(l, 2).unwrap() * ylm_norm(lp, 2).unwrap()))
            })
            .collect();
        println!("  l = {l}: {}", row.join("  "));
    }
    Ok(())
}

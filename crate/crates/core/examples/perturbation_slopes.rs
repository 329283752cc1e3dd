//! ε² slopes of sphere eigenvalue branches, extrapolated to ε = 0 and compared with the
//! closed-form perturbation coefficient.

use finlap::solvers::perturbation::perturbation_slope_check;
use finlap::Result;

fn main() -> Result<()> {
    let eps = [0.02, 0.04];
    println!("{:>3} {:>3} {:>14} {:>14} {:>10}", "l", "m", "numeric", "formula", "rel err");
    for (l, m) in [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 0), (3, 3)] {
        let c = perturbation_slope_check(l, m, &eps)?;
        println!("{l:>3} {m:>3} {:>14.8} {:>14.8} {:>10.2e}", c.numeric_slope, c.formula_value, c.rel_err);
    }
    Ok(())
}

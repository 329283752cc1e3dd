//! Min-max by constrained Rayleigh minimization against the full dense solve and the
//! inertia-count bisection.

use finlap::oracle::bisection_eigenvalues;
use finlap::solvers::sphere::SphereProfile;
use finlap::spectral::{minimize_rayleigh, solve_sym_gen_eig, SymMatrix};
use finlap::Result;

fn main() -> Result<()> {
    let profile = SphereProfile::kz(0.3, 60, 128)?;
    let (s0, m0) = profile.block(0, 8)?;
    let (s1, m1) = profile.block(1, 8)?;
    let s = SymMatrix::block_diagonal(&[s0, s1]);
    let m = SymMatrix::block_diagonal(&[m0, m1]);

    let (lambda0, u0) = minimize_rayleigh(&s, &m, &[])?;
    let (lambda1, u1) = minimize_rayleigh(&s, &m, &[u0.clone()])?;
    let (lambda2, _) = minimize_rayleigh(&s, &m, &[u0, u1])?;
    println!("successive minima: {lambda0:.3e} {lambda1:.12} {lambda2:.12}");

    let dense = solve_sym_gen_eig(&s, &m, 4)?;
    println!("dense solve:       {:?}", dense.eigenvalues);
    let bis = bisection_eigenvalues(&s, &m, 1e-12)?;
    println!("bisection:         {:?}", &bis[..4]);
    Ok(())
}

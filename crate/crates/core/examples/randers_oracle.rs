//! The Katok–Ziller norm in closed form against Newton inversion of the dual Hamiltonian.

use finlap::katok_ziller::{kz_dual_hamiltonian, legendre_inversion_oracle, FiberParam, KatokZiller};
use finlap::fields::{CoordinateField1, FlatTorus};
use finlap::{finsler_norm, ChartPoint, RandersData, Result, TangentVector};

fn main() -> Result<()> {
    let data = RandersData { g: FlatTorus, v: CoordinateField1, eps: 0.5 };
    let metric = KatokZiller::with_param(data, FiberParam::ChartAngle)?;
    let x = ChartPoint::torus(0.3, 0.7);

    for (v1, v2) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.6, -0.8), (3.0, 4.0)] {
        let v = TangentVector::new(v1, v2);
        let closed = finsler_norm(&metric, &x, &v);
        let newton = legendre_inversion_oracle(&data, &x, &v)?;
        println!("v = ({v1:>4}, {v2:>4})  F = {closed:.15}  Newton = {newton:.15}  diff = {:.1e}", closed - newton);
    }
    println!("H(p = (1, 0)) = {}", kz_dual_hamiltonian(&data, &x, [1.0, 0.0]));
    Ok(())
}

//! Rescaling the metric by `e^f` multiplies the operator coefficients by `e^{-2f}` and the
//! volume density by `e^{2f}`.

use finlap::fields::{ScalarField, TrigPoly};
use finlap::laplace::conformal_rescale;
use finlap::{kz_torus, ChartPoint, FinslerLaplacian, Result};

fn main() -> Result<()> {
    let f = TrigPoly::cos_axis(0, 1, 0.3).plus(TrigPoly::sin_axis(1, 1, 0.2));
    let base = FinslerLaplacian::with_default_quadrature(kz_torus(0.5)?);
    let scaled = FinslerLaplacian::with_default_quadrature(conformal_rescale(kz_torus(0.5)?, f.clone()));

    for (x, y) in [(0.1, 0.2), (0.37, 0.81), (0.66, 0.05)] {
        let p = ChartPoint::torus(x, y);
        let (c, cf) = (base.coefficients(&p)?, scaled.coefficients(&p)?);
        let s = (-2.0 * f.eval([x, y])).exp();
        println!(
            "({x}, {y}): a11 {:.3e}  a22 {:.3e}  b1 {:.3e}  w {:.3e}",
            cf.a11 - s * c.a11,
            cf.a22 - s * c.a22,
            cf.b1 - s * c.b1,
            cf.w - c.w / s
        );
    }
    Ok(())
}

use std::f64::consts::PI;

use approx::assert_relative_eq;
use finlap::fields::{RoundSphere, Riemannian, TrigPoly};
use finlap::grid::BaseGrid;
use finlap::laplace::conformal_rescale;
use finlap::{angle_and_volume, kz_sphere, kz_torus, liouville_density, total_volume, ChartPoint, FiberQuadrature};
use proptest::prelude::*;

#[test]
fn liouville_density_values() {
    let h = liouville_density(&kz_torus(0.5).unwrap(), &ChartPoint::torus(0.3, 0.3), 0.0).unwrap();
    assert_relative_eq!(h, 0.75f64.powf(-1.5) * 0.5, max_relative = 1e-13);

    // 0.91^{-3/2}·0.7 = 0.806373...
    let h = liouville_density(&kz_sphere(0.3).unwrap(), &ChartPoint::sphere(PI / 2.0, 0.0).unwrap(), 0.0).unwrap();
    assert_relative_eq!(h, 0.91f64.powf(-1.5) * 0.7, max_relative = 1e-13);
    assert_relative_eq!(h, 0.806373, max_relative = 1e-6);

    let h = liouville_density(&kz_sphere(0.0).unwrap(), &ChartPoint::sphere(PI / 4.0, 2.0).unwrap(), 1.0).unwrap();
    assert_relative_eq!(h, (PI / 4.0).sin(), max_relative = 1e-13);
}

#[test]
fn total_volume_values() {
    let quad = FiberQuadrature::new(64).unwrap();
    let grid = BaseGrid::sphere(40, 4).unwrap();
    let v = total_volume(&kz_sphere(0.5).unwrap(), &grid, &quad).unwrap();
    assert_relative_eq!(v, 4.0 * PI / 0.75, max_relative = 1e-12);
    let v = total_volume(&kz_sphere(0.0).unwrap(), &grid, &quad).unwrap();
    assert_relative_eq!(v, 4.0 * PI, max_relative = 1e-12);
    let v = total_volume(&kz_torus(0.5).unwrap(), &BaseGrid::torus(4), &quad).unwrap();
    assert_relative_eq!(v, 0.75f64.powf(-1.5), max_relative = 1e-12);
    assert_relative_eq!(v, 1.539601, max_relative = 1e-6);
}

#[test]
fn riemannian_volume_density_is_area_element() {
    let quad = FiberQuadrature::default();
    for phi in [0.3, 1.0, 2.2] {
        let av = angle_and_volume(&Riemannian(RoundSphere), &ChartPoint::sphere(phi, 0.0).unwrap(), &quad).unwrap();
        assert_relative_eq!(av.w, phi.sin(), max_relative = 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rho_integrates_to_two_pi(eps in 0.0..0.9f64, phi in 0.05..3.09f64, theta in 0.0..2.0 * PI) {
        let av = angle_and_volume(&kz_sphere(eps).unwrap(), &ChartPoint::sphere(phi, theta).unwrap(), &FiberQuadrature::default()).unwrap();
        prop_assert!((av.rho_integral() - 2.0 * PI).abs() < 1e-12);
        prop_assert!(av.rho.iter().all(|r| *r > 0.0));
    }

    #[test]
    fn fiber_resolution_does_not_change_the_data(eps in 0.0..0.9f64, x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let m = kz_torus(eps).unwrap();
        let p = ChartPoint::torus(x, y);
        let a = angle_and_volume(&m, &p, &FiberQuadrature::new(128).unwrap()).unwrap();
        let b = angle_and_volume(&m, &p, &FiberQuadrature::new(256).unwrap()).unwrap();
        prop_assert!((a.w - b.w).abs() < 1e-12 * b.w);
        for (k, r) in a.rho.iter().enumerate() {
            prop_assert!((r - b.rho[2 * k]).abs() < 1e-12);
        }
    }

    #[test]
    fn conformal_factor_keeps_angle_and_scales_volume(x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let f = TrigPoly::cos_axis(0, 1, 0.3).plus(TrigPoly::sin_axis(1, 1, 0.2));
        let ef = (0.3 * (2.0 * PI * x).cos() + 0.2 * (2.0 * PI * y).sin()).exp();
        let quad = FiberQuadrature::new(64).unwrap();
        let p = ChartPoint::torus(x, y);
        let a = angle_and_volume(&kz_torus(0.5).unwrap(), &p, &quad).unwrap();
        let b = angle_and_volume(&conformal_rescale(kz_torus(0.5).unwrap(), f), &p, &quad).unwrap();
        prop_assert!((b.w - ef * ef * a.w).abs() < 1e-10 * b.w);
        for (r, s) in a.rho.iter().zip(&b.rho) {
            prop_assert!((r - s).abs() < 1e-10);
        }
    }
}

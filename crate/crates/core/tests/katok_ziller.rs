use std::f64::consts::PI;

use approx::assert_relative_eq;
use finlap::fields::{lie_derivative_fd, AnisotropicTorus, CoordinateField1, CoordinateField2, FlatTorus, RoundSphere};
use finlap::katok_ziller::{eps_bound, kz_dual_hamiltonian, kz_metric, legendre_inversion_oracle};
use finlap::{finsler_norm, kz_sphere, kz_torus, ChartPoint, FinlapError, RandersData, TangentVector};
use proptest::prelude::*;

fn torus_data(eps: f64) -> RandersData<FlatTorus, CoordinateField1> {
    RandersData { g: FlatTorus, v: CoordinateField1, eps }
}

fn sphere_data(eps: f64) -> RandersData<RoundSphere, CoordinateField2> {
    RandersData { g: RoundSphere, v: CoordinateField2, eps }
}

#[test]
fn torus_closed_form() {
    let m = kz_metric(torus_data(0.5)).unwrap();
    let x = ChartPoint::torus(0.2, 0.3);
    for (a, b) in [(1.0f64, 0.0f64), (0.3, -0.7), (-2.0, 1.5)] {
        let f = ((a * a + 0.75 * b * b).sqrt() - 0.5 * a) / 0.75;
        assert_relative_eq!(finsler_norm(&m, &x, &TangentVector::new(a, b)), f, max_relative = 1e-14);
    }
}

#[test]
fn zero_eps_is_riemannian() {
    let m = kz_sphere(0.0).unwrap();
    let x = ChartPoint::sphere(0.8, 0.0).unwrap();
    let v = TangentVector::new(0.6, 0.8 / 0.8f64.sin());
    assert_relative_eq!(finsler_norm(&m, &x, &v), 1.0, max_relative = 1e-14);
}

#[test]
fn dual_hamiltonian_values() {
    let x = ChartPoint::torus(0.0, 0.0);
    assert_relative_eq!(kz_dual_hamiltonian(&torus_data(0.5), &x, [1.0, 0.0]), 1.5, max_relative = 1e-15);
    assert_relative_eq!(kz_dual_hamiltonian(&torus_data(0.0), &x, [3.0, 4.0]), 5.0, max_relative = 1e-15);
    assert_eq!(kz_dual_hamiltonian(&torus_data(0.5), &x, [0.0, 0.0]), 0.0);
}

#[test]
fn oracle_examples() {
    let x = ChartPoint::torus(0.5, 0.5);
    let v = legendre_inversion_oracle(&torus_data(0.5), &x, &TangentVector::new(1.0, 0.0)).unwrap();
    assert_relative_eq!(v, 2.0 / 3.0, max_relative = 1e-10);
    let v = legendre_inversion_oracle(&torus_data(0.0), &x, &TangentVector::new(0.6, 0.8)).unwrap();
    assert_relative_eq!(v, 1.0, max_relative = 1e-10);

    let x = ChartPoint::sphere(PI / 3.0, 0.0).unwrap();
    let v = TangentVector::new(0.0, 1.0);
    let oracle = legendre_inversion_oracle(&sphere_data(0.3), &x, &v).unwrap();
    assert_relative_eq!(oracle, finsler_norm(&kz_sphere(0.3).unwrap(), &x, &v), max_relative = 1e-10);
}

#[test]
fn eps_guard() {
    assert_relative_eq!(eps_bound(&FlatTorus, &CoordinateField1), 0.95, max_relative = 1e-12);
    assert!(matches!(kz_torus(0.95), Err(FinlapError::ConvexityViolation { .. })));
    assert!(matches!(kz_torus(-0.1), Err(FinlapError::ConvexityViolation { .. })));
    assert!(matches!(kz_sphere(0.96), Err(FinlapError::ConvexityViolation { .. })));
    assert!(kz_sphere(0.9).is_ok());
}

#[test]
fn presets_are_killing_fields() {
    for x in [[0.1, 0.2], [0.5, 0.9], [0.77, 0.33]] {
        let l = lie_derivative_fd(&FlatTorus, &CoordinateField1, x, 1e-4);
        assert!(l.iter().flatten().all(|v| v.abs() < 1e-8));
    }
    for x in [[0.4, 0.2], [1.5, 3.0], [2.7, 5.5]] {
        let l = lie_derivative_fd(&RoundSphere, &CoordinateField2, x, 1e-4);
        assert!(l.iter().flatten().all(|v| v.abs() < 1e-8), "{l:?}");
    }
    let l = lie_derivative_fd(&AnisotropicTorus::default(), &CoordinateField1, [0.1, 0.2], 1e-4);
    assert!(l.iter().flatten().any(|v| v.abs() > 1e-2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn torus_oracle_agrees(eps in 0.0..0.9f64, x in 0.0..1.0f64, y in 0.0..1.0f64, a in -PI..PI, r in 0.1..10.0f64) {
        let p = ChartPoint::torus(x, y);
        let v = TangentVector::new(r * a.cos(), r * a.sin());
        let f = finsler_norm(&kz_torus(eps).unwrap(), &p, &v);
        let o = legendre_inversion_oracle(&torus_data(eps), &p, &v).unwrap();
        prop_assert!((f - o).abs() < 1e-10 * f);
    }

    #[test]
    fn sphere_oracle_agrees(eps in 0.0..0.9f64, phi in 0.05..3.09f64, a in -PI..PI, r in 0.1..10.0f64) {
        let p = ChartPoint::sphere(phi, 0.0).unwrap();
        let v = TangentVector::new(r * a.cos(), r * a.sin());
        let f = finsler_norm(&kz_sphere(eps).unwrap(), &p, &v);
        let o = legendre_inversion_oracle(&sphere_data(eps), &p, &v).unwrap();
        prop_assert!((f - o).abs() < 1e-10 * f);
    }

    #[test]
    fn odd_part_is_linear(eps in 0.0..0.9f64, phi in 0.05..3.09f64, a in -PI..PI) {
        let m = kz_sphere(eps).unwrap();
        let p = ChartPoint::sphere(phi, 1.0).unwrap();
        let (v, w) = (TangentVector::new(a.cos(), a.sin()), TangentVector::new(-a.cos(), -a.sin()));
        let s2 = phi.sin().powi(2);
        let odd = finsler_norm(&m, &p, &v) - finsler_norm(&m, &p, &w);
        let expected = -2.0 * eps * s2 * a.sin() / (1.0 - eps * eps * s2);
        prop_assert!((odd - expected).abs() < 1e-12);
    }
}

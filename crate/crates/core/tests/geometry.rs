use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use finlap::fields::{FlatTorus, Riemannian, RoundSphere};
use finlap::geometry::{contact_residuals, vertical_derivative_fd};
use finlap::{
    finsler_norm, hilbert_form, kz_sphere, kz_torus, reeb_field, vertical_derivative, ChartPoint, FinlapError,
    TangentVector,
};
use proptest::prelude::*;

#[test]
fn euclidean_norm() {
    let v = TangentVector::new(3.0, 4.0);
    assert_abs_diff_eq!(finsler_norm(&Riemannian(FlatTorus), &ChartPoint::torus(0.2, 0.4), &v), 5.0, epsilon = 1e-15);
}

#[test]
fn kz_torus_norm_values() {
    let x = ChartPoint::torus(0.3, 0.9);
    let e = TangentVector::new(1.0, 0.0);
    assert_abs_diff_eq!(finsler_norm(&kz_torus(0.0).unwrap(), &x, &e), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(finsler_norm(&kz_torus(0.5).unwrap(), &x, &e), 2.0 / 3.0, epsilon = 1e-15);
}

#[test]
fn vertical_derivative_values() {
    let x = ChartPoint::torus(0.1, 0.1);
    let p = vertical_derivative(&Riemannian(FlatTorus), &x, &TangentVector::new(1.0, 0.0)).unwrap();
    assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-15);

    let m = kz_torus(0.5).unwrap();
    let p = vertical_derivative(&m, &x, &TangentVector::new(0.0, 1.0)).unwrap();
    assert_abs_diff_eq!(p[0], -2.0 / 3.0, epsilon = 1e-14);
    assert_abs_diff_eq!(p[1], 1.0 / 0.75f64.sqrt(), epsilon = 1e-14);
    let q = vertical_derivative(&m, &x, &TangentVector::new(0.0, 2.0)).unwrap();
    assert_abs_diff_eq!(p[0], q[0], epsilon = 1e-15);
    assert_abs_diff_eq!(p[1], q[1], epsilon = 1e-15);
}

#[test]
fn zero_vector_rejected() {
    let r = vertical_derivative(&kz_torus(0.2).unwrap(), &ChartPoint::torus(0.0, 0.0), &TangentVector::new(0.0, 0.0));
    assert!(matches!(r, Err(FinlapError::ZeroVector)));
}

#[test]
fn pole_rejected() {
    assert!(matches!(ChartPoint::sphere(0.0, 1.0), Err(FinlapError::PoleSingularity { .. })));
    assert!(matches!(ChartPoint::sphere(PI, 1.0), Err(FinlapError::PoleSingularity { .. })));
}

#[test]
fn hilbert_form_values() {
    let x = ChartPoint::torus(0.4, 0.6);
    let a = hilbert_form(&kz_torus(0.0).unwrap(), &x, 0.0).unwrap();
    assert_abs_diff_eq!(a[0], 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(a[1], 0.0, epsilon = 1e-15);

    let a = hilbert_form(&kz_torus(0.5).unwrap(), &x, PI / 2.0).unwrap();
    assert_abs_diff_eq!(a[0], -2.0 / 3.0, epsilon = 1e-14);
    assert_abs_diff_eq!(a[1], 0.75f64.sqrt() / 0.75, epsilon = 1e-14);

    let a = hilbert_form(&kz_sphere(0.0).unwrap(), &ChartPoint::sphere(PI / 2.0, 0.0).unwrap(), 0.0).unwrap();
    assert_abs_diff_eq!(a[0], 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(a[1], 1.0, epsilon = 1e-15);
}

#[test]
fn reeb_field_values() {
    let m = kz_torus(0.5).unwrap();
    let x = ChartPoint::torus(0.7, 0.2);
    let r = reeb_field(&m, &x, 0.0).unwrap().components();
    for (a, b) in r.iter().zip([1.5, 0.0, 0.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
    }
    let r = reeb_field(&m, &x, PI / 2.0).unwrap().components();
    for (a, b) in r.iter().zip([0.0, 0.75f64.sqrt(), 0.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
    }
    let r = reeb_field(&kz_sphere(0.5).unwrap(), &ChartPoint::sphere(PI / 2.0, 1.0).unwrap(), 0.0)
        .unwrap()
        .components();
    for (a, b) in r.iter().zip([0.0, 1.5, 0.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
    }
}

/// Unit-speed great circles: `φ'' = sinφ cosφ θ'²`, `θ'' = −2 cotφ φ'θ'`, with the
/// fiber coordinate the Euclidean angle of `(φ', θ')`.
#[test]
fn round_sphere_reeb_is_geodesic_spray() {
    let m = Riemannian(RoundSphere);
    for &(phi, psi) in &[(0.4f64, 0.3f64), (1.2, 2.0), (2.5, -1.1), (PI / 2.0, 4.0)] {
        let (s, c) = (f64::sin(phi), f64::cos(phi));
        let f = (psi.cos().powi(2) + s * s * psi.sin().powi(2)).sqrt();
        let (dphi, dth) = (psi.cos() / f, psi.sin() / f);
        let ddphi = s * c * dth * dth;
        let ddth = -2.0 * c / s * dphi * dth;
        let dpsi = (dphi * ddth - dth * ddphi) / (dphi * dphi + dth * dth);
        let r = reeb_field(&m, &ChartPoint::sphere(phi, 0.7).unwrap(), psi).unwrap();
        assert!((r.x1 - dphi).abs() < 1e-9, "X_phi {} vs {dphi}", r.x1);
        assert!((r.x2 - dth).abs() < 1e-9, "X_theta {} vs {dth}", r.x2);
        assert!((r.psi - dpsi).abs() < 1e-9, "X_psi {} vs {dpsi}", r.psi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_positively_homogeneous(
        eps in 0.0..0.9f64, x in 0.0..1.0f64, y in 0.0..1.0f64, a in -PI..PI, lambda in prop::sample::select(vec![0.5, 2.0, 10.0]),
    ) {
        let m = kz_torus(eps).unwrap();
        let p = ChartPoint::torus(x, y);
        let v = TangentVector::new(a.cos(), a.sin());
        let lv = TangentVector::new(lambda * a.cos(), lambda * a.sin());
        let (n1, n2) = (finsler_norm(&m, &p, &v), finsler_norm(&m, &p, &lv));
        prop_assert!((n2 - lambda * n1).abs() <= 1e-12 * n2);
    }

    #[test]
    fn sphere_norm_is_positively_homogeneous(
        eps in 0.0..0.9f64, phi in 0.1..3.0f64, a in -PI..PI, lambda in prop::sample::select(vec![0.5, 2.0, 10.0]),
    ) {
        let m = kz_sphere(eps).unwrap();
        let p = ChartPoint::sphere(phi, 0.3).unwrap();
        let v = TangentVector::new(a.cos(), a.sin());
        let lv = TangentVector::new(lambda * a.cos(), lambda * a.sin());
        let (n1, n2) = (finsler_norm(&m, &p, &v), finsler_norm(&m, &p, &lv));
        prop_assert!((n2 - lambda * n1).abs() <= 1e-12 * n2);
    }

    #[test]
    fn vertical_derivative_matches_differences(eps in 0.0..0.8f64, phi in 0.2..2.9f64, a in -PI..PI) {
        let m = kz_sphere(eps).unwrap();
        let p = ChartPoint::sphere(phi, 1.0).unwrap();
        let v = TangentVector::new(a.cos(), a.sin());
        let ad = vertical_derivative(&m, &p, &v).unwrap();
        let fd = vertical_derivative_fd(&m, &p, &v).unwrap();
        prop_assert!((ad[0] - fd[0]).abs() < 1e-7 && (ad[1] - fd[1]).abs() < 1e-7);
    }

    #[test]
    fn reeb_satisfies_contact_equations(eps in 0.0..0.8f64, phi in 0.2..2.9f64, psi in 0.0..2.0 * PI) {
        let m = kz_sphere(eps).unwrap();
        let p = ChartPoint::sphere(phi, 0.5).unwrap();
        let r = contact_residuals(&m, &p, psi, 1e-5).unwrap();
        prop_assert!(r[0].abs() < 1e-10, "A(X) - 1 = {}", r[0]);
        for k in 1..4 {
            prop_assert!(r[k].abs() < 1e-8, "dA(X, e{k}) = {}", r[k]);
        }
    }

    #[test]
    fn torus_reeb_satisfies_contact_equations(eps in 0.0..0.9f64, x in 0.0..1.0f64, y in 0.0..1.0f64, psi in 0.0..2.0 * PI) {
        let m = kz_torus(eps).unwrap();
        let r = contact_residuals(&m, &ChartPoint::torus(x, y), psi, 1e-5).unwrap();
        prop_assert!(r[0].abs() < 1e-10);
        for k in 1..4 {
            prop_assert!(r[k].abs() < 1e-8, "dA(X, e{k}) = {}", r[k]);
        }
    }
}

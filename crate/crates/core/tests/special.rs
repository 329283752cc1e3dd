use std::f64::consts::PI;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use finlap::fields::{jet2, HarmonicSum};
use finlap::special::{assoc_legendre, assoc_legendre_dphi, gauss_legendre_nodes, legendre_column, ylm_norm};
use finlap::FinlapError;
use proptest::prelude::*;

fn p(l: i64, m: i64, phi: f64) -> f64 {
    if m < 0 || m > l || l < 0 {
        return 0.0;
    }
    assoc_legendre(l, m, phi).unwrap()
}

#[test]
fn legendre_values() {
    let phi = 0.7f64;
    assert_relative_eq!(p(1, 0, phi), phi.cos(), max_relative = 1e-15);
    assert_relative_eq!(p(2, 0, (0.5f64).acos()), -0.125, max_relative = 1e-14);
    assert_relative_eq!(p(1, 1, PI / 2.0), -1.0, max_relative = 1e-15);
    let (x, s) = (phi.cos(), phi.sin());
    assert_relative_eq!(p(2, 1, phi), -3.0 * x * s, max_relative = 1e-14);
    assert_relative_eq!(p(2, 2, phi), 3.0 * s * s, max_relative = 1e-14);
    assert_relative_eq!(p(3, 0, phi), 0.5 * (5.0 * x * x * x - 3.0 * x), max_relative = 1e-14);
    assert_relative_eq!(p(3, 3, phi), -15.0 * s * s * s, max_relative = 1e-14);
}

#[test]
fn legendre_derivative_values() {
    assert_relative_eq!(assoc_legendre_dphi(1, 0, 0.4).unwrap(), -(0.4f64).sin(), max_relative = 1e-14);
    assert_abs_diff_eq!(assoc_legendre_dphi(1, 1, PI / 2.0).unwrap(), 0.0, epsilon = 1e-15);
}

#[test]
fn invalid_indices() {
    assert!(matches!(assoc_legendre(1, 2, 0.3), Err(FinlapError::InvalidIndex { l: 1, m: 2 })));
    assert!(matches!(assoc_legendre(-1, 0, 0.3), Err(FinlapError::InvalidIndex { .. })));
    assert!(matches!(ylm_norm(2, 3), Err(FinlapError::InvalidIndex { .. })));
}

#[test]
fn norm_values() {
    assert_relative_eq!(ylm_norm(0, 0).unwrap(), (4.0 * PI).sqrt(), max_relative = 1e-15);
    assert_relative_eq!(ylm_norm(1, 1).unwrap(), (8.0 * PI / 3.0).sqrt(), max_relative = 1e-15);
    assert_relative_eq!(ylm_norm(2, 0).unwrap(), (4.0 * PI / 5.0).sqrt(), max_relative = 1e-15);
    assert_relative_eq!(ylm_norm(1, 1).unwrap(), 2.894405, max_relative = 1e-6);
}

#[test]
fn gauss_small_rules() {
    let (x, w) = gauss_legendre_nodes(1).unwrap();
    assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-16);
    assert_abs_diff_eq!(w[0], 2.0, epsilon = 1e-15);
    let (x, w) = gauss_legendre_nodes(2).unwrap();
    assert_abs_diff_eq!(x[0], -1.0 / 3f64.sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(x[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(w[1], 1.0, epsilon = 1e-15);
    assert!(gauss_legendre_nodes(0).is_err());
}

#[test]
fn gauss_exactness() {
    for n in [3, 10, 40, 200] {
        let (x, w) = gauss_legendre_nodes(n).unwrap();
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for k in (0..2 * n).step_by((2 * n / 12).max(1)) {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(q, exact, epsilon = 1e-13);
        }
    }
}

#[test]
fn column_matches_pointwise() {
    let (vals, ders) = legendre_column(3, 12, 1.3);
    for (i, l) in (3..=12).enumerate() {
        assert_relative_eq!(vals[i], p(l, 3, 1.3), max_relative = 1e-13);
        assert_relative_eq!(ders[i], assoc_legendre_dphi(l, 3, 1.3).unwrap(), max_relative = 1e-12);
    }
}

#[test]
fn orthogonality_and_sin_squared_elements() {
    let l_max = 20;
    let (t, w) = gauss_legendre_nodes(2 * l_max).unwrap();
    let inner = |l: i64, lp: i64, m: i64, weight: &dyn Fn(f64) -> f64| -> f64 {
        t.iter().zip(&w).map(|(ti, wi)| {
            let phi = ti.acos();
            wi * weight(phi) * p(l, m, phi) * p(lp, m, phi)
        })
        .sum::<f64>()
            * 2.0
            * PI
    };
    for m in 0..6i64 {
        for l in m..l_max as i64 {
            let nn = ylm_norm(l, m).unwrap();
            for lp in m..l_max as i64 {
                let v = inner(l, lp, m, &|_| 1.0) / (nn * ylm_norm(lp, m).unwrap());
                let expected = if l == lp { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(v, expected, epsilon = 1e-10);
            }
            let s2 = inner(l, l, m, &|phi: f64| phi.sin().powi(2)) / (nn * nn);
            let (lf, mf) = (l as f64, m as f64);
            let formula = 2.0 * (lf * lf + lf - 1.0 + mf * mf) / ((2.0 * lf + 3.0) * (2.0 * lf - 1.0));
            assert_abs_diff_eq!(s2, formula, epsilon = 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recurrence_in_degree(l in 2i64..=20, m_frac in 0.0..1.0f64, phi in 0.05..3.09f64) {
        let m = ((l - 2) as f64 * m_frac) as i64;
        let lhs = (2 * l - 1) as f64 * phi.cos() * p(l - 1, m, phi);
        let rhs = (l - m) as f64 * p(l, m, phi) + (l + m - 1) as f64 * p(l - 2, m, phi);
        let scale = lhs.abs().max(rhs.abs()).max(p(l, m, phi).abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() < 1e-10 * scale);
    }

    #[test]
    fn recurrence_in_order(l in 1i64..=20, m_frac in 0.0..1.0f64, phi in 0.05..3.09f64) {
        let m = ((l - 1) as f64 * m_frac) as i64;
        let lhs = phi.sin() * p(l, m, phi);
        let rhs = (p(l - 1, m + 1, phi) - p(l + 1, m + 1, phi)) / (2 * l + 1) as f64;
        let scale = p(l + 1, m + 1, phi).abs().max(1.0);
        prop_assert!((lhs - rhs).abs() < 1e-10 * scale);
    }

    #[test]
    fn legendre_ode(l in 0usize..=20, m_frac in 0.0..1.0f64, phi in 0.05..3.09f64) {
        let m = (l as f64 * m_frac) as usize;
        let j = jet2(&HarmonicSum::ylm(l, m), [phi, 0.0]);
        let (s, c) = (phi.sin(), phi.cos());
        let res = j.hess[0][0] + c / s * j.grad[0] + (((l * (l + 1)) as f64) - (m * m) as f64 / (s * s)) * j.value;
        let scale = j.value.abs().max(j.hess[0][0].abs()).max(1.0);
        prop_assert!(res.abs() < 1e-8 * scale, "residual {res}");
    }
}

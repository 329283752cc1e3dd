use std::f64::consts::PI;

use approx::assert_relative_eq;
use finlap::fields::{
    g_det, g_inverse, AnisotropicTorus, Constant, FlatTorus, HarmonicSum, Riemannian, RiemannianMetric2D, RoundSphere,
    TrigPoly, TrigTerm,
};
use finlap::grid::BaseGrid;
use finlap::laplace::{
    apply_laplacian, conformal_rescale, energy, green_defect, schrodinger_potential, schrodinger_potential_fd,
    weighted_laplacian, OperatorField, RiemannianSymbol,
};
use finlap::{kz_sphere, kz_torus, ChartPoint, FiberQuadrature, FinslerLaplacian, FinslerMetric};
use proptest::prelude::*;

fn lap<M: FinslerMetric>(m: M) -> FinslerLaplacian<M> {
    FinslerLaplacian::with_default_quadrature(m)
}

fn trig_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-2i32..=2, -2i32..=2, -1.0..1.0f64, -1.0..1.0f64), 1..4).prop_map(|t| {
        TrigPoly::new(t.into_iter().map(|(p, q, cos, sin)| TrigTerm { p, q, cos, sin }).collect())
    })
}

#[test]
fn flat_torus_cosine() {
    let l = lap(kz_torus(0.0).unwrap());
    let f = TrigPoly::cos_axis(0, 1, 1.0);
    for x in [0.1, 0.35, 0.8] {
        let v = l.apply(&f, &ChartPoint::torus(x, 0.4)).unwrap();
        assert!((v + 4.0 * PI * PI * (2.0 * PI * x).cos()).abs() < 1e-10);
    }
}

#[test]
fn sphere_first_harmonics_are_eigenfunctions() {
    for eps in [0.0, 0.3, 0.6] {
        let l = lap(kz_sphere(eps).unwrap());
        let (y11, y10) = (HarmonicSum::ylm(1, 1), HarmonicSum::ylm(1, 0));
        for (phi, theta) in [(0.3, 0.2), (1.1, 2.5), (2.0, 4.0), (2.9, 1.0)] {
            let x = ChartPoint::sphere(phi, theta).unwrap();
            let y = -phi.sin() * f64::cos(theta);
            assert!((l.apply(&y11, &x).unwrap() - (-2.0 + 2.0 * eps * eps) * y).abs() < 1e-10);
            assert!((l.apply(&y10, &x).unwrap() + 2.0 * phi.cos()).abs() < 1e-10);
        }
    }
}

#[test]
fn weighted_laplacian_of_constant() {
    let l = lap(kz_sphere(0.4).unwrap());
    assert!(weighted_laplacian(&l, &Constant(3.0), [1.0, 2.0]).unwrap().abs() < 1e-12);
}

#[test]
fn energy_examples() {
    let u = TrigPoly::sin_axis(0, 1, 1.0);
    let grid = BaseGrid::torus(16);
    assert_relative_eq!(energy(&lap(kz_torus(0.0).unwrap()), &u, &grid).unwrap(), 2.0 * PI * PI, max_relative = 1e-12);
    assert!(energy(&lap(kz_torus(0.5).unwrap()), &Constant(1.0), &grid).unwrap().abs() < 1e-14);

    // a11·w·2π² with a11 = 2·0.75^{3/2}/(1+√0.75) and w = 0.75^{-3/2}
    let e = energy(&lap(kz_torus(0.5).unwrap()), &u, &grid).unwrap();
    assert_relative_eq!(e, 2.0 / (1.0 + 0.75f64.sqrt()) * 2.0 * PI * PI, max_relative = 1e-12);
    assert_relative_eq!(e, 21.1564, max_relative = 1e-5);
}

#[test]
fn green_defect_examples() {
    let torus = lap(kz_torus(0.5).unwrap());
    let grid = BaseGrid::torus(12);
    let f = TrigPoly::sin_axis(0, 1, 1.0);
    assert!(green_defect(&torus, &f, &f, &grid).unwrap().abs() < 1e-14);
    let g = TrigPoly::cos_axis(1, 1, 1.0);
    assert!(green_defect(&torus, &f, &g, &grid).unwrap().abs() < 1e-10);

    let sphere = lap(kz_sphere(0.3).unwrap());
    let field = OperatorField::new(&sphere, &BaseGrid::sphere(20, 4).unwrap()).unwrap();
    let (y10, y20) = (HarmonicSum::ylm(1, 0), HarmonicSum::ylm(2, 0));
    let d = field.green_defect(&y10, &y20) / (field.mass(&y10, &y10) * field.mass(&y20, &y20)).sqrt();
    assert!(d.abs() < 1e-8);
}

#[test]
fn zero_conformal_factor_is_identity() {
    let a = lap(kz_torus(0.4).unwrap()).coefficients_at([0.3, 0.6]).unwrap();
    let b = lap(conformal_rescale(kz_torus(0.4).unwrap(), Constant(0.0))).coefficients_at([0.3, 0.6]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn torus_potential_vanishes_and_sphere_potential_matches_differences() {
    let torus = lap(kz_torus(0.5).unwrap());
    assert!(schrodinger_potential(&torus, [0.3, 0.4]).unwrap().abs() < 1e-12);
    let sphere = lap(kz_sphere(0.4).unwrap());
    for phi in [0.6, 1.2, PI / 2.0] {
        let ad = schrodinger_potential(&sphere, [phi, 0.0]).unwrap();
        let fd = schrodinger_potential_fd(&sphere, [phi, 0.0], 1e-3).unwrap();
        assert!((ad - fd).abs() < 1e-5, "{ad} vs {fd}");
    }
    let round = RiemannianSymbol(RoundSphere);
    assert!(schrodinger_potential(&round, [0.7, 0.0]).unwrap().abs() < 1e-12);
}

/// `a = g⁻¹`, `w = √det g` and `b^i = (1/w)∂_j(w g^{ij})` by central differences.
fn laplace_beltrami<G: RiemannianMetric2D>(g: &G, x: [f64; 2]) -> ([[f64; 2]; 2], [f64; 2], f64) {
    let h = 1e-5;
    let flux = |y: [f64; 2]| {
        let gy = g.g::<f64>(y);
        let (gi, w) = (g_inverse(&gy), g_det(&gy).sqrt());
        [[w * gi[0][0], w * gi[0][1]], [w * gi[1][0], w * gi[1][1]]]
    };
    let mut b = [0.0; 2];
    for j in 0..2 {
        let (mut p, mut m) = (x, x);
        p[j] += h;
        m[j] -= h;
        let (fp, fm) = (flux(p), flux(m));
        for i in 0..2 {
            b[i] += (fp[i][j] - fm[i][j]) / (2.0 * h);
        }
    }
    let g0 = g.g::<f64>(x);
    let w = g_det(&g0).sqrt();
    (g_inverse(&g0), [b[0] / w, b[1] / w], w)
}

fn assert_riemannian_limit<G: RiemannianMetric2D + Copy>(g: G, x: [f64; 2]) -> Result<(), TestCaseError> {
    let c = lap(Riemannian(g)).coefficients_at(x).unwrap();
    let (a, b, w) = laplace_beltrami(&g, x);
    let got = [c.a11, c.a12, c.a22, c.w];
    let want = [a[0][0], a[0][1], a[1][1], w];
    for (u, v) in got.iter().zip(want) {
        prop_assert!((u - v).abs() < 1e-10 * v.abs().max(1.0), "{got:?} vs {want:?}");
    }
    prop_assert!((c.b1 - b[0]).abs() < 1e-8 && (c.b2 - b[1]).abs() < 1e-8, "b {:?} vs {b:?}", [c.b1, c.b2]);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn riemannian_limit_flat(x in 0.0..1.0f64, y in 0.0..1.0f64) {
        assert_riemannian_limit(FlatTorus, [x, y])?;
    }

    #[test]
    fn riemannian_limit_round(phi in 0.5..2.6f64, theta in 0.0..6.0f64) {
        assert_riemannian_limit(RoundSphere, [phi, theta])?;
    }

    #[test]
    fn riemannian_limit_anisotropic(x in 0.0..1.0f64, y in 0.0..1.0f64) {
        assert_riemannian_limit(AnisotropicTorus::default(), [x, y])?;
    }

    #[test]
    fn elliptic_and_annihilates_constants(eps in 0.0..0.9f64, phi in 0.05..3.09f64, x in 0.0..1.0f64) {
        let s = lap(kz_sphere(eps).unwrap()).coefficients_at([phi, 0.0]).unwrap();
        let t = lap(kz_torus(eps).unwrap()).coefficients_at([x, 0.5]).unwrap();
        prop_assert!(s.ellipticity() > 0.0 && t.ellipticity() > 0.0);
        prop_assert!(apply_laplacian(&s, &Constant(1.0), [phi, 0.0]).abs() < 1e-10);
        prop_assert!(apply_laplacian(&t, &Constant(1.0), [x, 0.5]).abs() < 1e-10);
    }

    #[test]
    fn apply_equals_weighted_laplacian(eps in 0.0..0.8f64, f in trig_poly(), x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let l = lap(kz_torus(eps).unwrap());
        let direct = l.apply(&f, &ChartPoint::torus(x, y)).unwrap();
        let weighted = weighted_laplacian(&l, &f, [x, y]).unwrap();
        prop_assert!((direct - weighted).abs() < 1e-8 * direct.abs().max(1.0));
    }

    #[test]
    fn sphere_apply_equals_weighted_laplacian(eps in 0.0..0.8f64, phi in 0.1..3.0f64, theta in 0.0..6.0f64, l in 0usize..5, c in -1.0..1.0f64) {
        let m = l / 2;
        let f = HarmonicSum::ylm(l, m);
        let g = TrigPoly::single(1, 0, c, 0.3);
        let op = lap(kz_sphere(eps).unwrap());
        let x = ChartPoint::sphere(phi, theta).unwrap();
        for (direct, weighted) in [
            (op.apply(&f, &x).unwrap(), weighted_laplacian(&op, &f, [phi, theta]).unwrap()),
            (op.apply(&g, &x).unwrap(), weighted_laplacian(&op, &g, [phi, theta]).unwrap()),
        ] {
            prop_assert!((direct - weighted).abs() < 1e-8 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn conformal_coefficients_scale(x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let f = TrigPoly::cos_axis(0, 1, 0.3).plus(TrigPoly::sin_axis(1, 1, 0.2));
        let s = (-2.0 * (0.3 * (2.0 * PI * x).cos() + 0.2 * (2.0 * PI * y).sin())).exp();
        let quad = FiberQuadrature::new(64).unwrap();
        let a = FinslerLaplacian::new(kz_torus(0.5).unwrap(), quad.clone()).coefficients_at([x, y]).unwrap();
        let b = FinslerLaplacian::new(conformal_rescale(kz_torus(0.5).unwrap(), f), quad).coefficients_at([x, y]).unwrap();
        for (u, v) in [(b.a11, a.a11), (b.a12, a.a12), (b.a22, a.a22), (b.b1, a.b1), (b.b2, a.b2)] {
            prop_assert!((u - s * v).abs() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn energy_equals_operator_pairing(eps in 0.0..0.8f64, u in trig_poly()) {
        let field = OperatorField::new(&lap(kz_torus(eps).unwrap()), &BaseGrid::torus(12)).unwrap();
        let e = field.energy(&u);
        prop_assert!((e - field.pairing(&u)).abs() <= 1e-8 * e.max(1e-12));
    }
}

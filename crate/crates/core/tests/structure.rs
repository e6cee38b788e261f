mod common;

use kropina_core::linalg::Matrix;
use kropina_core::models::{builtin, random_phi, su2, u2, CATALOG};
use kropina_core::{InvariantMetric, LieAlgebra, ReductiveSplit, Vector, STRUCTURAL_TOLERANCE};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(-10.0f64..10.0, n).prop_map(Vector::from)
}

#[test]
fn corrupted_su2_scale_still_satisfies_jacobi() {
    // [b1,b2] = 1.1 b3 keeps the cyclic shape, and every such table obeys Jacobi in dim 3.
    let a = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.1), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap();
    let c = a.check_jacobi(1e-9);
    assert!(c.passed());
    assert_eq!(c.residual, 0.0);
    // ... but the identity reference metric is no longer bi-invariant for it.
    let r = InvariantMetric::identity(3).check_metric(&a, &ReductiveSplit::trivial(3), 1e-9);
    assert!((r.get("q0 bi-invariant").unwrap().residual - 0.1).abs() < 1e-12);
}

#[test]
fn extra_bracket_breaks_jacobi() {
    // u(2) plus [b0,b1] = b1: J(b0,b1,b2) = [b0,b3] + [b2,b1] = -b3
    let mut records = u2("b0").upper_records();
    records.push((0, 1, 1, 1.0));
    let a = LieAlgebra::from_brackets(4, &records).unwrap();
    let c = a.check_jacobi(1e-9);
    assert!(!c.passed());
    assert_eq!(c.residual, 1.0);
}

#[test]
fn shipped_models_have_exact_jacobi() {
    for name in CATALOG {
        let spec = builtin(name).unwrap();
        assert!(spec.algebra.check_jacobi(0.0).residual <= 1e-12, "{name}");
        assert!(spec.validate(STRUCTURAL_TOLERANCE).passed(), "{name}");
    }
}

#[test]
fn u2_with_central_stretch_passes_metric_checks() {
    for lambda in [0.25, 1.0, 7.0] {
        let m = InvariantMetric::diagonal(&[lambda, 1.0, 1.0, 1.0]).unwrap();
        let r = m.check_metric(&u2("b0"), &ReductiveSplit::trivial(4), 1e-9);
        assert!(r.passed(), "lambda = {lambda}: {r}");
    }
}

#[test]
fn random_phi_unit_spectrum_is_identity_on_m() {
    let spec = builtin("s2_normal").unwrap();
    let m = random_phi(11, &spec.algebra, &spec.split, &Matrix::identity(3), (1.0, 1.0)).unwrap();
    assert!(m.phi_is_identity(1e-14));
}

#[test]
fn random_phi_respects_spectrum_and_invariance() {
    let spec = builtin("circle_su2_mod_u1").unwrap();
    for seed in 0..20 {
        let m = random_phi(seed, &spec.algebra, &spec.split, &Matrix::identity(4), (0.5, 3.0)).unwrap();
        assert!(m.check_metric(&spec.algebra, &spec.split, 1e-9).passed(), "seed {seed}");
        let (lo, hi) = kropina_core::linalg::spectral_bounds(&m.gram().submatrix(spec.split.m_indices()));
        assert!(lo >= 0.5 - 1e-12 && hi <= 3.0 + 1e-12, "seed {seed}: [{lo}, {hi}]");
    }
    // non-identity q0: scaled bi-invariant form on su(2) + su(2)
    let a = LieAlgebra::direct_sum(&su2(), &su2());
    let q0 = Matrix::diagonal(&[1.0, 1.0, 1.0, 3.0, 3.0, 3.0]);
    let split = ReductiveSplit::trivial(6);
    let m = random_phi(4, &a, &split, &q0, (0.2, 5.0)).unwrap();
    assert!(m.check_metric(&a, &split, 1e-9).passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bracket_bilinear_antisymmetric(x in coords(4), y in coords(4), z in coords(4), s in -3.0f64..3.0) {
        let a = u2("b0");
        let xy = a.bracket(&x, &y).unwrap();
        let yx = a.bracket(&y, &x).unwrap();
        let scale = 1.0 + x.max_abs() * y.max_abs();
        prop_assert!((&xy + &yx).max_abs() <= 1e-12 * scale);
        let lhs = a.bracket(&x.add_scaled(s, &z), &y).unwrap();
        let rhs = xy.add_scaled(s, &a.bracket(&z, &y).unwrap());
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-12 * (scale + z.max_abs() * y.max_abs() * s.abs()));
    }

    #[test]
    fn projections_are_complementary(x in coords(4), h in proptest::sample::subsequence(vec![0usize, 1, 2, 3], 0..3)) {
        let s = ReductiveSplit::new(4, &h).unwrap();
        let pm = s.project_m(&x).unwrap();
        prop_assert_eq!(&s.project_m(&pm).unwrap(), &pm);
        prop_assert_eq!(&pm + &s.project_h(&x).unwrap(), x);
    }

    #[test]
    fn metric_invariants_for_random_phi(seed in 0u64..1000, x in coords(4), y in coords(4)) {
        let a = u2("b0");
        let split = ReductiveSplit::trivial(4);
        let m = random_phi(seed, &a, &split, &Matrix::identity(4), (0.1, 10.0)).unwrap();
        let scale = 1.0 + x.max_abs() * y.max_abs();
        prop_assert!((m.inner(&x, &y).unwrap() - m.inner(&y, &x).unwrap()).abs() <= 1e-12 * scale * 10.0);
        if x.max_abs() > 1e-6 {
            prop_assert!(m.inner(&x, &x).unwrap() > 0.0);
        }
        let phi_x = m.phi_apply(&x).unwrap();
        prop_assert!((m.inner0(&phi_x, &y).unwrap() - m.inner(&x, &y).unwrap()).abs() <= 1e-12 * scale * 10.0);
        prop_assert!((&m.phi_inverse(&phi_x).unwrap() - &x).max_abs() <= 1e-12 * (1.0 + x.max_abs()));
        let bp = m.b_plus(&a, &x, &y).unwrap();
        prop_assert_eq!(&bp, &m.b_plus(&a, &y, &x).unwrap());
    }

    #[test]
    fn identity_phi_collapses_b_maps(x in coords(3), y in coords(3)) {
        let a = su2();
        let m = InvariantMetric::identity(3);
        let scale = 1.0 + x.max_abs() * y.max_abs();
        prop_assert!(m.b_plus(&a, &x, &y).unwrap().max_abs() <= 1e-12 * scale);
        let diff = &m.b_minus(&a, &x, &y).unwrap() - &a.bracket(&x, &y).unwrap();
        prop_assert!(diff.max_abs() <= 1e-12 * scale);
    }
}

mod common;

use common::*;
use nctoric::integral::{
    hermitian, index_and_dimension, integrate_top_form, invariant_integral, invariant_pairing, p_norm,
    second_chern_charge, sobolev_norm, sobolev_terms, sobolev_terms_at, tangential_projector, ChernData,
};
use nctoric::matrix::{basic_projection, build_instanton_data, MatrixForm, Projection};
use nctoric::{spheres, AmbientFrame, AlgebraSpec, Coefficient, Theta};
use num_rational::BigRational;
use proptest::prelude::*;

fn setup() -> (&'static AlgebraSpec, &'static AmbientFrame) {
    let s4 = spheres::s4_theta();
    (s4.algebra(), s4.frame().unwrap())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn stokes(seed in any::<u64>()) {
        let (alg, frame) = setup();
        let mut r = rng(seed);
        let z = random_form(alg, &mut r, 3, 3, 3);
        let dz = alg.d_free(&z).unwrap();
        prop_assert!(integrate_top_form(alg, frame, &dz).unwrap().is_zero());
    }

    #[test]
    fn top_integral_ignores_the_normal_direction(seed in any::<u64>()) {
        let (alg, frame) = setup();
        let mut r = rng(seed);
        let w = random_form(alg, &mut r, 4, 2, 2);
        let rho = random_form(alg, &mut r, 3, 2, 2);
        let n = frame.normal_form_element();
        let shifted = w.add(&alg.mul_free(n, &rho).unwrap());
        prop_assert_eq!(integrate_top_form(alg, frame, &shifted).unwrap(), integrate_top_form(alg, frame, &w).unwrap());
    }

    #[test]
    fn torus_invariance(seed in any::<u64>()) {
        let (alg, frame) = setup();
        let mut r = rng(seed);
        let a = random_monomial(alg, &mut r, 4);
        let deg = alg.homogeneous_degree(&a).unwrap().unwrap();
        if !deg.is_zero() {
            prop_assert!(invariant_integral(alg, frame, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn integral_ignores_the_sphere_relation(seed in any::<u64>()) {
        let (alg, frame) = setup();
        let mut r = rng(seed);
        let a = random_function(alg, &mut r, 4, 4);
        let reduced = alg.normal_form(&a).unwrap();
        prop_assert_eq!(invariant_integral(alg, frame, &a).unwrap(), invariant_integral(alg, frame, &reduced).unwrap());
        let radius = nctoric::expr::parse_free(alg, "x1'*x1 + x2'*x2 + x0^2 - 1").unwrap();
        let multiple = alg.mul_free(&alg.mul_free(&a, &radius).unwrap(), &alg.star_free(&a).unwrap()).unwrap();
        prop_assert!(invariant_integral(alg, frame, &multiple).unwrap().is_zero());
    }

    #[test]
    fn pairing_matches_the_hermitian_integral(seed in any::<u64>()) {
        let (alg, frame) = setup();
        let mut r = rng(seed);
        let a = random_function(alg, &mut r, 3, 3);
        let b = random_function(alg, &mut r, 3, 3);
        let col = |e: &nctoric::Element| MatrixForm::from_fn(1, 1, |_, _| e.clone());
        let want = invariant_integral(alg, frame, &hermitian(alg, &col(&a), &col(&b)).unwrap()).unwrap();
        prop_assert_eq!(invariant_pairing(alg, frame, &a, &b).unwrap(), want);
    }

    #[test]
    fn positivity_in_the_classical_limit(seed in any::<u64>()) {
        let (alg, frame) = setup();
        let mut r = rng(seed);
        let a = alg.normal_form(&random_function(alg, &mut r, 3, 2)).unwrap();
        let v = invariant_integral(alg, frame, &alg.product(&alg.star(&a).unwrap(), &a).unwrap()).unwrap();
        for theta in [0.0, 0.3, 0.5] {
            prop_assert!(v.evaluate(Theta::new(theta).unwrap()).re >= -1e-9);
        }
    }
}

#[test]
fn volume_and_second_moments() {
    let (alg, frame) = setup();
    assert_eq!(invariant_integral(alg, frame, &alg.one()).unwrap().as_rational(), Some(rat(8, 3)));
    let vol = nctoric::hodge::hodge_star(alg, frame, &alg.one()).unwrap();
    assert_eq!(integrate_top_form(alg, frame, &vol).unwrap().as_rational(), Some(rat(8, 3)));
    let x1x1s = alg.product(&alg.gen("x1").unwrap(), &alg.gen("x1'").unwrap()).unwrap();
    assert_eq!(invariant_integral(alg, frame, &x1x1s).unwrap().as_rational(), Some(rat(16, 15)));
}

#[test]
fn charges() {
    let (alg, frame) = setup();
    let (k, report) = second_chern_charge(alg, frame, &basic_projection(alg).unwrap()).unwrap();
    assert_eq!(k, 1);
    assert!(report.mu_free);
    let (k0, _) = second_chern_charge(alg, frame, &Projection::trivial(alg, 4, 2)).unwrap();
    assert_eq!(k0, 0);
    // opposite orientation flips the sign
    let (kr, _) = second_chern_charge(alg, &frame.reversed(), &basic_projection(alg).unwrap()).unwrap();
    assert_eq!(kr, -1);
}

#[test]
fn first_chern_form_vanishes() {
    let alg = setup().0;
    let f = basic_projection(alg).unwrap().curvature(alg).unwrap();
    assert!(f.trace(alg).unwrap().is_zero());
}

#[test]
fn hermitian_structure() {
    let (s4, s7) = (spheres::s4_theta(), spheres::s7_theta());
    let data = build_instanton_data(s4, s7).unwrap();
    let a7 = s7.algebra();
    let u1 = data.u.column(0);
    assert_eq!(hermitian(a7, &u1, &u1).unwrap(), a7.one());
    let (alg, frame) = setup();
    let one = MatrixForm::from_fn(1, 1, |_, _| alg.one());
    let n2 = p_norm(alg, frame, &one, 2, Theta::classical()).unwrap();
    assert!((n2 * n2 - 8.0 / 3.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
    assert!(p_norm(alg, frame, &one, 3, Theta::classical()).is_err());
    // right linearity
    let mut r = rng(8);
    for _ in 0..10 {
        let phi = MatrixForm::from_fn(2, 1, |_, _| alg.normal_form(&random_function(alg, &mut r, 2, 2)).unwrap());
        let psi = MatrixForm::from_fn(2, 1, |_, _| alg.normal_form(&random_function(alg, &mut r, 2, 2)).unwrap());
        let a = alg.normal_form(&random_function(alg, &mut r, 2, 2)).unwrap();
        let am = MatrixForm::from_fn(1, 1, |_, _| a.clone());
        let lhs = hermitian(alg, &phi, &psi.mul(alg, &am).unwrap()).unwrap();
        let rhs = alg.product(&hermitian(alg, &phi, &psi).unwrap(), &a).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn cauchy_schwarz() {
    let (alg, frame) = setup();
    let mut r = rng(12);
    for _ in 0..10 {
        let phi = MatrixForm::from_fn(2, 1, |_, _| alg.normal_form(&random_function(alg, &mut r, 2, 2)).unwrap());
        let psi = MatrixForm::from_fn(2, 1, |_, _| alg.normal_form(&random_function(alg, &mut r, 2, 2)).unwrap());
        for theta in [0.0, 0.25] {
            let th = Theta::new(theta).unwrap();
            let ip = invariant_integral(alg, frame, &hermitian(alg, &phi, &psi).unwrap()).unwrap().evaluate(th).norm();
            let bound = p_norm(alg, frame, &phi, 2, th).unwrap() * p_norm(alg, frame, &psi, 2, th).unwrap();
            assert!(ip <= bound + 1e-9, "{ip} > {bound}");
        }
    }
}

#[test]
fn tangential_projector_is_a_projection() {
    let (alg, frame) = setup();
    let q = tangential_projector(alg, frame).unwrap();
    assert_eq!(q.mul(alg, &q).unwrap(), q);
    assert_eq!(q.adjoint(alg).unwrap(), q);
    assert_eq!(q.trace(alg).unwrap(), alg.constant(Coefficient::from_int(4)));
}

#[test]
fn sobolev_norms() {
    let (alg, frame) = setup();
    let p = basic_projection(alg).unwrap();
    let phi = p.matrix().column(0);
    let th = Theta::classical();
    let n0 = sobolev_norm(alg, frame, &p, &phi, 0, th).unwrap();
    assert!((n0 - p_norm(alg, frame, &phi, 2, th).unwrap()).abs() < 1e-12);
    let terms = sobolev_terms(alg, frame, &p, &phi, 2).unwrap();
    // ||p e_1||^2 = int (1 + x0)/2 = vol/2
    assert_eq!(terms[0].as_rational(), Some(rat(4, 3)));
    let grad = terms[1].evaluate(th).re;
    assert!(grad.is_finite() && grad > 0.0);
    let n1 = sobolev_norm(alg, frame, &p, &phi, 1, th).unwrap();
    let n2 = sobolev_norm(alg, frame, &p, &phi, 2, th).unwrap();
    assert!(n0 <= n1 && n1 <= n2);
    assert!(sobolev_norm(alg, frame, &p, &phi, 3, th).is_err());
}

#[test]
fn numeric_sobolev_terms_match_the_exact_ones() {
    let (alg, frame) = setup();
    let p = basic_projection(alg).unwrap();
    let mut r = rng(37);
    let v = MatrixForm::from_fn(4, 1, |_, _| alg.normal_form(&random_function(alg, &mut r, 1, 1)).unwrap());
    let phi = p.matrix().mul(alg, &v).unwrap();
    let exact = sobolev_terms(alg, frame, &p, &phi, 2).unwrap();
    for theta in [0.0, 0.3] {
        let th = Theta::new(theta).unwrap();
        let numeric = sobolev_terms_at(alg, frame, &p, &phi, 2, th).unwrap();
        for (x, y) in exact.iter().zip(&numeric) {
            let x = x.evaluate(th).re;
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn index_table() {
    let dims: Vec<i64> = (1..=5).map(|k| index_and_dimension(ChernData::su2(k)).dimension).collect();
    assert_eq!(dims, vec![5, 13, 21, 29, 37]);
    let r = index_and_dimension(ChernData::su2(3));
    assert_eq!((r.index, r.dimension), (20, 21));
}

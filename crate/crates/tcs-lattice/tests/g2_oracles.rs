use num_traits::{One, Zero};
use tcs_lattice::exactalg::{rat, Rat, RatMat};
use tcs_lattice::g2alg::*;

fn e(i: usize) -> Vector {
    basis(7, i)
}

fn neg(v: &[Rat]) -> Vector {
    v.iter().map(|x| -x).collect()
}

#[test]
fn model_forms_as_printed() {
    let (phi, psi) = (phi0(), psi0());
    assert_eq!(phi.coeff(&[1, 2, 3]), Rat::one());
    assert_eq!(phi.coeff(&[2, 5, 7]), -Rat::one());
    assert_eq!(phi.coeff(&[7, 5, 2]), Rat::one());
    assert_eq!(psi.coeff(&[4, 5, 6, 7]), Rat::one());
    assert_eq!(phi.terms().count(), 7);
    assert_eq!(psi.terms().count(), 7);
    assert_eq!(
        phi.to_string(),
        "dx^123 + dx^145 + dx^167 + dx^246 - dx^257 - dx^347 - dx^356"
    );
}

#[test]
fn cross_products_of_basis_vectors() {
    let (phi, g) = (phi0(), g0());
    assert_eq!(cross(&e(1), &e(2), &phi, &g).unwrap(), e(3));
    assert_eq!(cross(&e(2), &e(5), &phi, &g).unwrap(), neg(&e(7)));
    assert!(cross(&e(4), &e(4), &phi, &g)
        .unwrap()
        .iter()
        .all(Zero::is_zero));
    let u = ints(&[1, -2, 0, 3, 1, 0, 2]);
    let v = ints(&[0, 1, 1, -1, 2, 3, 0]);
    let w = cross(&u, &v, &phi, &g).unwrap();
    assert!(g.pair(&w, &u).is_zero() && g.pair(&w, &v).is_zero());
}

#[test]
fn associator() {
    let (psi, g) = (psi0(), g0());
    assert_eq!(
        chi(&e(5), &e(6), &e(7), &psi, &g).unwrap(),
        ints(&[0, 0, 0, 2, 0, 0, 0])
    );
    assert!(chi(&e(1), &e(2), &e(3), &psi, &g)
        .unwrap()
        .iter()
        .all(Zero::is_zero));
    assert!(chi(&e(2), &e(2), &e(6), &psi, &g)
        .unwrap()
        .iter()
        .all(Zero::is_zero));
}

#[test]
fn metric_of_the_model_form() {
    let m = metric_from_3form(&phi0()).unwrap();
    assert_eq!(m.metric().unwrap(), g0());
    assert_eq!(m.vol, RealScalar::Exact(Rat::one()));
    assert!(m.positive && !m.tainted());
}

#[test]
fn metric_scaling_law() {
    for c in [rat(2, 1), rat(1, 3), rat(5, 2)] {
        let m = metric_from_3form(&phi0().scale(&(&c * &c * &c))).unwrap();
        assert_eq!(
            m.metric().unwrap().matrix(),
            &RatMat::identity(7).scale(&(&c * &c))
        );
        assert!(m.positive);
    }
}

#[test]
fn split_form_has_signature_three_four() {
    let phi = phi0().sub(&Form::dx(7, &[2, 4, 6]).scale(&rat(2, 1)));
    assert_eq!(phi.coeff(&[2, 4, 6]), -Rat::one());
    let m = metric_from_3form(&phi).unwrap();
    assert_eq!(m.signature, (3, 4, 0));
    assert!(!m.positive);
}

#[test]
fn reversed_orientation_is_not_positive() {
    let m = metric_from_3form(&phi0().neg()).unwrap();
    assert_eq!(m.signature, (7, 0, 0));
    assert_eq!(m.vol, RealScalar::Exact(-Rat::one()));
    assert!(!m.positive);
}

#[test]
fn degenerate_and_inexact_forms() {
    assert!(metric_from_3form(&Form::dx(7, &[1, 2, 3])).is_none());
    let m = metric_from_3form(&phi0().scale(&rat(2, 1))).unwrap();
    assert!(m.tainted());
    assert!(m.metric().is_none());
    let g = m.metric_f64();
    let expected = 2f64.powf(2.0 / 3.0);
    assert!((g[0][0] - expected).abs() < 1e-12 * expected);
    assert_eq!(m.signature, (7, 0, 0));
}

#[test]
fn calibrated_planes() {
    let (phi, psi, g) = (phi0(), psi0(), g0());
    assert!(is_associative(&e(1), &e(2), &e(3), &phi, &g).unwrap());
    assert!(!is_associative(&e(2), &e(1), &e(3), &phi, &g).unwrap());
    assert!(!is_associative(&e(1), &e(4), &e(6), &phi, &g).unwrap());
    assert!(is_coassociative(&e(4), &e(5), &e(6), &e(7), &psi, &g).unwrap());
    assert!(!is_coassociative(&e(1), &e(2), &e(3), &e(4), &psi, &g).unwrap());
    assert_eq!(
        is_associative(&e(1), &e(1), &e(3), &phi, &g),
        Err(G2Error::DegenerateSpan(3))
    );
    // non-orthonormal spanning set of an associative plane: ⟨u, v, u × v⟩
    let u = ints(&[1, 1, 0, 0, 0, 0, 0]);
    let v = ints(&[0, 0, 0, 1, 2, 0, 0]);
    let w = cross(&u, &v, &phi, &g).unwrap();
    assert!(is_associative(&u, &v, &w, &phi, &g).unwrap());
}

#[test]
fn special_lagrangian_planes() {
    let (one, zero) = (Rat::one(), Rat::zero());
    let plane = [e(2), e(4), e(6)];
    assert!(is_special_lagrangian(&plane, (&one, &zero)).unwrap());
    assert!(is_associative(&e(2), &e(4), &e(6), &phi0(), &g0()).unwrap());
    // a complex line plus a real direction
    assert!(!is_special_lagrangian(&[e(2), e(3), e(4)], (&one, &zero)).unwrap());
    // rotating z¹ by e^{iα} with (cos α, sin α) = (3/5, 4/5) gives phase −α
    let (c, s) = (rat(3, 5), rat(4, 5));
    let rotated = [
        vec![
            Rat::zero(),
            c.clone(),
            s.clone(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
        ],
        e(4),
        e(6),
    ];
    assert!(is_special_lagrangian(&rotated, (&c, &-s.clone())).unwrap());
    assert!(!is_special_lagrangian(&rotated, (&one, &zero)).unwrap());
    assert!(matches!(
        is_special_lagrangian(&plane, (&one, &one)),
        Err(G2Error::NotUnitPhase(..))
    ));
}

#[test]
fn su3_structures() {
    let su3 = su3_from_unit_vector(&phi0(), &e(1)).unwrap();
    assert_eq!(su3, SU3Structure::standard());
    assert_eq!(su3.phi(), phi0());
    assert_eq!(su3.psi(), psi0());
    let other = su3_from_unit_vector(&phi0(), &e(2)).unwrap();
    assert!(other.type_condition() && other.normalization() && other.is_horizontal());
    assert_eq!(other.phi(), phi0());
    // (3/5) e₁ + (4/5) e₅ is a rational unit vector
    let u = vec![
        rat(3, 5),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        rat(4, 5),
        Rat::zero(),
        Rat::zero(),
    ];
    let tilted = su3_from_unit_vector(&phi0(), &u).unwrap();
    assert!(tilted.type_condition() && tilted.normalization() && tilted.is_horizontal());
    assert_eq!(tilted.psi(), psi0());
    assert!(matches!(
        su3_from_unit_vector(&phi0(), &ints(&[1, 1, 0, 0, 0, 0, 0])),
        Err(G2Error::NotUnit(_))
    ));
}

#[test]
fn su3_with_a_scaled_form() {
    // g = 4·id for 8φ₀, so e₁/2 is the unit vector
    let phi = phi0().scale(&rat(8, 1));
    let mut u = e(1);
    u[0] = rat(1, 2);
    let su3 = su3_from_unit_vector(&phi, &u).unwrap();
    assert!(su3.type_condition() && su3.normalization());
    assert_eq!(su3.phi(), phi);
}

#[test]
fn hyperkahler_triple() {
    let hk = HKTriple::standard();
    assert!(hk.relations_hold());
    assert_eq!(
        hk.omega_j.wedge(&hk.omega_j),
        Form::dx(4, &[1, 2, 3, 4]).scale(&rat(2, 1))
    );
    let broken = HKTriple {
        omega_j: hk.omega_i.clone(),
        ..hk
    };
    assert!(!broken.relations_hold());
}

#[test]
fn identity_suite_passes() {
    let report = verify_identity_suite(100, 7);
    assert!(report.passed(), "{report}");
    assert!(report
        .checks
        .iter()
        .any(|c| c.name == "associator_calibration" && c.cases == 443));
}

#[test]
fn corrupted_form_fails_with_witness() {
    let bad = phi0().sub(&Form::dx(7, &[3, 5, 6]).scale(&rat(-2, 1)));
    assert_eq!(bad.coeff(&[3, 5, 6]), Rat::one());
    let checks = verify_identities(&bad, &psi0(), 10, 1);
    let calib = checks
        .iter()
        .find(|c| c.name == "associator_calibration")
        .unwrap();
    assert!(calib.witness.as_ref().unwrap().starts_with("u = "));
}

#[test]
fn wedge_and_interior_basics() {
    let a = Form::dx(7, &[1, 2]);
    assert!(a.wedge(&a).is_zero());
    assert_eq!(Form::dx(7, &[2, 1]), a.neg());
    assert_eq!(a.interior(&e(2)), Form::dx(7, &[1]).neg());
    let top = phi0().wedge(&psi0());
    assert_eq!(top.top_coefficient(), rat(7, 1));
}

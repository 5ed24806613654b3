use crate::catalog;
use crate::coeff::{CoeffFn, GaussRational, Var};
use crate::exterior::Form;

use super::*;

fn gi() -> GaussRational {
    GaussRational::i()
}

fn var(v: Var) -> CoeffFn {
    CoeffFn::var(v).unwrap()
}

fn t2c() -> crate::exterior::ModelRef {
    catalog::complex_torus(1)
}

fn kt() -> BundleModel {
    let base = t2c();
    let dd =
        (Form::generator(&base, 0) ^ Form::generator(&base, 1)).scale_c(&GaussRational::from_parts((0, 1), (1, 2)));
    build_curved_bundle(&base, &[Form::zero(&base), dd], &[Form::zero(&base), Form::zero(&base)]).unwrap()
}

fn mixed_n2() -> BundleModel {
    let base = catalog::complex_torus(2);
    let g = |i| Form::generator(&base, i);
    // Re(dz1 ^ dz2) with generators dz1, dzb1, dz2, dzb2
    let chi = (&(g(0) ^ g(2)) + &(g(1) ^ g(3))).scale_c(&GaussRational::from_frac(1, 2));
    build_curved_bundle(&base, &[Form::zero(&base), chi], &[Form::zero(&base), Form::zero(&base)]).unwrap()
}

#[test]
fn trivial_bundle_has_standard_omega() {
    let base = t2c();
    let b = build_bundle(&base, 1, &[Form::zero(&base), Form::zero(&base)]).unwrap();
    assert_eq!(b.omega, b.theta[0].wedge(&b.theta[1]).unwrap());
    assert_eq!(b.omega, b.fiber_symplectic());
    assert!(curvature_type(&b).unwrap().is_11);
    assert!(construct_rho(&b, None).unwrap().is_closed());
}

#[test]
fn kodaira_thurston_assembly_matches_catalog() {
    let b = kt();
    let reference = catalog::kodaira_thurston_complex();
    assert_eq!(b.total.names(), reference.names());
    for i in 0..reference.rank() {
        let ours = Form::generator(&b.total, i).d().rebased(&reference).unwrap();
        assert_eq!(ours, Form::generator(&reference, i).d());
    }
    assert!(curvature_type(&b).unwrap().is_11);
    assert!(!b.omega.d().is_zero());
    let rho = construct_rho(&b, None).unwrap();
    assert!(rho.is_closed());
    let v = regular_gcs_check(&b, None, 4).unwrap();
    assert!(v.agree && v.d_rho_zero);
    assert_eq!(v.types, vec![1; 4]);
}

#[test]
fn non_11_curvature_breaks_closedness() {
    let b = mixed_n2();
    let c = curvature_type(&b).unwrap();
    assert!(!c.is_11);
    assert_eq!(c.witness.len(), 1);
    let v = regular_gcs_check(&b, None, 2).unwrap();
    assert!(!v.d_rho_zero && v.agree);
}

#[test]
fn eta_must_be_closed_and_real() {
    let b = kt();
    let t1 = Form::by_name(&b.total, "t1").unwrap();
    let t2 = Form::by_name(&b.total, "t2").unwrap();
    let dz = Form::by_name(&b.total, "dz").unwrap();
    assert!(matches!(construct_rho(&b, Some(&(&t1 ^ &t2))), Err(crate::Error::NotClosed(_))));
    assert!(matches!(construct_rho(&b, Some(&(&dz ^ &t1))), Err(crate::Error::NotReal(_))));
    let eta = &(&dz ^ &t1) + &(&dz ^ &t1).conj();
    assert!(construct_rho(&b, Some(&eta)).unwrap().is_closed());
}

#[test]
fn fiber_generators_are_not_connection_forms() {
    let b = kt();
    let t1 = Form::by_name(&b.total, "t1").unwrap();
    let err = build_bundle(&t2c(), 1, &[t1.clone(), Form::zero(&b.total)]).unwrap_err();
    assert!(matches!(err, crate::Error::ModelMismatch(_)));
}

#[test]
fn dbar_poincare_examples() {
    let c2 = catalog::complex_chart(2);
    let dzb1 = Form::by_name(&c2, "dzb1").unwrap();
    let dzb2 = Form::by_name(&c2, "dzb2").unwrap();
    let eta = dbar_poincare_solve(&(&dzb1 ^ &dzb2)).unwrap();
    assert_eq!(eta, dzb2.scale(&var(Var::Zb(0))));
    let a = dzb1.scale(&var(Var::Zb(0)));
    let eta = dbar_poincare_solve(&a).unwrap();
    let half = CoeffFn::constant(GaussRational::from_frac(1, 2));
    assert_eq!(eta, Form::function(&c2, &var(Var::Zb(0)).pow(2) * &half));
    assert!(dbar_poincare_solve(&Form::zero(&c2)).unwrap().is_zero());
    let not_closed = dzb1.scale(&var(Var::Zb(1)));
    assert!(dbar_poincare_solve(&not_closed).is_err());
}

#[test]
fn ddbar_examples() {
    let c1 = catalog::complex_chart(1);
    let dz = Form::by_name(&c1, "dz").unwrap();
    let dzb = Form::by_name(&c1, "dzb").unwrap();
    let (z, zb) = (var(Var::Z(0)), var(Var::Zb(0)));
    let a = (&dz ^ &dzb).scale_c(&gi());
    assert_eq!(ddbar_solve(&a, None).unwrap(), &z * &zb);
    let a = (&dz ^ &dzb).scale(&(&z * &zb)).scale_c(&GaussRational::from_parts((0, 1), (2, 1)));
    let expect = (&z.pow(2) * &zb.pow(2)).scale(&GaussRational::from_frac(1, 2));
    assert_eq!(ddbar_solve(&a, None).unwrap(), expect);
    let eta = dzb.scale(&z);
    let de = eta.del().unwrap();
    assert!(ddbar_solve(&(&de + &de.conj()), Some(&eta)).unwrap().is_zero());
}

#[test]
fn exact_potential_recovers_primitive() {
    let c1 = catalog::complex_chart(1);
    let (z, zb) = (var(Var::Z(0)), var(Var::Zb(0)));
    let phi = &(&z.pow(2) + &zb.pow(2)) + &(&z * &zb);
    let beta = Form::function(&c1, phi.clone()).d();
    assert_eq!(exact_potential(&beta).unwrap(), phi);
}

#[test]
fn component_equations_on_trivial_product() {
    let base = catalog::complex_chart(1);
    let b = build_bundle(&base, 1, &[Form::zero(&base), Form::zero(&base)]).unwrap();
    let exponent = b.omega.scale_c(&gi());
    let r = component_equations_check(&exponent, None).unwrap();
    assert!(r.all_hold() && r.reassembles && r.fiber_part_standard);
    assert_eq!(r.components.len(), 1);
}

#[test]
fn component_equations_on_11_chart() {
    let b = kodaira_thurston_chart().unwrap();
    assert!(curvature_type(&b).unwrap().is_11);
    let r = component_equations_check(&b.omega.scale_c(&gi()), None).unwrap();
    assert!(r.all_hold() && r.reassembles && r.fiber_part_standard);
    assert!(r.witness.is_empty());
}

#[test]
fn component_equations_flag_dbar_beta() {
    let base = catalog::complex_chart(2);
    let dz1 = Form::by_name(&base, "dz1").unwrap();
    let dzb1 = Form::by_name(&base, "dzb1").unwrap();
    let beta = &dzb1.scale(&var(Var::Zb(1))) + &dz1.scale(&var(Var::Z(1)));
    let b = build_bundle(&base, 1, &[Form::zero(&base), beta]).unwrap();
    assert!(!curvature_type(&b).unwrap().is_11);
    let r = component_equations_check(&b.omega.scale_c(&gi()), None).unwrap();
    assert!(!r.all_hold());
    assert!(r.reassembles);
    assert_eq!(r.witness.len(), 1);
    assert_eq!(r.witness[0].0, 2);
}

#[test]
fn trivial_connection_gives_zero_bhat() {
    let base = catalog::complex_chart(1);
    let b = build_bundle(&base, 1, &[Form::zero(&base), Form::zero(&base)]).unwrap();
    let out = local_product_b(&b, None).unwrap();
    let c = out.certificate().unwrap();
    assert!(c.bhat.is_zero());
    assert!(c.verified(), "{:?}", c.checks);
}

#[test]
fn flat_connection_certificate() {
    let base = catalog::complex_chart(1);
    let (z, zb) = (var(Var::Z(0)), var(Var::Zb(0)));
    let phi1 = &(&z * &zb).pow(2) + &(&z + &zb);
    let phi2 = &(&z.pow(2) + &zb.pow(2)) + &(&z * &zb);
    let beta: Vec<Form> = [phi1, phi2].into_iter().map(|p| Form::function(&base, p).d()).collect();
    let b = build_bundle(&base, 1, &beta).unwrap();
    assert!(b.is_flat());
    let out = local_product_b(&b, None).unwrap();
    let c = out.certificate().unwrap();
    assert!(!c.bhat.is_zero());
    assert!(c.verified(), "{:?}", c.checks);
    let chi = (&z * &zb).pow(2);
    let c2 = local_product_b(&b, Some(&chi)).unwrap();
    assert!(c2.certificate().unwrap().verified());
}

#[test]
fn curved_chart_is_obstructed() {
    let b = kodaira_thurston_chart().unwrap();
    match local_product_b(&b, None).unwrap() {
        ProductOutcome::Obstructed(o) => {
            assert_eq!(o.predicate, FLAT_PREDICATE);
            assert!(!o.residuals.is_empty());
        }
        ProductOutcome::Certificate(_) => panic!("curved chart must not be a product"),
    }
}

#[test]
fn fiber_obstruction_examples() {
    let m = catalog::chart_bundle(1, 1);
    let dt1 = Form::by_name(&m, "dt1").unwrap();
    let rhs = &var(Var::Z(0)) + &var(Var::Zb(0));
    let v = fiber_exactness_obstruction(&dt1, &rhs).unwrap();
    assert!(!v.solvable);
    assert_eq!(v.class, vec![GaussRational::from_int(1), GaussRational::from_int(0)]);
    let v = fiber_exactness_obstruction(&dt1, &CoeffFn::zero()).unwrap();
    assert!(v.solvable && v.f.unwrap().is_zero());
    let g = CoeffFn::character(vec![0, 2]);
    let sigma = Form::function(&m, g).d();
    let v = fiber_exactness_obstruction(&sigma, &rhs).unwrap();
    assert!(v.solvable);
    let f = Form::function(&m, v.f.unwrap());
    assert_eq!(f.d_fiber().unwrap(), sigma.scale(&-&rhs));
    let not_closed = dt1.scale(&CoeffFn::character(vec![0, 1]));
    assert!(fiber_exactness_obstruction(&not_closed, &rhs).is_err());
}

#[test]
fn nonproduct_scenario() {
    let s = nonproduct_chart().unwrap();
    for (k, v) in &s.checks {
        assert!(v, "{k}");
    }
    let (z, zb) = (var(Var::Z(0)), var(Var::Zb(0)));
    let base = s.a.model().clone();
    let expect =
        (Form::by_name(&base, "dz").unwrap() ^ Form::by_name(&base, "dzb").unwrap()).scale(&(&zb - &z)).scale_c(&gi());
    assert_eq!(s.d_a_twist, expect);
}

#[test]
fn curved_product_scenario() {
    let s = curved_product_chart().unwrap();
    for (k, v) in &s.checks {
        assert!(v, "{k}");
    }
}

#[test]
fn connection_differences_are_basic() {
    let base = catalog::complex_chart(1);
    let z = var(Var::Z(0));
    let beta = Form::by_name(&base, "dz").unwrap().scale(&z);
    let beta = &beta + &beta.conj();
    let a = build_bundle(&base, 1, &[Form::zero(&base), Form::zero(&base)]).unwrap();
    let b = a.with_beta(&[beta.clone(), beta]).unwrap();
    assert!(connection_difference_is_basic(&a, &b).unwrap());
}

use crate::catalog;
use crate::coeff::{CoeffFn, GaussRational, Var};

use super::*;

fn gi() -> GaussRational {
    GaussRational::i()
}

#[test]
fn wedge_examples() {
    let m = catalog::complex_chart(1);
    let dz = Form::dvar(&m, Var::Z(0)).unwrap();
    assert!((&dz ^ &dz).is_zero());

    let t = catalog::flat_t2();
    let (dx, dy) = (Form::generator(&t, 0), Form::generator(&t, 1));
    assert_eq!(&dx ^ &dy, -(&dy ^ &dx));
    assert_eq!(&(&dx + &dy) ^ &dx, -(&dx ^ &dy));
}

#[test]
fn wedge_rejects_other_models() {
    let a = Form::generator(&catalog::flat_t2(), 0);
    let b = Form::generator(&catalog::complex_torus(1), 0);
    assert!(matches!(a.wedge(&b), Err(crate::Error::ModelMismatch(_))));
}

#[test]
fn derivative_examples() {
    let m = catalog::complex_chart(1);
    let z = CoeffFn::var(Var::Z(0)).unwrap();
    let zb = CoeffFn::var(Var::Zb(0)).unwrap();
    let dz = Form::dvar(&m, Var::Z(0)).unwrap();
    let dzb = Form::dvar(&m, Var::Zb(0)).unwrap();
    assert_eq!(dz.scale(&(&z * &zb)).d(), (&dzb ^ &dz).scale(&z));
    assert!(dz.d().is_zero());

    let kt = catalog::kodaira_thurston();
    let e = |i| Form::generator(&kt, i);
    assert_eq!((e(2) ^ e(3)).d(), -(e(0) ^ e(1) ^ e(2)));
}

#[test]
fn interior_and_lie_examples() {
    let t = catalog::flat_t2();
    let dx = Form::generator(&t, 0);
    let dy = Form::generator(&t, 1);
    let px = VectorField::basis(&t, 0);
    assert_eq!((&dx ^ &dy).interior(&px).unwrap(), dy);
    assert!(dy.interior(&px).unwrap().is_zero());
    assert!(dx.lie_derivative(&px).unwrap().is_zero());

    // x dy on the complex line, with x = (z + zb)/2 and dy = (dz - dzb)/(2i)
    let m = catalog::complex_chart(1);
    let half = GaussRational::from_frac(1, 2);
    let x = (CoeffFn::var(Var::Z(0)).unwrap() + CoeffFn::var(Var::Zb(0)).unwrap()).scale(&half);
    let dz = Form::generator(&m, 0);
    let dzb = Form::generator(&m, 1);
    let dy = (&dz - &dzb).scale_c(&GaussRational::from_parts((0, 1), (-1, 2)));
    let px = VectorField::from_components(&m, [(0, CoeffFn::one()), (1, CoeffFn::one())]);
    assert_eq!(dy.scale(&x).lie_derivative(&px).unwrap(), dy);

    let b = catalog::chart_bundle(1, 1);
    let th2 = Form::generator(&b, 3);
    let e1 = CoeffFn::character(vec![1]);
    let pt1 = VectorField::basis(&b, 2);
    assert_eq!(th2.scale(&e1).lie_derivative(&pt1).unwrap(), th2.scale(&e1.scale(&gi())));
}

#[test]
fn reversal_and_conjugation_examples() {
    let t = catalog::flat_t2();
    let dx = Form::generator(&t, 0);
    let dxdy = &dx ^ &Form::generator(&t, 1);
    assert_eq!(dx.reversal(), dx);
    assert_eq!(dxdy.reversal(), -&dxdy);
    let mixed = &Form::one(&t) + &dxdy.scale_c(&gi());
    assert_eq!(mixed.reversal(), &Form::one(&t) - &dxdy.scale_c(&gi()));

    let b = catalog::chart_bundle(1, 1);
    let dz = Form::generator(&b, 0);
    let dzb = Form::generator(&b, 1);
    let th1 = Form::generator(&b, 2);
    let th2 = Form::generator(&b, 3);
    assert_eq!(dz.scale_c(&gi()).conj(), dzb.scale_c(&-gi()));
    assert_eq!((&th1 ^ &th2).conj(), &th1 ^ &th2);
    let f = (&dz ^ &th1).scale(&CoeffFn::character(vec![1]));
    assert_eq!(f.conj(), (&dzb ^ &th1).scale(&CoeffFn::character(vec![-1])));
}

#[test]
fn trigrade_examples() {
    let b = catalog::chart_bundle(1, 1);
    let (dz, dzb, th1, th2) =
        (Form::generator(&b, 0), Form::generator(&b, 1), Form::generator(&b, 2), Form::generator(&b, 3));
    let parts = (&th1 ^ &th2).trigrade().unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[&(2, 0, 0)], &th1 ^ &th2);
    let parts = (&dz ^ &dzb).trigrade().unwrap();
    assert_eq!(parts[&(0, 1, 1)], &dz ^ &dzb);
    assert!(catalog::kodaira_thurston().generators().iter().any(|g| g.grade == Grade::R));
    let kt = catalog::kodaira_thurston();
    assert!(Form::generator(&kt, 0).trigrade().is_err());
}

#[test]
fn top_component_and_exp() {
    let t = catalog::flat_t2();
    let w = Form::generator(&t, 0) ^ Form::generator(&t, 1);
    assert_eq!((&Form::one(&t) + &w).top_component(), w);
    assert!(Form::generator(&t, 0).top_component().is_zero());
    assert_eq!(w.scale_c(&gi()).exp().unwrap().top_component(), w.scale_c(&gi()));
    assert!(Form::one(&t).exp().is_err());
    assert!(Form::generator(&t, 0).exp().is_err());
}

#[test]
fn bracket_uses_structure_constants() {
    // [E1, E2] = -ι_{E2} ι_{E1} de4 E4 = -E4 on Kodaira-Thurston
    let kt = catalog::kodaira_thurston();
    let x = VectorField::basis(&kt, 0);
    let y = VectorField::basis(&kt, 1);
    let br = x.lie_bracket(&y).unwrap();
    assert_eq!(br, VectorField::basis(&kt, 3).scale_c(&GaussRational::from_int(-1)));
}

#[test]
fn product_model_shifts_structure() {
    let kt = catalog::kodaira_thurston();
    let p = CoframeModel::product(&catalog::flat_t2(), &kt).unwrap();
    assert_eq!(p.rank(), 6);
    let e = |i| Form::generator(&p, i);
    assert_eq!(e(5).d(), e(2) ^ e(3));
}

#[test]
fn display_is_readable() {
    let b = catalog::chart_bundle(1, 1);
    let z = CoeffFn::var(Var::Z(0)).unwrap();
    let f = &Form::generator(&b, 0).scale(&z) - &Form::generator(&b, 2).scale_c(&GaussRational::from_frac(1, 2));
    assert_eq!(f.to_string(), "z*dz - 1/2*dt1");
    let g = Form::generator(&b, 1).scale_c(&GaussRational::from_parts((1, 1), (1, 1)));
    assert_eq!(g.to_string(), "(1+i)*dzb");
}

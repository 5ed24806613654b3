//! Worked chart scenarios over `ℂ` with fiber `T²`.

use std::collections::BTreeMap;

use crate::catalog;
use crate::coeff::{CoeffFn, GaussRational, Var};
use crate::error::Result;
use crate::exterior::{Blade, Form};

use super::product::{
    b_field_criterion, fiber_exactness_obstruction, local_product_b, ExactnessVerdict, ProductOutcome,
};
use super::{build_bundle, construct_rho, BundleModel};

fn z() -> CoeffFn {
    CoeffFn::var(Var::Z(0)).expect("z")
}

fn zb() -> CoeffFn {
    CoeffFn::var(Var::Zb(0)).expect("zb")
}

/// Chart bundle over `ℂ` with `l = 1`, `β_1 = 0` and `β_2 = i(A − Ā)` for a `(1,0)`- or
/// `(0,1)`-form `A`, so that `ω = dt1∧dt2 + (A − Ā)∧dt1 · (−i)`.
fn twisted(a: &Form) -> Result<BundleModel> {
    let base = a.model().clone();
    let beta2 = (a - &a.conj()).scale_c(&GaussRational::i());
    build_bundle(&base, 1, &[Form::zero(&base), beta2])
}

/// `ℂ × T²` with the twisted symplectic fiber coming from `A = i z z̄ dz`, `σ = dt1`.
#[derive(Clone, Debug)]
pub struct NonProductChart {
    pub bundle: BundleModel,
    pub a: Form,
    pub sigma: Form,
    pub rho: Form,
    pub d_omega: Form,
    /// `d(A − Ā)`.
    pub d_a_twist: Form,
    /// `r` in `(dC)^{111} = i r dz∧dz̄∧σ` for the forced `C^{101} = −Ā∧σ`.
    pub rhs: CoeffFn,
    pub obstruction: ExactnessVerdict,
    /// Same equation with `σ` replaced by the exact `d(cos t1)`.
    pub exact_variant: ExactnessVerdict,
    pub checks: BTreeMap<String, bool>,
}

pub fn nonproduct_chart() -> Result<NonProductChart> {
    let base = catalog::complex_chart(1);
    let dz = Form::by_name(&base, "dz")?;
    let a = dz.scale(&(&z() * &zb())).scale_c(&GaussRational::i());
    let bundle = twisted(&a)?;
    let total = bundle.total.clone();
    let sigma = Form::by_name(&total, "dt1")?;
    let rho = construct_rho(&bundle, None)?;
    let d_omega = bundle.omega.d();
    let dz_t = bundle.pullback(&dz)?;
    let i = GaussRational::i();
    let d_iomega_dz = bundle.omega.scale_c(&i).d().wedge(&dz_t)?;
    let nondeg = bundle.omega.wedge(&dz_t)?.wedge(&dz_t.conj())?;
    let fiber_nondeg = bundle.fiber_symplectic().wedge(&dz_t)?.wedge(&dz_t.conj())?;

    let a_t = bundle.pullback(&a)?;
    let c101 = -(a_t.conj().wedge(&sigma)?);
    let c110 = c101.conj();
    let dc = (&c101 + &c110).d().tri_component(1, 1, 1)?;
    let blade = Blade::from_indices(&[0, 1, total.index_of("dt1").expect("dt1")]);
    let rhs = dc.coefficient(blade).scale(&-i.clone());
    let rest = &dc - &dz_t.wedge(&dz_t.conj())?.wedge(&sigma)?.scale(&rhs.scale(&i));

    let obstruction = fiber_exactness_obstruction(&sigma, &rhs)?;
    // cos t1 = (E(1,0) + E(-1,0)) / 2
    let cos_t1 = &CoeffFn::character(vec![1, 0]).scale(&GaussRational::from_frac(1, 2))
        + &CoeffFn::character(vec![-1, 0]).scale(&GaussRational::from_frac(1, 2));
    let exact_sigma = Form::function(&total, cos_t1).d();
    let exact_variant = fiber_exactness_obstruction(&exact_sigma, &rhs)?;

    let mut checks = BTreeMap::new();
    checks.insert("d omega != 0".to_string(), !d_omega.is_zero());
    checks.insert("d(i omega) ^ dz = 0".to_string(), d_iomega_dz.is_zero());
    checks
        .insert("omega ^ dz ^ dzb = omega_F ^ dz ^ dzb != 0".to_string(), nondeg == fiber_nondeg && !nondeg.is_zero());
    checks.insert("d rho = 0".to_string(), rho.is_closed());
    checks.insert("(dC)^111 is a multiple of dz^dzb^sigma".to_string(), rest.is_zero());
    checks.insert("rhs = z + zb".to_string(), rhs == &z() + &zb());
    checks.insert("obstruction unsolvable".to_string(), !obstruction.solvable);
    checks.insert("exact sigma solvable".to_string(), exact_variant.solvable);
    checks.insert("B-field criterion fails".to_string(), !b_field_criterion(&bundle)?.is_empty());
    checks.insert(
        "no local product certificate".to_string(),
        matches!(local_product_b(&bundle, None)?, ProductOutcome::Obstructed(_)),
    );

    Ok(NonProductChart {
        d_a_twist: (&a - &a.conj()).d(),
        bundle,
        a,
        sigma,
        rho,
        d_omega,
        rhs,
        obstruction,
        exact_variant,
        checks,
    })
}

/// `ℂ × T²` with two curved fibers `A_1 = (z²/2 + z z̄)dz̄`, `A_2 = z dz̄`, each of
/// which is a B-transform of the product.
#[derive(Clone, Debug)]
pub struct CurvedProductChart {
    pub bundles: Vec<BundleModel>,
    pub a: Vec<Form>,
    /// `B_j = (A_j + Ā_j) ∧ σ`.
    pub b: Vec<Form>,
    pub checks: BTreeMap<String, bool>,
}

pub fn curved_product_chart() -> Result<CurvedProductChart> {
    let base = catalog::complex_chart(1);
    let dzb = Form::by_name(&base, "dzb")?;
    let a1 = dzb.scale(&(&(&z() * &z()).scale(&GaussRational::from_frac(1, 2)) + &(&z() * &zb())));
    let a2 = dzb.scale(&z());
    let i = GaussRational::i();
    let mut checks = BTreeMap::new();
    let mut bundles = Vec::new();
    let mut bs = Vec::new();
    for (j, a) in [a1.clone(), a2.clone()].iter().enumerate() {
        let bundle = twisted(a)?;
        let total = bundle.total.clone();
        let sigma = Form::by_name(&total, "dt1")?;
        let a_t = bundle.pullback(a)?;
        let b = (&a_t + &a_t.conj()).wedge(&sigma)?;
        let dz_t = Form::by_name(&total, "dz")?;
        let omega_f = bundle.fiber_symplectic();
        let lhs = (&b + &omega_f.scale_c(&i)).exp()?.wedge(&dz_t)?;
        let rhs = construct_rho(&bundle, None)?;
        let k = j + 1;
        checks.insert(format!("d B_{k} = 0"), b.is_closed());
        checks.insert(format!("B_{k} is real"), b.is_real());
        checks.insert(format!("e^(B_{k} + i omega_F) ^ dz = e^(i omega_{k}) ^ dz"), lhs == rhs);
        checks.insert(format!("d omega_{k} != 0"), !bundle.omega.d().is_zero());
        checks.insert(format!("curvature_{k} != 0"), !bundle.is_flat());
        checks.insert(format!("B-field criterion holds for {k}"), b_field_criterion(&bundle)?.is_empty());
        checks.insert(
            format!("flat predicate fails for {k}"),
            matches!(local_product_b(&bundle, None)?, ProductOutcome::Obstructed(_)),
        );
        bundles.push(bundle);
        bs.push(b);
    }
    Ok(CurvedProductChart { bundles, a: vec![a1, a2], b: bs, checks })
}

/// Kodaira–Thurston restricted to a chart: `β_2 = (i/4)(z dz̄ − z̄ dz)`, `dβ_2 = dx∧dy`.
pub fn kodaira_thurston_chart() -> Result<BundleModel> {
    let base = catalog::complex_chart(1);
    let dz = Form::by_name(&base, "dz")?;
    let dzb = Form::by_name(&base, "dzb")?;
    let beta2 = (&dzb.scale(&z()) - &dz.scale(&zb())).scale_c(&GaussRational::from_parts((0, 1), (1, 4)));
    build_bundle(&base, 1, &[Form::zero(&base), beta2])
}

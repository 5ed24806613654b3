use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::{CoeffFn, GaussRational, Monomial, Var};
use crate::error::{Error, Result};
use crate::exterior::{same_model_ref, Blade, Form, Grade};
use crate::generalized::b_transform;

use super::components::component_equations_check;
use super::poincare::{dbar_poincare_solve, exact_potential};
use super::{construct_rho, BundleModel};

/// Predicate checked by [`local_product_b`]: the `(1,1)` curvature
/// `∂β_j^{01} + conj(∂β_j^{01})` and the `(0,2)` curvature `∂̄β_j^{01}` vanish.
pub const FLAT_PREDICATE: &str = "del(beta_j^01) + conj(del(beta_j^01)) = 0 and dbar(beta_j^01) = 0 for all j";

#[derive(Clone, Debug)]
pub struct ProductCertificate {
    /// Fiber translation `t_j ↦ t_j + g_j(z)` applied before the B-field.
    pub gauge: Vec<CoeffFn>,
    pub bhat: Form,
    pub eta: Form,
    pub eta_prime: Form,
    pub chi: CoeffFn,
    /// The spinor after the gauge.
    pub rho_tilde: Form,
    /// `e^{i ω_T} ∧ Ω`.
    pub rho_product: Form,
    pub checks: BTreeMap<String, bool>,
}

impl ProductCertificate {
    pub fn verified(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "gauge": self.gauge.iter().map(|g| g.display(self.bhat.model().vars()).to_string()).collect::<Vec<_>>(),
            "bhat": self.bhat.to_string(),
            "eta": self.eta.to_string(),
            "eta_prime": self.eta_prime.to_string(),
            "chi": self.chi.display(self.bhat.model().vars()).to_string(),
            "checks": self.checks,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductObstruction {
    pub predicate: String,
    /// `(j, offending form)` for every connection form that violates the predicate.
    pub residuals: Vec<(usize, String)>,
}

#[derive(Clone, Debug)]
pub enum ProductOutcome {
    Certificate(Box<ProductCertificate>),
    Obstructed(ProductObstruction),
}

impl ProductOutcome {
    pub fn is_certificate(&self) -> bool {
        matches!(self, ProductOutcome::Certificate(_))
    }

    pub fn certificate(&self) -> Option<&ProductCertificate> {
        match self {
            ProductOutcome::Certificate(c) => Some(c),
            ProductOutcome::Obstructed(_) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ProductOutcome::Certificate(c) => serde_json::json!({"product": true, "certificate": c.to_json()}),
            ProductOutcome::Obstructed(o) => serde_json::json!({"product": false, "obstruction": o}),
        }
    }
}

fn is_pure(m: &Monomial, n: usize) -> bool {
    let has_z = (0..n).any(|a| m.exp(Var::Z(a)) != 0);
    let has_zb = (0..n).any(|a| m.exp(Var::Zb(a)) != 0);
    !(has_z && has_zb)
}

/// `φ = h + g` with `h` a sum of holomorphic and antiholomorphic monomials
/// (so `∂∂̄h = 0`) and `g` the mixed remainder.
pub fn split_pluriharmonic(phi: &CoeffFn, n: usize) -> (CoeffFn, CoeffFn) {
    let h = phi.filter(|m| is_pure(m, n));
    let g = phi - &h;
    (h, g)
}

/// Pull back a form along the fiber translation `t_j ↦ t_j + g_j(z)`.
pub fn gauge_pullback(form: &Form, bundle: &BundleModel, gauge: &[CoeffFn]) -> Result<Form> {
    if !same_model_ref(form.model(), &bundle.total) {
        return Err(Error::ModelMismatch("gauge pullback expects a total-space form".into()));
    }
    let model = &bundle.total;
    for c in form.terms().values() {
        if (0..model.vars().angle_len()).any(|j| c.depends_on(Var::T(j))) {
            return Err(Error::Unsupported("gauge pullback of angle-dependent coefficients".into()));
        }
    }
    let images: Vec<Form> = bundle
        .fiber
        .iter()
        .zip(gauge)
        .map(|(&f, g)| Ok(&Form::generator(model, f) + &bundle.pullback(&Form::function(&bundle.base, g.clone()).d())?))
        .collect::<Result<_>>()?;
    let mut out = Form::zero(model);
    for (blade, c) in form.terms() {
        let mut term = Form::function(model, c.clone());
        for i in blade.indices() {
            let factor = match bundle.fiber.iter().position(|&f| f == i) {
                Some(j) => images[j].clone(),
                None => Form::generator(model, i),
            };
            term = term.wedge(&factor)?;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// `(0,1)` part of a base 1-form.
fn part01(f: &Form) -> Result<Form> {
    f.tri_component(0, 0, 1)
}

/// Nonzero pieces of `∂β^{01} ± conj(∂β^{01})` (sign from `plus`) and `∂̄β^{01}`.
fn criterion_residuals(beta: &[Form], plus: bool) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (j, b) in beta.iter().enumerate() {
        let b01 = part01(b)?;
        let db = b01.del()?;
        let mixed = if plus { &db + &db.conj() } else { &db - &db.conj() };
        for r in [mixed, b01.delbar()?] {
            if !r.is_zero() {
                out.push((j + 1, r.to_string()));
            }
        }
    }
    Ok(out)
}

/// Residuals of the B-field criterion on each `β_j`: `∂β^{01} − conj(∂β^{01})` and `∂̄β^{01}`.
pub fn b_field_criterion(bundle: &BundleModel) -> Result<Vec<(usize, String)>> {
    criterion_residuals(&bundle.beta, false)
}

/// Local product structure on a chart bundle: a fiber translation and a closed real
/// `B̂` with `e^{B̂} ∧ e^{iω_T} ∧ Ω` equal to the translated spinor.
///
/// Fails with the violated predicate when the connection is not flat.
pub fn local_product_b(bundle: &BundleModel, chi0: Option<&CoeffFn>) -> Result<ProductOutcome> {
    if !bundle.is_chart() {
        return Err(Error::Unsupported("local product structures are built on chart bundles".into()));
    }
    let residuals = criterion_residuals(&bundle.beta, true)?;
    if !residuals.is_empty() || !bundle.is_flat() {
        return Ok(ProductOutcome::Obstructed(ProductObstruction { predicate: FLAT_PREDICATE.into(), residuals }));
    }
    let n = bundle.n();
    let base = &bundle.base;
    let mut gauge = Vec::new();
    let mut h_beta = Vec::new();
    for b in &bundle.beta {
        let (h, g) = split_pluriharmonic(&exact_potential(b)?, n);
        gauge.push(-g);
        h_beta.push(Form::function(base, h).d());
    }
    let rho = construct_rho(bundle, None)?;
    let rho_tilde = gauge_pullback(&rho, bundle, &gauge)?;
    let omega_tilde = gauge_pullback(&bundle.omega, bundle, &gauge)?;
    let exponent = omega_tilde.scale_c(&GaussRational::i());

    let i = GaussRational::i();
    let mut a02 = Form::zero(base);
    for j in 0..bundle.l {
        a02 = &a02 + &part01(&h_beta[2 * j])?.wedge(&part01(&h_beta[2 * j + 1])?)?.scale_c(&i);
    }
    let eta = dbar_poincare_solve(&a02)?;
    let chi = chi0.cloned().unwrap_or_else(CoeffFn::zero);
    if !chi.is_real() {
        return Err(Error::NotReal(format!("chi = {chi}")));
    }
    let de = eta.del()?;
    let ddbar_chi = Form::function(base, chi.clone()).delbar()?.del()?.scale_c(&i);
    let a11 = &(&de + &de.conj()) + &ddbar_chi;
    let eta_prime = dbar_poincare_solve(&(&a11 - &de))?;
    let ahat = bundle.pullback(&a11)?;

    let parts = exponent.trigrade()?;
    let zero = Form::zero(&bundle.total);
    let a101 = parts.get(&(1, 0, 1)).cloned().unwrap_or_else(|| zero.clone());
    let a002 = parts.get(&(0, 0, 2)).cloned().unwrap_or_else(|| zero.clone());
    let bhat = &(&(&a101 + &a101.conj()) + &(&a002 + &a002.conj())) + &ahat;

    let omega_t = bundle.fiber_symplectic().scale_c(&i);
    let rho_product = if omega_t.is_zero() { Form::one(&bundle.total) } else { omega_t.exp()? };
    let rho_product = rho_product.wedge(&bundle.big_omega)?;

    let report = component_equations_check(&exponent, Some(&bhat))?;
    let mut checks = BTreeMap::new();
    checks.insert("bhat is real".to_string(), bhat.is_real());
    checks.insert("bhat is closed".to_string(), bhat.is_closed());
    let shifted = if bhat.is_zero() { rho_product.clone() } else { bhat.exp()?.wedge(&rho_product)? };
    checks.insert("e^bhat ^ rho_product = rho_tilde".to_string(), shifted == rho_tilde);
    let bt = b_transform(&rho_product, &bhat)?;
    checks.insert("b_transform(rho_product, bhat) = rho_tilde".to_string(), bt == rho_tilde);
    checks.insert("rho_tilde is closed".to_string(), rho_tilde.is_closed());
    checks.insert("component equations".to_string(), report.all_hold());
    checks.insert("fiber part is standard".to_string(), report.fiber_part_standard);
    checks.insert("a02 = dbar eta".to_string(), eta.delbar()? == a02);
    checks.insert("a11 - del eta = dbar eta_prime".to_string(), eta_prime.delbar()? == &a11 - &de);
    checks.insert("gauged criterion".to_string(), criterion_residuals(&h_beta, false)?.is_empty());

    Ok(ProductOutcome::Certificate(Box::new(ProductCertificate {
        gauge,
        bhat,
        eta,
        eta_prime,
        chi,
        rho_tilde,
        rho_product,
        checks,
    })))
}

/// Decision on `d_F f = −rhs·σ` over the invariant fiber complex.
#[derive(Clone, Debug)]
pub struct ExactnessVerdict {
    pub solvable: bool,
    pub f: Option<CoeffFn>,
    /// Coefficients of `[σ]` on the harmonic basis `dt_1, …, dt_{2l}`.
    pub class: Vec<GaussRational>,
}

impl ExactnessVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "solvable": self.solvable,
            "f": self.f.as_ref().map(|f| f.to_string()),
            "class": self.class.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Is `d_F f + rhs·σ = 0` solvable for a `d_F`-closed fiber 1-form `σ`?
///
/// `σ` splits into constant (harmonic) and oscillating parts; only the latter is
/// `d_F`-exact, with primitive `g` found mode by mode, and then `f = −rhs·g`.
pub fn fiber_exactness_obstruction(sigma: &Form, rhs: &CoeffFn) -> Result<ExactnessVerdict> {
    let model = sigma.model().clone();
    let fiber: Vec<usize> = model.indices_with_grade(Grade::F);
    if !sigma.is_zero() && !sigma.is_homogeneous_of(1) {
        return Err(Error::Degree(format!("sigma must be a 1-form, got {sigma}")));
    }
    if sigma.terms().keys().any(|b| !fiber.contains(&b.indices()[0])) {
        return Err(Error::Precondition("sigma must be a fiber 1-form".into()));
    }
    let dfs = sigma.d_fiber()?;
    if !dfs.is_zero() {
        return Err(Error::NotClosed(format!("d_F sigma = {dfs}")));
    }
    let class: Vec<GaussRational> =
        fiber.iter().map(|&f| sigma.coefficient(Blade::single(f)).constant_term()).collect();
    let harmonic = class.iter().any(|c| !num_traits::Zero::is_zero(c));
    if rhs.is_zero() {
        return Ok(ExactnessVerdict { solvable: true, f: Some(CoeffFn::zero()), class });
    }
    if harmonic {
        return Ok(ExactnessVerdict { solvable: false, f: None, class });
    }
    let mut g = CoeffFn::zero();
    let mut done = std::collections::BTreeSet::new();
    for &f in &fiber {
        let var = model
            .generator(f)
            .exact_var()
            .ok_or_else(|| Error::Unsupported("fiber generators must be coordinate differentials dt_j".into()))?;
        for (m, c) in sigma.coefficient(Blade::single(f)).terms() {
            let k = m.exp(var);
            if k == 0 || done.contains(m) {
                continue;
            }
            done.insert(m.clone());
            let denom = &GaussRational::i() * &GaussRational::from_int(k);
            g.add_term(m.clone(), c / &denom);
        }
    }
    let dg = Form::function(&model, g.clone()).d_fiber()?;
    if &dg != sigma {
        return Err(Error::Precondition(format!("mode-wise primitive failed: d_F g = {dg}")));
    }
    let f = -(rhs * &g);
    Ok(ExactnessVerdict { solvable: true, f: Some(f), class })
}

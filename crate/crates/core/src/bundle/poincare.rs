//! Polynomial Poincaré-type solvers on chart models, by monomial-wise integration.

use crate::coeff::{CoeffFn, GaussRational, Var};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, ModelRef, VectorField};

fn exact_gens(model: &ModelRef, keep: impl Fn(Var) -> bool) -> Vec<(usize, Var)> {
    (0..model.rank()).filter_map(|i| model.generator(i).exact_var().filter(|v| keep(*v)).map(|v| (i, v))).collect()
}

/// Solve `op(x) = a` where `op` differentiates along `gens`, integrating the
/// lowest-index generator first. The caller checks closedness.
fn integrate(a: &Form, gens: &[(usize, Var)], op: impl Fn(&Form) -> Result<Form>) -> Result<Form> {
    let model = a.model().clone();
    let mut rest = a.clone();
    let mut out = Form::zero(&model);
    for &(g, v) in gens {
        let with_g = rest.filter(|b| b.contains(g));
        if with_g.is_zero() {
            continue;
        }
        // with_g = dg ∧ alpha with alpha free of dg
        let alpha = with_g.interior(&VectorField::basis(&model, g))?;
        let mut terms = Vec::new();
        for (blade, c) in alpha.terms() {
            terms.push((*blade, c.antiderivative(v)?));
        }
        let step = Form::from_terms(&model, terms);
        rest = &rest - &op(&step)?;
        out = &out + &step;
    }
    if !rest.is_zero() {
        return Err(Error::Precondition(format!("integration left a residual {rest}")));
    }
    Ok(out)
}

fn check_chart(a: &Form) -> Result<()> {
    if a.model().vars().chart_len() == 0 {
        return Err(Error::Unsupported("Poincaré solvers need a chart model with coordinates".into()));
    }
    Ok(())
}

/// `η` with `∂̄η = a`, for a `∂̄`-closed form `a` of positive anti-holomorphic degree.
/// Holomorphic coframe factors are carried along unchanged.
pub fn dbar_poincare_solve(a: &Form) -> Result<Form> {
    check_chart(a)?;
    if a.is_zero() {
        return Ok(Form::zero(a.model()));
    }
    let residual = a.delbar()?;
    if !residual.is_zero() {
        return Err(Error::NotClosed(format!("dbar of input = {residual}")));
    }
    let gens = exact_gens(a.model(), |v| matches!(v, Var::Zb(_)));
    let eta = integrate(a, &gens, Form::delbar)?;
    if eta.delbar()? != *a {
        return Err(Error::Precondition(format!("dbar-primitive check failed for {a}")));
    }
    Ok(eta)
}

/// `η` with `∂η = a`, for a `∂`-closed form `a` of positive holomorphic degree.
pub fn del_poincare_solve(a: &Form) -> Result<Form> {
    check_chart(a)?;
    if a.is_zero() {
        return Ok(Form::zero(a.model()));
    }
    let residual = a.del()?;
    if !residual.is_zero() {
        return Err(Error::NotClosed(format!("del of input = {residual}")));
    }
    let gens = exact_gens(a.model(), |v| matches!(v, Var::Z(_)));
    let eta = integrate(a, &gens, Form::del)?;
    if eta.del()? != *a {
        return Err(Error::Precondition(format!("del-primitive check failed for {a}")));
    }
    Ok(eta)
}

/// Real `φ` with `dφ = beta` for a closed real 1-form on a chart.
pub fn exact_potential(beta: &Form) -> Result<CoeffFn> {
    check_chart(beta)?;
    if beta.is_zero() {
        return Ok(CoeffFn::zero());
    }
    if !beta.is_homogeneous_of(1) {
        return Err(Error::Degree(format!("expected a 1-form, got {beta}")));
    }
    if !beta.is_closed() {
        return Err(Error::NotClosed(format!("d(beta) = {}", beta.d())));
    }
    let gens = exact_gens(beta.model(), |v| matches!(v, Var::Z(_) | Var::Zb(_)));
    let phi = integrate(beta, &gens, |f| Ok(f.d()))?;
    let phi = phi.coefficient(Blade::empty());
    Ok(if beta.is_real() { phi.real_part() } else { phi })
}

/// Real `χ` with `i∂∂̄χ = a − ∂η − conj(∂η)`.
pub fn ddbar_solve(a: &Form, eta: Option<&Form>) -> Result<CoeffFn> {
    check_chart(a)?;
    let model = a.model().clone();
    let mut residue = a.clone();
    if let Some(eta) = eta {
        let de = eta.del()?;
        residue = &(&residue - &de) - &de.conj();
    }
    if residue.is_zero() {
        return Ok(CoeffFn::zero());
    }
    if !residue.is_homogeneous_of(2) || residue.tri_component(0, 1, 1)? != residue {
        return Err(Error::Degree(format!("residue must be a (1,1)-form, got {residue}")));
    }
    let (dr, dbr) = (residue.del()?, residue.delbar()?);
    if !dr.is_zero() || !dbr.is_zero() {
        return Err(Error::NotClosed(format!("residue {residue}: del = {dr}, dbar = {dbr}")));
    }
    let minus_i = -GaussRational::i();
    // ∂γ = −i·residue, then correct γ by an antiholomorphic piece so that ∂̄γ = 0
    let gamma = del_poincare_solve(&residue.scale_c(&minus_i))?;
    let dbar_gamma = gamma.delbar()?;
    let gamma = if dbar_gamma.is_zero() { gamma } else { &gamma - &dbar_poincare_solve(&dbar_gamma)? };
    let chi = dbar_poincare_solve(&gamma)?.coefficient(Blade::empty()).real_part();
    let check = Form::function(&model, chi.clone()).delbar()?.del()?.scale_c(&GaussRational::i());
    if check != residue {
        return Err(Error::Precondition(format!("i del dbar chi = {check}, expected {residue}")));
    }
    Ok(chi)
}

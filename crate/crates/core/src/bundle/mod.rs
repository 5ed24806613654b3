//! Principal torus bundles over complex bases, presented by connection forms
//! `θ_j = τ_j + π^*β_j` on a coframe model.

mod components;
mod poincare;
mod product;
mod scenarios;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::{ExactPoint, GaussRational, Var, VariableTable};
use crate::error::{Error, Result};
use crate::exterior::{same_model_ref, Form, GeneratorKind, Grade, ModelBuilder, ModelRef};
use crate::generalized::type_at;

pub use components::{component_equations_check, ComponentReport, EquationStatus};
pub use poincare::{dbar_poincare_solve, ddbar_solve, del_poincare_solve, exact_potential};
pub use product::{
    b_field_criterion, fiber_exactness_obstruction, gauge_pullback, local_product_b, split_pluriharmonic,
    ExactnessVerdict, ProductCertificate, ProductObstruction, ProductOutcome, FLAT_PREDICATE,
};
pub use scenarios::{
    curved_product_chart, kodaira_thurston_chart, nonproduct_chart, CurvedProductChart, NonProductChart,
};

/// Bundle with base model, fiber rank `2l` and a chosen connection.
#[derive(Clone, Debug)]
pub struct BundleModel {
    pub base: ModelRef,
    pub l: usize,
    pub total: ModelRef,
    /// Indices of the fiber generators `τ_j` in `total`.
    pub fiber: Vec<usize>,
    /// `dτ_j`, as base forms (zero on charts).
    pub structure: Vec<Form>,
    /// Base 1-forms `β_j`.
    pub beta: Vec<Form>,
    pub theta: Vec<Form>,
    /// `χ_j = dτ_j + dβ_j` on the base.
    pub curvature: Vec<Form>,
    pub omega: Form,
    pub big_omega: Form,
}

fn check_base(base: &ModelRef) -> Result<()> {
    for g in base.generators() {
        if !matches!(g.grade, Grade::H | Grade::A) {
            return Err(Error::InvalidModel(format!(
                "base generator `{}` has grade {}; a complex base must be H/A tagged",
                g.name,
                g.grade.as_str()
            )));
        }
    }
    if base.vars().angle_len() > 0 {
        return Err(Error::InvalidModel("a base chart cannot carry angle variables".into()));
    }
    Ok(())
}

fn check_base_form(base: &ModelRef, f: &Form, what: &str, degree: usize) -> Result<()> {
    if !same_model_ref(f.model(), base) {
        return Err(Error::ModelMismatch(format!("{what} must be a base form; fiber generators are not allowed")));
    }
    if !f.is_zero() && !f.is_homogeneous_of(degree) {
        return Err(Error::Degree(format!("{what} must have degree {degree}, got {f}")));
    }
    if !f.is_real() {
        return Err(Error::NotReal(format!("{what} = {f}")));
    }
    Ok(())
}

/// Chart of angles `t1..t2l` with exact coframe `dt_j`.
fn angle_chart(l: usize) -> Result<ModelRef> {
    let angles: Vec<String> = (1..=2 * l).map(|j| format!("t{j}")).collect();
    let vars = VariableTable::new(Vec::<String>::new(), angles)?;
    let mut b = ModelBuilder::new(vars);
    for j in 0..2 * l {
        b.add_exact(&format!("dt{}", j + 1), Var::T(j));
    }
    b.build()
}

/// Invariant total model: base generators followed by `t1..t2l` with `dt_j = structure_j`.
fn invariant_total(base: &ModelRef, structure: &[Form]) -> Result<ModelRef> {
    let mut b = ModelBuilder::new(VariableTable::empty());
    for g in base.generators() {
        b.add_generator(&g.name, g.grade);
    }
    for (i, g) in base.generators().iter().enumerate() {
        if g.conj != i {
            b.set_conj(i, g.conj);
        }
    }
    let fiber: Vec<usize> = (0..structure.len()).map(|j| b.add_generator(&format!("t{}", j + 1), Grade::F)).collect();
    let sk = b.skeleton()?;
    for (i, g) in base.generators().iter().enumerate() {
        if let GeneratorKind::Structure(t) = &g.kind {
            if !t.is_empty() {
                b.set_diff(i, &Form::from_terms(&sk, t.clone()))?;
            }
        }
    }
    for (j, s) in structure.iter().enumerate() {
        if !s.is_zero() {
            b.set_diff(fiber[j], &s.rebased(&sk)?)?;
        }
    }
    b.build()
}

/// Bundle with `dτ_j = 0` and connection `θ_j = τ_j + β_j`.
pub fn build_bundle(base: &ModelRef, l: usize, beta: &[Form]) -> Result<BundleModel> {
    let zero = vec![Form::zero(base); 2 * l];
    build_curved_bundle(base, &zero, beta)
}

/// Bundle whose fiber generators carry invariant structure `dτ_j = structure_j`.
///
/// Invariant bases have no primitives for nonzero classes, so curvature enters through
/// `structure`; chart bases take `structure = 0` and curvature `dβ_j`.
pub fn build_curved_bundle(base: &ModelRef, structure: &[Form], beta: &[Form]) -> Result<BundleModel> {
    check_base(base)?;
    let l2 = structure.len();
    if l2 % 2 == 1 {
        return Err(Error::InvalidModel("fiber rank must be even".into()));
    }
    if beta.len() != l2 {
        return Err(Error::InvalidModel(format!("expected {l2} connection 1-forms, got {}", beta.len())));
    }
    for (j, b) in beta.iter().enumerate() {
        check_base_form(base, b, &format!("beta[{}]", j + 1), 1)?;
    }
    for (j, s) in structure.iter().enumerate() {
        check_base_form(base, s, &format!("structure[{}]", j + 1), 2)?;
        if !s.is_closed() {
            return Err(Error::NotClosed(format!("structure[{}] = {s}", j + 1)));
        }
    }
    let chart = !base.vars().is_empty();
    let total = if chart {
        if structure.iter().any(|s| !s.is_zero()) {
            return Err(Error::Unsupported("chart bundles carry curvature through beta only".into()));
        }
        base.product(&angle_chart(l2 / 2)?)?
    } else {
        invariant_total(base, structure)?
    };
    let r = base.rank();
    let fiber: Vec<usize> = (r..r + l2).collect();
    let pull = |f: &Form| f.rebased(&total);
    let mut theta = Vec::new();
    let mut curvature = Vec::new();
    for j in 0..l2 {
        theta.push(&Form::generator(&total, fiber[j]) + &pull(&beta[j])?);
        curvature.push(&structure[j] + &beta[j].d());
    }
    let mut omega = Form::zero(&total);
    for j in 0..l2 / 2 {
        omega = &omega + &theta[2 * j].wedge(&theta[2 * j + 1])?;
    }
    let mut big_omega = Form::one(&total);
    for i in base.indices_with_grade(Grade::H) {
        big_omega = big_omega.wedge_generator(i);
    }
    Ok(BundleModel {
        base: base.clone(),
        l: l2 / 2,
        total,
        fiber,
        structure: structure.to_vec(),
        beta: beta.to_vec(),
        theta,
        curvature,
        omega,
        big_omega,
    })
}

impl BundleModel {
    /// Complex dimension of the base.
    pub fn n(&self) -> usize {
        self.base.indices_with_grade(Grade::H).len()
    }

    pub fn is_chart(&self) -> bool {
        !self.base.vars().is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.curvature.iter().all(Form::is_zero)
    }

    pub fn pullback(&self, f: &Form) -> Result<Form> {
        if !same_model_ref(f.model(), &self.base) {
            return Err(Error::ModelMismatch("expected a base form".into()));
        }
        f.rebased(&self.total)
    }

    /// `ω_T = Σ τ_{2j−1} ∧ τ_{2j}`.
    pub fn fiber_symplectic(&self) -> Form {
        let mut w = Form::zero(&self.total);
        for j in 0..self.l {
            w = &w
                + &(Form::generator(&self.total, self.fiber[2 * j])
                    ^ Form::generator(&self.total, self.fiber[2 * j + 1]));
        }
        w
    }

    /// Another connection on the same bundle.
    pub fn with_beta(&self, beta: &[Form]) -> Result<BundleModel> {
        let other = build_curved_bundle(&self.base, &self.structure, beta)?;
        // keep the same total model reference
        let rebase = |f: &Form| f.rebased(&self.total);
        Ok(BundleModel {
            total: self.total.clone(),
            theta: other.theta.iter().map(rebase).collect::<Result<_>>()?,
            omega: rebase(&other.omega)?,
            big_omega: rebase(&other.big_omega)?,
            ..other
        })
    }
}

/// Per-component curvature types.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub is_11: bool,
    /// `(j, (p,q) → component)` for every nonzero curvature piece.
    pub components: Vec<(usize, BTreeMap<String, String>)>,
    /// `∂̄β_j^{(0,1)}`, the `(0,2)` part of the curvature, for each offending `j`.
    pub witness: Vec<(usize, String)>,
}

pub fn curvature_type(bundle: &BundleModel) -> Result<CurvatureReport> {
    let mut is_11 = true;
    let mut components = Vec::new();
    let mut witness = Vec::new();
    for (j, chi) in bundle.curvature.iter().enumerate() {
        let parts = chi.trigrade()?;
        let mut named = BTreeMap::new();
        for ((_, p, q), f) in &parts {
            named.insert(format!("({p},{q})"), f.to_string());
        }
        if let Some(w) = parts.get(&(0, 0, 2)) {
            is_11 = false;
            witness.push((j + 1, w.to_string()));
        }
        if parts.contains_key(&(0, 2, 0)) {
            is_11 = false;
        }
        if !named.is_empty() {
            components.push((j + 1, named));
        }
    }
    Ok(CurvatureReport { is_11, components, witness })
}

/// `ρ = e^{η + iω} ∧ π^*Ω` for a closed real 2-form `η` on the total space.
pub fn construct_rho(bundle: &BundleModel, eta: Option<&Form>) -> Result<Form> {
    let i = GaussRational::i();
    let mut exponent = bundle.omega.scale_c(&i);
    if let Some(eta) = eta {
        if !same_model_ref(eta.model(), &bundle.total) {
            return Err(Error::ModelMismatch("eta must live on the total space".into()));
        }
        if !eta.is_zero() && !eta.is_homogeneous_of(2) {
            return Err(Error::Degree(format!("eta must be a 2-form, got {eta}")));
        }
        if !eta.is_real() {
            return Err(Error::NotReal(format!("eta = {eta}")));
        }
        if !eta.is_closed() {
            return Err(Error::NotClosed(format!("d(eta) = {}", eta.d())));
        }
        exponent = &exponent + eta;
    }
    let e = if exponent.is_zero() { Form::one(&bundle.total) } else { exponent.exp()? };
    e.wedge(&bundle.big_omega)
}

/// Closedness of `ρ` against the curvature type, with the type of `ρ` at sample points.
#[derive(Clone, Debug, Serialize)]
pub struct RegularGcsVerdict {
    pub d_rho_zero: bool,
    pub is_11: bool,
    pub agree: bool,
    pub types: Vec<usize>,
    pub d_rho: String,
    pub witness: Vec<(usize, String)>,
}

pub fn regular_gcs_check(bundle: &BundleModel, eta: Option<&Form>, points: usize) -> Result<RegularGcsVerdict> {
    let rho = construct_rho(bundle, eta)?;
    let d_rho = rho.d();
    let curv = curvature_type(bundle)?;
    let grid = ExactPoint::sample_grid(bundle.total.vars());
    let types = grid.iter().cycle().take(points).map(|p| type_at(&rho, p)).collect::<Result<Vec<_>>>()?;
    Ok(RegularGcsVerdict {
        d_rho_zero: d_rho.is_zero(),
        is_11: curv.is_11,
        agree: d_rho.is_zero() == curv.is_11,
        types,
        d_rho: d_rho.to_string(),
        witness: curv.witness,
    })
}

/// For two connections on the same bundle, is every `θ_j − θ'_j` basic (no fiber
/// generator, no angle dependence)?
pub fn connection_difference_is_basic(a: &BundleModel, b: &BundleModel) -> Result<bool> {
    if !same_model_ref(&a.total, &b.total) || a.theta.len() != b.theta.len() {
        return Err(Error::ModelMismatch("connections on different bundles".into()));
    }
    let fiber_angles: Vec<Var> = (0..a.total.vars().angle_len()).map(Var::T).collect();
    for (x, y) in a.theta.iter().zip(&b.theta) {
        let diff = x - &y.rebased(&a.total)?;
        for (blade, c) in diff.terms() {
            if a.fiber.iter().any(|&f| blade.contains(f)) || fiber_angles.iter().any(|&v| c.depends_on(v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;

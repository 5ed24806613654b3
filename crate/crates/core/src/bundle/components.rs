use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::GaussRational;
use crate::error::{Error, Result};
use crate::exterior::{Form, Grade, VectorField};

#[derive(Clone, Debug, Serialize)]
pub struct EquationStatus {
    pub name: String,
    pub holds: bool,
    pub residual: String,
}

/// Tri-graded pieces `A^{rpq}` of an exponent 2-form and the closedness equations they satisfy.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub components: BTreeMap<(usize, usize, usize), Form>,
    pub equations: Vec<EquationStatus>,
    /// Is the `(2,0,0)` piece equal to `i Σ dt_{2j−1} ∧ dt_{2j}`?
    pub fiber_part_standard: bool,
    pub reassembles: bool,
    /// `∂̄β_j^{(0,1)}` recovered from `∂̄A^{101}` by contraction with fiber directions.
    pub witness: Vec<(usize, Form)>,
}

impl ComponentReport {
    pub fn component(&self, r: usize, p: usize, q: usize) -> Option<&Form> {
        self.components.get(&(r, p, q))
    }

    pub fn all_hold(&self) -> bool {
        self.equations.iter().all(|e| e.holds)
    }

    pub fn equation(&self, name: &str) -> Option<&EquationStatus> {
        self.equations.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "components": self
                .components
                .iter()
                .map(|((r, p, q), f)| (format!("{r}{p}{q}"), serde_json::Value::String(f.to_string())))
                .collect::<serde_json::Map<_, _>>(),
            "equations": self.equations,
            "fiber_part_standard": self.fiber_part_standard,
            "reassembles": self.reassembles,
            "witness": self.witness.iter().map(|(j, f)| (j, f.to_string())).collect::<Vec<_>>(),
        })
    }
}

fn status(name: &str, residual: Form) -> EquationStatus {
    EquationStatus { name: name.to_string(), holds: residual.is_zero(), residual: residual.to_string() }
}

/// Split `exponent` (for `ρ = e^{exponent} ∧ Ω` on a product chart) into its six
/// tri-graded pieces and check the four equations coming from `d(exponent) ∧ Ω = 0`.
///
/// With `bhat`, the two closedness conditions on its `(0,1,1)` part are checked as well.
pub fn component_equations_check(exponent: &Form, bhat: Option<&Form>) -> Result<ComponentReport> {
    if !exponent.is_zero() && !exponent.is_homogeneous_of(2) {
        return Err(Error::Degree(format!("exponent must be a 2-form, got {exponent}")));
    }
    let model = exponent.model().clone();
    let parts = exponent.trigrade()?;
    let zero = Form::zero(&model);
    let get = |k: (usize, usize, usize)| parts.get(&k).cloned().unwrap_or_else(|| zero.clone());
    let a200 = get((2, 0, 0));
    let a101 = get((1, 0, 1));
    let a002 = get((0, 0, 2));

    let mut equations = vec![
        status("dbar A002 = 0", a002.delbar()?),
        status("dbar A101 + dF A002 = 0", &a101.delbar()? + &a002.d_fiber()?),
        status("dbar A200 + dF A101 = 0", &a200.delbar()? + &a101.d_fiber()?),
        status("dF A200 = 0", a200.d_fiber()?),
    ];
    if let Some(b) = bhat {
        let ahat = b.tri_component(0, 1, 1)?;
        equations.push(status("del A002 + dbar Ahat = 0", &a002.del()? + &ahat.delbar()?));
        let da = a101.del()?;
        equations.push(status("del A101 + conj(del A101) + dF Ahat = 0", &(&da + &da.conj()) + &ahat.d_fiber()?));
    }

    let fiber = model.indices_with_grade(Grade::F);
    let mut omega_t = Form::zero(&model);
    for pair in fiber.chunks(2) {
        if let [a, b] = pair {
            omega_t = &omega_t + &(Form::generator(&model, *a) ^ Form::generator(&model, *b));
        }
    }
    let fiber_part_standard = a200 == omega_t.scale_c(&GaussRational::i());

    let mut sum = Form::zero(&model);
    for f in parts.values() {
        sum = &sum + f;
    }

    // A101 = i Σ (dt_{2j-1} ∧ β_{2j} + β_{2j-1} ∧ dt_{2j}), so contractions of ∂̄A101 give ∂̄β
    let dbar_a101 = a101.delbar()?;
    let mut witness = Vec::new();
    let i = GaussRational::i();
    for (k, pair) in fiber.chunks(2).enumerate() {
        if let [a, b] = pair {
            let w_even = dbar_a101.interior(&VectorField::basis(&model, *a))?.scale_c(&i);
            let w_odd = dbar_a101.interior(&VectorField::basis(&model, *b))?.scale_c(&-&i);
            if !w_odd.is_zero() {
                witness.push((2 * k + 1, w_odd));
            }
            if !w_even.is_zero() {
                witness.push((2 * k + 2, w_even));
            }
        }
    }
    witness.sort_by_key(|(j, _)| *j);

    Ok(ComponentReport { components: parts, equations, fiber_part_standard, reassembles: &sum == exponent, witness })
}

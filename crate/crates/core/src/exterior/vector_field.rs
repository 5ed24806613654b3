use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{CoeffFn, ExactPoint, GaussRational};
use crate::error::{Error, Result};

use super::form::same_model;
use super::model::ModelRef;
use super::Form;

/// A vector field in the frame dual to the model's generators.
///
/// Duals of exact generators `dv` act on coefficients as `∂/∂v`; duals of abstract
/// generators annihilate coefficients.
#[derive(Clone)]
pub struct VectorField {
    model: ModelRef,
    comps: BTreeMap<usize, CoeffFn>,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.comps == other.comps
    }
}

impl Eq for VectorField {}

impl VectorField {
    pub fn zero(model: &ModelRef) -> Self {
        VectorField { model: model.clone(), comps: BTreeMap::new() }
    }

    /// The frame vector dual to generator `i`.
    pub fn basis(model: &ModelRef, i: usize) -> Self {
        VectorField::from_components(model, [(i, CoeffFn::one())])
    }

    pub fn by_name(model: &ModelRef, name: &str) -> Result<Self> {
        model
            .index_of(name)
            .map(|i| VectorField::basis(model, i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn from_components(model: &ModelRef, comps: impl IntoIterator<Item = (usize, CoeffFn)>) -> Self {
        let mut v = VectorField::zero(model);
        for (i, c) in comps {
            assert!(i < model.rank(), "component index out of range");
            v.add_component(i, c);
        }
        v
    }

    fn add_component(&mut self, i: usize, c: CoeffFn) {
        if c.is_zero() {
            return;
        }
        let entry = self.comps.entry(i).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.comps.remove(&i);
        }
    }

    pub fn model(&self) -> &ModelRef {
        &self.model
    }

    pub fn component(&self, i: usize) -> CoeffFn {
        self.comps.get(&i).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> &BTreeMap<usize, CoeffFn> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn try_add(&self, other: &VectorField) -> Result<VectorField> {
        if !same_model(&self.model, &other.model) {
            return Err(Error::ModelMismatch("vector fields from different models".into()));
        }
        let mut v = self.clone();
        for (i, c) in &other.comps {
            v.add_component(*i, c.clone());
        }
        Ok(v)
    }

    pub fn scale(&self, f: &CoeffFn) -> VectorField {
        VectorField::from_components(&self.model, self.comps.iter().map(|(i, c)| (*i, c * f)))
    }

    pub fn scale_c(&self, c: &GaussRational) -> VectorField {
        self.scale(&CoeffFn::constant(c.clone()))
    }

    pub fn conj(&self) -> VectorField {
        VectorField::from_components(
            &self.model,
            self.comps.iter().map(|(i, c)| (self.model.generator(*i).conj, c.conj())),
        )
    }

    /// `X(f)`.
    pub fn apply(&self, f: &CoeffFn) -> CoeffFn {
        let mut out = CoeffFn::zero();
        for (i, c) in &self.comps {
            if let Some(v) = self.model.generator(*i).exact_var() {
                out += &(c * &f.partial(v));
            }
        }
        out
    }

    /// `[X, Y]^k = X(Y^k) − Y(X^k) − ι_Y ι_X de^k`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField> {
        if !same_model(&self.model, &other.model) {
            return Err(Error::ModelMismatch("vector fields from different models".into()));
        }
        let mut out = VectorField::zero(&self.model);
        for k in 0..self.model.rank() {
            let mut c = &self.apply(&other.component(k)) - &other.apply(&self.component(k));
            let dek = Form::generator(&self.model, k).d();
            if !dek.is_zero() {
                let v = dek.interior(self)?.interior(other)?;
                c -= &v.coefficient(super::Blade::empty());
            }
            out.add_component(k, c);
        }
        Ok(out)
    }

    pub fn at_point(&self, point: &ExactPoint) -> Result<VectorField> {
        let mut out = VectorField::zero(&self.model);
        for (i, c) in &self.comps {
            out.add_component(*i, CoeffFn::constant(c.evaluate_exact(point)?));
        }
        Ok(out)
    }

    pub fn is_constant(&self) -> bool {
        self.comps.values().all(CoeffFn::is_constant)
    }
}

impl<'a> std::ops::Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        self.try_add(rhs).expect("vector fields from different models")
    }
}

impl<'a> std::ops::Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self.try_add(&-rhs).expect("vector fields from different models")
    }
}

impl std::ops::Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.scale_c(&GaussRational::from_int(-1))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(i, c)| {
                let name = &self.model.generator(*i).name;
                if c.is_one() {
                    format!("∂[{name}]")
                } else {
                    format!("({})·∂[{name}]", c.display(self.model.vars()))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

use std::fmt;

use crate::coeff::{CoeffFn, ExactPoint, GaussRational};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, ModelRef, VectorField};

/// A section `X + ξ` of `(T ⊕ T*) ⊗ ℂ`.
#[derive(Clone, PartialEq, Eq)]
pub struct GenVector {
    pub vec: VectorField,
    pub cov: Form,
}

impl GenVector {
    pub fn new(vec: VectorField, cov: Form) -> Result<Self> {
        if !crate::exterior::same_model_ref(vec.model(), cov.model()) {
            return Err(Error::ModelMismatch("vector and covector parts".into()));
        }
        if !cov.is_homogeneous_of(1) {
            return Err(Error::Degree(format!("covector part must be a 1-form, got {cov}")));
        }
        Ok(GenVector { vec, cov })
    }

    pub fn zero(model: &ModelRef) -> Self {
        GenVector { vec: VectorField::zero(model), cov: Form::zero(model) }
    }

    pub fn vector(vec: VectorField) -> Self {
        let cov = Form::zero(vec.model());
        GenVector { vec, cov }
    }

    pub fn covector(cov: Form) -> Result<Self> {
        GenVector::new(VectorField::zero(cov.model()), cov)
    }

    pub fn model(&self) -> &ModelRef {
        self.vec.model()
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.cov.is_zero()
    }

    /// Frame slot `s`: `s < rank` is the dual vector `E_s`, otherwise the generator `e^{s-rank}`.
    pub fn slot(model: &ModelRef, s: usize) -> Self {
        let m = model.rank();
        if s < m {
            GenVector::vector(VectorField::basis(model, s))
        } else {
            GenVector::covector(Form::generator(model, s - m)).expect("1-form")
        }
    }

    /// Coefficients on the `2·rank` frame slots.
    pub fn coordinates(&self) -> Vec<CoeffFn> {
        let m = self.model().rank();
        (0..m).map(|i| self.vec.component(i)).chain((0..m).map(|i| self.cov.coefficient(Blade::single(i)))).collect()
    }

    pub fn from_coordinates(model: &ModelRef, coords: &[CoeffFn]) -> Self {
        let m = model.rank();
        assert_eq!(coords.len(), 2 * m);
        let vec = VectorField::from_components(model, (0..m).map(|i| (i, coords[i].clone())));
        let cov = Form::from_terms(model, (0..m).map(|i| (Blade::single(i), coords[m + i].clone())));
        GenVector { vec, cov }
    }

    pub fn from_constants(model: &ModelRef, coords: &[GaussRational]) -> Self {
        let c: Vec<CoeffFn> = coords.iter().cloned().map(CoeffFn::constant).collect();
        GenVector::from_coordinates(model, &c)
    }

    /// Constant coordinates, if every coefficient is constant.
    pub fn constant_coordinates(&self) -> Option<Vec<GaussRational>> {
        self.coordinates().iter().map(CoeffFn::constant_value).collect()
    }

    pub fn try_add(&self, other: &GenVector) -> Result<GenVector> {
        Ok(GenVector { vec: self.vec.try_add(&other.vec)?, cov: self.cov.try_add(&other.cov)? })
    }

    pub fn scale(&self, f: &CoeffFn) -> GenVector {
        GenVector { vec: self.vec.scale(f), cov: self.cov.scale(f) }
    }

    pub fn scale_c(&self, c: &GaussRational) -> GenVector {
        self.scale(&CoeffFn::constant(c.clone()))
    }

    pub fn conj(&self) -> GenVector {
        GenVector { vec: self.vec.conj(), cov: self.cov.conj() }
    }

    pub fn at_point(&self, p: &ExactPoint) -> Result<GenVector> {
        Ok(GenVector { vec: self.vec.at_point(p)?, cov: self.cov.at_point(p)? })
    }

    pub fn is_constant(&self) -> bool {
        self.vec.is_constant() && self.cov.is_constant()
    }

    /// `⟨u, v⟩ = ½(ξ(Y) + η(X))`.
    pub fn pairing(&self, other: &GenVector) -> Result<CoeffFn> {
        let a = other.cov.interior(&self.vec)?.coefficient(Blade::empty());
        let b = self.cov.interior(&other.vec)?.coefficient(Blade::empty());
        Ok((&a + &b).scale(&GaussRational::from_frac(1, 2)))
    }

    /// Courant bracket `[X,Y] + L_X η − L_Y ξ − ½ d(ι_X η − ι_Y ξ)`.
    pub fn courant(&self, other: &GenVector) -> Result<GenVector> {
        let (x, xi) = (&self.vec, &self.cov);
        let (y, eta) = (&other.vec, &other.cov);
        let vec = x.lie_bracket(y)?;
        let corr = (&eta.interior(x)? - &xi.interior(y)?).d().scale_c(&GaussRational::from_frac(1, 2));
        let cov = &(&eta.lie_derivative(x)? - &xi.lie_derivative(y)?) - &corr;
        Ok(GenVector { vec, cov })
    }

    /// Clifford action `ι_X φ + ξ ∧ φ`.
    pub fn act(&self, phi: &Form) -> Result<Form> {
        Ok(&phi.interior(&self.vec)? + &self.cov.wedge(phi)?)
    }

    /// B-shear `X + ξ ↦ X + ξ − ι_X B`.
    pub fn b_shear(&self, b: &Form) -> Result<GenVector> {
        Ok(GenVector { vec: self.vec.clone(), cov: &self.cov - &b.interior(&self.vec)? })
    }
}

impl<'a> std::ops::Add<&'a GenVector> for &'a GenVector {
    type Output = GenVector;
    fn add(self, rhs: &GenVector) -> GenVector {
        self.try_add(rhs).expect("generalized vectors from different models")
    }
}

impl<'a> std::ops::Sub<&'a GenVector> for &'a GenVector {
    type Output = GenVector;
    fn sub(self, rhs: &GenVector) -> GenVector {
        self.try_add(&rhs.scale_c(&GaussRational::from_int(-1))).expect("generalized vectors from different models")
    }
}

impl fmt::Display for GenVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.vec.is_zero(), self.cov.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.vec),
            (true, false) => write!(f, "{}", self.cov),
            (false, false) => write!(f, "{} + [{}]", self.vec, self.cov),
        }
    }
}

impl fmt::Debug for GenVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenVector({self})")
    }
}

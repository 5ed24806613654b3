//! The `T ⊕ T*` layer: pairing, Courant bracket, spinors and generalized complex structures.

mod annihilator;
mod endomorphism;
mod genvector;
mod spinor;

pub use annihilator::{
    annihilator, involutivity_check, Annihilator, Involutivity, InvolutivityFailure, InvolutivityMethod,
};
pub use endomorphism::{b_shear_matrix, endomorphism_from_spinor, pairing_matrix, symplectic_block, PointFrameJ};
pub use genvector::GenVector;
pub use spinor::{
    b_transform, integrability_witness, is_decomposable, pure_spinor, subsets_of, type_at, GcsSpec, Nondegeneracy,
    PureSpinor, Witness,
};

use crate::error::Result;
use crate::exterior::Form;

/// Mukai pairing `(α(σ₁) ∧ σ₂)_top`.
pub fn mukai_pairing(s1: &Form, s2: &Form) -> Result<Form> {
    s1.mukai(s2)
}

//! Exact coefficient ring: Gaussian-rational polynomials in `z, z̄` times torus characters.

mod coeff_fn;
mod gauss;
mod vars;

pub use coeff_fn::{CoeffDisplay, CoeffFn, Monomial};
pub use gauss::GaussRational;
pub use vars::{conjugate_name, ExactPoint, FloatPoint, Var, VariableTable};

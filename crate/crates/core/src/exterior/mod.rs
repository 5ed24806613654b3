//! Coframe models and their sparse exterior algebra.

mod form;
mod model;
mod vector_field;

pub use form::{same_model as same_model_ref, Blade, Form, Terms};
pub use model::{CoframeModel, Generator, GeneratorKind, Grade, ModelBuilder, ModelRef};
pub use vector_field::VectorField;

#[cfg(test)]
mod tests;

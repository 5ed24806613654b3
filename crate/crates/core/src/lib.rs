pub mod bundle;
pub mod catalog;
pub mod cli;
pub mod coeff;
pub mod document;
pub mod dolbeault;
pub mod error;
pub mod exterior;
pub mod generalized;
pub mod linalg;
pub mod report;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};

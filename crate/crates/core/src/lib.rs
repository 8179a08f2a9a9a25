//! Certification of spectrum-maximizing products for pairs of 2×2 matrices,
//! Fricke trace polynomials, and a randomized search in trace space for
//! pairs whose spectrum-maximizing products come in chiral pairs.

pub mod cli;
pub mod constants;
pub mod error;
pub mod fricke;
pub mod mat2;
pub mod poly;
pub mod polytope;
pub mod search;
pub mod words;

pub use error::{Error, Result};

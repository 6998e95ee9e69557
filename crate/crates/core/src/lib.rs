//! Vectorial Boolean functions with the maximum number of bent components.
//!
//! Finite-field arithmetic, Walsh spectra, bent-component censuses,
//! linearized polynomials and their adjoints, the quadratic families built
//! as `x^(2^i) L(x)`, differential spectra, and EA/CCZ transforms, all
//! checked by exhaustive computation at small dimensions.

pub mod boolfun;
pub mod cli;
pub mod constructions;
pub mod diffspec;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod linmaps;
pub mod rng;
pub mod vectorial;

pub use error::{Error, Result};

//! Exact simultaneous triangularization of finitely generated matrix
//! semigroups over ℚ and GF(p), plus numeric block unitarization for complex
//! semigroups whose elements have spectra on circles.

pub mod error;
pub mod harness;
pub mod invariant;
pub mod linalg;
mod roots;
pub mod scalar;
pub mod semigroup;
pub mod spectrum;
pub mod triangularize;
pub mod unitarize;

pub use error::{Error, Result};
pub use linalg::{Flag, Matrix, Polynomial, Subspace};
pub use scalar::{FieldDescriptor, Fp, Rational, Scalar};

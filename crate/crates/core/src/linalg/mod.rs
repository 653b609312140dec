//! Dense exact linear algebra over a single field.

pub(crate) mod charpoly;
mod flag;
mod matrix;
mod poly;
mod subspace;

pub use flag::{extend_basis, restrict_and_quotient, verify_flag, Flag};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use subspace::{unit_vector, Subspace};

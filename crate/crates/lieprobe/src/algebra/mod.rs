//! Finite-field arithmetic, subspaces in reduced row echelon form, and
//! alternating/quadratic forms.
//!
//! Everything here is exact and exhaustive: fields are lookup tables verified
//! against the axioms at construction, subspaces are canonical RREF matrices,
//! and singular subspaces are enumerated by a pruned echelon search rather
//! than sampled.

mod field;
mod form;
mod subspace;

pub use field::Field;
pub use form::{Form, FormKind};
pub use subspace::{enumerate_subspaces, gaussian_binomial, subspaces_within, Subspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// The requested order is not a prime power, so no field of that order exists.
    #[error("order {0} is not a prime power")]
    NonPrimeCharacteristic(u16),
    /// Orders above 9 are out of scope for the table-backed representation.
    #[error("field order {0} exceeds the supported maximum of 9")]
    OrderTooLarge(u16),
    /// Rows of unequal length, or a subspace request with k > d.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: matrices, Smith
//! normal form with unimodular transforms, cokernels presented as finitely
//! generated abelian groups, and invariants of symmetric bilinear forms
//! (rank, signature, determinant, parity) together with a certificate-producing
//! search for integral congruences.

mod congruence;
mod form;
mod group;
mod matrix;
mod snf;

pub use congruence::{congruence_search, CongruenceCert, CongruenceMove, ReplayError};
pub use form::{determinant, inertia, parity, rank, signature, FormInvariants, Inertia, Parity};
pub use group::{cokernel, kernel_basis, AbelianGroup};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse matrix literal: {0}")]
    Parse(String),
}

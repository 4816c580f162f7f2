//! Exact integer linear algebra over `Z^n`.

mod lattice;
mod matrix;
mod snf;
mod sparse;

pub use lattice::{kernel, split_by_idempotent, Lattice};
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, smith_normal_form, SnfResult};
pub use sparse::{combine, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice is not contained in the ambient lattice")]
    NotContained,
    #[error("map is not idempotent on the lattice")]
    NotIdempotent,
    #[error("map does not preserve the lattice")]
    NotPreserved,
}

/// An endomorphism of `Z^n` acting on column vectors.
pub trait IntLinearMap {
    fn dim(&self) -> usize;
    fn apply(&self, v: &SparseVec) -> SparseVec;
}

impl IntLinearMap for IntMatrix {
    fn dim(&self) -> usize {
        self.cols()
    }

    fn apply(&self, v: &SparseVec) -> SparseVec {
        IntMatrix::apply(self, v)
    }
}

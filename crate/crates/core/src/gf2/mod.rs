//! Packed linear algebra over GF(2).
//!
//! Matrices are values: reductions elsewhere in the crate return a new
//! matrix together with the [`OpLog`] that produced it, so column indices in
//! a transformed matrix can always be mapped back to the input.

mod matrix;
mod oplog;
mod vector;

pub use matrix::BitMatrix;
pub use oplog::{ElementaryOp, OpLog};
pub use vector::BitVector;

/// GF(2) rank.
#[must_use]
pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Solves `m * x = target` with free variables fixed to zero.
pub fn solve_linear(m: &BitMatrix, target: &BitVector) -> crate::Result<Option<BitVector>> {
    m.solve(target)
}

/// A basis of the right kernel of `m`.
#[must_use]
pub fn nullspace_basis(m: &BitMatrix) -> Vec<BitVector> {
    m.nullspace_basis()
}

//! Symmetric nondegenerate integer Gram matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::mat::IntMat;
use super::LatticeError;

/// A lattice presented by its Gram matrix in a fixed basis.
///
/// Construction rejects non-symmetric and degenerate matrices, so every
/// downstream operation can assume a nondegenerate form.
#[derive(Clone, PartialEq, Eq)]
pub struct GramMatrix {
    mat: IntMat,
    det: BigInt,
}

impl GramMatrix {
    pub fn new(mat: IntMat) -> Result<Self, LatticeError> {
        if !mat.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let det = mat.det();
        if det.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(GramMatrix { mat, det })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(IntMat::from_i64_rows(rows))
    }

    pub fn rank(&self) -> usize {
        self.mat.rows()
    }

    /// Signed determinant, computed once at construction.
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// A symmetric integer form is even iff its diagonal is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.mat[(i, i)].is_even())
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let mat = IntMat::block_diag(&[&self.mat, &other.mat]);
        let det = &self.det * &other.det;
        GramMatrix { mat, det }
    }
}

impl std::fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GramMatrix(rank {}, det {})\n{:?}",
            self.rank(),
            self.det,
            self.mat
        )
    }
}

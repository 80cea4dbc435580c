//! Generic integral-lattice engine over arbitrary-precision integers.
//!
//! Gram matrices, Smith and Hermite normal forms, discriminant groups
//! carrying their finite quadratic forms, and overlattice assembly from
//! glue data. Nothing in this module knows about cubic fourfolds; it is
//! the independent verification machinery the counting layer drives.

mod disc;
mod glue;
mod gram;
mod hnf;
mod mat;
mod snf;

pub use disc::{discriminant_group, DiscriminantGroup};
pub use glue::{is_saturated, overlattice_from_glue, GlueDatum, Overlattice};
pub use gram::GramMatrix;
pub use hnf::row_hermite_normal_form;
pub use mat::{IntMat, RatMat};
pub use snf::{smith_normal_form, SmithNormalForm};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("gram matrix must be symmetric")]
    NotSymmetric,
    #[error("gram matrix must be nondegenerate (det != 0)")]
    Degenerate,
    #[error("glue generator {index} does not pair integrally (not admissible)")]
    NonIntegralPairing { index: usize },
    #[error("sublattice basis vectors are linearly dependent")]
    DependentVectors,
    #[error("coordinate vector has wrong length: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Reduces `value` into the half-open window `[0, modulus)`.
///
/// Values of finite quadratic forms live in Q/2Z (even lattices) or Q/Z
/// (odd ones); a fixed fundamental domain makes equality decidable.
pub fn reduce_mod(value: &BigRational, modulus: u64) -> BigRational {
    let m = BigRational::from(BigInt::from(modulus));
    let q = (value / &m).floor();
    let r = value - q * &m;
    debug_assert!(!r.is_negative() && r < m);
    r
}

//! Lattices attached to a very general special cubic fourfold with 18 | d.
//!
//! For `d = 18 d'` the algebraic part of the Mukai lattice is
//! `N = A_2 + <-6d'>`, the primitive part is `S = <-6d'>`, and the
//! transcendental lattice `T` is isometric to the rank-21 block sum
//! `E8(-1)^2 + U + A_2(-1) + <6d'>`. This module hard-codes those Gram
//! matrices and the closed form of the discriminant form of `S + T`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{reduce_mod, GramMatrix, IntMat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdmissibilityError {
    #[error(
        "d = {d} is not admissible: require d >= 8 and d = 0 or 2 (mod 6), got d mod 6 = {rem}"
    )]
    Inadmissible { d: u64, rem: u64 },
}

/// Discriminant of a nonempty special divisor, with `d' = d/18` when the
/// overlattice model applies.
///
/// Admissibility means `d >= 8` and `d = 0, 2 (mod 6)`; together with
/// `9 | d` this forces `18 | d`, which is when `d'` is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialDiscriminant {
    d: u64,
    d_prime: Option<u64>,
}

impl SpecialDiscriminant {
    pub fn new(d: u64) -> Result<Self, AdmissibilityError> {
        let rem = d % 6;
        if d < 8 || (rem != 0 && rem != 2) {
            return Err(AdmissibilityError::Inadmissible { d, rem });
        }
        let d_prime = if d.is_multiple_of(9) {
            debug_assert_eq!(d % 18, 0, "9 | d and admissibility force 18 | d");
            Some(d / 18)
        } else {
            None
        };
        Ok(SpecialDiscriminant { d, d_prime })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn d_prime(&self) -> Option<u64> {
        self.d_prime
    }
}

/// Gram matrix of `E8(-1)` (negative definite, even, unimodular).
///
/// Nodes are arranged as the T-shaped diagram with arms of lengths 1, 2
/// and 4 hanging off node 0; only the isometry class matters downstream.
pub fn gram_e8_neg() -> IntMat {
    let mut m = IntMat::zeros(8, 8);
    for i in 0..8 {
        m[(i, i)] = BigInt::from(-2);
    }
    for &(a, b) in &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)] {
        m[(a, b)] = BigInt::one();
        m[(b, a)] = BigInt::one();
    }
    m
}

/// Gram matrix of the hyperbolic plane `U`.
pub fn gram_u() -> IntMat {
    IntMat::from_i64_rows(&[&[0, 1], &[1, 0]])
}

/// Gram matrix of `A_2`.
pub fn gram_a2() -> IntMat {
    IntMat::from_i64_rows(&[&[2, -1], &[-1, 2]])
}

/// Gram matrix of `A_2(-1)`.
pub fn gram_a2_neg() -> IntMat {
    IntMat::from_i64_rows(&[&[-2, 1], &[1, -2]])
}

/// `S = <l>` with `l^2 = -6d'`.
pub fn build_s(d_prime: u64) -> GramMatrix {
    assert!(d_prime >= 1);
    let mut m = IntMat::zeros(1, 1);
    m[(0, 0)] = BigInt::from(-6) * BigInt::from(d_prime);
    GramMatrix::new(m).expect("rank-1 form with nonzero entry")
}

/// `N = A_2 + <-6d'>`, the algebraic Mukai lattice.
pub fn build_n(d_prime: u64) -> GramMatrix {
    assert!(d_prime >= 1);
    let m = IntMat::block_diag(&[&gram_a2(), build_s(d_prime).matrix()]);
    GramMatrix::new(m).expect("block sum of nondegenerate forms")
}

/// Rank of the transcendental lattice model.
pub const T_RANK: usize = 21;

/// `T = E8(-1)^2 + U + A_2(-1) + <6d'>`, rank 21.
pub fn build_t(d_prime: u64) -> GramMatrix {
    assert!(d_prime >= 1);
    let e8 = gram_e8_neg();
    let mut z = IntMat::zeros(1, 1);
    z[(0, 0)] = BigInt::from(6) * BigInt::from(d_prime);
    let m = IntMat::block_diag(&[&e8, &e8, &gram_u(), &gram_a2_neg(), &z]);
    GramMatrix::new(m).expect("block sum of nondegenerate forms")
}

/// Model of `H^{2,2}` for `d = 18 d'`: `diag(3, 6d')`, determinant `d`.
pub fn build_h22(d_prime: u64) -> GramMatrix {
    assert!(d_prime >= 1);
    let mut m = IntMat::zeros(2, 2);
    m[(0, 0)] = BigInt::from(3);
    m[(1, 1)] = BigInt::from(6) * BigInt::from(d_prime);
    GramMatrix::new(m).expect("diagonal nonzero form")
}

/// Index of the `A_2(-1)` block inside the basis of [`build_t`].
const A2_NEG_OFFSET: usize = 18;
/// Index of the `<6d'>` block inside the basis of [`build_t`].
const Z6D_OFFSET: usize = 20;

/// `t_1` in the basis of [`build_t`]: the difference of the two `A_2(-1)`
/// basis vectors, with `t_1^2 = -6` and `t_1/3` generating that block's
/// glue group.
pub fn t1_in_t() -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); T_RANK];
    v[A2_NEG_OFFSET] = BigInt::one();
    v[A2_NEG_OFFSET + 1] = -BigInt::one();
    v
}

/// `t_2` in the basis of [`build_t`]: the `<6d'>` block generator, with
/// `t_2^2 = 6d'`.
pub fn t2_in_t() -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); T_RANK];
    v[Z6D_OFFSET] = BigInt::one();
    v
}

/// Ambient rank of `S + T`.
pub const AMBIENT_RANK: usize = T_RANK + 1;

/// `l` in the basis of `S + T` (the `S` slot comes first).
pub fn ell_ambient() -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); AMBIENT_RANK];
    v[0] = BigInt::one();
    v
}

pub fn t1_ambient() -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); AMBIENT_RANK];
    for (i, x) in t1_in_t().into_iter().enumerate() {
        v[i + 1] = x;
    }
    v
}

pub fn t2_ambient() -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); AMBIENT_RANK];
    for (i, x) in t2_in_t().into_iter().enumerate() {
        v[i + 1] = x;
    }
    v
}

/// Closed form of the discriminant form of `S + T`.
///
/// The group is `Z_{6d'} + Z_3 + Z_{6d'}` on the generators `l/6d'`,
/// `t_1/3`, `t_2/6d'`, with quadratic form values `-1/6d'`, `-2/3`,
/// `1/6d'` modulo 2Z. The element `x g_1 + y g_2 + z g_3` has
/// `q = (z^2 - x^2)/6d' - 2 y^2/3 (mod 2Z)`.
#[derive(Debug, Clone, Copy)]
pub struct DiscFormSt {
    d_prime: u64,
}

/// Builds the closed-form presentation, bypassing Smith normal form.
pub fn disc_form_st(d_prime: u64) -> DiscFormSt {
    assert!(d_prime >= 1);
    DiscFormSt { d_prime }
}

impl DiscFormSt {
    pub fn d_prime(&self) -> u64 {
        self.d_prime
    }

    /// Orders of the three standard generators.
    pub fn orders(&self) -> [u64; 3] {
        [6 * self.d_prime, 3, 6 * self.d_prime]
    }

    /// Total order of the group, `108 d'^2`.
    pub fn order(&self) -> u64 {
        108 * self.d_prime * self.d_prime
    }

    /// Quadratic form of `x g_1 + y g_2 + z g_3`, reduced into `[0, 2)`.
    pub fn q(&self, x: i64, y: i64, z: i64) -> BigRational {
        let six_dp = BigInt::from(6) * BigInt::from(self.d_prime);
        let v = BigRational::new(BigInt::from(z * z) - BigInt::from(x * x), six_dp)
            - BigRational::new(BigInt::from(2 * y * y), BigInt::from(3));
        reduce_mod(&v, 2)
    }

    /// Rational lifts of the three generators in the `S + T` basis.
    pub fn generator_lifts(&self) -> [Vec<BigRational>; 3] {
        let six_dp = BigInt::from(6) * BigInt::from(self.d_prime);
        let scale = |v: Vec<BigInt>, den: BigInt| -> Vec<BigRational> {
            v.into_iter()
                .map(|x| BigRational::new(x, den.clone()))
                .collect()
        };
        [
            scale(ell_ambient(), six_dp.clone()),
            scale(t1_ambient(), BigInt::from(3)),
            scale(t2_ambient(), six_dp),
        ]
    }
}

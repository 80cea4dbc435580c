//! Overlattice assembly from glue data, and saturation checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::disc::pairing;
use super::gram::GramMatrix;
use super::hnf::{nonzero_rows, row_hermite_normal_form};
use super::mat::{IntMat, RatMat};
use super::snf::smith_normal_form;
use super::LatticeError;

/// Generators of a candidate glue subgroup of `A_S + A_T`, written as
/// rational coordinate vectors in the basis of `S + T`.
#[derive(Clone, Debug, Default)]
pub struct GlueDatum {
    pub generators: Vec<Vec<BigRational>>,
}

impl GlueDatum {
    pub fn empty() -> Self {
        GlueDatum {
            generators: Vec::new(),
        }
    }
}

/// An overlattice `L` of `S + T`, with its Gram matrix in a Hermite basis.
pub struct Overlattice {
    /// Gram matrix of `L` in the basis below.
    pub gram: GramMatrix,
    /// Rows are the basis vectors of `L` in `S + T` coordinates.
    pub basis: RatMat,
    /// Index `[L : S + T]`.
    pub index: BigInt,
}

impl Overlattice {
    /// Integer coordinates of an ambient vector with respect to the basis
    /// of `L`, or `None` if the vector is not in `L`.
    pub fn ambient_in_basis(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        self.ambient_many_in_basis(std::slice::from_ref(&v.to_vec()))
            .map(|mut c| c.pop().expect("one input, one output"))
    }

    /// [`Self::ambient_in_basis`] for a batch of vectors, inverting the
    /// basis matrix only once. `None` if any vector is outside `L`.
    pub fn ambient_many_in_basis(&self, vs: &[Vec<BigRational>]) -> Option<Vec<Vec<BigInt>>> {
        let n = self.basis.rows();
        let inv = self
            .basis
            .inverse()
            .expect("overlattice basis is invertible");
        let mut out = Vec::with_capacity(vs.len());
        for v in vs {
            assert_eq!(v.len(), n);
            let mut coords = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = BigRational::zero();
                for i in 0..n {
                    acc += &v[i] * &inv[(i, j)];
                }
                if !acc.is_integer() {
                    return None;
                }
                coords.push(acc.to_integer());
            }
            out.push(coords);
        }
        Some(out)
    }
}

/// Builds the lattice generated by `S + T` and the glue lifts.
///
/// Every glue generator must pair integrally with `S + T` and with the
/// other generators (including itself); otherwise the generated span is
/// not an integral lattice and the datum is rejected. The basis of the
/// result comes from a Hermite normal form of the generated rational
/// lattice, so it is canonical for the input.
pub fn overlattice_from_glue(
    s: &GramMatrix,
    t: &GramMatrix,
    glue: &GlueDatum,
) -> Result<Overlattice, LatticeError> {
    let ambient = s.direct_sum(t);
    let n = ambient.rank();
    let gram = ambient.matrix();

    let mut lifts: Vec<Vec<BigRational>> = Vec::with_capacity(glue.generators.len());
    for (idx, g) in glue.generators.iter().enumerate() {
        if g.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
        // integral pairing with every lattice basis vector = dual membership
        for j in 0..n {
            let mut acc = BigRational::zero();
            for i in 0..n {
                acc += &g[i] * BigRational::from(gram[(i, j)].clone());
            }
            if !acc.is_integer() {
                return Err(LatticeError::NonIntegralPairing { index: idx });
            }
        }
        // integral pairing with itself and the previous generators
        for h in lifts.iter().chain(std::iter::once(g)) {
            if !pairing(gram, g, h).is_integer() {
                return Err(LatticeError::NonIntegralPairing { index: idx });
            }
        }
        lifts.push(g.clone());
    }

    // Stack the standard basis and the lifts, scale to integers, and take
    // a Hermite basis of the generated lattice.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    rows.extend(lifts);
    let stacked = RatMat::from_rows(rows);
    let den = stacked.denominator_lcm();
    let scaled = stacked
        .scale_int(&den)
        .to_integer()
        .expect("scaling clears all denominators");
    let h = row_hermite_normal_form(&scaled);
    // finite-index glue can never change the rank
    assert_eq!(nonzero_rows(&h), n, "glue changed the lattice rank");

    let mut basis_rows = Vec::with_capacity(n);
    let den_rat = BigRational::from(den.clone());
    for i in 0..n {
        basis_rows.push(
            h.row(i)
                .iter()
                .map(|x| BigRational::from(x.clone()) / &den_rat)
                .collect::<Vec<_>>(),
        );
    }
    let basis = RatMat::from_rows(basis_rows);

    // index [L : S+T] = den^n / det(H), always an exact integer
    let det_h = (0..n).fold(BigInt::one(), |acc, i| acc * &h[(i, i)]);
    let den_pow = num_traits::pow(den.clone(), n);
    let (index, rem) = den_pow.div_rem(&det_h);
    assert!(
        rem.is_zero(),
        "index of a finite-index extension is integral"
    );

    let new_gram = basis
        .mul(&gram.to_rational())
        .mul(&basis.transpose())
        .to_integer()
        .expect("integral pairings give an integral Gram matrix");
    let gram = GramMatrix::new(new_gram).expect("overlattice Gram stays nondegenerate");

    debug_assert_eq!(
        gram.det().abs() * &index * &index,
        ambient.det().abs(),
        "det scales by the square of the index"
    );

    Ok(Overlattice { gram, basis, index })
}

/// Whether the sublattice spanned by `sub_basis` (integer coordinate rows
/// in the basis of `l`) is saturated, i.e. the quotient is torsion-free.
///
/// Decided by the Smith normal form of the coordinate matrix: saturated
/// iff every invariant factor is 1. Linearly dependent input is an error.
pub fn is_saturated(sub_basis: &[Vec<BigInt>], l: &GramMatrix) -> Result<bool, LatticeError> {
    if sub_basis.is_empty() {
        return Ok(true);
    }
    let n = l.rank();
    for v in sub_basis {
        if v.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let m = IntMat::from_rows(sub_basis.to_vec());
    let snf = smith_normal_form(&m);
    if snf.rank() < sub_basis.len() {
        return Err(LatticeError::DependentVectors);
    }
    Ok(snf.invariant_factors().iter().all(|f| f.is_one()))
}

//! Property tests for the lattice engine and modular arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use fmcount::lattice::{
    discriminant_group, overlattice_from_glue, reduce_mod, row_hermite_normal_form,
    smith_normal_form, GlueDatum, GramMatrix, IntMat,
};
use fmcount::modarith::factorize;

fn int_mat(max_dim: usize, max_abs: i64) -> impl Strategy<Value = IntMat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-max_abs..=max_abs, r * c).prop_map(move |v| {
            IntMat::from_rows(
                v.chunks(c)
                    .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                    .collect(),
            )
        })
    })
}

/// Random small even nondegenerate Gram matrix.
fn even_gram(max_rank: usize) -> impl Strategy<Value = GramMatrix> {
    (1..=max_rank).prop_flat_map(move |n| {
        let diag = proptest::collection::vec(-4..=4i64, n);
        let off = proptest::collection::vec(-3..=3i64, n * n);
        (diag, off).prop_filter_map("nondegenerate", move |(diag, off)| {
            let mut m = IntMat::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = BigInt::from(2 * diag[i]);
                for j in 0..i {
                    m[(i, j)] = BigInt::from(off[i * n + j]);
                    m[(j, i)] = BigInt::from(off[i * n + j]);
                }
            }
            GramMatrix::new(m).ok()
        })
    })
}

fn nonzero_rows_of(m: &IntMat) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| m.row(i).to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

proptest! {
    #[test]
    fn snf_decomposition_holds(m in int_mat(4, 9)) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(snf.u.det().abs(), BigInt::one());
        prop_assert_eq!(snf.v.det().abs(), BigInt::one());
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "chain broken: {f:?}");
        }
    }

    #[test]
    fn disc_group_order_is_abs_det(g in even_gram(4)) {
        let a = discriminant_group(&g);
        prop_assert_eq!(a.order(), g.det().abs());
    }

    /// Two lifts of the same class differ by a lattice vector, and q must
    /// not see the difference.
    #[test]
    fn q_is_well_defined_on_classes(
        g in even_gram(3),
        shift in proptest::collection::vec(-3..=3i64, 3),
    ) {
        let a = discriminant_group(&g);
        let n = g.rank();
        for i in 0..a.num_generators() {
            let mut moved = a.generator_lift(i).to_vec();
            for (k, m) in moved.iter_mut().enumerate().take(n) {
                *m += BigRational::from(BigInt::from(shift[k]));
            }
            prop_assert_eq!(a.q_of_lift(&moved), a.q_generator(i));
        }
    }

    /// The discriminant form of an orthogonal sum decomposes factor-wise:
    /// same abstract group, and q is additive across the two blocks.
    #[test]
    fn disc_group_of_orthogonal_sum_decomposes(
        ga in even_gram(3),
        gb in even_gram(3),
        coeffs in proptest::collection::vec(0..6i64, 8),
    ) {
        let sum = ga.direct_sum(&gb);
        let a = discriminant_group(&ga);
        let b = discriminant_group(&gb);
        let ab = discriminant_group(&sum);

        // group: invariant factors of the sum match the SNF of the
        // block-diagonal relation matrix of the two factors
        let na = a.num_generators();
        let nb = b.num_generators();
        if na + nb > 0 {
            let mut rel = IntMat::zeros(na + nb, na + nb);
            for (i, d) in a.invariant_factors().iter().enumerate() {
                rel[(i, i)] = d.clone();
            }
            for (j, d) in b.invariant_factors().iter().enumerate() {
                rel[(na + j, na + j)] = d.clone();
            }
            let expected = smith_normal_form(&rel)
                .invariant_factors()
                .into_iter()
                .filter(|f| !f.is_one())
                .collect::<Vec<_>>();
            prop_assert_eq!(ab.invariant_factors(), &expected[..]);
        } else {
            prop_assert!(ab.is_trivial());
        }

        // form: q of a concatenated lift is the sum of the block q values
        let modulus = ab.form_modulus();
        for chunk in coeffs.chunks(2) {
            let (ca, cb) = (chunk[0], chunk.get(1).copied().unwrap_or(0));
            let lift_a: Vec<BigRational> = if na > 0 {
                a.generator_lift((ca.unsigned_abs() as usize) % na).to_vec()
            } else {
                vec![BigRational::zero(); ga.rank()]
            };
            let lift_b: Vec<BigRational> = if nb > 0 {
                b.generator_lift((cb.unsigned_abs() as usize) % nb).to_vec()
            } else {
                vec![BigRational::zero(); gb.rank()]
            };
            let concat: Vec<BigRational> =
                lift_a.iter().cloned().chain(lift_b.iter().cloned()).collect();
            let lhs = ab.q_of_lift(&concat);
            let rhs = reduce_mod(&(a.q_of_lift(&lift_a) + b.q_of_lift(&lift_b)), modulus);
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// The HNF spans the same integer lattice as the input rows.
    #[test]
    fn hnf_preserves_the_row_lattice(m in int_mat(4, 9)) {
        let h = row_hermite_normal_form(&m);
        let mut stacked_rows: Vec<Vec<BigInt>> =
            (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        stacked_rows.extend(nonzero_rows_of(&h));
        if stacked_rows.is_empty() {
            return Ok(());
        }
        let stacked = row_hermite_normal_form(&IntMat::from_rows(stacked_rows));
        prop_assert_eq!(nonzero_rows_of(&stacked), nonzero_rows_of(&h));
        // idempotence on the nonzero part
        let again = row_hermite_normal_form(&h);
        prop_assert_eq!(nonzero_rows_of(&again), nonzero_rows_of(&h));
    }

    /// Gluing with no generators is the identity up to basis change.
    #[test]
    fn empty_glue_is_identity(s in even_gram(2), t in even_gram(2)) {
        let l = overlattice_from_glue(&s, &t, &GlueDatum::empty()).unwrap();
        prop_assert_eq!(&l.index, &BigInt::one());
        let lhs = smith_normal_form(l.gram.matrix()).invariant_factors();
        let rhs = smith_normal_form(s.direct_sum(&t).matrix()).invariant_factors();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn factorize_reconstructs_its_input(n in 1u64..(1 << 63)) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), n);
    }
}

//! Smith normal form over the integers, with both transforms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::mat::IntMat;

/// Decomposition `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal with each entry dividing the next.
pub struct SmithNormalForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of a nonzero entry of least absolute value in the trailing
/// submatrix starting at `(k, k)`.
fn min_pivot(a: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            let v = a[(i, j)].abs();
            match &best {
                Some((_, _, b)) if *b <= v => {}
                _ => best = Some((i, j, v)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntMat) -> SmithNormalForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = min_pivot(&a, k) else {
            break; // trailing submatrix is zero
        };
        a.swap_rows(k, pi);
        u.swap_rows(k, pi);
        a.swap_cols(k, pj);
        v.swap_cols(k, pj);

        loop {
            // clear column k below the pivot
            let mut dirty = false;
            for i in k + 1..rows {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, k)] / &a[(k, k)]);
                a.row_axpy(i, k, &q);
                u.row_axpy(i, k, &q);
                if !a[(i, k)].is_zero() {
                    // remainder is smaller than the pivot: promote it
                    a.swap_rows(k, i);
                    u.swap_rows(k, i);
                    dirty = true;
                }
            }
            // clear row k to the right of the pivot
            for j in k + 1..cols {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(k, j)] / &a[(k, k)]);
                a.col_axpy(j, k, &q);
                v.col_axpy(j, k, &q);
                if !a[(k, j)].is_zero() {
                    a.swap_cols(k, j);
                    v.swap_cols(k, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[(i, j)] % &a[(k, k)]).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::from(1);
                    a.row_axpy(k, i, &one);
                    u.row_axpy(k, i, &one);
                }
                None => break,
            }
        }
        if a[(k, k)].is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
    }

    debug_assert_eq!(u.mul(m).mul(&v), a);
    SmithNormalForm { u, d: a, v }
}

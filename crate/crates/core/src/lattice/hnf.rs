//! Row-style Hermite normal form: a canonical basis for the row span.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::mat::IntMat;

/// Returns the row Hermite normal form of `m`.
///
/// The result has the same row span over Z: pivots are positive, entries
/// above a pivot are reduced into `[0, pivot)`, and zero rows sink to the
/// bottom. Only row operations are used, so nonzero rows form a basis of
/// the lattice generated by the rows of `m`.
pub fn row_hermite_normal_form(m: &IntMat) -> IntMat {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivot_row = 0usize;

    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // gcd-reduce the column below pivot_row until one nonzero remains
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a[(b, col)].abs() <= a[(i, col)].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, col)] / &a[(pivot_row, col)]);
                a.row_axpy(i, pivot_row, &q);
                if !a[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(pivot_row, col)].is_zero() {
            continue; // column has no pivot
        }
        if a[(pivot_row, col)].is_negative() {
            a.negate_row(pivot_row);
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..pivot_row {
            let q = -a[(i, col)].div_floor(&a[(pivot_row, col)]);
            a.row_axpy(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    a
}

/// Number of nonzero rows of a matrix in row echelon form.
pub(crate) fn nonzero_rows(m: &IntMat) -> usize {
    (0..m.rows())
        .filter(|&i| (0..m.cols()).any(|j| !m[(i, j)].is_zero()))
        .count()
}

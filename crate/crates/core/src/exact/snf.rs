use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries of `D`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|v| !v.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with transforms.
///
/// Pivot choice is the entry of smallest absolute value in the remaining
/// block, ties broken by lowest row then lowest column, so the output is
/// reproducible.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = find_pivot(&a, k) else {
                return SnfDecomposition { u, d: a, v };
            };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = a[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = -a[(i, k)].div_floor(&pivot);
                a.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                dirty |= !a[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = -a[(k, j)].div_floor(&pivot);
                a.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                dirty |= !a[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column k are clear; enforce divisibility on the rest.
            let bad_row =
                (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !(&a[(i, j)] % &pivot).is_zero()));
            if let Some(i) = bad_row {
                let one = BigInt::from(1);
                a.add_row_multiple(k, i, &one);
                u.add_row_multiple(k, i, &one);
                continue;
            }

            if a[(k, k)].is_negative() {
                a.negate_row(k);
                u.negate_row(k);
            }
            break;
        }
    }
    SnfDecomposition { u, d: a, v }
}

fn find_pivot(a: &IntegerMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

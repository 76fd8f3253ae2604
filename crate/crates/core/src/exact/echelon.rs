use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Sparse row over the rationals, keyed by column. Lower column index means
/// a larger (more leading) term.
pub type SparseRow = BTreeMap<usize, BigRational>;

/// Row-echelon basis of a span of sparse rational rows, built incrementally.
///
/// The set of pivot columns equals the set of leading columns of all
/// nonzero vectors in the span.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    pivots: BTreeMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduces `row` against the basis and adds what is left. Returns whether
    /// the rank grew.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, coeff)) = row.iter().next() else {
                return false;
            };
            let Some(pivot_row) = self.pivots.get(&lead) else {
                break;
            };
            let coeff = coeff.clone();
            for (&c, v) in pivot_row {
                let entry = row.entry(c).or_insert_with(BigRational::zero);
                *entry -= &coeff * v;
                if entry.is_zero() {
                    row.remove(&c);
                }
            }
        }
        let (&lead, lead_coeff) = row.iter().next().expect("nonempty after reduction");
        if !lead_coeff.is_one() {
            let inv = lead_coeff.recip();
            for v in row.values_mut() {
                *v *= &inv;
            }
        }
        self.pivots.insert(lead, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries
            .iter()
            .map(|&(c, v)| (c, BigRational::from_integer(BigInt::from(v))))
            .collect()
    }

    #[test]
    fn dependent_rows_do_not_grow_rank() {
        let mut e = EchelonBasis::new();
        assert!(e.insert(row(&[(0, 2), (1, 4)])));
        assert!(!e.insert(row(&[(0, 1), (1, 2)])));
        assert!(e.insert(row(&[(0, 1), (2, 3)])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivot_columns().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn zero_row_ignored() {
        let mut e = EchelonBasis::new();
        assert!(!e.insert(row(&[(3, 0)])));
        assert_eq!(e.rank(), 0);
    }
}

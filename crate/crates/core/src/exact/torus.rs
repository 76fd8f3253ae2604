use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntegerMatrix};
use crate::error::{Error, Result};

/// A finite abelian group `Z/d_1 x ... x Z/d_k` with `d_i | d_{i+1}`, `d_i >= 2`.
///
/// Generator `i` is the residue vector `generators[i]` read modulo
/// `invariant_factors[i]`; as a point of `(Q/Z)^n` it is `generators[i] / d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub generators: Vec<Vec<BigInt>>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// The finite group `{w in (Q/Z)^n : B w = 0 mod 1}` for square nonsingular `B`.
///
/// With `U B V = D`, substituting `w = V y` turns the condition into
/// `D y = 0 mod 1`, so the group is generated by the columns of `V`
/// divided by the invariant factors.
pub fn torus_kernel(b: &IntegerMatrix) -> Result<FiniteAbelianGroup> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch {
            expected: b.rows(),
            found: b.cols(),
        });
    }
    let snf = smith_normal_form(b);
    let factors = snf.invariant_factors();
    if factors.len() < b.rows() {
        return Err(Error::SingularMatrix);
    }
    let mut group = FiniteAbelianGroup::trivial();
    for (i, d) in factors.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let gen = snf
            .v
            .column(i)
            .into_iter()
            .map(|x| x.mod_floor(d))
            .collect();
        group.invariant_factors.push(d.abs());
        group.generators.push(gen);
    }
    debug_assert!(group
        .generators
        .iter()
        .zip(&group.invariant_factors)
        .all(|(g, d)| b.mul_vec(g).iter().all(|x| x.mod_floor(d).is_zero())));
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gives_trivial_group() {
        let g = torus_kernel(&IntegerMatrix::identity(3)).unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.order(), BigInt::one());
    }

    #[test]
    fn one_by_one() {
        let g = torus_kernel(&IntegerMatrix::from_rows(&[vec![2]])).unwrap();
        assert_eq!(g.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(g.generators, vec![vec![BigInt::from(1)]]);
    }

    #[test]
    fn singular_rejected() {
        let m = IntegerMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(torus_kernel(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn order_is_abs_det() {
        let m = IntegerMatrix::from_rows(&[vec![3, 1, 0], vec![0, 3, 1], vec![1, 0, 3]]);
        let g = torus_kernel(&m).unwrap();
        assert_eq!(g.order(), m.determinant().abs());
        assert!(g.is_cyclic());
    }
}

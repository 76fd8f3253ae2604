use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{ExponentMatrix, PermSymmetry};
use crate::error::{Error, Result};
use crate::exact::{gcd_u64, mod_inverse, torus_kernel, FiniteAbelianGroup, IntegerMatrix};

/// A diagonal automorphism `x_i -> zeta^{w_i} x_i` with `zeta` a primitive
/// `modulus`-th root of unity, taken modulo scalars (adding `c(1,..,1)`).
///
/// Every monomial of `f` is multiplied by `zeta^{common_weight}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightClass {
    pub modulus: u64,
    pub weights: Vec<u64>,
    pub common_weight: u64,
    #[serde(skip)]
    degree: u32,
}

/// Returns the common row weight `mu` when `M w = mu (1,..,1) mod modulus`.
pub fn is_invariant(m: &ExponentMatrix, w: &[i64], modulus: u64) -> Result<Option<u64>> {
    if w.len() != m.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: m.num_vars(),
            found: w.len(),
        });
    }
    if modulus == 0 {
        return Err(Error::InvalidInstance("modulus must be at least 1".into()));
    }
    let n = modulus as i128;
    let mut common = None;
    for row in m.rows() {
        let weight = row
            .iter()
            .zip(w)
            .map(|(&e, &x)| e as i128 * x as i128)
            .sum::<i128>()
            .rem_euclid(n) as u64;
        match common {
            None => common = Some(weight),
            Some(c) if c != weight => return Ok(None),
            _ => {}
        }
    }
    Ok(common)
}

impl WeightClass {
    pub fn new(m: &ExponentMatrix, weights: &[i64], modulus: u64) -> Result<Self> {
        let common_weight =
            is_invariant(m, weights, modulus)?.ok_or(Error::NotInvariant { modulus })?;
        Ok(WeightClass {
            modulus,
            weights: weights
                .iter()
                .map(|&x| x.rem_euclid(modulus as i64) as u64)
                .collect(),
            common_weight,
            degree: m.degree(),
        })
    }

    fn with_weights(&self, weights: Vec<u64>, common_weight: u64) -> Self {
        WeightClass {
            modulus: self.modulus,
            weights,
            common_weight,
            degree: self.degree,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `w + c (1,..,1)`, the same projective automorphism.
    pub fn shifted(&self, c: i64) -> Self {
        let n = self.modulus as i128;
        let weights = self
            .weights
            .iter()
            .map(|&x| (x as i128 + c as i128).rem_euclid(n) as u64)
            .collect();
        let mu = (self.common_weight as i128 + c as i128 * self.degree as i128).rem_euclid(n);
        self.with_weights(weights, mu as u64)
    }

    /// The `k`-th power of the automorphism.
    pub fn scaled(&self, k: u64) -> Self {
        let n = self.modulus as u128;
        let weights = self
            .weights
            .iter()
            .map(|&x| (x as u128 * k as u128 % n) as u64)
            .collect();
        let mu = (self.common_weight as u128 * k as u128 % n) as u64;
        self.with_weights(weights, mu)
    }

    /// Conjugate by a variable permutation: `(sigma . w)_i = w_{sigma(i)}`.
    pub fn permuted(&self, sigma: &PermSymmetry) -> Self {
        let weights = sigma.perm.iter().map(|&j| self.weights[j]).collect();
        self.with_weights(weights, self.common_weight)
    }

    /// Order of the automorphism modulo scalars.
    pub fn order(&self) -> u64 {
        let w0 = self.weights[0];
        let g = self.weights.iter().fold(self.modulus, |g, &x| {
            gcd_u64(g, (x + self.modulus - w0) % self.modulus)
        });
        self.modulus / g
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Canonical representative: gauge-fix `w_0 = 0`, then take the
    /// lexicographically smallest `u w mod N` over units `u`.
    pub fn canonical(&self) -> Self {
        let base = self.shifted(-(self.weights[0] as i64));
        let mut best: Option<WeightClass> = None;
        for u in 1..self.modulus.max(2) {
            if gcd_u64(u, self.modulus) != 1 {
                continue;
            }
            let cand = base.scaled(u);
            if best.as_ref().is_none_or(|b| cand.weights < b.weights) {
                best = Some(cand);
            }
        }
        best.unwrap_or(base)
    }

    /// Same class: equal canonical forms (so also equal up to powers by units).
    pub fn same_subgroup(&self, other: &WeightClass) -> bool {
        self.modulus == other.modulus && self.canonical().weights == other.canonical().weights
    }

    pub fn signed_weights(&self) -> Vec<i64> {
        self.weights
            .iter()
            .map(|&x| signed_residue(x, self.modulus))
            .collect()
    }
}

/// The representative of `x mod n` in `(-n/2, n/2]`.
pub fn signed_residue(x: u64, n: u64) -> i64 {
    let x = x % n;
    if 2 * x > n {
        x as i64 - n as i64
    } else {
        x as i64
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "({}) mod {}", w.join(","), self.modulus)
    }
}

/// Diagonal automorphisms modulo scalars, with canonical weight-class generators
/// matching the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSymmetryGroup {
    pub group: FiniteAbelianGroup,
    pub generators: Vec<WeightClass>,
}

impl DiagonalSymmetryGroup {
    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.modulus).collect()
    }

    pub fn exponent(&self) -> u64 {
        self.generators.last().map_or(1, |g| g.modulus)
    }
}

/// Gauge-fixes `w_0 = 0` and solves `(row_j - row_0) . w = 0 mod 1` on the
/// remaining coordinates. The order is `|det M| / d`.
pub fn diagonal_symmetry_group(m: &ExponentMatrix) -> Result<DiagonalSymmetryGroup> {
    let size = m.n();
    let rows = m.rows();
    let diffs: Vec<Vec<i64>> = (1..=size)
        .map(|j| {
            (1..=size)
                .map(|c| rows[j][c] as i64 - rows[0][c] as i64)
                .collect()
        })
        .collect();
    let b = IntegerMatrix::from_rows(&diffs);
    let group = torus_kernel(&b)?;
    let mut generators = Vec::with_capacity(group.generators.len());
    for (gen, factor) in group.generators.iter().zip(&group.invariant_factors) {
        let modulus = factor
            .to_u64()
            .ok_or_else(|| Error::Overflow(factor.to_string()))?;
        let mut weights = vec![0i64];
        for x in gen {
            weights.push(x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))?);
        }
        generators.push(WeightClass::new(m, &weights, modulus)?.canonical());
    }
    Ok(DiagonalSymmetryGroup { group, generators })
}

/// The `r` with `sigma . w = r w + c (1,..,1) mod N` for some `c`.
///
/// When `w` does not have full order `r` is only determined modulo
/// `order(w)`; the smallest nonnegative solution is returned.
pub fn conjugation_exponent(
    m: &ExponentMatrix,
    w: &WeightClass,
    sigma: &PermSymmetry,
) -> Result<u64> {
    if sigma.perm.len() != w.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: w.num_vars(),
            found: sigma.perm.len(),
        });
    }
    if !sigma.preserves(m) {
        return Err(Error::NotASymmetry);
    }
    let n = w.modulus;
    let image = w.permuted(sigma);
    // r must solve a_i r = b_i mod N with a_i = w_i - w_0, b_i = (sigma w)_i - (sigma w)_0.
    let (mut r0, mut step) = (0u64, 1u64);
    for i in 1..w.num_vars() {
        let a = (w.weights[i] + n - w.weights[0]) % n;
        let b = (image.weights[i] + n - image.weights[0]) % n;
        let (r1, s1) = solve_linear_congruence(a, b, n).ok_or(Error::NotNormalizing)?;
        (r0, step) = intersect_classes(r0, step, r1, s1, n).ok_or(Error::NotNormalizing)?;
    }
    Ok(r0)
}

/// Solutions of `a r = b mod n` as a class `r = r0 mod s`.
fn solve_linear_congruence(a: u64, b: u64, n: u64) -> Option<(u64, u64)> {
    let g = gcd_u64(a, n);
    if !b.is_multiple_of(g) {
        return None;
    }
    let s = n / g;
    if s == 1 {
        return Some((0, 1));
    }
    let inv = mod_inverse((a / g) % s, s)?;
    Some((((b / g) as u128 * inv as u128 % s as u128) as u64, s))
}

/// Intersection of `r0 mod s0` and `r1 mod s1`, both moduli dividing `n`.
fn intersect_classes(r0: u64, s0: u64, r1: u64, s1: u64, n: u64) -> Option<(u64, u64)> {
    let lcm = s0 / gcd_u64(s0, s1) * s1;
    debug_assert!(n.is_multiple_of(lcm));
    (0..lcm / s0)
        .map(|k| r0 % s0 + k * s0)
        .find(|r| r % s1 == r1 % s1)
        .map(|r| (r, lcm))
}

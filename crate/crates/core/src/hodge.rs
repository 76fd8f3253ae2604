//! Primitive Hodge numbers of smooth hypersurfaces and characters of diagonal
//! automorphisms on the Hodge pieces, via the Jacobian ring.
//!
//! For a smooth degree `d` hypersurface in `P^n` the piece `H^{n-1-q,q}_prim`
//! is the degree `(q+1)d - n - 1` part of `C[x]/(df/dx_i)`, the class of a
//! monomial `A` corresponding to the residue of `A Omega / f^{q+1}`.
//! A diagonal automorphism with weights `w` multiplies that residue by
//! `zeta^(<alpha,w> + sum w_i - (q+1) mu)`; this is the pullback convention,
//! the opposite one negates every exponent.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::delsarte::{ExponentMatrix, WeightClass};
use crate::error::{Error, Result};
use crate::exact::{gcd_u64, EchelonBasis, SparseRow};

/// Primitive Hodge numbers `h^{n-1-q,q}` for `q = 0..n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeVector {
    pub n: usize,
    pub d: u32,
    pub numbers: Vec<u64>,
}

impl HodgeVector {
    pub fn get(&self, q: usize) -> u64 {
        self.numbers[q]
    }

    /// Jacobian-ring degree of the piece `h^{n-1-q,q}`.
    pub fn piece_degree(&self, q: usize) -> i64 {
        piece_degree(self.n, self.d, q)
    }

    /// Half the primitive middle Betti number, i.e. `sum_{q < (n-1)/2} h^{n-1-q,q}`.
    /// This is the dimension of the intermediate Jacobian when the hypersurface
    /// has odd dimension. `None` for even-dimensional hypersurfaces.
    pub fn intermediate_jacobian_dim(&self) -> Option<u64> {
        let dim = self.n - 1;
        if dim.is_multiple_of(2) {
            return None;
        }
        Some(self.numbers[..dim.div_ceil(2)].iter().sum())
    }

    pub fn total(&self) -> u64 {
        self.numbers.iter().sum()
    }
}

impl fmt::Display for HodgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dim = self.n - 1;
        let parts: Vec<String> = self
            .numbers
            .iter()
            .enumerate()
            .map(|(q, h)| format!("h^{{{},{}}}={}", dim - q, q, h))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn piece_degree(n: usize, d: u32, q: usize) -> i64 {
    (q as i64 + 1) * d as i64 - n as i64 - 1
}

/// Coefficient of `t^e` in `((1 - t^{d-1}) / (1 - t))^{n+1}`, the Hilbert
/// function of the Jacobian ring of a smooth degree `d` form in `n+1` variables.
pub fn hilbert_coefficient(n: usize, d: u32, e: i64) -> u64 {
    if e < 0 || d < 2 {
        return 0;
    }
    let e = e as usize;
    let width = d as usize - 1; // 1 + t + ... + t^{d-2}
    let mut poly = vec![1u64];
    for _ in 0..=n {
        let mut next = vec![0u64; (poly.len() + width - 1).min(e + 1)];
        for (i, &c) in poly.iter().enumerate() {
            for k in 0..width {
                if i + k < next.len() {
                    next[i + k] = next[i + k]
                        .checked_add(c)
                        .expect("Hilbert coefficient overflow");
                }
            }
        }
        poly = next;
    }
    poly.get(e).copied().unwrap_or(0)
}

pub fn hodge_numbers(n: usize, d: u32) -> HodgeVector {
    assert!(n >= 1 && d >= 2, "need n >= 1 and d >= 2");
    let numbers = (0..n)
        .map(|q| hilbert_coefficient(n, d, piece_degree(n, d, q)))
        .collect();
    HodgeVector { n, d, numbers }
}

/// Graded reverse lexicographic order on monomials of equal degree:
/// `a > b` iff the last nonzero entry of `a - b` is negative.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// All monomials of degree `e` in `vars` variables, largest first in grevlex.
pub fn monomials_of_degree(vars: usize, e: i64) -> Vec<Vec<u32>> {
    if e < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    fill(&mut out, &mut cur, 0, e as u32);
    out.sort_by(|a, b| grevlex_cmp(b, a));
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut [u32], i: usize, left: u32) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.to_vec());
        return;
    }
    for k in 0..=left {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
    cur[i] = 0;
}

/// Monomial basis of the degree `degree` part of the Jacobian ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianRingBasis {
    pub degree: i64,
    pub monomials: Vec<Vec<u32>>,
}

impl JacobianRingBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Standard monomials of degree `e` modulo the Jacobian ideal, found by exact
/// echelon reduction. With `weights` given the reduction runs per weight
/// block; the ideal is weight-homogeneous, so the blocks are independent.
fn standard_monomials(
    m: &ExponentMatrix,
    e: i64,
    weights: Option<&WeightClass>,
) -> Vec<(Vec<u32>, u64)> {
    let vars = m.num_vars();
    let monomials = monomials_of_degree(vars, e);
    let index: HashMap<&[u32], usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, mono)| (mono.as_slice(), i))
        .collect();
    let weight_of = |mono: &[u32]| -> u64 {
        weights.map_or(0, |w| {
            mono.iter()
                .zip(&w.weights)
                .map(|(&a, &x)| a as u128 * x as u128)
                .sum::<u128>()
                .rem_euclid(w.modulus as u128) as u64
        })
    };

    // multiplier * df/dx_i for every multiplier of degree e - (d - 1)
    let mut blocks: BTreeMap<u64, Vec<SparseRow>> = BTreeMap::new();
    for mult in monomials_of_degree(vars, e - (m.degree() as i64 - 1)) {
        for i in 0..vars {
            let mut row = SparseRow::new();
            let mut block = None;
            for r in m.rows().iter().filter(|r| r[i] > 0) {
                let mono: Vec<u32> = (0..vars)
                    .map(|k| mult[k] + r[k] - u32::from(k == i))
                    .collect();
                block.get_or_insert_with(|| weight_of(&mono));
                row.insert(
                    index[mono.as_slice()],
                    BigRational::from_integer(BigInt::from(r[i])),
                );
            }
            if let Some(b) = block {
                blocks.entry(b).or_default().push(row);
            }
        }
    }

    let pivots: Vec<EchelonBasis> = blocks
        .into_par_iter()
        .map(|(_, rows)| {
            let mut basis = EchelonBasis::new();
            for row in rows {
                basis.insert(row);
            }
            basis
        })
        .collect();
    monomials
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.iter().any(|p| p.is_pivot(*i)))
        .map(|(_, mono)| (mono.clone(), weight_of(mono)))
        .collect()
}

pub fn jacobian_ring_basis(m: &ExponentMatrix, e: i64) -> Result<JacobianRingBasis> {
    let monomials: Vec<Vec<u32>> = standard_monomials(m, e, None)
        .into_iter()
        .map(|(mono, _)| mono)
        .collect();
    check_dimension(m, e, monomials.len())?;
    Ok(JacobianRingBasis {
        degree: e,
        monomials,
    })
}

fn check_dimension(m: &ExponentMatrix, e: i64, found: usize) -> Result<()> {
    let expected = hilbert_coefficient(m.n(), m.degree(), e);
    if expected != found as u64 {
        return Err(Error::QuotientDimension {
            degree: e,
            expected,
            found: found as u64,
        });
    }
    Ok(())
}

/// Eigenvalue exponents (mod `modulus`) with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterMultiset {
    pub modulus: u64,
    pub multiplicities: BTreeMap<u64, u64>,
}

impl CharacterMultiset {
    pub fn new(modulus: u64) -> Self {
        CharacterMultiset {
            modulus,
            multiplicities: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, exponent: u64, count: u64) {
        if count > 0 {
            *self
                .multiplicities
                .entry(exponent % self.modulus)
                .or_default() += count;
        }
    }

    pub fn total(&self) -> u64 {
        self.multiplicities.values().sum()
    }

    pub fn multiplicity(&self, exponent: u64) -> u64 {
        self.multiplicities
            .get(&(exponent % self.modulus))
            .copied()
            .unwrap_or(0)
    }

    /// The character of the inverse automorphism (or of the conjugate piece).
    pub fn negated(&self) -> Self {
        let mut out = Self::new(self.modulus);
        for (&e, &c) in &self.multiplicities {
            out.add((self.modulus - e) % self.modulus, c);
        }
        out
    }

    pub fn union(&self, other: &CharacterMultiset) -> Self {
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        let mut out = self.clone();
        for (&e, &c) in &other.multiplicities {
            out.add(e, c);
        }
        out
    }

    /// Relabel exponents by a unit, as induced by replacing `w` with `u w`.
    pub fn scaled(&self, u: u64) -> Self {
        let mut out = Self::new(self.modulus);
        for (&e, &c) in &self.multiplicities {
            out.add((e as u128 * u as u128 % self.modulus as u128) as u64, c);
        }
        out
    }
}

impl fmt::Display for CharacterMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities
            .iter()
            .map(|(e, c)| {
                if *c == 1 {
                    e.to_string()
                } else {
                    format!("{e}^{c}")
                }
            })
            .collect();
        write!(f, "{{{}}} mod {}", parts.join(", "), self.modulus)
    }
}

/// Character of the diagonal automorphism `w` on `H^{n-1-q,q}_prim`.
pub fn diagonal_character(
    m: &ExponentMatrix,
    w: &WeightClass,
    q: usize,
) -> Result<CharacterMultiset> {
    if w.num_vars() != m.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: m.num_vars(),
            found: w.num_vars(),
        });
    }
    let weights: Vec<i64> = w.weights.iter().map(|&x| x as i64).collect();
    if crate::delsarte::is_invariant(m, &weights, w.modulus)? != Some(w.common_weight) {
        return Err(Error::NotInvariant { modulus: w.modulus });
    }
    let e = piece_degree(m.n(), m.degree(), q);
    let basis = standard_monomials(m, e, Some(w));
    check_dimension(m, e, basis.len())?;

    let n = w.modulus as u128;
    let sum_w: u128 = w.weights.iter().map(|&x| x as u128).sum();
    let twist = (sum_w + n * (q as u128 + 1) - (q as u128 + 1) * w.common_weight as u128 % n) % n;
    let mut chars = CharacterMultiset::new(w.modulus);
    for (_, weight) in basis {
        chars.add(((weight as u128 + twist) % n) as u64, 1);
    }
    Ok(chars)
}

/// Characters on every middle piece with nonzero Hodge number.
pub fn middle_characters(m: &ExponentMatrix, w: &WeightClass) -> Result<Vec<CharacterMultiset>> {
    let hodge = hodge_numbers(m.n(), m.degree());
    (0..m.n())
        .filter(|&q| hodge.get(q) > 0)
        .map(|q| diagonal_character(m, w, q))
        .collect()
}

/// True iff the exponents present across the pieces generate `Z/N`, i.e. the
/// automorphism acts on cohomology with the same order it has.
pub fn faithfulness_check(chars: &[CharacterMultiset]) -> bool {
    let Some(first) = chars.first() else {
        return false;
    };
    let modulus = first.modulus;
    assert!(chars.iter().all(|c| c.modulus == modulus), "moduli differ");
    let g = chars
        .iter()
        .flat_map(|c| c.multiplicities.iter())
        .filter(|(_, &count)| count > 0)
        .fold(modulus, |g, (&e, _)| gcd_u64(g, e));
    g == 1
}

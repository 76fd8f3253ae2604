//! Delsarte hypersurfaces: `n+1` monomials in `n+1` variables, all with
//! coefficient one, encoded by a square exponent matrix.

mod perm;
mod smooth;
mod weights;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntegerMatrix;

pub use perm::{all_permutations, permutation_symmetries, PermSymmetry};
pub use smooth::{
    smoothness_check, BinomialSystem, SingularWitness, SmoothnessReport, StratumOutcome,
    StratumRecord, Verdict,
};
pub use weights::{
    conjugation_exponent, diagonal_symmetry_group, is_invariant, signed_residue,
    DiagonalSymmetryGroup, WeightClass,
};

/// Rows are the exponent vectors of the monomials; columns are variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentMatrix {
    n: usize,
    d: u32,
    rows: Vec<Vec<u32>>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidMatrix("need at least two rows".into()));
        }
        let size = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::InvalidMatrix(format!(
                "matrix must be square: row of length {} in a {size}-row matrix",
                bad.len()
            )));
        }
        let d: u32 = rows[0].iter().sum();
        if d == 0 {
            return Err(Error::InvalidMatrix("degree must be positive".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            let s: u32 = r.iter().sum();
            if s != d {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has degree {s}, expected {d}"
                )));
            }
        }
        let mut seen = HashSet::new();
        for (i, r) in rows.iter().enumerate() {
            if !seen.insert(r) {
                return Err(Error::InvalidMatrix(format!("row {i} is repeated")));
            }
        }
        Ok(ExponentMatrix {
            n: size - 1,
            d,
            rows,
        })
    }

    /// Rows `(d-1) e_i + e_{i+1 mod n+1}`; for `n = 4, d = 4` this is the Klein quartic 3-fold.
    pub fn loop_matrix(n: usize, d: u32) -> Self {
        let rows = (0..=n)
            .map(|i| {
                let mut r = vec![0; n + 1];
                r[i] = d - 1;
                r[(i + 1) % (n + 1)] += 1;
                r
            })
            .collect();
        Self::new(rows).expect("loop matrix is valid")
    }

    /// `d` times the identity.
    pub fn fermat(n: usize, d: u32) -> Self {
        let rows = (0..=n)
            .map(|i| {
                let mut r = vec![0; n + 1];
                r[i] = d;
                r
            })
            .collect();
        Self::new(rows).expect("fermat matrix is valid")
    }

    /// Rows `(d-1) e_i + e_{i+1}` for `i < n`, and `d e_n`.
    pub fn chain_matrix(n: usize, d: u32) -> Self {
        let rows = (0..=n)
            .map(|i| {
                let mut r = vec![0; n + 1];
                if i == n {
                    r[i] = d;
                } else {
                    r[i] = d - 1;
                    r[i + 1] = 1;
                }
                r
            })
            .collect();
        Self::new(rows).expect("chain matrix is valid")
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn num_vars(&self) -> usize {
        self.n + 1
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn to_integer_matrix(&self) -> IntegerMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntegerMatrix::from_rows(&rows)
    }

    pub fn determinant(&self) -> BigInt {
        self.to_integer_matrix().determinant()
    }

    /// Relabels variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![0; r.len()];
                for (i, &x) in r.iter().enumerate() {
                    out[perm[i]] = x;
                }
                out
            })
            .collect();
        ExponentMatrix {
            n: self.n,
            d: self.d,
            rows,
        }
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut rows = vec![Vec::new(); self.rows.len()];
        for (i, r) in self.rows.iter().enumerate() {
            rows[perm[i]] = r.clone();
        }
        ExponentMatrix {
            n: self.n,
            d: self.d,
            rows,
        }
    }

    pub fn with_sorted_rows(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.sort();
        ExponentMatrix {
            n: self.n,
            d: self.d,
            rows,
        }
    }

    /// Evaluates the partial derivatives of `f = sum_k x^{row_k}` at a complex point.
    pub fn gradient_at(&self, x: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        let mut grad = vec![num_complex::Complex64::new(0.0, 0.0); self.num_vars()];
        for row in &self.rows {
            for (j, g) in grad.iter_mut().enumerate() {
                if row[j] == 0 {
                    continue;
                }
                let mut term = num_complex::Complex64::new(row[j] as f64, 0.0);
                for (i, &e) in row.iter().enumerate() {
                    let e = if i == j { e - 1 } else { e };
                    if e > 0 {
                        term *= x[i].powu(e);
                    }
                }
                *g += term;
            }
        }
        grad
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.d)?;
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(u32::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Text format: a header line `n d`, then `n+1` lines of `n+1` integers.
/// Blank lines and `#` comments are ignored; `;` also separates lines.
impl FromStr for ExponentMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .split(['\n', ';'])
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let head = parse_ints(header)?;
        let [n, d] = head[..] else {
            return Err(Error::Parse(format!(
                "header must be `n d`, found `{header}`"
            )));
        };
        if n < 1 {
            return Err(Error::Parse("n must be at least 1".into()));
        }
        let size = (n + 1) as usize;
        let mut rows = Vec::with_capacity(size);
        for line in lines.by_ref() {
            let r = parse_ints(line)?;
            if r.len() != size {
                return Err(Error::Parse(format!(
                    "row `{line}` has {} entries, expected {size}",
                    r.len()
                )));
            }
            rows.push(r.into_iter().map(|x| x as u32).collect::<Vec<u32>>());
            if rows.len() == size {
                break;
            }
        }
        if rows.len() != size {
            return Err(Error::Parse(format!(
                "expected {size} rows, found {}",
                rows.len()
            )));
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing input `{extra}`")));
        }
        for (i, r) in rows.iter().enumerate() {
            let s: u32 = r.iter().sum();
            if s != d as u32 {
                return Err(Error::Parse(format!(
                    "row {i} sums to {s}, header says degree {d}"
                )));
            }
        }
        ExponentMatrix::new(rows)
    }
}

fn parse_ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("`{t}` is not a nonnegative integer")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_rows() {
        let k = ExponentMatrix::loop_matrix(4, 4);
        assert_eq!(k.rows()[0], vec![3, 1, 0, 0, 0]);
        assert_eq!(k.rows()[4], vec![1, 0, 0, 0, 3]);
        assert_eq!(k.determinant(), BigInt::from(244));
    }

    #[test]
    fn parse_round_trip() {
        let k = ExponentMatrix::loop_matrix(4, 4);
        let parsed: ExponentMatrix = k.to_string().parse().unwrap();
        assert_eq!(parsed, k);
        let inline: ExponentMatrix = "2 4; 3 1 0; 0 3 1; 1 0 3".parse().unwrap();
        assert_eq!(inline, ExponentMatrix::loop_matrix(2, 4));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("".parse::<ExponentMatrix>(), Err(Error::Parse(_))));
        assert!(matches!(
            "2 4\n3 1 0\n0 3 1".parse::<ExponentMatrix>(),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            "2 4\n3 1 0\n0 3 1\n1 1 3".parse::<ExponentMatrix>(),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            "2 4\n3 1 0\n3 1 0\n1 0 3".parse::<ExponentMatrix>(),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(matches!(
            "2 4\n3 x 0\n0 3 1\n1 0 3".parse::<ExponentMatrix>(),
            Err(Error::Parse(_))
        ));
    }
}

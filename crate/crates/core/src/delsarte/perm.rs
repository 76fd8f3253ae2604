use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::ExponentMatrix;

/// A relabeling of variables: variable `i` goes to `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PermSymmetry {
    pub perm: Vec<usize>,
}

impl PermSymmetry {
    pub fn identity(k: usize) -> Self {
        PermSymmetry {
            perm: (0..k).collect(),
        }
    }

    /// The cyclic shift `i -> i + 1 mod k`.
    pub fn shift(k: usize) -> Self {
        PermSymmetry {
            perm: (0..k).map(|i| (i + 1) % k).collect(),
        }
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(a, b);
        PermSymmetry { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `(self . other)(i) = self(other(i))`
    pub fn compose(&self, other: &PermSymmetry) -> PermSymmetry {
        PermSymmetry {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn inverse(&self) -> PermSymmetry {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        PermSymmetry { perm: inv }
    }

    pub fn order(&self) -> u64 {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    pub fn preserves(&self, m: &ExponentMatrix) -> bool {
        let rows: HashSet<&Vec<u32>> = m.rows().iter().collect();
        let moved = m.permute_columns(&self.perm);
        moved.rows().iter().all(|r| rows.contains(r))
    }
}

impl fmt::Display for PermSymmetry {
    /// Cycle notation, fixed points omitted; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.perm.len()];
        let mut any = false;
        for start in 0..self.perm.len() {
            if seen[start] || self.perm[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.perm[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Every variable permutation mapping the row set to itself, in
/// lexicographic order of the image vectors. The result is a subgroup.
pub fn permutation_symmetries(m: &ExponentMatrix) -> Vec<PermSymmetry> {
    all_permutations(m.num_vars())
        .into_iter()
        .map(|perm| PermSymmetry { perm })
        .filter(|p| p.preserves(m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_permutations() {
        let p = all_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
        assert_eq!(all_permutations(5).len(), 120);
    }

    #[test]
    fn fermat_is_fully_symmetric() {
        assert_eq!(
            permutation_symmetries(&ExponentMatrix::fermat(4, 4)).len(),
            120
        );
    }

    #[test]
    fn klein_has_cyclic_shift() {
        let syms = permutation_symmetries(&ExponentMatrix::loop_matrix(4, 4));
        assert_eq!(syms.len(), 5);
        assert!(syms.contains(&PermSymmetry::shift(5)));
        assert!(syms
            .iter()
            .filter(|s| !s.is_identity())
            .all(|s| s.order() == 5));
    }

    #[test]
    fn chain_is_rigid() {
        let syms = permutation_symmetries(&ExponentMatrix::chain_matrix(4, 4));
        assert_eq!(syms, vec![PermSymmetry::identity(5)]);
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(PermSymmetry::shift(5).to_string(), "(0 1 2 3 4)");
        assert_eq!(PermSymmetry::identity(3).to_string(), "()");
        assert_eq!(PermSymmetry::transposition(5, 0, 1).to_string(), "(0 1)");
    }
}

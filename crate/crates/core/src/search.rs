//! Enumerates Delsarte hypersurfaces up to variable relabeling and runs each
//! smooth one through the symmetry, Hodge and obstruction pipeline.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::delsarte::{
    all_permutations, conjugation_exponent, diagonal_symmetry_group, permutation_symmetries,
    signed_residue, smoothness_check, ExponentMatrix, PermSymmetry, Verdict, WeightClass,
};
use crate::error::{Error, Result};
use crate::exact::{is_prime, prime_factors};
use crate::hodge::{faithfulness_check, hodge_numbers, middle_characters};
use crate::obstruction::{
    all_rules, obstruct, Certificate, MetacyclicGroup, ProblemInstance, Ruleset, TraceVerdict,
};

pub const MAX_N: usize = 5;
pub const MAX_D: u32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub d: u32,
    /// Allowed rows; `None` means `d e_i` and `(d-1) e_i + e_j`.
    pub family: Option<Vec<Vec<u32>>>,
    /// Smallest prime order accepted for the diagonal symmetry.
    pub threshold: u64,
    pub ruleset: Ruleset,
}

impl SearchSpec {
    pub fn new(n: usize, d: u32) -> Self {
        SearchSpec {
            n,
            d,
            family: None,
            threshold: 2,
            ruleset: all_rules(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_N).contains(&self.n) || !(2..=MAX_D).contains(&self.d) {
            return Err(Error::InvalidInstance(format!(
                "search supports 1 <= n <= {MAX_N} and 2 <= d <= {MAX_D}, got n = {}, d = {}",
                self.n, self.d
            )));
        }
        if self.threshold < 2 {
            return Err(Error::InvalidInstance(
                "threshold must be at least 2".into(),
            ));
        }
        if let Some(rows) = &self.family {
            for r in rows {
                if r.len() != self.n + 1 || r.iter().sum::<u32>() != self.d {
                    return Err(Error::InvalidInstance(format!(
                        "family row {r:?} is not a degree {} monomial in {} variables",
                        self.d,
                        self.n + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        let mut rows = match &self.family {
            Some(rows) => rows.clone(),
            None => default_family(self.n, self.d),
        };
        rows.sort();
        rows.dedup();
        rows
    }
}

/// Rows `d e_i` and `(d-1) e_i + e_j` for `i != j`.
pub fn default_family(n: usize, d: u32) -> Vec<Vec<u32>> {
    let k = n + 1;
    let mut rows = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut r = vec![0; k];
            r[i] += d - 1;
            r[j] += 1;
            rows.push(r);
        }
    }
    rows
}

/// Lexicographically smallest row-sorted matrix over all column permutations.
pub fn canonical_form(m: &ExponentMatrix) -> ExponentMatrix {
    canonical_with(m, &all_permutations(m.num_vars()))
}

fn canonical_with(m: &ExponentMatrix, perms: &[Vec<usize>]) -> ExponentMatrix {
    perms
        .iter()
        .map(|p| m.permute_columns(p).with_sorted_rows())
        .min()
        .expect("at least the identity permutation")
}

/// One canonical matrix per relabeling class, in ascending order.
pub fn enumerate_matrices(spec: &SearchSpec) -> Result<Vec<ExponentMatrix>> {
    spec.validate()?;
    let rows = spec.rows();
    let k = spec.n + 1;
    let perms = all_permutations(k);
    let subsets = combinations(rows.len(), k);
    let canon: BTreeSet<ExponentMatrix> = subsets
        .par_iter()
        .map(|idx| {
            let m = ExponentMatrix::new(idx.iter().map(|&i| rows[i].clone()).collect())
                .expect("distinct rows of equal degree");
            canonical_with(&m, &perms)
        })
        .collect();
    Ok(canon.into_iter().collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(j) = (0..k).rev().find(|&j| idx[j] < n - k + j) else {
            return out;
        };
        idx[j] += 1;
        for t in j + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionVerdict {
    Contradiction,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    pub v: u32,
    pub matrix: Vec<Vec<u32>>,
    pub smoothness: Verdict,
    pub hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal_group: Option<Vec<u64>>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faithful: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<ObstructionVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl CandidateReport {
    fn new(m: &ExponentMatrix, smoothness: Verdict) -> Self {
        CandidateReport {
            v: 1,
            matrix: m.rows().to_vec(),
            smoothness,
            hit: false,
            reason: None,
            diagonal_group: None,
            dimension: None,
            p: None,
            weights: None,
            q: None,
            permutation: None,
            r: None,
            faithful: None,
            verdict: None,
            certificate: None,
        }
    }

    fn stop(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    fn rank_cmp(&self, other: &Self) -> Ordering {
        (self.verdict, std::cmp::Reverse(self.p), &self.matrix).cmp(&(
            other.verdict,
            std::cmp::Reverse(other.p),
            &other.matrix,
        ))
    }
}

/// The order-`p` part of `w`, as a weight class modulo `p`.
fn prime_part(m: &ExponentMatrix, w: &WeightClass, p: u64) -> Result<WeightClass> {
    let k = w.modulus / p;
    let weights: Vec<i64> = w
        .weights
        .iter()
        .map(|&x| ((x as u128 * k as u128 % w.modulus as u128) as u64 / k) as i64)
        .collect();
    Ok(WeightClass::new(m, &weights, p)?.canonical())
}

/// Among prime-order permutation symmetries normalizing `<w>` with `r != 1`,
/// the one with smallest `|r|` (signed), then first in lexicographic order.
fn pick_normalizer(
    m: &ExponentMatrix,
    w: &WeightClass,
    syms: &[PermSymmetry],
) -> Option<(PermSymmetry, u64, u64)> {
    let p = w.modulus;
    syms.iter()
        .filter(|s| is_prime(s.order()))
        .filter_map(|s| {
            let r = conjugation_exponent(m, w, s).ok()?;
            (r % p != 1).then(|| (s.clone(), s.order(), r))
        })
        .min_by_key(|(s, _, r)| {
            (
                signed_residue(*r, p).unsigned_abs(),
                signed_residue(*r, p) < 0,
                s.perm.clone(),
            )
        })
}

pub fn evaluate_candidate(m: &ExponentMatrix, spec: &SearchSpec) -> CandidateReport {
    let smooth = smoothness_check(m);
    let mut rep = CandidateReport::new(m, smooth.verdict);
    if smooth.verdict != Verdict::Smooth {
        return rep.stop(format!("{:?}", smooth.verdict).to_lowercase());
    }

    let hodge = hodge_numbers(m.n(), m.degree());
    let Some(dim) = hodge.intermediate_jacobian_dim() else {
        return rep.stop("even-dimensional hypersurface: no intermediate Jacobian");
    };
    if m.n() >= 3 && hodge.get(0) > 0 {
        return rep.stop(
            "nonzero top holomorphic forms: intermediate Jacobian is not an abelian variety",
        );
    }
    rep.dimension = Some(dim);

    let group = match diagonal_symmetry_group(m) {
        Ok(g) => g,
        Err(e) => return rep.stop(format!("diagonal group: {e}")),
    };
    rep.diagonal_group = Some(group.invariant_factors());
    let Some(p) = prime_factors(group.exponent())
        .into_iter()
        .filter(|&p| p > dim && p >= spec.threshold)
        .max()
    else {
        return rep.stop(format!(
            "no prime divisor of the exponent {} exceeds N = {dim} and the threshold {}",
            group.exponent(),
            spec.threshold
        ));
    };
    rep.p = Some(p);
    let generator = group
        .generators
        .iter()
        .find(|w| w.modulus % p == 0)
        .expect("p divides the exponent");
    let w = match prime_part(m, generator, p) {
        Ok(w) => w,
        Err(e) => return rep.stop(format!("weights: {e}")),
    };
    rep.weights = Some(w.signed_weights());

    let syms = permutation_symmetries(m);
    let Some((sigma, q, r)) = pick_normalizer(m, &w, &syms) else {
        return rep.stop(
            "no prime-order permutation symmetry acts nontrivially on the diagonal symmetry",
        );
    };
    rep.q = Some(q);
    rep.permutation = Some(sigma.perm.clone());
    rep.r = Some(signed_residue(r, p));

    let faithful = match middle_characters(m, &w) {
        Ok(chars) => faithfulness_check(&chars),
        Err(e) => return rep.stop(format!("character: {e}")),
    };
    rep.faithful = Some(faithful);

    let instance = MetacyclicGroup::new(p, q, r as i64)
        .and_then(|g| ProblemInstance::new(dim, g))
        .map(|mut inst| {
            inst.faithful = faithful;
            inst
        });
    let trace = match instance.and_then(|inst| obstruct(&inst, &spec.ruleset)) {
        Ok(t) => t,
        Err(e) => return rep.stop(format!("obstruction: {e}")),
    };
    rep.verdict = Some(match trace.verdict {
        TraceVerdict::Contradiction => ObstructionVerdict::Contradiction,
        TraceVerdict::Inconclusive(_) => ObstructionVerdict::Inconclusive,
    });
    rep.certificate = Some(trace.certificate());
    rep.hit = true;
    rep
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub candidates: usize,
    pub smooth: usize,
    pub hits: Vec<CandidateReport>,
}

/// Hits ranked by verdict (contradictions first), then `p` descending, then matrix.
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    let candidates = enumerate_matrices(spec)?;
    let reports: Vec<CandidateReport> = candidates
        .par_iter()
        .map(|m| evaluate_candidate(m, spec))
        .collect();
    let smooth = reports
        .iter()
        .filter(|r| r.smoothness == Verdict::Smooth)
        .count();
    let mut hits: Vec<CandidateReport> = reports.into_iter().filter(|r| r.hit).collect();
    hits.sort_by(CandidateReport::rank_cmp);
    Ok(SearchOutcome {
        candidates: candidates.len(),
        smooth,
        hits,
    })
}

mod support;

use std::collections::BTreeSet;

use ijobstruct::delsarte::{ExponentMatrix, Verdict};
use ijobstruct::exact::{is_prime, mod_pow};
use ijobstruct::obstruction::verify_certificate;
use ijobstruct::search::{
    canonical_form, default_family, enumerate_matrices, search, ObstructionVerdict, SearchSpec,
};
use num_bigint::BigInt;
use support::{brute_force_conjugation, hodge_by_counting, numeric_smoothness, NumericVerdict};

/// Orbit count of `k`-subsets of the family under column relabeling, by
/// Burnside: a subset is fixed by a relabeling iff it is a union of the
/// cycles the relabeling induces on the rows.
fn burnside_orbit_count(n: usize, d: u32) -> u64 {
    let rows = default_family(n, d);
    let k = n + 1;
    let perms = permutations(k);
    let mut fixed_total = 0u64;
    for perm in &perms {
        let image = |r: &Vec<u32>| {
            let mut out = vec![0; k];
            for (j, &x) in r.iter().enumerate() {
                out[perm[j]] = x;
            }
            out
        };
        let mut seen = vec![false; rows.len()];
        let mut cycles = Vec::new();
        for start in 0..rows.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                let next = image(&rows[cur]);
                cur = rows.iter().position(|r| *r == next).unwrap();
            }
            cycles.push(len);
        }
        // subsets of cycles with total size k
        let mut ways = vec![0u64; k + 1];
        ways[0] = 1;
        for c in cycles {
            for s in (c..=k).rev() {
                ways[s] += ways[s - c];
            }
        }
        fixed_total += ways[k];
    }
    assert_eq!(fixed_total % perms.len() as u64, 0);
    fixed_total / perms.len() as u64
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn one_representative_per_relabeling_class() {
    for (n, d) in [(2, 4), (3, 3), (4, 4)] {
        let classes = enumerate_matrices(&SearchSpec::new(n, d)).unwrap();
        assert_eq!(
            classes.len() as u64,
            burnside_orbit_count(n, d),
            "n={n} d={d}"
        );
        let distinct: BTreeSet<_> = classes.iter().collect();
        assert_eq!(distinct.len(), classes.len());
        for m in &classes {
            assert_eq!(&canonical_form(m), m);
        }
    }
    assert_eq!(
        enumerate_matrices(&SearchSpec::new(4, 4)).unwrap().len(),
        549
    );
}

#[test]
fn quartic_threefold_search_finds_klein() {
    let mut spec = SearchSpec::new(4, 4);
    spec.threshold = 31;
    let out = search(&spec).unwrap();
    assert_eq!(out.candidates, 549);
    assert_eq!(out.smooth, 16);
    assert_eq!(out.hits.len(), 1);
    let hit = &out.hits[0];
    assert_eq!(hit.matrix, canonical_form(&support::klein()).rows());
    assert_eq!(
        (hit.p, hit.q, hit.r, hit.dimension),
        (Some(61), Some(5), Some(-3), Some(30))
    );
    assert_eq!(hit.faithful, Some(true));
    assert_eq!(hit.verdict, Some(ObstructionVerdict::Contradiction));
}

#[test]
fn klein_curve_hit() {
    let mut spec = SearchSpec::new(2, 4);
    spec.threshold = 7;
    let out = search(&spec).unwrap();
    let klein = canonical_form(&ExponentMatrix::loop_matrix(2, 4));
    let hit = out.hits.iter().find(|h| h.matrix == klein.rows()).unwrap();
    assert_eq!((hit.p, hit.q, hit.dimension), (Some(7), Some(3), Some(3)));
    assert_eq!(hit.verdict, Some(ObstructionVerdict::Inconclusive));
}

#[test]
fn huge_threshold_yields_nothing() {
    for (n, d) in [(2, 4), (4, 3), (4, 4)] {
        let mut spec = SearchSpec::new(n, d);
        spec.threshold = 1000;
        let out = search(&spec).unwrap();
        assert!(out.hits.is_empty());
        assert!(out.smooth > 0);
    }
}

/// Every reported hit is rechecked from its raw fields with independent code.
#[test]
fn hits_are_sound() {
    let mut total = 0;
    for (n, d) in [(2, 3), (2, 4), (2, 5), (4, 3), (4, 4)] {
        let spec = SearchSpec::new(n, d);
        for hit in search(&spec).unwrap().hits {
            total += 1;
            let m = ExponentMatrix::new(hit.matrix.clone()).unwrap();
            assert_eq!(hit.smoothness, Verdict::Smooth);
            assert_eq!(numeric_smoothness(&m, 5).0, NumericVerdict::Smooth, "{m}");

            let k = n + 1;
            let p = hit.p.unwrap();
            let dim = hit.dimension.unwrap();
            let expected_dim: u64 = (0..n)
                .filter(|q| 2 * q + 1 < n)
                .map(|q| hodge_by_counting(n, d, q))
                .sum();
            assert_eq!(dim, expected_dim, "{m}");
            assert!(is_prime(p) && p > dim && p >= spec.threshold);
            assert_eq!(
                m.determinant() % BigInt::from(d as u64 * p),
                BigInt::from(0)
            );

            // weights scale every monomial by the same root of unity
            let w = hit.weights.clone().unwrap();
            assert_eq!(w.len(), k);
            let row_sums: BTreeSet<i64> = m
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(&w)
                        .map(|(&a, &x)| a as i64 * x)
                        .sum::<i64>()
                        .rem_euclid(p as i64)
                })
                .collect();
            assert_eq!(row_sums.len(), 1, "{m} {w:?}");
            assert!(w.iter().any(|x| (x - w[0]).rem_euclid(p as i64) != 0));

            // the permutation preserves the monomial set and has prime order q
            let perm = hit.permutation.clone().unwrap();
            let q = hit.q.unwrap();
            let mut order = 1;
            let mut cur: Vec<usize> = perm.clone();
            while cur.iter().enumerate().any(|(i, &x)| i != x) {
                cur = cur.iter().map(|&x| perm[x]).collect();
                order += 1;
            }
            assert_eq!(order, q);
            assert!(is_prime(q));
            let moved: BTreeSet<Vec<u32>> = m
                .rows()
                .iter()
                .map(|r| {
                    let mut out = vec![0; k];
                    for j in 0..k {
                        out[perm[j]] = r[j];
                    }
                    out
                })
                .collect();
            assert_eq!(moved, m.rows().iter().cloned().collect());

            let r = hit.r.unwrap();
            let oracle = brute_force_conjugation(&w, &perm, p as i64);
            assert_eq!(oracle.first().copied(), Some(r.rem_euclid(p as i64)), "{m}");
            assert_ne!(r.rem_euclid(p as i64), 1);
            assert_eq!(mod_pow(r.rem_euclid(p as i64) as u64, q, p), 1);

            let cert = hit.certificate.clone().unwrap();
            verify_certificate(&cert).unwrap();
            assert_eq!(
                (
                    cert.instance.dimension,
                    cert.instance.p,
                    cert.instance.q,
                    cert.instance.r
                ),
                (dim as i64, p as i64, q as i64, r)
            );
            let contradiction = hit.verdict == Some(ObstructionVerdict::Contradiction);
            assert_eq!(cert.verdict == "contradiction", contradiction);
        }
    }
    assert!(total >= 3, "only {total} hits checked");
}

//! Independent oracles shared by the integration tests. None of them call the
//! algorithms they check: smoothness is probed numerically, conjugation
//! exponents and Hodge numbers by brute force.
#![allow(dead_code)]

use ijobstruct::delsarte::ExponentMatrix;
use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C64 = Complex<f64>;

/// Verdict of the numeric oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericVerdict {
    Smooth,
    Singular,
}

/// `|grad f(x)| / |x|^(d-1)` threshold below which a point counts as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-9;

fn monomial(x: &[C64], e: &[i64]) -> C64 {
    x.iter().zip(e).fold(C64::new(1.0, 0.0), |acc, (xi, &k)| {
        if k == 0 {
            acc
        } else {
            acc * xi.powi(k as i32)
        }
    })
}

fn gradient(m: &ExponentMatrix, x: &[C64]) -> Vec<C64> {
    let k = m.num_vars();
    let mut g = vec![C64::new(0.0, 0.0); k];
    for row in m.rows() {
        for j in 0..k {
            if row[j] == 0 {
                continue;
            }
            let mut e: Vec<i64> = row.iter().map(|&a| a as i64).collect();
            e[j] -= 1;
            g[j] += C64::new(row[j] as f64, 0.0) * monomial(x, &e);
        }
    }
    g
}

fn hessian(m: &ExponentMatrix, x: &[C64]) -> Vec<Vec<C64>> {
    let k = m.num_vars();
    let mut h = vec![vec![C64::new(0.0, 0.0); k]; k];
    for row in m.rows() {
        for j in 0..k {
            for i in 0..k {
                let mut e: Vec<i64> = row.iter().map(|&a| a as i64).collect();
                let coeff = if i == j {
                    (row[j] as f64) * (row[j] as f64 - 1.0)
                } else {
                    row[j] as f64 * row[i] as f64
                };
                if coeff == 0.0 {
                    continue;
                }
                e[j] -= 1;
                e[i] -= 1;
                h[j][i] += C64::new(coeff, 0.0) * monomial(x, &e);
            }
        }
    }
    h
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Scale-invariant gradient size at a nonzero point.
pub fn relative_gradient(m: &ExponentMatrix, x: &[C64]) -> f64 {
    let nx = norm(x);
    norm(&gradient(m, x)) / nx.powi(m.degree() as i32 - 1)
}

/// Levenberg-Marquardt on `grad f = 0` plus a random affine chart, with the
/// variables outside `support` pinned to zero.
fn descend(m: &ExponentMatrix, support: &[usize], rng: &mut ChaCha8Rng) -> f64 {
    let k = m.num_vars();
    let s = support.len();
    let chart: Vec<C64> = (0..s)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut x = vec![C64::new(0.0, 0.0); k];
    for &i in support {
        x[i] = C64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    }
    let residual = |x: &[C64]| -> Vec<C64> {
        let mut r = gradient(m, x);
        let lin: C64 = support.iter().zip(&chart).map(|(&i, a)| a * x[i]).sum();
        r.push(lin - C64::new(1.0, 0.0));
        r
    };
    let mut lambda = 1e-3;
    let mut r = residual(&x);
    for _ in 0..200 {
        let h = hessian(m, &x);
        let jac = DMatrix::from_fn(k + 1, s, |row, col| {
            if row < k {
                h[row][support[col]]
            } else {
                chart[col]
            }
        });
        let f = DVector::from_vec(r.clone());
        let jh = jac.adjoint();
        let mut normal = &jh * &jac;
        for d in 0..s {
            normal[(d, d)] += C64::new(lambda, 0.0);
        }
        let Some(step) = normal.lu().solve(&(-(&jh * f))) else {
            break;
        };
        let mut trial = x.clone();
        for (c, &i) in support.iter().enumerate() {
            trial[i] += step[c];
        }
        let rt = residual(&trial);
        if norm(&rt) < norm(&r) {
            x = trial;
            r = rt;
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
        }
        if norm(&r) < 1e-14 {
            break;
        }
    }
    if norm(&x) == 0.0 {
        return f64::INFINITY;
    }
    relative_gradient(m, &x)
}

/// Random-restart search for a singular point on every coordinate stratum.
pub fn numeric_smoothness(m: &ExponentMatrix, seed: u64) -> (NumericVerdict, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = m.num_vars();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        for _ in 0..6 {
            best = best.min(descend(m, &support, &mut rng));
            if best < SINGULAR_TOLERANCE {
                return (NumericVerdict::Singular, best);
            }
        }
    }
    (NumericVerdict::Smooth, best)
}

/// All `r` with `sigma . w = r w + c (1,...,1) mod n` for some `c`, where
/// `(sigma . w)_i = w_{sigma(i)}`.
pub fn brute_force_conjugation(weights: &[i64], perm: &[usize], n: i64) -> Vec<i64> {
    let moved: Vec<i64> = perm.iter().map(|&j| weights[j]).collect();
    (0..n)
        .filter(|&r| {
            (0..n).any(|c| {
                moved
                    .iter()
                    .zip(weights)
                    .all(|(&a, &w)| (a - r * w - c).rem_euclid(n) == 0)
            })
        })
        .collect()
}

/// Primitive Hodge number by counting monomials of degree `(q+1)d - n - 1`
/// with all exponents at most `d - 2` (the Fermat Jacobian ring basis).
pub fn hodge_by_counting(n: usize, d: u32, q: usize) -> u64 {
    let e = (q as i64 + 1) * d as i64 - n as i64 - 1;
    if e < 0 {
        return 0;
    }
    fn count(vars: usize, left: i64, cap: i64) -> u64 {
        if vars == 0 {
            return u64::from(left == 0);
        }
        (0..=cap.min(left))
            .map(|a| count(vars - 1, left - a, cap))
            .sum()
    }
    count(n + 1, e, d as i64 - 2)
}

/// Rows `d e_i` and `(d-1) e_i + e_j`.
pub fn family_rows(n: usize, d: u32) -> Vec<Vec<u32>> {
    let k = n + 1;
    let mut rows = Vec::new();
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

/// Every `(n+1)`-subset of the family with nonzero determinant.
pub fn full_family(n: usize, d: u32) -> Vec<ExponentMatrix> {
    let rows = family_rows(n, d);
    let k = n + 1;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let m = ExponentMatrix::new(idx.iter().map(|&i| rows[i].clone()).collect()).unwrap();
        if m.determinant() != 0.into() {
            out.push(m);
        }
        let Some(j) = (0..k).rev().find(|&j| idx[j] < rows.len() - k + j) else {
            return out;
        };
        idx[j] += 1;
        for t in j + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// `count` family matrices with nonzero determinant, drawn with a fixed seed.
pub fn random_family_matrices(n: usize, d: u32, count: usize, seed: u64) -> Vec<ExponentMatrix> {
    let rows = family_rows(n, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut pick: Vec<usize> = Vec::new();
        while pick.len() < n + 1 {
            let i = rng.gen_range(0..rows.len());
            if !pick.contains(&i) {
                pick.push(i);
            }
        }
        let m = ExponentMatrix::new(pick.iter().map(|&i| rows[i].clone()).collect()).unwrap();
        if m.determinant() != 0.into() {
            out.push(m);
        }
    }
    out
}

pub fn klein() -> ExponentMatrix {
    ExponentMatrix::loop_matrix(4, 4)
}

pub fn cone() -> ExponentMatrix {
    ExponentMatrix::new(vec![
        vec![4, 0, 0, 0, 0],
        vec![0, 4, 0, 0, 0],
        vec![0, 0, 4, 0, 0],
        vec![0, 0, 0, 4, 0],
        vec![3, 1, 0, 0, 0],
    ])
    .unwrap()
}

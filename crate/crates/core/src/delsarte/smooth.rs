//! Exact smoothness decision for Delsarte hypersurfaces with unit coefficients.
//!
//! The coordinate strata `{x_i = 0 for i not in S, x_i != 0 for i in S}` are
//! handled one at a time. On a stratum each partial derivative keeps only the
//! terms whose monomial is supported in `S`. A one-term equation cannot vanish
//! on the torus of `S`; two-term equations are binomials `x^gamma = c` whose
//! solvability is decided by the integer left kernel of the exponent matrix.
//! Euler's relation makes `f = 0` automatic at a common zero of the partials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{permutation_symmetries, ExponentMatrix};
use crate::exact::{smith_normal_form, IntegerMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Smooth,
    Singular,
    Unsupported,
}

/// Binomial equations `x^{gamma_j} = c_j` on the torus of a stratum, with an
/// integer basis of the left kernel of `(gamma_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinomialSystem {
    pub support: Vec<usize>,
    /// Exponent differences, one per nonempty equation, indexed by `support`.
    pub exponents: Vec<Vec<i64>>,
    #[serde(serialize_with = "rationals_as_strings")]
    pub constants: Vec<BigRational>,
    #[serde(serialize_with = "bigint_rows_as_i64")]
    pub kernel: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StratumOutcome {
    /// Partial derivative `equation` restricts to a single monomial.
    MonomialEquation { equation: usize },
    /// Every partial derivative vanishes identically on the stratum.
    AllVanish,
    /// Some kernel vector `lambda` has `prod c_j^{lambda_j} != 1`.
    InconsistentBinomials {
        #[serde(serialize_with = "bigints_as_i64")]
        kernel_vector: Vec<BigInt>,
        #[serde(serialize_with = "rational_as_string")]
        product: BigRational,
    },
    /// The binomial system has torus solutions.
    ConsistentBinomials,
    /// Some equation keeps three or more terms.
    TooManyTerms { equation: usize, terms: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumRecord {
    pub support: Vec<usize>,
    #[serde(flatten)]
    pub outcome: StratumOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularWitness {
    pub support: Vec<usize>,
    pub system: Option<BinomialSystem>,
    /// Unit-norm point, as (re, im) pairs.
    pub point: Vec<(f64, f64)>,
    /// Euclidean norm of the gradient at `point`.
    pub gradient_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub verdict: Verdict,
    pub witness: Option<SingularWitness>,
    /// One record per stratum examined (orbit representatives only).
    pub strata: Vec<StratumRecord>,
    pub symmetry_order: usize,
}

impl SmoothnessReport {
    pub fn is_smooth(&self) -> bool {
        self.verdict == Verdict::Smooth
    }
}

struct Term {
    coeff: u32,
    exponent: Vec<u32>,
}

pub fn smoothness_check(m: &ExponentMatrix) -> SmoothnessReport {
    let vars = m.num_vars();
    let syms = permutation_symmetries(m);
    let mut strata = Vec::new();
    let mut unsupported = false;

    for mask in 1u32..(1 << vars) {
        let is_rep = syms.iter().all(|s| {
            let image = (0..vars)
                .filter(|&i| mask >> i & 1 == 1)
                .fold(0u32, |acc, i| acc | 1 << s.perm[i]);
            image >= mask
        });
        if !is_rep {
            continue;
        }
        let support: Vec<usize> = (0..vars).filter(|&i| mask >> i & 1 == 1).collect();
        let equations = restricted_partials(m, mask);

        let (outcome, witness) = classify_stratum(m, &support, &equations);
        let singular = witness.is_some();
        unsupported |= matches!(outcome, StratumOutcome::TooManyTerms { .. });
        strata.push(StratumRecord { support, outcome });
        if singular {
            return SmoothnessReport {
                verdict: Verdict::Singular,
                witness,
                strata,
                symmetry_order: syms.len(),
            };
        }
    }

    SmoothnessReport {
        verdict: if unsupported {
            Verdict::Unsupported
        } else {
            Verdict::Smooth
        },
        witness: None,
        strata,
        symmetry_order: syms.len(),
    }
}

/// Terms of each partial derivative whose monomial is supported in `mask`.
fn restricted_partials(m: &ExponentMatrix, mask: u32) -> Vec<Vec<Term>> {
    (0..m.num_vars())
        .map(|j| {
            m.rows()
                .iter()
                .filter(|row| row[j] > 0)
                .filter_map(|row| {
                    let mut exponent = row.clone();
                    exponent[j] -= 1;
                    let inside = exponent
                        .iter()
                        .enumerate()
                        .all(|(i, &e)| e == 0 || mask >> i & 1 == 1);
                    inside.then_some(Term {
                        coeff: row[j],
                        exponent,
                    })
                })
                .collect()
        })
        .collect()
}

fn classify_stratum(
    m: &ExponentMatrix,
    support: &[usize],
    equations: &[Vec<Term>],
) -> (StratumOutcome, Option<SingularWitness>) {
    if let Some(j) = equations.iter().position(|e| e.len() == 1) {
        return (StratumOutcome::MonomialEquation { equation: j }, None);
    }
    if equations.iter().all(Vec::is_empty) {
        let point: Vec<Complex64> = (0..m.num_vars())
            .map(|i| {
                if support.contains(&i) {
                    Complex64::one()
                } else {
                    Complex64::zero()
                }
            })
            .collect();
        return (
            StratumOutcome::AllVanish,
            Some(witness_at(m, support, None, point)),
        );
    }
    if let Some(j) = equations.iter().position(|e| e.len() >= 3) {
        return (
            StratumOutcome::TooManyTerms {
                equation: j,
                terms: equations[j].len(),
            },
            None,
        );
    }

    let system = binomial_system(support, equations);
    for lambda in &system.kernel {
        let product = consistency_product(&system.constants, lambda);
        if !product.is_one() {
            return (
                StratumOutcome::InconsistentBinomials {
                    kernel_vector: lambda.clone(),
                    product,
                },
                None,
            );
        }
    }
    let point = torus_solution(m.num_vars(), &system);
    let witness = witness_at(m, support, Some(system), point);
    (StratumOutcome::ConsistentBinomials, Some(witness))
}

fn binomial_system(support: &[usize], equations: &[Vec<Term>]) -> BinomialSystem {
    let mut exponents = Vec::new();
    let mut constants = Vec::new();
    for eq in equations.iter().filter(|e| e.len() == 2) {
        // larger coefficient first, so |c| <= 1
        let (a, b) = if (eq[1].coeff, &eq[1].exponent) > (eq[0].coeff, &eq[0].exponent) {
            (&eq[1], &eq[0])
        } else {
            (&eq[0], &eq[1])
        };
        // a x^alpha + b x^beta = 0  <=>  x^(alpha - beta) = -b/a
        exponents.push(
            support
                .iter()
                .map(|&i| a.exponent[i] as i64 - b.exponent[i] as i64)
                .collect::<Vec<i64>>(),
        );
        constants.push(BigRational::new(
            BigInt::from(-(b.coeff as i64)),
            BigInt::from(a.coeff),
        ));
    }
    let kernel = left_kernel(&exponents);
    BinomialSystem {
        support: support.to_vec(),
        exponents,
        constants,
        kernel,
    }
}

/// Integer basis of `{lambda : lambda^T G = 0}`, first nonzero entry positive.
fn left_kernel(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let g = IntegerMatrix::from_rows(rows);
    let snf = smith_normal_form(&g);
    (snf.rank()..g.rows())
        .map(|i| {
            let mut v = snf.u.row(i).to_vec();
            if v.iter()
                .find(|x| !x.is_zero())
                .is_some_and(|x| x.is_negative())
            {
                v.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            v
        })
        .collect()
}

fn consistency_product(constants: &[BigRational], lambda: &[BigInt]) -> BigRational {
    constants
        .iter()
        .zip(lambda)
        .fold(BigRational::one(), |acc, (c, l)| {
            let e = l.to_i32().expect("kernel entries are small");
            acc * num_traits::pow::Pow::pow(c, e)
        })
}

/// A torus point solving a consistent binomial system: with `U G V = D`,
/// take logarithms and solve the diagonal system `D y = U log c`.
fn torus_solution(vars: usize, system: &BinomialSystem) -> Vec<Complex64> {
    let g = IntegerMatrix::from_rows(&system.exponents);
    let snf = smith_normal_form(&g);
    let logs: Vec<Complex64> = system
        .constants
        .iter()
        .map(|c| {
            let mag = c.abs().to_f64().unwrap().ln();
            let arg = if c.is_negative() {
                std::f64::consts::PI
            } else {
                0.0
            };
            Complex64::new(mag, arg)
        })
        .collect();
    let k = system.support.len();
    let mut y = vec![Complex64::zero(); k];
    for (i, f) in snf.invariant_factors().iter().enumerate() {
        let rhs: Complex64 = snf
            .u
            .row(i)
            .iter()
            .zip(&logs)
            .map(|(u, l)| l * u.to_f64().unwrap())
            .sum();
        y[i] = rhs / f.to_f64().unwrap();
    }
    let mut point = vec![Complex64::zero(); vars];
    for (s, &var) in system.support.iter().enumerate() {
        let z: Complex64 = (0..k).map(|t| y[t] * snf.v[(s, t)].to_f64().unwrap()).sum();
        point[var] = z.exp();
    }
    point
}

fn witness_at(
    m: &ExponentMatrix,
    support: &[usize],
    system: Option<BinomialSystem>,
    point: Vec<Complex64>,
) -> SingularWitness {
    let norm = point.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let point: Vec<Complex64> = point.iter().map(|z| z / norm).collect();
    let gradient_norm = m
        .gradient_at(&point)
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    SingularWitness {
        support: support.to_vec(),
        system,
        point: point.iter().map(|z| (z.re, z.im)).collect(),
        gradient_norm,
    }
}

fn rational_as_string<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn rationals_as_strings<S: Serializer>(qs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(|q| q.to_string()))
}

fn bigints_as_i64<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_i64().expect("small kernel entry")))
}

fn bigint_rows_as_i64<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| {
        r.iter()
            .map(|x| x.to_i64().expect("small kernel entry"))
            .collect::<Vec<i64>>()
    }))
}

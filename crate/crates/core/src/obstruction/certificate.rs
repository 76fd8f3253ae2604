use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{claims, Blocker, ObstructionTrace, RuleId, Step, TraceVerdict, ELLIPTIC_ORDER_BOUND};
use crate::error::{Error, Result};

pub const CLEMENS_GRIFFITHS_NOTE: &str = "a contradiction shows the intermediate Jacobian is not \
a product of Jacobians of curves; irrationality then follows from the Clemens-Griffiths criterion, \
which is assumed and not checked";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateInstance {
    #[serde(rename = "N")]
    pub dimension: i64,
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

/// Serialized trace. Field order is part of the format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub v: u32,
    pub instance: CertificateInstance,
    pub ruleset: Vec<RuleId>,
    pub steps: Vec<Step>,
    pub verdict: String,
    pub blockers: Vec<Blocker>,
    pub note: String,
}

impl Certificate {
    pub fn from_trace(t: &ObstructionTrace) -> Self {
        let g = t.instance.group;
        let (verdict, blockers) = match &t.verdict {
            TraceVerdict::Contradiction => ("contradiction", Vec::new()),
            TraceVerdict::Inconclusive(b) => ("inconclusive", b.clone()),
        };
        Certificate {
            v: 1,
            instance: CertificateInstance {
                dimension: t.instance.dimension as i64,
                p: g.p as i64,
                q: g.q as i64,
                r: g.signed_r(),
            },
            ruleset: t.ruleset.iter().copied().collect(),
            steps: t.steps.clone(),
            verdict: verdict.into(),
            blockers,
            note: CLEMENS_GRIFFITHS_NOTE.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn power_mod(base: i64, exp: i64, m: i64) -> i64 {
    (0..exp).fold(1 % m, |acc, _| acc * base.rem_euclid(m) % m)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Stage {
    Start,
    Block,
    SingleFactor,
    GenusAtLeastTwo,
    GenusBound,
    Invariant,
    Faithful,
    Closed,
}

/// Replays a certificate from scratch: every step must be licensed by the
/// ruleset, follow its predecessors, carry exactly the premises the instance
/// determines and state the claim those premises give.
pub fn verify_certificate(cert: &Certificate) -> Result<()> {
    if cert.v != 1 {
        return Err(reject(format!("unsupported version {}", cert.v)));
    }
    let CertificateInstance {
        dimension: n,
        p,
        q,
        r,
    } = cert.instance;
    if n < 1 {
        return Err(reject("N must be positive"));
    }
    if !prime(p) || !prime(q) {
        return Err(reject(format!("p = {p} and q = {q} must be prime")));
    }
    if power_mod(r, q, p) != 1 {
        return Err(reject(format!("{r}^{q} is not 1 mod {p}")));
    }
    let order = p * q;
    let odd = order % 2 == 1;
    let direct = r.rem_euclid(p) == 1;

    let mut stage = Stage::Start;
    let mut g_min = 0i64;
    for (i, step) in cert.steps.iter().enumerate() {
        if !cert.ruleset.contains(&step.rule) {
            return Err(reject(format!(
                "step {i}: {} is not in the ruleset",
                step.rule
            )));
        }
        let is_gap = step.premises.len() == 2
            && step.premises.contains_key("g_min")
            && step.premises.contains_key("N");
        let expected: (Vec<(&str, i64)>, String) = match (stage, step.rule, is_gap) {
            (Stage::Start, RuleId::R1, _) => {
                stage = Stage::Block;
                (vec![("p", p), ("faithful", 1)], claims::faithful_block(p))
            }
            (Stage::Block, RuleId::R2, _) if p > n => {
                stage = Stage::SingleFactor;
                (vec![("p", p), ("N", n)], claims::no_permutation(p, n))
            }
            (Stage::SingleFactor, RuleId::R3, _) if p > ELLIPTIC_ORDER_BOUND as i64 => {
                stage = Stage::GenusAtLeastTwo;
                g_min = 2;
                let b = ELLIPTIC_ORDER_BOUND as i64;
                (vec![("p", p), ("bound", b)], claims::elliptic(p, b))
            }
            (Stage::GenusAtLeastTwo, RuleId::R4, false) if odd => {
                stage = Stage::GenusBound;
                // smallest g >= 2 with p <= 4g + 2
                g_min = (2..).find(|g| p <= 4 * g + 2).unwrap();
                (
                    vec![("p", p), ("order", order), ("g_min", g_min)],
                    claims::wiman(p, g_min),
                )
            }
            (Stage::GenusAtLeastTwo, RuleId::R3, true) | (Stage::GenusBound, RuleId::R4, true)
                if g_min > n =>
            {
                stage = Stage::Closed;
                (vec![("g_min", g_min), ("N", n)], claims::gap(g_min, n))
            }
            (Stage::GenusAtLeastTwo | Stage::GenusBound, RuleId::R5, false) if q * g_min > n => {
                stage = Stage::Invariant;
                (
                    vec![("q", q), ("g_min", g_min), ("N", n)],
                    claims::orbit(q, g_min, n),
                )
            }
            (Stage::Invariant, RuleId::R6, _) if !direct => {
                stage = Stage::Faithful;
                (vec![("p", p), ("r", r)], claims::semidirect(p, r))
            }
            (Stage::Faithful, RuleId::R7, _) if odd && g_min >= 4 && order > 9 * (n - 1) => {
                stage = Stage::Closed;
                (
                    vec![("order", order), ("N", n), ("g_min", g_min)],
                    claims::schweizer(order, n),
                )
            }
            (Stage::Faithful, RuleId::R8, _) if g_min >= 2 && order > 84 * (n - 1) => {
                stage = Stage::Closed;
                (vec![("order", order), ("N", n)], claims::hurwitz(order, n))
            }
            _ => {
                return Err(reject(format!(
                    "step {i}: {} is not applicable here",
                    step.rule
                )))
            }
        };
        let premises: BTreeMap<String, i64> = expected
            .0
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        if step.premises != premises {
            return Err(reject(format!(
                "step {i}: premises {:?} differ from {:?}",
                step.premises, premises
            )));
        }
        if step.claim != expected.1 {
            return Err(reject(format!(
                "step {i}: claim `{}` should read `{}`",
                step.claim, expected.1
            )));
        }
    }

    match cert.verdict.as_str() {
        "contradiction" if stage == Stage::Closed && cert.blockers.is_empty() => Ok(()),
        "contradiction" => Err(reject("contradiction claimed without a closing step")),
        "inconclusive" if stage != Stage::Closed && !cert.blockers.is_empty() => Ok(()),
        "inconclusive" => Err(reject(
            "inconclusive verdict must list blockers and have no closing step",
        )),
        other => Err(reject(format!("unknown verdict `{other}`"))),
    }
}

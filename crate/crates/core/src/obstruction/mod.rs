//! Rule engine deciding whether a metacyclic group `Z/p x| Z/q` acting
//! faithfully on a principally polarized abelian variety of dimension `N`
//! rules out a splitting into a product of Jacobians of curves.
//!
//! Each applied rule appends a step whose arithmetic claim is a plain string
//! that [`verify_certificate`] recomputes from the recorded premises.

mod certificate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::delsarte::signed_residue;
use crate::error::{Error, Result};
use crate::exact::{is_prime, mod_pow};

pub use certificate::{
    verify_certificate, Certificate, CertificateInstance, CLEMENS_GRIFFITHS_NOTE,
};

/// Bound on the order of a polarized automorphism of an elliptic curve.
pub const ELLIPTIC_ORDER_BOUND: u64 = 6;

/// `Z/p x| Z/q` where the generator of `Z/q` acts on `Z/p` by `x -> r x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MetacyclicGroup {
    pub p: u64,
    pub q: u64,
    /// Residue in `0..p`.
    pub r: u64,
}

impl MetacyclicGroup {
    pub fn new(p: u64, q: u64, r: i64) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::InvalidGroup(format!(
                "p = {p} and q = {q} must be at least 2"
            )));
        }
        let g = MetacyclicGroup {
            p,
            q,
            r: r.rem_euclid(p as i64) as u64,
        };
        if mod_pow(g.r, q, p) != 1 % p {
            return Err(Error::InvalidGroup(format!(
                "r^q = {}^{q} is not 1 mod {p}",
                g.r
            )));
        }
        Ok(g)
    }

    pub fn order(&self) -> u64 {
        self.p * self.q
    }

    pub fn is_direct_product(&self) -> bool {
        self.r == 1
    }

    /// `r` as a residue in `(-p/2, p/2]`.
    pub fn signed_r(&self) -> i64 {
        signed_residue(self.r, self.p)
    }
}

impl fmt::Display for MetacyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{} x| Z/{} (r = {})", self.p, self.q, self.signed_r())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    PPrime,
    QPrime,
    Relation,
    Nontrivial,
    OddOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub holds: bool,
    pub detail: String,
}

pub fn check_preconditions(g: &MetacyclicGroup) -> Result<Vec<Finding>> {
    if g.p < 2 || mod_pow(g.r % g.p, g.q, g.p) != 1 {
        return Err(Error::InvalidGroup(format!(
            "r^q = {}^{} is not 1 mod {}",
            g.r, g.q, g.p
        )));
    }
    let finding = |kind, holds, detail: String| Finding {
        kind,
        holds,
        detail,
    };
    Ok(vec![
        finding(FindingKind::PPrime, is_prime(g.p), format!("p = {}", g.p)),
        finding(FindingKind::QPrime, is_prime(g.q), format!("q = {}", g.q)),
        finding(
            FindingKind::Relation,
            true,
            format!("{}^{} = 1 mod {}", g.r, g.q, g.p),
        ),
        finding(
            FindingKind::Nontrivial,
            !g.is_direct_product(),
            if g.is_direct_product() {
                "r = 1: direct product".to_string()
            } else {
                format!("r = {} != 1 mod {}", g.signed_r(), g.p)
            },
        ),
        finding(
            FindingKind::OddOrder,
            g.order() % 2 == 1,
            format!("|G| = {}", g.order()),
        ),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemInstance {
    /// Dimension of the principally polarized abelian variety.
    pub dimension: u64,
    pub group: MetacyclicGroup,
    /// Whether the group is assumed to act faithfully.
    pub faithful: bool,
}

impl ProblemInstance {
    pub fn new(dimension: u64, group: MetacyclicGroup) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInstance(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(ProblemInstance {
            dimension,
            group,
            faithful: true,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "faithful-block",
            RuleId::R2 => "no-permutation",
            RuleId::R3 => "elliptic-exclusion",
            RuleId::R4 => "wiman",
            RuleId::R5 => "orbit",
            RuleId::R6 => "semidirect-faithful",
            RuleId::R7 => "schweizer",
            RuleId::R8 => "hurwitz",
        }
    }

    fn index(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.index())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t.strip_prefix(['R', 'r']).unwrap_or("");
        match digits.parse::<usize>() {
            Ok(k @ 1..=8) => Ok(RuleId::ALL[k - 1]),
            _ => RuleId::ALL
                .into_iter()
                .find(|r| r.name() == t)
                .ok_or_else(|| Error::UnknownRule(t.to_string())),
        }
    }
}

pub type Ruleset = BTreeSet<RuleId>;

pub fn all_rules() -> Ruleset {
    RuleId::ALL.into_iter().collect()
}

/// Parses `R1-R7`, `R1,R2,R8`, a mix of both, or `all`.
pub fn parse_ruleset(s: &str) -> Result<Ruleset> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(all_rules());
    }
    let mut set = Ruleset::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) if a.trim().starts_with(['R', 'r']) => {
                let (a, b): (RuleId, RuleId) = (a.parse()?, b.parse()?);
                set.extend(RuleId::ALL.into_iter().filter(|r| (a..=b).contains(r)));
            }
            _ => {
                set.insert(part.parse()?);
            }
        }
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: RuleId,
    pub premises: BTreeMap<String, i64>,
    pub claim: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocker {
    pub rule: RuleId,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TraceVerdict {
    Contradiction,
    Inconclusive(Vec<Blocker>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionTrace {
    pub instance: ProblemInstance,
    pub ruleset: Ruleset,
    pub steps: Vec<Step>,
    pub verdict: TraceVerdict,
}

impl ObstructionTrace {
    pub fn is_contradiction(&self) -> bool {
        self.verdict == TraceVerdict::Contradiction
    }

    pub fn blockers(&self) -> &[Blocker] {
        match &self.verdict {
            TraceVerdict::Contradiction => &[],
            TraceVerdict::Inconclusive(b) => b,
        }
    }

    /// Smallest genus the faithful factor can have, if the trace got that far.
    pub fn genus_lower_bound(&self) -> Option<u64> {
        self.steps
            .iter()
            .rev()
            .find_map(|s| s.premises.get("g_min").map(|&g| g as u64))
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::from_trace(self)
    }
}

/// `ceil((p - 2) / 4)`, the genus forced by an odd-order automorphism of order `p`.
pub fn wiman_genus(p: u64) -> u64 {
    p.saturating_sub(2).div_ceil(4)
}

/// Claim texts shared by the engine and the verifier.
pub(crate) mod claims {
    pub fn faithful_block(p: i64) -> String {
        format!("Z/{p} acts faithfully on some isotypic block A_i^n_i")
    }

    pub fn no_permutation(p: i64, n: i64) -> String {
        format!("{p} > {n} = N >= n_i, so Z/{p} fixes each factor and acts faithfully on one, B")
    }

    pub fn elliptic(p: i64, bound: i64) -> String {
        format!("{p} > {bound}, so g >= 2")
    }

    pub fn wiman(p: i64, g_min: i64) -> String {
        format!("{p} <= 4*g+2, so g >= {g_min}")
    }

    pub fn gap(g_min: i64, n: i64) -> String {
        format!("g >= {g_min} > {n} = N >= g")
    }

    pub fn orbit(q: i64, g_min: i64, n: i64) -> String {
        format!(
            "{q}*{g_min} = {} > {n} = N, so the Z/{q}-orbit of B is trivial and B is G-invariant",
            q * g_min
        )
    }

    pub fn semidirect(p: i64, r: i64) -> String {
        format!("r = {r} != 1 mod {p}, so G acts faithfully on B")
    }

    pub fn schweizer(order: i64, n: i64) -> String {
        format!("{order} > {} = 9*({n}-1) >= 9*(g-1)", 9 * (n - 1))
    }

    pub fn hurwitz(order: i64, n: i64) -> String {
        format!("{order} > {} = 84*({n}-1) >= 84*(g-1)", 84 * (n - 1))
    }
}

fn premises(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

struct Engine<'a> {
    rules: &'a Ruleset,
    steps: Vec<Step>,
    blockers: Vec<Blocker>,
}

impl Engine<'_> {
    fn step(&mut self, rule: RuleId, pairs: &[(&str, i64)], claim: String) {
        self.steps.push(Step {
            rule,
            premises: premises(pairs),
            claim,
        });
    }

    fn block(&mut self, rule: RuleId, reason: impl Into<String>) {
        self.blockers.push(Blocker {
            rule,
            reason: reason.into(),
        });
    }

    /// `Some(reason)` when the rule is not in the ruleset.
    fn missing(&self, rule: RuleId) -> Option<String> {
        (!self.rules.contains(&rule)).then(|| format!("{rule} not in ruleset"))
    }
}

pub fn obstruct(inst: &ProblemInstance, ruleset: &Ruleset) -> Result<ObstructionTrace> {
    let g = inst.group;
    let findings = check_preconditions(&g)?;
    if let Some(f) = findings
        .iter()
        .find(|f| matches!(f.kind, FindingKind::PPrime | FindingKind::QPrime) && !f.holds)
    {
        return Err(Error::InvalidGroup(format!("{} is not prime", f.detail)));
    }
    if inst.dimension == 0 {
        return Err(Error::InvalidInstance(
            "dimension must be at least 1".into(),
        ));
    }

    let mut e = Engine {
        rules: ruleset,
        steps: Vec::new(),
        blockers: Vec::new(),
    };
    let contradiction = run(&mut e, inst);
    let verdict = if contradiction {
        TraceVerdict::Contradiction
    } else {
        TraceVerdict::Inconclusive(e.blockers)
    };
    Ok(ObstructionTrace {
        instance: inst.clone(),
        ruleset: ruleset.clone(),
        steps: e.steps,
        verdict,
    })
}

fn run(e: &mut Engine, inst: &ProblemInstance) -> bool {
    let g = inst.group;
    let (p, q, n) = (g.p as i64, g.q as i64, inst.dimension as i64);
    let order = p * q;
    let odd = order % 2 == 1;

    if let Some(why) = e.missing(RuleId::R1) {
        e.block(RuleId::R1, why);
        return false;
    }
    if !inst.faithful {
        e.block(RuleId::R1, "faithful action not assumed");
        return false;
    }
    e.step(
        RuleId::R1,
        &[("p", p), ("faithful", 1)],
        claims::faithful_block(p),
    );

    if let Some(why) = e.missing(RuleId::R2) {
        e.block(RuleId::R2, why);
        return false;
    }
    if p <= n {
        e.block(
            RuleId::R2,
            format!("{p} <= {n} = N: Z/{p} may permute factors"),
        );
        return false;
    }
    e.step(
        RuleId::R2,
        &[("p", p), ("N", n)],
        claims::no_permutation(p, n),
    );

    let bound = ELLIPTIC_ORDER_BOUND as i64;
    if let Some(why) = e.missing(RuleId::R3) {
        e.block(RuleId::R3, why);
        return false;
    }
    if p <= bound {
        e.block(
            RuleId::R3,
            format!("{p} <= {bound}: B may be an elliptic curve"),
        );
        return false;
    }
    e.step(
        RuleId::R3,
        &[("p", p), ("bound", bound)],
        claims::elliptic(p, bound),
    );

    let mut g_min = 2i64;
    let mut genus_rule = RuleId::R3;
    match e.missing(RuleId::R4) {
        Some(why) => e.block(RuleId::R4, why),
        None if !odd => e.block(RuleId::R4, format!("|G| = {order} is even")),
        None => {
            g_min = g_min.max(wiman_genus(g.p) as i64);
            genus_rule = RuleId::R4;
            e.step(
                RuleId::R4,
                &[("p", p), ("order", order), ("g_min", g_min)],
                claims::wiman(p, g_min),
            );
        }
    }
    if g_min > n {
        e.step(
            genus_rule,
            &[("g_min", g_min), ("N", n)],
            claims::gap(g_min, n),
        );
        return true;
    }

    if let Some(why) = e.missing(RuleId::R5) {
        e.block(RuleId::R5, why);
        return false;
    }
    if q * g_min <= n {
        e.block(
            RuleId::R5,
            format!(
                "{q}*{g_min} = {} <= {n} = N: the orbit of B may have {q} elements",
                q * g_min
            ),
        );
        return false;
    }
    e.step(
        RuleId::R5,
        &[("q", q), ("g_min", g_min), ("N", n)],
        claims::orbit(q, g_min, n),
    );

    let r = g.signed_r();
    if let Some(why) = e.missing(RuleId::R6) {
        e.block(RuleId::R6, why);
        return false;
    }
    if g.is_direct_product() {
        e.block(
            RuleId::R6,
            "r = 1: direct product, Z/q may act trivially on B",
        );
        return false;
    }
    e.step(RuleId::R6, &[("p", p), ("r", r)], claims::semidirect(p, r));

    match e.missing(RuleId::R7) {
        Some(why) => e.block(RuleId::R7, why),
        None if !odd => e.block(RuleId::R7, format!("|G| = {order} is even")),
        None if g_min < 4 => e.block(
            RuleId::R7,
            format!("g >= {g_min} only; the bound needs g >= 4"),
        ),
        None if order <= 9 * (n - 1) => e.block(
            RuleId::R7,
            format!("{order} <= {} = 9*({n}-1)", 9 * (n - 1)),
        ),
        None => {
            e.step(
                RuleId::R7,
                &[("order", order), ("N", n), ("g_min", g_min)],
                claims::schweizer(order, n),
            );
            return true;
        }
    }

    match e.missing(RuleId::R8) {
        Some(why) => e.block(RuleId::R8, why),
        None if order <= 84 * (n - 1) => e.block(
            RuleId::R8,
            format!("{order} <= {} = 84*({n}-1)", 84 * (n - 1)),
        ),
        None => {
            e.step(
                RuleId::R8,
                &[("order", order), ("N", n)],
                claims::hurwitz(order, n),
            );
            return true;
        }
    }
    false
}

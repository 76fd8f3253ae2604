//! Decides whether a small finite group acts faithfully on a compact Riemann
//! surface of a given genus, by enumerating Riemann-Hurwitz signatures and
//! searching for generating vectors.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::exact::mod_pow;
use crate::obstruction::MetacyclicGroup;

/// Default upper bound on the genus for signature enumeration.
pub const DEFAULT_GENUS_CAP: u64 = 101;

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    label: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u32>,
    generators: Vec<usize>,
    /// Smallest element in the orbit of each element under `Aut(G)`.
    aut_orbit_min: Vec<u32>,
    automorphisms: usize,
}

impl GroupTable {
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1, "cyclic group needs positive order");
        Self::from_fn(format!("Z/{m}"), m, |a, b| (a + b) % m)
    }

    /// `Z/p x| Z/q` with elements `(i, j) -> i + p j` and
    /// `(i, j)(i', j') = (i + r^j i', j + j')`.
    pub fn metacyclic(g: &MetacyclicGroup) -> Self {
        let (p, q) = (g.p as usize, g.q as usize);
        let powers: Vec<usize> = (0..q)
            .map(|j| mod_pow(g.r, j as u64, g.p) as usize)
            .collect();
        let label = if g.is_direct_product() {
            format!("Z/{p} x Z/{q}")
        } else {
            format!("Z/{p} x| Z/{q} (r = {})", g.signed_r())
        };
        Self::from_fn(label, p * q, |x, y| {
            let (i, j) = (x % p, x / p);
            let (k, l) = (y % p, y / p);
            (i + powers[j] * k) % p + p * ((j + l) % q)
        })
    }

    fn from_fn(label: String, order: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = f(a, b) as u32;
            }
        }
        let mut g = GroupTable {
            label,
            order,
            mul,
            inv: Vec::new(),
            orders: Vec::new(),
            generators: Vec::new(),
            aut_orbit_min: Vec::new(),
            automorphisms: 0,
        };
        g.inv = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| g.mul(a, b) == 0)
                    .expect("inverse exists") as u32
            })
            .collect();
        g.orders = (0..order).map(|a| g.power_order(a)).collect();
        g.generators = g.greedy_generators();
        g.compute_automorphisms();
        g
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    /// Distinct element orders greater than one, ascending.
    pub fn nontrivial_orders(&self) -> Vec<u32> {
        let mut o: Vec<u32> = self.orders.iter().copied().filter(|&k| k > 1).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        self.mul(self.mul(ab, self.inv(a)), self.inv(b))
    }

    pub fn automorphism_count(&self) -> usize {
        self.automorphisms
    }

    pub fn is_associative(&self) -> bool {
        (0..self.order).all(|a| {
            (0..self.order).all(|b| {
                (0..self.order).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    fn power_order(&self, a: usize) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Bitset of the subgroup generated by `gens`.
    fn closure(&self, gens: &[usize]) -> Vec<u64> {
        let mut bits = vec![0u64; self.order.div_ceil(64)];
        let mut queue = VecDeque::from([0usize]);
        bits[0] |= 1;
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if bits[y / 64] >> (y % 64) & 1 == 0 {
                    bits[y / 64] |= 1 << (y % 64);
                    queue.push_back(y);
                }
            }
        }
        bits
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (1..self.order).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.orders[a]), a));
        let mut gens = Vec::new();
        let mut current = self.closure(&gens);
        for a in by_order {
            if popcount(&current) == self.order {
                break;
            }
            if current[a / 64] >> (a % 64) & 1 == 0 {
                gens.push(a);
                current = self.closure(&gens);
            }
        }
        gens
    }

    /// Extends generator images to a map on all of `G`, returning it if it
    /// is a well-defined bijective homomorphism.
    fn extend_to_automorphism(&self, images: &[usize]) -> Option<Vec<u32>> {
        let mut map = vec![u32::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&s, &t) in self.generators.iter().zip(images) {
                let y = self.mul(x, s);
                let fy = self.mul(map[x] as usize, t) as u32;
                if map[y] == u32::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut seen = vec![false; self.order];
        for &v in &map {
            if std::mem::replace(&mut seen[v as usize], true) {
                return None;
            }
        }
        Some(map)
    }

    fn compute_automorphisms(&mut self) {
        let candidates: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|&s| {
                (0..self.order)
                    .filter(|&x| self.orders[x] == self.orders[s])
                    .collect()
            })
            .collect();
        let mut orbit_min: Vec<u32> = (0..self.order as u32).collect();
        let mut count = 0;
        let mut choice = vec![0usize; candidates.len()];
        loop {
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.extend_to_automorphism(&images) {
                count += 1;
                for (x, &y) in map.iter().enumerate() {
                    orbit_min[y as usize] = orbit_min[y as usize].min(x as u32);
                }
            }
            let Some(k) = (0..choice.len())
                .rev()
                .find(|&k| choice[k] + 1 < candidates[k].len())
            else {
                break;
            };
            choice[k] += 1;
            choice[k + 1..].iter_mut().for_each(|c| *c = 0);
        }
        self.aut_orbit_min = orbit_min;
        self.automorphisms = count;
    }

    fn is_orbit_representative(&self, a: usize) -> bool {
        self.aut_orbit_min[a] as usize == a
    }
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// Quotient genus `h` and branch periods of a group action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    pub quotient_genus: u32,
    pub periods: Vec<u32>,
}

impl Signature {
    pub fn new(quotient_genus: u32, periods: Vec<u32>) -> Self {
        Signature {
            quotient_genus,
            periods,
        }
    }

    /// Genus of the cover from Riemann-Hurwitz, if it is a whole number.
    pub fn cover_genus(&self, group_order: u64) -> Option<i64> {
        let n = group_order as i64;
        let mut twice_minus_two = n * (2 * self.quotient_genus as i64 - 2);
        for &m in &self.periods {
            if n % m as i64 != 0 {
                return None;
            }
            twice_minus_two += n - n / m as i64;
        }
        (twice_minus_two % 2 == 0).then_some(twice_minus_two / 2 + 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let periods: Vec<String> = self.periods.iter().map(u32::to_string).collect();
        write!(f, "({}; {})", self.quotient_genus, periods.join(", "))
    }
}

/// `a_1, b_1, ..., a_h, b_h, c_1, ..., c_k` as element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingVector {
    pub hyperbolic: Vec<(usize, usize)>,
    pub elliptic: Vec<usize>,
}

impl GeneratingVector {
    /// Checks the defining relation, the periods and generation.
    pub fn is_valid_for(&self, g: &GroupTable, sig: &Signature) -> bool {
        if self.hyperbolic.len() != sig.quotient_genus as usize
            || self.elliptic.len() != sig.periods.len()
        {
            return false;
        }
        let mut product = 0;
        let mut all = Vec::new();
        for &(a, b) in &self.hyperbolic {
            product = g.mul(product, g.commutator(a, b));
            all.extend([a, b]);
        }
        for (&c, &m) in self.elliptic.iter().zip(&sig.periods) {
            if g.element_order(c) != m {
                return false;
            }
            product = g.mul(product, c);
            all.push(c);
        }
        product == 0 && popcount(&g.closure(&all)) == g.order()
    }
}

/// All signatures whose cover has genus in `2..=gmax`, sorted by
/// `(g, h, periods)` with periods ascending.
pub fn signatures_for_genus_range(g: &GroupTable, gmax: u64) -> Vec<(u64, Signature)> {
    let n = g.order() as i64;
    let limit = 2 * gmax as i64 - 2;
    let orders = g.nontrivial_orders();
    let mut out = Vec::new();
    if n == 1 {
        return out;
    }
    let mut h = 0u32;
    while n * (2 * h as i64 - 2) <= limit {
        let base = n * (2 * h as i64 - 2);
        let mut periods = Vec::new();
        collect_periods(
            n,
            &orders,
            0,
            base,
            limit,
            &mut periods,
            &mut |total, ps| {
                if total >= 2 && total % 2 == 0 {
                    out.push(((total / 2 + 1) as u64, Signature::new(h, ps.to_vec())));
                }
            },
        );
        h += 1;
    }
    out.sort();
    out
}

fn collect_periods(
    n: i64,
    orders: &[u32],
    start: usize,
    total: i64,
    limit: i64,
    periods: &mut Vec<u32>,
    emit: &mut impl FnMut(i64, &[u32]),
) {
    emit(total, periods);
    for (i, &m) in orders.iter().enumerate().skip(start) {
        let next = total + n - n / m as i64;
        // every further period adds at least n/2
        if next > limit {
            continue;
        }
        periods.push(m);
        collect_periods(n, orders, i, next, limit, periods, emit);
        periods.pop();
    }
}

struct VectorSearch<'a> {
    g: &'a GroupTable,
    sig: &'a Signature,
    /// Candidate elements for each elliptic slot.
    by_period: Vec<Vec<usize>>,
    /// `reach[s][x]`: the slots from `s` on can multiply to `x`.
    reach: Vec<Vec<bool>>,
    subgroups: HashMap<Vec<u64>, u32>,
    subgroup_gens: Vec<Vec<usize>>,
    joins: HashMap<(u32, usize), u32>,
    full: u32,
    dead: HashSet<(u32, u32, u32)>,
}

impl<'a> VectorSearch<'a> {
    fn new(g: &'a GroupTable, sig: &'a Signature) -> Self {
        let h = sig.quotient_genus as usize;
        let slots = h + sig.periods.len();
        let by_period: Vec<Vec<usize>> = sig
            .periods
            .iter()
            .map(|&m| {
                (0..g.order())
                    .filter(|&x| g.element_order(x) == m)
                    .collect()
            })
            .collect();
        let commutators: Vec<usize> = {
            let mut seen = vec![false; g.order()];
            for a in 0..g.order() {
                for b in 0..g.order() {
                    seen[g.commutator(a, b)] = true;
                }
            }
            (0..g.order()).filter(|&x| seen[x]).collect()
        };
        let mut reach = vec![vec![false; g.order()]; slots + 1];
        reach[slots][0] = true;
        for s in (0..slots).rev() {
            let choices = if s < h {
                &commutators
            } else {
                &by_period[s - h]
            };
            let (head, tail) = reach.split_at_mut(s + 1);
            for &x in choices {
                for y in (0..g.order()).filter(|&y| tail[0][y]) {
                    head[s][g.mul(x, y)] = true;
                }
            }
        }
        let mut search = VectorSearch {
            g,
            sig,
            by_period,
            reach,
            subgroups: HashMap::new(),
            subgroup_gens: Vec::new(),
            joins: HashMap::new(),
            full: 0,
            dead: HashSet::new(),
        };
        search.intern(Vec::new());
        search.full = search.intern((0..g.order()).collect());
        search
    }

    fn intern(&mut self, gens: Vec<usize>) -> u32 {
        let bits = self.g.closure(&gens);
        let next = self.subgroup_gens.len() as u32;
        let id = *self.subgroups.entry(bits).or_insert(next);
        if id == next {
            self.subgroup_gens.push(gens);
        }
        id
    }

    fn join(&mut self, sub: u32, x: usize) -> u32 {
        if let Some(&id) = self.joins.get(&(sub, x)) {
            return id;
        }
        let mut gens = self.subgroup_gens[sub as usize].clone();
        gens.push(x);
        let id = self.intern(gens);
        self.joins.insert((sub, x), id);
        id
    }

    fn run(&mut self) -> Option<GeneratingVector> {
        let mut chosen = Vec::new();
        if !self.dfs(0, 0, 0, &mut chosen) {
            return None;
        }
        let h = self.sig.quotient_genus as usize;
        let mut it = chosen.into_iter();
        let hyperbolic = (0..h)
            .map(|_| (it.next().unwrap(), it.next().unwrap()))
            .collect();
        Some(GeneratingVector {
            hyperbolic,
            elliptic: it.collect(),
        })
    }

    fn dfs(&mut self, slot: usize, product: usize, sub: u32, chosen: &mut Vec<usize>) -> bool {
        let g = self.g;
        let h = self.sig.quotient_genus as usize;
        let slots = h + self.sig.periods.len();
        if slot == slots {
            return product == 0 && sub == self.full;
        }
        if !self.reach[slot][g.inv(product)] {
            return false;
        }
        let key = (slot as u32, product as u32, sub);
        if self.dead.contains(&key) {
            return false;
        }
        let first = |x: usize| slot > 0 || g.is_orbit_representative(x);
        if slot < h {
            for a in (0..g.order()).filter(|&a| first(a)) {
                let with_a = self.join(sub, a);
                for b in 0..g.order() {
                    let next = g.mul(product, g.commutator(a, b));
                    let with_b = self.join(with_a, b);
                    chosen.extend([a, b]);
                    if self.dfs(slot + 1, next, with_b, chosen) {
                        return true;
                    }
                    chosen.truncate(chosen.len() - 2);
                }
            }
        } else {
            for i in 0..self.by_period[slot - h].len() {
                let c = self.by_period[slot - h][i];
                if !first(c) {
                    continue;
                }
                let next = g.mul(product, c);
                let with_c = self.join(sub, c);
                chosen.push(c);
                if self.dfs(slot + 1, next, with_c, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        self.dead.insert(key);
        false
    }
}

pub fn find_generating_vector(g: &GroupTable, sig: &Signature) -> Option<GeneratingVector> {
    if sig.periods.iter().any(|&m| m < 2) {
        return None;
    }
    let v = VectorSearch::new(g, sig).run();
    debug_assert!(v.as_ref().is_none_or(|v| v.is_valid_for(g, sig)));
    v
}

pub fn has_generating_vector(g: &GroupTable, sig: &Signature) -> bool {
    find_generating_vector(g, sig).is_some()
}

/// An action witness: a signature together with its generating vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionWitness {
    pub signature: Signature,
    pub vector: GeneratingVector,
}

/// First signature (in sorted order) for genus `genus` admitting a generating vector.
pub fn find_action(g: &GroupTable, genus: u64) -> Option<ActionWitness> {
    let sigs: Vec<Signature> = signatures_for_genus_range(g, genus)
        .into_iter()
        .filter(|(gg, _)| *gg == genus)
        .map(|(_, s)| s)
        .collect();
    sigs.par_iter()
        .map(|s| {
            find_generating_vector(g, s).map(|vector| ActionWitness {
                signature: s.clone(),
                vector,
            })
        })
        .find_first(|w| w.is_some())
        .flatten()
}

pub fn exists_action(g: &GroupTable, genus: u64) -> bool {
    assert!(genus >= 2, "genus must be at least 2");
    find_action(g, genus).is_some()
}

/// Per-genus existence over `gmin..=gmax`.
pub fn action_table(g: &GroupTable, gmin: u64, gmax: u64) -> Vec<(u64, Option<ActionWitness>)> {
    (gmin.max(2)..=gmax)
        .into_par_iter()
        .map(|genus| (genus, find_action(g, genus)))
        .collect()
}

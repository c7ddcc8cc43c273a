//! Exact counting over linear extensions by dynamic programming on the
//! lattice of order ideals.
//!
//! A linear extension is a maximal chain `∅ = I_0 ⋖ I_1 ⋖ … ⋖ I_n = P` in
//! the ideal lattice, so with `down(I)` the number of paths `∅ → I` and
//! `up(I)` the number of paths `I → P`, an edge `I → I ∪ {x}` is used by
//! exactly `down(I) · up(I ∪ {x})` extensions, all of which place `x` at
//! position `|I| + 1`. Every marginal and precedence probability below is a
//! sum of such edge weights divided by `|E(P)|`.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::{AddAssign, Mul};

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::ratio::{from_int, ratio};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// Ideal encodings: a bitmask while `n <= 64`, otherwise the sorted antichain
/// of maximal elements.
trait IdealKey: Clone + Eq + Hash {
    fn empty() -> Self;
    fn contains(&self, ctx: &Ctx, x: usize) -> bool;
    fn insert(&self, ctx: &Ctx, x: usize) -> Self;
    fn addable(&self, ctx: &Ctx, x: usize) -> bool;
}

struct Ctx<'a> {
    poset: &'a Poset,
    pred_mask: Vec<u64>,
    lower_covers: Vec<Vec<usize>>,
}

impl IdealKey for u64 {
    fn empty() -> Self {
        0
    }
    fn contains(&self, _: &Ctx, x: usize) -> bool {
        self >> x & 1 == 1
    }
    fn insert(&self, _: &Ctx, x: usize) -> Self {
        self | 1 << x
    }
    fn addable(&self, ctx: &Ctx, x: usize) -> bool {
        self >> x & 1 == 0 && ctx.pred_mask[x] & !self == 0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Frontier(Box<[u32]>);

impl IdealKey for Frontier {
    fn empty() -> Self {
        Frontier(Box::new([]))
    }
    fn contains(&self, ctx: &Ctx, x: usize) -> bool {
        self.0
            .iter()
            .any(|&m| m as usize == x || ctx.poset.lt(x, m as usize))
    }
    fn insert(&self, ctx: &Ctx, x: usize) -> Self {
        let mut v: Vec<u32> = self
            .0
            .iter()
            .copied()
            .filter(|&m| !ctx.poset.lt(m as usize, x))
            .collect();
        v.push(x as u32);
        v.sort_unstable();
        Frontier(v.into_boxed_slice())
    }
    fn addable(&self, ctx: &Ctx, x: usize) -> bool {
        !self.contains(ctx, x) && ctx.lower_covers[x].iter().all(|&c| self.contains(ctx, c))
    }
}

enum Nodes {
    Mask(Vec<u64>),
    Frontier(Vec<Frontier>),
}

/// The lattice of order ideals of a poset with path counts in both
/// directions. Immutable once built.
pub struct DownsetLattice {
    poset: Poset,
    nodes: Nodes,
    level_start: Vec<usize>,
    edge_start: Vec<usize>,
    edge_elem: Vec<u32>,
    edge_child: Vec<u32>,
    down: Vec<BigUint>,
    up: Vec<BigUint>,
    budget: usize,
}

impl std::fmt::Debug for DownsetLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DownsetLattice")
            .field("elements", &self.poset.len())
            .field("nodes", &self.node_count())
            .field("extensions", self.extension_count())
            .finish()
    }
}

struct Skeleton<K> {
    keys: Vec<K>,
    level_start: Vec<usize>,
    edge_start: Vec<usize>,
    edge_elem: Vec<u32>,
    edge_child: Vec<u32>,
}

fn enumerate<K: IdealKey>(ctx: &Ctx, budget: usize) -> Result<Skeleton<K>> {
    let n = ctx.poset.len();
    let mut keys = vec![K::empty()];
    let mut level_start = vec![0, 1];
    let mut edge_start = vec![0];
    let mut edge_elem = Vec::new();
    let mut edge_child = Vec::new();
    for _ in 0..n {
        let (lo, hi) = (level_start[level_start.len() - 2], level_start[level_start.len() - 1]);
        let mut next: HashMap<K, u32> = HashMap::new();
        let mut next_keys: Vec<K> = Vec::new();
        for id in lo..hi {
            for x in 0..n {
                if !keys[id].addable(ctx, x) {
                    continue;
                }
                let child = keys[id].insert(ctx, x);
                let local = match next.get(&child) {
                    Some(&l) => l,
                    None => {
                        let l = next_keys.len() as u32;
                        next.insert(child.clone(), l);
                        next_keys.push(child);
                        if hi + next_keys.len() > budget {
                            return Err(Error::BudgetExceeded {
                                budget,
                                reached: hi + next_keys.len(),
                            });
                        }
                        l
                    }
                };
                edge_elem.push(x as u32);
                edge_child.push(hi as u32 + local);
            }
            edge_start.push(edge_elem.len());
        }
        keys.extend(next_keys);
        level_start.push(keys.len());
    }
    // The top ideal has no outgoing edges.
    edge_start.push(edge_elem.len());
    Ok(Skeleton {
        keys,
        level_start,
        edge_start,
        edge_elem,
        edge_child,
    })
}

impl DownsetLattice {
    pub fn build(p: &Poset) -> Result<Self> {
        Self::build_with_budget(p, DEFAULT_NODE_BUDGET)
    }

    pub fn build_with_budget(p: &Poset, budget: usize) -> Result<Self> {
        let n = p.len();
        let ctx = Ctx {
            poset: p,
            pred_mask: (0..n)
                .map(|x| {
                    if n <= 64 {
                        p.down_set(x).iter().fold(0u64, |m, &y| m | 1 << y)
                    } else {
                        0
                    }
                })
                .collect(),
            lower_covers: (0..n).map(|x| p.lower_covers(x).collect()).collect(),
        };
        let (nodes, sk_level, sk_es, sk_ee, sk_ec) = if n <= 64 {
            let sk = enumerate::<u64>(&ctx, budget)?;
            (
                Nodes::Mask(sk.keys),
                sk.level_start,
                sk.edge_start,
                sk.edge_elem,
                sk.edge_child,
            )
        } else {
            let sk = enumerate::<Frontier>(&ctx, budget)?;
            (
                Nodes::Frontier(sk.keys),
                sk.level_start,
                sk.edge_start,
                sk.edge_elem,
                sk.edge_child,
            )
        };
        let count = sk_level[n + 1];
        let mut lat = DownsetLattice {
            poset: p.clone(),
            nodes,
            level_start: sk_level,
            edge_start: sk_es,
            edge_elem: sk_ee,
            edge_child: sk_ec,
            down: vec![BigUint::zero(); count],
            up: vec![BigUint::zero(); count],
            budget,
        };
        lat.down[0] = BigUint::from(1u32);
        for id in 0..count {
            let d = lat.down[id].clone();
            for e in lat.edge_start[id]..lat.edge_start[id + 1] {
                lat.down[lat.edge_child[e] as usize] += &d;
            }
        }
        lat.up[count - 1] = BigUint::from(1u32);
        for id in (0..count - 1).rev() {
            let mut s = BigUint::zero();
            for e in lat.edge_start[id]..lat.edge_start[id + 1] {
                s += &lat.up[lat.edge_child[e] as usize];
            }
            lat.up[id] = s;
        }
        Ok(lat)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn node_count(&self) -> usize {
        self.down.len()
    }

    /// `|E(P)|`.
    pub fn extension_count(&self) -> &BigUint {
        &self.up[0]
    }

    pub fn down_count(&self, node: usize) -> &BigUint {
        &self.down[node]
    }

    pub fn up_count(&self, node: usize) -> &BigUint {
        &self.up[node]
    }

    /// Nodes whose ideal has exactly `k` elements.
    pub fn level(&self, k: usize) -> std::ops::Range<usize> {
        self.level_start[k]..self.level_start[k + 1]
    }

    pub fn top(&self) -> usize {
        self.node_count() - 1
    }

    pub fn contains(&self, node: usize, x: usize) -> bool {
        match &self.nodes {
            Nodes::Mask(v) => v[node] >> x & 1 == 1,
            Nodes::Frontier(v) => v[node]
                .0
                .iter()
                .any(|&m| m as usize == x || self.poset.lt(x, m as usize)),
        }
    }

    pub fn ideal(&self, node: usize) -> Vec<usize> {
        (0..self.poset.len()).filter(|&x| self.contains(node, x)).collect()
    }

    /// Outgoing edges `(x, child)` of a node.
    pub fn edges(&self, node: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.edge_start[node]..self.edge_start[node + 1])
            .map(|e| (self.edge_elem[e] as usize, self.edge_child[e] as usize))
    }

    fn fits_u128(&self) -> bool {
        self.extension_count().bits() < 127
    }

    /// `counts[x][k-1]` = number of extensions with `f(x) = k`.
    pub fn position_counts(&self) -> Vec<Vec<BigUint>> {
        if self.fits_u128() {
            let (d, u) = self.small_counts();
            widen(self.position_counts_in(&d, &u))
        } else {
            self.position_counts_in(&self.down, &self.up)
        }
    }

    fn position_counts_in<T>(&self, down: &[T], up: &[T]) -> Vec<Vec<T>>
    where
        T: Clone + Zero + for<'a> AddAssign<&'a T>,
        for<'a> &'a T: Mul<&'a T, Output = T>,
    {
        let n = self.poset.len();
        let mut out = vec![vec![T::zero(); n]; n];
        for k in 0..n {
            for id in self.level(k) {
                for (x, child) in self.edges(id) {
                    out[x][k] += &(&down[id] * &up[child]);
                }
            }
        }
        out
    }

    /// `counts[x][y]` = number of extensions with `x` before `y`.
    pub fn precedence_counts(&self) -> Vec<Vec<BigUint>> {
        if self.fits_u128() {
            let (d, u) = self.small_counts();
            widen(self.precedence_counts_in(&d, &u))
        } else {
            self.precedence_counts_in(&self.down, &self.up)
        }
    }

    fn precedence_counts_in<T>(&self, down: &[T], up: &[T]) -> Vec<Vec<T>>
    where
        T: Clone + Zero + for<'a> AddAssign<&'a T>,
        for<'a> &'a T: Mul<&'a T, Output = T>,
    {
        let n = self.poset.len();
        let mut out = vec![vec![T::zero(); n]; n];
        let mut absent = Vec::with_capacity(n);
        for id in 0..self.node_count() {
            absent.clear();
            absent.extend((0..n).filter(|&y| !self.contains(id, y)));
            for (x, child) in self.edges(id) {
                let w = &down[id] * &up[child];
                for &y in &absent {
                    if y != x {
                        out[x][y] += &w;
                    }
                }
            }
        }
        out
    }

    fn small_counts(&self) -> (Vec<u128>, Vec<u128>) {
        let conv = |v: &[BigUint]| v.iter().map(|c| c.to_u128().expect("fits")).collect();
        (conv(&self.down), conv(&self.up))
    }

    pub fn position_distribution(&self, x: usize) -> Result<PositionDistribution> {
        self.poset.check_elem(x)?;
        let n = self.poset.len();
        let mut counts = vec![BigUint::zero(); n];
        for (k, slot) in counts.iter_mut().enumerate() {
            for id in self.level(k) {
                for (y, child) in self.edges(id) {
                    if y == x {
                        *slot += &self.down[id] * &self.up[child];
                    }
                }
            }
        }
        Ok(PositionDistribution::from_counts(x, &counts, self.extension_count()))
    }

    /// All position marginals from one pass over the edges.
    pub fn position_distributions(&self) -> Vec<PositionDistribution> {
        let total = self.extension_count();
        self.position_counts()
            .iter()
            .enumerate()
            .map(|(x, c)| PositionDistribution::from_counts(x, c, total))
            .collect()
    }

    /// `P(x ≺ y)` for every ordered pair (zero on the diagonal).
    pub fn precedence_probabilities(&self) -> Vec<Vec<BigRational>> {
        let total = self.extension_count();
        self.precedence_counts()
            .iter()
            .map(|row| row.iter().map(|c| ratio(c, total)).collect())
            .collect()
    }

    /// Probability that a uniform extension satisfies every precedence of
    /// `event`; zero when the precedences contradict the order.
    pub fn event_probability(&self, event: &EventSpec) -> Result<BigRational> {
        for &(u, v) in &event.required {
            self.poset.check_elem(u)?;
            self.poset.check_elem(v)?;
        }
        match self.poset.augment(&event.required) {
            None => Ok(BigRational::zero()),
            Some(q) => {
                let lq = DownsetLattice::build_with_budget(&q, self.budget)?;
                Ok(ratio(lq.extension_count(), self.extension_count()))
            }
        }
    }

    /// Exact uniform sample: walk up from `∅`, taking edge `I → I ∪ {x}`
    /// with probability `up(I ∪ {x}) / up(I)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.poset.len());
        let mut node = 0;
        while node != self.top() {
            let mut r = rng.gen_biguint_below(&self.up[node]);
            let mut chosen = None;
            for (x, child) in self.edges(node) {
                if r < self.up[child] {
                    chosen = Some((x, child));
                    break;
                }
                r -= &self.up[child];
            }
            let (x, child) = chosen.expect("up counts sum to the parent's count");
            order.push(x);
            node = child;
        }
        order
    }
}

fn widen(v: Vec<Vec<u128>>) -> Vec<Vec<BigUint>> {
    v.into_iter()
        .map(|row| row.into_iter().map(BigUint::from).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Mc,
}

/// Law of `f(x)`: `probs[k-1] = P(f(x) = k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub element: usize,
    pub probs: Vec<BigRational>,
    pub mean: BigRational,
    pub provenance: Provenance,
}

impl PositionDistribution {
    pub fn from_counts(element: usize, counts: &[BigUint], total: &BigUint) -> Self {
        let probs: Vec<BigRational> = counts.iter().map(|c| ratio(c, total)).collect();
        let mean = probs
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (k, p)| acc + p * from_int(k as i64 + 1));
        PositionDistribution {
            element,
            probs,
            mean,
            provenance: Provenance::Exact,
        }
    }

    /// `P(f(x) = k)` for 1-based `k`.
    pub fn prob(&self, k: usize) -> BigRational {
        if k == 0 || k > self.probs.len() {
            BigRational::zero()
        } else {
            self.probs[k - 1].clone()
        }
    }

    /// Smallest and largest positions with positive mass.
    pub fn support(&self) -> (usize, usize) {
        let lo = self.probs.iter().position(|p| !p.is_zero()).unwrap_or(0);
        let hi = self.probs.iter().rposition(|p| !p.is_zero()).unwrap_or(0);
        (lo + 1, hi + 1)
    }
}

/// A conjunction of precedences `u ≺ v`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EventSpec {
    pub required: Vec<(usize, usize)>,
}

impl EventSpec {
    pub fn new(required: Vec<(usize, usize)>) -> Self {
        EventSpec { required }
    }

    pub fn precedes(u: usize, v: usize) -> Self {
        EventSpec {
            required: vec![(u, v)],
        }
    }

    pub fn and(&self, other: &EventSpec) -> EventSpec {
        let mut required = self.required.clone();
        required.extend_from_slice(&other.required);
        EventSpec { required }
    }

    pub fn from_labels<S: AsRef<str>>(p: &Poset, pairs: &[(S, S)]) -> Result<Self> {
        let required = pairs
            .iter()
            .map(|(u, v)| Ok((p.index_of(u.as_ref())?, p.index_of(v.as_ref())?)))
            .collect::<Result<_>>()?;
        Ok(EventSpec { required })
    }

    /// Whether a concrete ordering satisfies the event.
    pub fn holds_in(&self, order: &[usize]) -> bool {
        let mut pos = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        self.required.iter().all(|&(u, v)| pos[u] < pos[v])
    }
}

pub fn build_lattice(p: &Poset) -> Result<DownsetLattice> {
    DownsetLattice::build(p)
}

pub fn count_extensions(p: &Poset) -> Result<BigUint> {
    Ok(DownsetLattice::build(p)?.extension_count().clone())
}

pub fn position_distribution(p: &Poset, x: usize) -> Result<PositionDistribution> {
    p.check_elem(x)?;
    DownsetLattice::build(p)?.position_distribution(x)
}

pub fn event_probability(p: &Poset, event: &EventSpec) -> Result<BigRational> {
    DownsetLattice::build(p)?.event_probability(event)
}

/// `P(event | given)`.
pub fn conditional_probability(
    p: &Poset,
    event: &EventSpec,
    given: &EventSpec,
) -> Result<BigRational> {
    let lat = DownsetLattice::build(p)?;
    conditional_in(&lat, event, given)
}

/// `P(event | given)` on an already built lattice.
pub fn conditional_in(
    lat: &DownsetLattice,
    event: &EventSpec,
    given: &EventSpec,
) -> Result<BigRational> {
    let pg = lat.event_probability(given)?;
    if pg.is_zero() {
        return Err(Error::ConditionNullEvent);
    }
    let pj = lat.event_probability(&event.and(given))?;
    Ok(pj / pg)
}

pub fn sample_extension(p: &Poset, seed: u64) -> Result<Vec<usize>> {
    let lat = DownsetLattice::build(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(lat.sample(&mut rng))
}

/// `count` independent uniform extensions from one seeded stream.
pub fn sample_extensions(lat: &DownsetLattice, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| lat.sample(&mut rng)).collect()
}

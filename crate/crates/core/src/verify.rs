//! Executable versions of the inequalities and identities about linear
//! extensions, random instance generators for sweeping them, and the trend
//! experiments for the asymptotic statements.
//!
//! Everything here is exact; a failed theorem-backed check means an engine
//! defect, not a counterexample.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::{
    antichain, chain, chain_plus_point, partitions, random_poset_from, skew_diagram,
    tightness_example_a, tripod, two_equal_chains, young_diagram,
};
use crate::grid::{is_convex_in_grid, GridShape};
use crate::lattice::{conditional_in, DownsetLattice, EventSpec};
use crate::poset::{comparability_profile, IncomparablePair, Poset};
use crate::ratio::{from_int, inv_e_lower_bound, pow, small, RationalRepr};
use crate::stats::{average_variance_in, tail_probabilities, BalanceReport};
use crate::two_chain::{make_two_chain, TwoChainPoset};

/// Outcome of comparing two exact quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub holds: bool,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl Comparison {
    fn at_least(lhs: BigRational, rhs: BigRational) -> Self {
        Comparison {
            holds: lhs >= rhs,
            lhs,
            rhs,
        }
    }

    fn equal(lhs: BigRational, rhs: BigRational) -> Self {
        Comparison {
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

/// `a_k^2 >= a_{k-1} a_{k+1}` for every interior `k`.
pub fn is_log_concave(seq: &[BigRational]) -> bool {
    seq.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

pub fn check_log_concavity(p: &Poset, x: usize) -> Result<bool> {
    p.check_elem(x)?;
    let d = DownsetLattice::build(p)?.position_distribution(x)?;
    Ok(is_log_concave(&d.probs))
}

/// `P(x ≻ Y) >= Π_{y∈Y} P(x ≻ y)`.
pub fn check_xyz(p: &Poset, x: usize, ys: &[usize]) -> Result<Comparison> {
    p.check_elem(x)?;
    for &y in ys {
        p.check_elem(y)?;
        if y == x {
            return Err(Error::DomainError("Y must not contain x".into()));
        }
    }
    let lat = DownsetLattice::build(p)?;
    let before = lat.precedence_probabilities();
    let lhs = lat.event_probability(&EventSpec::new(ys.iter().map(|&y| (y, x)).collect()))?;
    let rhs = ys
        .iter()
        .fold(BigRational::one(), |acc, &y| acc * &before[y][x]);
    Ok(Comparison::at_least(lhs, rhs))
}

/// `P(x_i ≺ y_j | R) >= P(x_i ≺ y_j)` with `R = {x_a ≺ y_b : (a, b) ∈ rel}`.
pub fn check_gyy(
    t: &TwoChainPoset,
    i: usize,
    j: usize,
    rel: &[(usize, usize)],
) -> Result<Comparison> {
    let in_range = |a: usize, b: usize| (1..=t.m).contains(&a) && (1..=t.n).contains(&b);
    if !in_range(i, j) || rel.iter().any(|&(a, b)| !in_range(a, b)) {
        return Err(Error::IndexOutOfRange(format!(
            "indices outside [1,{}]x[1,{}]",
            t.m, t.n
        )));
    }
    let lat = t.lattice()?;
    let target = EventSpec::precedes(t.x(i), t.y(j));
    let given = EventSpec::new(rel.iter().map(|&(a, b)| (t.x(a), t.y(b))).collect());
    let lhs = conditional_in(&lat, &target, &given)?;
    let rhs = lat.event_probability(&target)?;
    Ok(Comparison::at_least(lhs, rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwsigOutcome {
    pub holds: bool,
    /// `P(A ≺ x ≺ B)`.
    pub lhs: BigRational,
    /// `ε^{w²}`.
    pub rhs: BigRational,
    /// `min_{a,b} P(a ≺ x ≺ b)`.
    pub eps: BigRational,
    pub w: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// For `P = {x} ⊔ D ⊔ U` with `D` an ideal and `U` a filter, checks
/// `P(A ≺ x ≺ B) >= ε^{w²}` where `A = max(D)`, `B = min(U)`,
/// `w = max(|A|, |B|)` and `ε` is the least `P(a ≺ x ≺ b)`.
pub fn check_cwsig(p: &Poset, x: usize, down: &[usize], up: &[usize]) -> Result<CwsigOutcome> {
    p.check_elem(x)?;
    let n = p.len();
    let mut owner = vec![0u8; n];
    owner[x] = 1;
    for &v in down.iter().chain(up) {
        p.check_elem(v)?;
        if owner[v] != 0 {
            return Err(Error::DecompositionInvalid(format!(
                "{} appears twice",
                p.label(v)
            )));
        }
        owner[v] = 1;
    }
    if owner.iter().any(|&o| o == 0) {
        return Err(Error::DecompositionInvalid("parts do not cover P".into()));
    }
    if !p.is_ideal(down) {
        return Err(Error::DecompositionInvalid("D is not an ideal".into()));
    }
    if !p.is_filter(up) {
        return Err(Error::DecompositionInvalid("U is not a filter".into()));
    }
    let a = p.maximal(down);
    let b = p.minimal(up);
    if a.is_empty() || b.is_empty() {
        return Err(Error::DecompositionInvalid("D and U must be nonempty".into()));
    }
    let lat = DownsetLattice::build(p)?;
    let mut eps: Option<BigRational> = None;
    for &ai in &a {
        for &bi in &b {
            let v = lat.event_probability(&EventSpec::new(vec![(ai, x), (x, bi)]))?;
            if eps.as_ref().map_or(true, |e| v < *e) {
                eps = Some(v);
            }
        }
    }
    let eps = eps.expect("A and B nonempty");
    let mut req: Vec<(usize, usize)> = a.iter().map(|&ai| (ai, x)).collect();
    req.extend(b.iter().map(|&bi| (x, bi)));
    let lhs = lat.event_probability(&EventSpec::new(req))?;
    let w = a.len().max(b.len());
    let rhs = pow(&eps, (w * w) as u32);
    Ok(CwsigOutcome {
        holds: lhs >= rhs,
        lhs,
        rhs,
        eps,
        w,
        a,
        b,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiBounds {
    pub size: usize,
    pub dim: usize,
    pub pi: usize,
    /// `π(P) >= |P|/2 - 1`, for convex non-chains.
    pub a: Option<Comparison>,
    /// `π(P) > (1 - 1/d)|P| - d^d`, for ideals off every coordinate hyperplane.
    pub b: Option<Comparison>,
}

impl PiBounds {
    pub fn holds(&self) -> bool {
        self.a.as_ref().map_or(true, |c| c.holds) && self.b.as_ref().map_or(true, |c| c.holds)
    }
}

pub fn check_pi_bounds(shape: &GridShape) -> Result<PiBounds> {
    let report = is_convex_in_grid(&shape.cells)?;
    let p = &report.poset;
    let size = p.len();
    let d = shape.dim;
    let pi = comparability_profile(p).pi_max;
    let pi_q = from_int(pi as i64);
    let a = (report.convex && !p.is_chain()).then(|| {
        Comparison::at_least(pi_q.clone(), small(size as i64, 2) - BigRational::one())
    });
    let b = (report.ideal && !shape.in_coordinate_hyperplane() && d > 0).then(|| {
        let dd = BigInt::from(d).pow(d as u32);
        let rhs = small((d as i64 - 1) * size as i64, d as i64) - BigRational::from_integer(dd);
        Comparison {
            holds: pi_q > rhs,
            lhs: pi_q.clone(),
            rhs,
        }
    });
    if a.is_none() && b.is_none() {
        return Err(Error::HypothesisNotSatisfied(
            "neither a convex non-chain nor an ideal off the coordinate hyperplanes".into(),
        ));
    }
    Ok(PiBounds {
        size,
        dim: d,
        pi,
        a,
        b,
    })
}

/// Per dimension, the largest `(1 - 1/d)|P| - π(P)` over the shapes that
/// qualify for the ideal bound: the smallest constant `c` with
/// `π(P) >= (1 - 1/d)|P| - c` on those shapes.
pub fn observed_range_constants(shapes: &[GridShape]) -> Result<BTreeMap<usize, BigRational>> {
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for shape in shapes {
        let b = match check_pi_bounds(shape) {
            Ok(b) => b,
            Err(Error::HypothesisNotSatisfied(_)) => continue,
            Err(e) => return Err(e),
        };
        if b.b.is_none() {
            continue;
        }
        let d = b.dim as i64;
        let gap = small((d - 1) * b.size as i64, d) - from_int(b.pi as i64);
        let slot = out.entry(b.dim).or_insert_with(|| gap.clone());
        if gap > *slot {
            *slot = gap;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvgVarianceConfig {
    pub mu: BigRational,
    pub k: usize,
}

impl Default for AvgVarianceConfig {
    fn default() -> Self {
        AvgVarianceConfig {
            mu: BigRational::one(),
            k: 1,
        }
    }
}

/// `(1/|A|) Σ_{x∈A} σ²(x) >= L` for a pair with `|B| >= max(μ|A|, K)`.
pub fn check_avg_variance(
    p: &Poset,
    pair: &IncomparablePair,
    l: &BigRational,
    cfg: &AvgVarianceConfig,
) -> Result<Comparison> {
    if p.is_chain() {
        return Err(Error::NotApplicable("poset is a chain".into()));
    }
    let b_len = from_int(pair.b.len() as i64);
    if b_len < &cfg.mu * from_int(pair.a.len() as i64) || pair.b.len() < cfg.k {
        return Err(Error::HypothesisNotSatisfied(format!(
            "|B| = {} below max(mu |A|, K)",
            pair.b.len()
        )));
    }
    let lat = DownsetLattice::build(p)?;
    let avg = average_variance_in(&lat, &pair.a)?;
    Ok(Comparison::at_least(avg, l.clone()))
}

// ---------------------------------------------------------------------------
// Trend experiments

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendFamily {
    /// Young diagram of shape `(k, k)`.
    Rect2xk,
    /// `chain_plus_point(n)`.
    ChainPoint,
    /// `two_equal_chains(n)`.
    TwoChains,
}

impl FromStr for TrendFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect2xk" => Ok(TrendFamily::Rect2xk),
            "chainpoint" => Ok(TrendFamily::ChainPoint),
            "twochains" => Ok(TrendFamily::TwoChains),
            _ => Err(Error::Parse(format!("unknown family '{s}'"))),
        }
    }
}

impl TrendFamily {
    pub fn name(self) -> &'static str {
        match self {
            TrendFamily::Rect2xk => "rect2xk",
            TrendFamily::ChainPoint => "chainpoint",
            TrendFamily::TwoChains => "twochains",
        }
    }

    pub fn member(self, size: usize) -> Result<Poset> {
        match self {
            TrendFamily::Rect2xk => Ok(young_diagram(&[size as u32, size as u32])?.1),
            TrendFamily::ChainPoint => chain_plus_point(size),
            TrendFamily::TwoChains => Ok(two_equal_chains(size)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub family: &'static str,
    pub size: usize,
    pub n: usize,
    pub width: usize,
    /// `δ(P)`; `None` for chains or skipped rows.
    pub delta: Option<BigRational>,
    /// `σ(P)²`.
    pub variance: BigRational,
    pub sigma: f64,
    pub pi: usize,
    /// Set when the row could not be computed within budget.
    pub skipped: Option<String>,
}

pub fn trend_experiment(family: TrendFamily, sizes: &[usize], budget: usize) -> Result<Vec<TrendRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let p = family.member(size)?;
        let profile = comparability_profile(&p);
        let mut row = TrendRow {
            family: family.name(),
            size,
            n: p.len(),
            width: profile.width,
            delta: None,
            variance: BigRational::zero(),
            sigma: 0.0,
            pi: profile.pi_max,
            skipped: None,
        };
        match DownsetLattice::build_with_budget(&p, budget) {
            Ok(lat) => {
                row.delta = BalanceReport::from_lattice(&lat).ok().map(|b| b.delta);
                if let Some((v, _)) = crate::stats::max_variance(&lat) {
                    row.sigma = crate::ratio::to_f64(&v).sqrt();
                    row.variance = v;
                }
            }
            Err(e @ Error::BudgetExceeded { .. }) => row.skipped = Some(e.to_string()),
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Random instances

/// Uniform size in `2..=n_max` and edge density in `[0.1, 0.6]`.
pub fn random_small_poset<R: Rng + ?Sized>(rng: &mut R, n_max: usize) -> Poset {
    let n = rng.gen_range(2..=n_max.max(2));
    let density = rng.gen_range(0.1..0.6);
    random_poset_from(n, density, rng)
}

/// `(P, x, Y)` with `Y` a nonempty subset of `P - x`.
pub fn random_xyz_instance<R: Rng + ?Sized>(rng: &mut R, n_max: usize) -> (Poset, usize, Vec<usize>) {
    let p = random_small_poset(rng, n_max);
    let x = rng.gen_range(0..p.len());
    let mut others: Vec<usize> = (0..p.len()).filter(|&y| y != x).collect();
    others.shuffle(rng);
    let k = rng.gen_range(1..=others.len());
    let mut ys = others[..k].to_vec();
    ys.sort_unstable();
    (p, x, ys)
}

/// Chains of lengths in `1..=max_len`, each cross pair present with
/// probability `cross_prob`.
pub fn random_two_chain<R: Rng + ?Sized>(rng: &mut R, max_len: usize, cross_prob: f64) -> TwoChainPoset {
    let m = rng.gen_range(1..=max_len);
    let n = rng.gen_range(1..=max_len);
    let mut cross = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            if rng.gen_bool(cross_prob) {
                cross.push((i, j));
            }
        }
    }
    make_two_chain(m, n, &cross).expect("indices in range")
}

pub struct GyyInstance {
    pub t: TwoChainPoset,
    pub i: usize,
    pub j: usize,
    pub rel: Vec<(usize, usize)>,
}

pub fn random_gyy_instance<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> GyyInstance {
    let t = random_two_chain(rng, max_len, 0.15);
    let i = rng.gen_range(1..=t.m);
    let j = rng.gen_range(1..=t.n);
    let k = rng.gen_range(1..=3);
    let rel = (0..k)
        .map(|_| (rng.gen_range(1..=t.m), rng.gen_range(1..=t.n)))
        .collect();
    GyyInstance { t, i, j, rel }
}

pub struct Decomposition {
    pub poset: Poset,
    pub x: usize,
    pub down: Vec<usize>,
    pub up: Vec<usize>,
}

/// `D = ↓({y < x} ∪ S)` for a random set `S` of elements incomparable to
/// `x`, and `U` the rest; retries until `max(D)` and `min(U)` are nonempty.
pub fn random_decomposition<R: Rng + ?Sized>(rng: &mut R, n_max: usize) -> Decomposition {
    loop {
        let p = random_small_poset(rng, n_max.max(3));
        let x = rng.gen_range(0..p.len());
        let mut seeds = p.down_set(x);
        seeds.extend((0..p.len()).filter(|&y| p.incomparable(x, y) && rng.gen_bool(0.4)));
        let mut in_down = vec![false; p.len()];
        for s in seeds {
            in_down[s] = true;
            for z in p.down_set(s) {
                in_down[z] = true;
            }
        }
        let down: Vec<usize> = (0..p.len()).filter(|&v| in_down[v]).collect();
        let up: Vec<usize> = (0..p.len()).filter(|&v| v != x && !in_down[v]).collect();
        if !down.is_empty() && !up.is_empty() {
            return Decomposition { poset: p, x, down, up };
        }
    }
}

/// Conditioning event for the block identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockCondition {
    Psi { i: usize, j: usize },
    PsiPsi { i: usize, j: usize, k: usize, l: usize },
    PsiPhi { i: usize, j: usize, l: usize, k: usize },
}

pub struct BlockInstance {
    pub t: TwoChainPoset,
    pub cond: BlockCondition,
    /// Event on elements of `block`, in the indices of `t.poset`.
    pub event: EventSpec,
    pub block: Vec<usize>,
}

impl BlockInstance {
    pub fn condition_event(&self) -> Result<EventSpec> {
        let t = &self.t;
        Ok(match self.cond {
            BlockCondition::Psi { i, j } => t.psi_event(i, j)?,
            BlockCondition::PsiPsi { i, j, k, l } => t.psi_event(i, j)?.and(&t.psi_event(k, l)?),
            BlockCondition::PsiPhi { i, j, l, k } => t.psi_event(i, j)?.and(&t.phi_event(l, k)?),
        })
    }
}

/// Random two-chain poset, conditioning and event on the matching block;
/// resamples until the conditioning has positive probability and the block
/// has at least two elements.
pub fn random_block_instance<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Result<BlockInstance> {
    loop {
        let t = random_two_chain(rng, max_len, 0.1);
        let (m, n) = (t.m, t.n);
        let kind = rng.gen_range(0..3);
        let (cond, block) = match kind {
            0 => {
                let (i, j) = (rng.gen_range(1..=m), rng.gen_range(0..=n));
                (BlockCondition::Psi { i, j }, t.psi_block(i, j)?)
            }
            1 => {
                if m < 2 {
                    continue;
                }
                let i = rng.gen_range(1..m);
                let k = rng.gen_range(i + 1..=m);
                let j = rng.gen_range(0..=n);
                let l = rng.gen_range(j..=n);
                (
                    BlockCondition::PsiPsi { i, j, k, l },
                    t.psi_psi_block(i, j, k, l)?,
                )
            }
            _ => {
                let i = rng.gen_range(1..=m);
                let k = rng.gen_range(i..=m);
                let l = rng.gen_range(1..=n);
                let j = rng.gen_range(0..l);
                (
                    BlockCondition::PsiPhi { i, j, l, k },
                    t.psi_phi_block(i, j, l, k)?,
                )
            }
        };
        if block.len() < 2 {
            continue;
        }
        let k = rng.gen_range(1..=3);
        let event = EventSpec::new(
            (0..k)
                .map(|_| {
                    let mut two: Vec<usize> = block.choose_multiple(rng, 2).copied().collect();
                    two.shuffle(rng);
                    (two[0], two[1])
                })
                .collect(),
        );
        let inst = BlockInstance {
            t,
            cond,
            event,
            block,
        };
        let lat = inst.t.lattice()?;
        if lat.event_probability(&inst.condition_event()?)?.is_zero() {
            continue;
        }
        return Ok(inst);
    }
}

/// `P(E | condition)` against `P_Q(E)` in the block subposet `Q`.
pub fn check_block_identity(inst: &BlockInstance) -> Result<Comparison> {
    let lat = inst.t.lattice()?;
    let lhs = conditional_in(&lat, &inst.event, &inst.condition_event()?)?;
    let q = inst.t.poset.subposet(&inst.block)?;
    let local = |v: usize| inst.block.iter().position(|&b| b == v).expect("event in block");
    let event_q = EventSpec::new(
        inst.event
            .required
            .iter()
            .map(|&(u, v)| (local(u), local(v)))
            .collect(),
    );
    let rhs = DownsetLattice::build(&q)?.event_probability(&event_q)?;
    Ok(Comparison::equal(lhs, rhs))
}

// ---------------------------------------------------------------------------
// Corpora

#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub name: String,
    pub poset: Poset,
}

pub fn random_corpus(count: usize, n_max: usize, seed: u64) -> Vec<CorpusItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| CorpusItem {
            name: format!("random-{seed}-{k}"),
            poset: random_small_poset(&mut rng, n_max),
        })
        .collect()
}

/// Every Young diagram with at most `max_size` cells.
pub fn young_corpus(max_size: u32) -> Vec<CorpusItem> {
    (1..=max_size)
        .flat_map(partitions)
        .map(|lambda| {
            let parts: Vec<String> = lambda.iter().map(u32::to_string).collect();
            CorpusItem {
                name: format!("young-{}", parts.join(",")),
                poset: young_diagram(&lambda).expect("valid partition").1,
            }
        })
        .collect()
}

pub const BUILTIN_SEED: u64 = 20_240_601;

/// 300 random posets on at most 9 elements, every Young diagram with at
/// most 10 cells, and a few named families.
pub fn builtin_corpus() -> Vec<CorpusItem> {
    let mut items = random_corpus(300, 9, BUILTIN_SEED);
    items.extend(young_corpus(10));
    let named: Vec<(&str, Poset)> = vec![
        ("chain-5", chain(5)),
        ("antichain-5", antichain(5)),
        ("chain-plus-point-7", chain_plus_point(7).expect("n >= 2")),
        ("two-equal-chains-4", two_equal_chains(4)),
        ("skew-3,3,2/1,1", skew_diagram(&[3, 3, 2], &[1, 1]).expect("valid").1),
        ("tripod-3-3", tripod(3, 3).expect("arm > 0").1),
    ];
    items.extend(named.into_iter().map(|(name, poset)| CorpusItem {
        name: name.to_string(),
        poset,
    }));
    items
}

/// Two-chain posets for the `g`-statistic sweeps: every free `X + Y` with
/// `m, n <= 5` plus random cross sets.
pub fn two_chain_corpus(random: usize, seed: u64) -> Vec<TwoChainPoset> {
    let mut out: Vec<TwoChainPoset> = (1..=5)
        .flat_map(|m| (1..=5).map(move |n| TwoChainPoset::free(m, n)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..random).map(|_| random_two_chain(&mut rng, 5, 0.2)));
    out
}

// ---------------------------------------------------------------------------
// Conjecture sweep and empirical windows

#[derive(Debug, Clone, PartialEq)]
pub struct OneThirdFinding {
    pub checked: usize,
    pub min_delta: Option<BigRational>,
    /// `(instance digest, δ(P))` for every poset with `δ(P) < 1/3`.
    pub violations: Vec<(String, BigRational)>,
}

/// `δ(P) >= 1/3` on `count` random non-chain posets with `2 <= n <= n_max`.
pub fn one_third_sweep(count: usize, n_max: usize, seed: u64) -> Result<OneThirdFinding> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let third = small(1, 3);
    let mut out = OneThirdFinding {
        checked: 0,
        min_delta: None,
        violations: Vec::new(),
    };
    while out.checked < count {
        let p = random_small_poset(&mut rng, n_max);
        if p.is_chain() {
            continue;
        }
        out.checked += 1;
        let delta = BalanceReport::from_lattice(&DownsetLattice::build(&p)?)?.delta;
        if delta < third {
            out.violations.push((instance_digest(&p, ""), delta.clone()));
        }
        if out.min_delta.as_ref().map_or(true, |m| delta < *m) {
            out.min_delta = Some(delta);
        }
    }
    Ok(out)
}

/// Empirical window for `σ(x) q(x)` over corpus elements with `q(x) <= 1/3`.
pub const SIGMA_Q_WINDOW: (f64, f64) = (0.2, 0.6);

/// Range of `σ(x) q(x)` and the largest `σ²(x) q(x)²` over all corpus
/// elements with `q(x) <= 1/3`.
pub fn sigma_q_scan(corpus: &[CorpusItem]) -> Result<(f64, f64, BigRational)> {
    let third = small(1, 3);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst = BigRational::zero();
    for item in corpus {
        let lat = DownsetLattice::build(&item.poset)?;
        for d in lat.position_distributions() {
            let s = crate::stats::PositionStatistics::from_distribution(&d);
            if s.q > third {
                continue;
            }
            let v = s.sigma_q();
            lo = lo.min(v);
            hi = hi.max(v);
            let c = &s.q * &s.q * &s.variance;
            if c > worst {
                worst = c;
            }
        }
    }
    Ok((lo, hi, worst))
}

// ---------------------------------------------------------------------------
// Findings records and suites

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance_digest: String,
    pub holds: bool,
    pub lhs: Option<RationalRepr>,
    pub rhs: Option<RationalRepr>,
    /// Theorem-backed: a failure is an error, not a finding.
    #[serde(skip)]
    pub fatal: bool,
}

impl CheckRecord {
    fn new(check: &str, digest: String, holds: bool) -> Self {
        CheckRecord {
            check: check.to_string(),
            instance_digest: digest,
            holds,
            lhs: None,
            rhs: None,
            fatal: true,
        }
    }

    /// The discrete 1/e tail bound fails on small instances (free `X + Y`
    /// with `m = 2, n = 1` gives 1/3), so its records are findings.
    fn non_fatal(mut self) -> Self {
        self.fatal = false;
        self
    }

    fn compared(check: &str, digest: String, c: &Comparison) -> Self {
        CheckRecord {
            lhs: Some((&c.lhs).into()),
            rhs: Some((&c.rhs).into()),
            ..CheckRecord::new(check, digest, c.holds)
        }
    }
}

/// First 16 hex digits of SHA-256 over the labels, the relations and
/// `detail`.
pub fn instance_digest(p: &Poset, detail: &str) -> String {
    let mut s = p.labels().join(",");
    s.push('|');
    for (a, b) in p.relations() {
        let _ = write!(s, "{a}<{b};");
    }
    s.push('|');
    s.push_str(detail);
    let hash = Sha256::digest(s.as_bytes());
    hash.iter().take(8).fold(String::new(), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

pub const SUITES: &[&str] = &[
    "logconcave",
    "xyz",
    "gyy",
    "cwsig",
    "pi",
    "grunbaum",
    "blocks",
    "bl1",
    "bl2",
    "closed-forms",
    "one-third",
];

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Number of random instances; `None` uses the suite default.
    pub random: Option<usize>,
    pub n_max: usize,
    pub seed: u64,
    /// Run corpus-based suites over the builtin corpus.
    pub builtin: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            random: None,
            n_max: 8,
            seed: 0,
            builtin: false,
        }
    }
}

impl SuiteOptions {
    fn count(&self, default: usize) -> usize {
        self.random.unwrap_or(default)
    }

    fn corpus(&self) -> Vec<CorpusItem> {
        if self.builtin || self.random.is_none() {
            builtin_corpus()
        } else {
            random_corpus(self.count(100), self.n_max, self.seed)
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    match name {
        "all" => {
            for s in SUITES {
                out.extend(run_suite(s, opts)?);
            }
        }
        "logconcave" => {
            for item in opts.corpus() {
                let lat = DownsetLattice::build(&item.poset)?;
                for d in lat.position_distributions() {
                    let digest = instance_digest(&item.poset, &format!("x={}", d.element));
                    out.push(CheckRecord::new("log_concavity", digest, is_log_concave(&d.probs)));
                }
            }
        }
        "xyz" => {
            for _ in 0..opts.count(500) {
                let (p, x, ys) = random_xyz_instance(&mut rng, opts.n_max);
                let c = check_xyz(&p, x, &ys)?;
                let digest = instance_digest(&p, &format!("x={x};Y={ys:?}"));
                out.push(CheckRecord::compared("xyz", digest, &c));
            }
        }
        "gyy" => {
            for _ in 0..opts.count(500) {
                let g = random_gyy_instance(&mut rng, (opts.n_max / 2).max(1));
                let c = check_gyy(&g.t, g.i, g.j, &g.rel)?;
                let digest =
                    instance_digest(&g.t.poset, &format!("i={};j={};I={:?}", g.i, g.j, g.rel));
                out.push(CheckRecord::compared("gyy", digest, &c));
            }
        }
        "cwsig" => {
            for _ in 0..opts.count(100) {
                let d = random_decomposition(&mut rng, opts.n_max.min(7));
                let c = check_cwsig(&d.poset, d.x, &d.down, &d.up)?;
                let digest = instance_digest(&d.poset, &format!("x={};D={:?}", d.x, d.down));
                out.push(CheckRecord {
                    lhs: Some((&c.lhs).into()),
                    rhs: Some((&c.rhs).into()),
                    ..CheckRecord::new("sandwich_bound", digest, c.holds)
                });
            }
        }
        "pi" => {
            let shapes = pi_shapes()?;
            for (name, shape) in &shapes {
                let b = check_pi_bounds(shape)?;
                let digest = instance_digest(&shape.poset(), name);
                if let Some(c) = &b.a {
                    out.push(CheckRecord::compared("grid_range_convex", digest.clone(), c));
                }
                if let Some(c) = &b.b {
                    out.push(CheckRecord::compared("grid_range_ideal", digest, c));
                }
            }
            let shapes: Vec<GridShape> = shapes.into_iter().map(|(_, s)| s).collect();
            for (d, c) in observed_range_constants(&shapes)? {
                let dd = BigRational::from_integer(BigInt::from(d).pow(d as u32));
                out.push(CheckRecord::compared(
                    "grid_range_constant",
                    format!("dim-{d}"),
                    &Comparison {
                        holds: c < dd,
                        lhs: c,
                        rhs: dd,
                    },
                ).non_fatal());
            }
        }
        "grunbaum" => {
            let bound = inv_e_lower_bound();
            for item in opts.corpus() {
                let lat = DownsetLattice::build(&item.poset)?;
                for d in lat.position_distributions() {
                    let (up, down) = tail_probabilities(&d.probs, 1, &d.mean);
                    let c = Comparison {
                        holds: up > bound && down > bound,
                        lhs: up.min(down),
                        rhs: bound.clone(),
                    };
                    let digest = instance_digest(&item.poset, &format!("x={}", d.element));
                    out.push(CheckRecord::compared("grunbaum_f", digest, &c).non_fatal());
                }
            }
            for t in two_chain_corpus(opts.count(50), opts.seed) {
                for g in t.g_distributions()? {
                    let (up, down) = tail_probabilities(&g.probs, 0, &g.mean);
                    let c = Comparison {
                        holds: up > bound && down > bound,
                        lhs: up.min(down),
                        rhs: bound.clone(),
                    };
                    let digest = instance_digest(&t.poset, &format!("g;i={}", g.i));
                    out.push(CheckRecord::compared("grunbaum_g", digest, &c).non_fatal());
                }
            }
        }
        "blocks" => {
            for _ in 0..opts.count(100) {
                let inst = random_block_instance(&mut rng, 5)?;
                let c = check_block_identity(&inst)?;
                let digest = instance_digest(
                    &inst.t.poset,
                    &format!("{:?};{:?}", inst.cond, inst.event.required),
                );
                out.push(CheckRecord::compared("psi_block", digest, &c));
            }
        }
        "bl1" => {
            for m in 1..=8 {
                for n in 1..=8 {
                    let t = TwoChainPoset::free(m, n);
                    let g = t.g_distributions()?;
                    for i in 1..=m {
                        for j in 1..=n {
                            let digest = instance_digest(&t.poset, &format!("i={i};j={j}"));
                            // P(Ψ) < ε for every ε > i/j  ⇔  P(Ψ) <= i/j.
                            let psi = g[i - 1].probs[j].clone();
                            let bound = small(i as i64, j as i64);
                            out.push(CheckRecord::compared(
                                "psi_small",
                                digest.clone(),
                                &Comparison {
                                    holds: psi <= bound,
                                    lhs: psi,
                                    rhs: bound,
                                },
                            ));
                            let lat = t.lattice()?;
                            let cond =
                                conditional_in(&lat, &t.psi_event(i, j)?, &t.psi_prerequisites(i, j)?)?;
                            out.push(CheckRecord::compared(
                                "psi_conditioned",
                                digest,
                                &Comparison::equal(cond, small(i as i64, (i + j) as i64)),
                            ));
                        }
                    }
                }
            }
        }
        "bl2" => {
            for m in 1..=8 {
                for n in 1..=8 {
                    let t = TwoChainPoset::free(m, n);
                    for i in 1..=m {
                        for l in 1..=n {
                            let r = crate::two_chain::bl2_ratio(&t, i, l)?;
                            let digest = instance_digest(&t.poset, &format!("i={i};l={l}"));
                            out.push(CheckRecord::compared(
                                "psi_ratio",
                                digest,
                                &Comparison {
                                    holds: r.agree(),
                                    lhs: r.exact,
                                    rhs: r.closed,
                                },
                            ));
                        }
                    }
                }
            }
        }
        "closed-forms" => {
            for m in 1..=10 {
                for n in 1..=10 {
                    let t = TwoChainPoset::free(m, n);
                    let lat = t.lattice()?;
                    let count = BigRational::from_integer(lat.extension_count().clone().into());
                    let binom = BigRational::from_integer(
                        num_integer::binomial(BigInt::from(m + n), BigInt::from(m)),
                    );
                    let digest = instance_digest(&t.poset, "");
                    out.push(CheckRecord::compared(
                        "free_count",
                        digest.clone(),
                        &Comparison::equal(count, binom),
                    ));
                    for g in t.g_distributions()? {
                        out.push(CheckRecord::compared(
                            "free_mean_g",
                            instance_digest(&t.poset, &format!("i={}", g.i)),
                            &Comparison::equal(
                                g.mean,
                                crate::two_chain::free_expected_g(m, n, g.i),
                            ),
                        ));
                    }
                }
            }
        }
        "one-third" => {
            let f = one_third_sweep(opts.count(10_000), opts.n_max, opts.seed)?;
            let third = small(1, 3);
            let mut rec = CheckRecord::new(
                "one_third",
                format!("sweep-{}-{}", f.checked, opts.seed),
                f.violations.is_empty(),
            );
            rec.lhs = f.min_delta.as_ref().map(Into::into);
            rec.rhs = Some((&third).into());
            rec.fatal = false;
            out.push(rec);
            for (digest, delta) in &f.violations {
                out.push(CheckRecord {
                    lhs: Some(delta.into()),
                    rhs: Some((&third).into()),
                    fatal: false,
                    ..CheckRecord::new("one_third", digest.clone(), false)
                });
            }
        }
        _ => return Err(Error::Parse(format!("unknown suite '{name}'"))),
    }
    Ok(out)
}

/// Shapes for the grid range bounds: tightness examples of sizes 4..=20,
/// Young diagrams with at most 10 cells, tripods in dimensions 2 and 3.
pub fn pi_shapes() -> Result<Vec<(String, GridShape)>> {
    let mut out = Vec::new();
    for size in (4..=20).step_by(2) {
        out.push((format!("tight-{size}"), tightness_example_a(size)?.0));
    }
    for n in 1..=10 {
        for lambda in partitions(n) {
            let shape = young_diagram(&lambda)?.0;
            if shape.poset().is_chain() && shape.in_coordinate_hyperplane() {
                continue;
            }
            out.push((format!("young-{lambda:?}"), shape));
        }
    }
    for d in 2..=3 {
        for l in 2..=6 {
            out.push((format!("tripod-{d}-{l}"), tripod(d, l)?.0));
        }
    }
    Ok(out)
}

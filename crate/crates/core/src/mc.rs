//! Lazy adjacent-transposition chain on linear extensions, for estimates on
//! posets too large for the exact engine.
//!
//! Each step holds with probability 1/2; otherwise it picks one of the
//! `n - 1` adjacent slots uniformly and swaps the two elements there if they
//! are incomparable. The chain is symmetric, so its stationary law is uniform
//! on `E(P)`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{DownsetLattice, PositionDistribution, Provenance};
use crate::poset::Poset;
use crate::ratio::to_f64;

/// Default burn-in: `10 n^3` steps.
pub fn default_burn_in(n: usize) -> u64 {
    10 * (n as u64).pow(3)
}

/// Some linear extension: repeatedly take the smallest-index minimal element.
pub fn initial_extension(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut indeg: Vec<usize> = (0..n).map(|x| p.lower_covers(x).count()).collect();
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in p.covers() {
        upper[a].push(b);
    }
    let mut order = Vec::with_capacity(n);
    while let Some(x) = ready.pop_first() {
        order.push(x);
        for &y in &upper[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert(y);
            }
        }
    }
    order
}

#[derive(Debug, Clone)]
pub struct ChainState {
    pub current: Vec<usize>,
    /// `position[x]` is the 0-based slot of `x` in `current`.
    pub position: Vec<usize>,
    pub steps: u64,
    pub rng_seed: u64,
    rng: ChaCha8Rng,
}

impl ChainState {
    pub fn new(p: &Poset, seed: u64) -> Self {
        let current = initial_extension(p);
        let mut position = vec![0; current.len()];
        for (k, &x) in current.iter().enumerate() {
            position[x] = k;
        }
        ChainState {
            current,
            position,
            steps: 0,
            rng_seed: seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One lazy step; returns whether a swap happened.
    pub fn step(&mut self, p: &Poset) -> bool {
        self.step_slot(p).is_some()
    }

    /// One lazy step; returns the slot `k` if `k, k + 1` were swapped.
    pub fn step_slot(&mut self, p: &Poset) -> Option<usize> {
        self.steps += 1;
        let n = self.current.len();
        if n < 2 || self.rng.gen_bool(0.5) {
            return None;
        }
        let k = self.rng.gen_range(0..n - 1);
        let (a, b) = (self.current[k], self.current[k + 1]);
        if !p.incomparable(a, b) {
            return None;
        }
        self.current.swap(k, k + 1);
        self.position[a] = k + 1;
        self.position[b] = k;
        debug_assert!(is_extension(p, &self.current));
        Some(k)
    }

    pub fn run(&mut self, p: &Poset, steps: u64) {
        for _ in 0..steps {
            self.step(p);
        }
    }
}

pub fn mc_step(p: &Poset, state: &mut ChainState) -> bool {
    state.step(p)
}

pub fn is_extension(p: &Poset, order: &[usize]) -> bool {
    let mut pos = vec![usize::MAX; p.len()];
    if order.len() != p.len() {
        return false;
    }
    for (k, &x) in order.iter().enumerate() {
        if x >= p.len() || pos[x] != usize::MAX {
            return false;
        }
        pos[x] = k;
    }
    p.covers().iter().all(|&(a, b)| pos[a] < pos[b])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEstimate {
    pub estimate: f64,
    /// Batch-means standard error, which accounts for the correlation
    /// between successive states.
    pub stderr: f64,
    /// `sqrt(p(1-p)/samples)`, valid only for independent draws.
    pub binomial_stderr: f64,
    pub samples: u64,
}

const BATCHES: u64 = 50;

/// Fraction of post-burn-in states with `x` before `y`.
pub fn estimate_pair_probability(
    p: &Poset,
    x: usize,
    y: usize,
    samples: u64,
    burn_in: Option<u64>,
    seed: u64,
) -> Result<PairEstimate> {
    p.check_elem(x)?;
    p.check_elem(y)?;
    if x == y || p.comparable(x, y) {
        return Err(Error::ComparablePair(
            p.label(x).to_string(),
            p.label(y).to_string(),
        ));
    }
    if samples == 0 {
        return Err(Error::DomainError("samples must be positive".into()));
    }
    let mut s = ChainState::new(p, seed);
    s.run(p, burn_in.unwrap_or_else(|| default_burn_in(p.len())));
    let batch_len = (samples / BATCHES).max(1);
    let mut hits = 0u64;
    let mut batch_hits = 0u64;
    let mut batch_means = Vec::new();
    for t in 0..samples {
        s.step(p);
        if s.position[x] < s.position[y] {
            hits += 1;
            batch_hits += 1;
        }
        if (t + 1) % batch_len == 0 {
            batch_means.push(batch_hits as f64 / batch_len as f64);
            batch_hits = 0;
        }
    }
    let est = hits as f64 / samples as f64;
    let b = batch_means.len() as f64;
    let stderr = if batch_means.len() > 1 {
        let m = batch_means.iter().sum::<f64>() / b;
        let var = batch_means.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (b - 1.0);
        (var / b).sqrt()
    } else {
        f64::NAN
    };
    Ok(PairEstimate {
        estimate: est,
        stderr,
        binomial_stderr: (est * (1.0 - est) / samples as f64).sqrt(),
        samples,
    })
}

/// Empirical marginal of `f(x)` over post-burn-in states, tagged `Mc`.
pub fn estimate_position_distribution(
    p: &Poset,
    x: usize,
    samples: u64,
    burn_in: Option<u64>,
    seed: u64,
) -> Result<PositionDistribution> {
    p.check_elem(x)?;
    if samples == 0 {
        return Err(Error::DomainError("samples must be positive".into()));
    }
    let mut s = ChainState::new(p, seed);
    s.run(p, burn_in.unwrap_or_else(|| default_burn_in(p.len())));
    let mut counts = vec![0u64; p.len()];
    for _ in 0..samples {
        s.step(p);
        counts[s.position[x]] += 1;
    }
    let counts: Vec<BigUint> = counts.into_iter().map(BigUint::from).collect();
    let mut d = PositionDistribution::from_counts(x, &counts, &BigUint::from(samples));
    d.provenance = Provenance::Mc;
    Ok(d)
}

/// Total-variation distance between the empirical and exact laws of `f(x)`.
pub fn tv_distance_diagnostic(
    p: &Poset,
    x: usize,
    samples: u64,
    burn_in: Option<u64>,
    seed: u64,
) -> Result<f64> {
    let exact = DownsetLattice::build(p)?.position_distribution(x)?;
    let est = estimate_position_distribution(p, x, samples, burn_in, seed)?;
    let tv: f64 = exact
        .probs
        .iter()
        .zip(&est.probs)
        .map(|(a, b)| (to_f64(a) - to_f64(b)).abs())
        .sum();
    Ok(tv / 2.0)
}

/// Time averages over post-burn-in states of every pair order and every
/// position, in `O(1)` per step: a swap of neighbours `a, b` changes only the
/// order of that pair and the positions of those two elements, so each
/// quantity is credited with the length of the stretch it held for.
#[derive(Debug, Clone)]
pub struct McMarginals {
    pub samples: u64,
    /// `before[x][y]` estimates `P(x ≺ y)`.
    pub before: Vec<Vec<f64>>,
    /// `position[x][k]` estimates `P(f(x) = k + 1)`.
    pub position: Vec<Vec<f64>>,
}

pub fn estimate_marginals(
    p: &Poset,
    samples: u64,
    burn_in: Option<u64>,
    seed: u64,
) -> Result<McMarginals> {
    if samples == 0 {
        return Err(Error::DomainError("samples must be positive".into()));
    }
    let n = p.len();
    let mut s = ChainState::new(p, seed);
    s.run(p, burn_in.unwrap_or_else(|| default_burn_in(n)));
    // States after steps 1..=samples are counted; `since` marks the first
    // counted state of the current stretch.
    let mut occ = vec![vec![0u64; n]; n];
    let mut since_pos = vec![1u64; n];
    let mut bef = vec![vec![0u64; n]; n];
    let mut since_pair = vec![vec![1u64; n]; n];
    for t in 1..=samples {
        if let Some(k) = s.step_slot(p) {
            // Before the step, `b` sat at `k` and `a` at `k + 1`.
            let (b, a) = (s.current[k + 1], s.current[k]);
            occ[b][k] += t - since_pos[b];
            occ[a][k + 1] += t - since_pos[a];
            since_pos[a] = t;
            since_pos[b] = t;
            bef[b][a] += t - since_pair[b][a];
            since_pair[a][b] = t;
            since_pair[b][a] = t;
        }
    }
    let end = samples + 1;
    for x in 0..n {
        occ[x][s.position[x]] += end - since_pos[x];
        for y in 0..n {
            if x != y && s.position[x] < s.position[y] {
                bef[x][y] += end - since_pair[x][y];
            }
        }
    }
    let scale = |v: Vec<Vec<u64>>| -> Vec<Vec<f64>> {
        v.into_iter()
            .map(|row| row.into_iter().map(|c| c as f64 / samples as f64).collect())
            .collect()
    };
    Ok(McMarginals {
        samples,
        before: scale(bef),
        position: scale(occ),
    })
}

/// `count` states spaced `thin` steps apart after burn-in.
pub fn sample_extensions_mc(
    p: &Poset,
    count: usize,
    burn_in: Option<u64>,
    thin: Option<u64>,
    seed: u64,
) -> Vec<Vec<usize>> {
    let n = p.len() as u64;
    let mut s = ChainState::new(p, seed);
    s.run(p, burn_in.unwrap_or_else(|| default_burn_in(p.len())));
    let thin = thin.unwrap_or((n * n).max(1));
    (0..count)
        .map(|_| {
            s.run(p, thin);
            s.current.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antichain, chain, chain_plus_point};

    #[test]
    fn chain_never_moves() {
        let p = chain(6);
        let mut s = ChainState::new(&p, 1);
        let start = s.current.clone();
        for _ in 0..1000 {
            assert!(!s.step(&p));
        }
        assert_eq!(s.current, start);
        assert_eq!(s.steps, 1000);
    }

    #[test]
    fn two_antichain_swap_rate() {
        // One adjacent slot, always incomparable: swaps happen exactly when
        // the lazy coin says move.
        let p = antichain(2);
        let mut s = ChainState::new(&p, 5);
        let trials = 200_000;
        let swaps = (0..trials).filter(|_| s.step(&p)).count();
        let rate = swaps as f64 / trials as f64;
        assert!((rate - 0.5).abs() < 0.01, "{rate}");
    }

    #[test]
    fn accepted_swaps_keep_extension() {
        let p = crate::generators::random_poset(9, 0.3, 8);
        let mut s = ChainState::new(&p, 2);
        for _ in 0..5000 {
            let before = s.current.clone();
            if s.step(&p) {
                let k = (0..8).find(|&k| before[k] != s.current[k]).unwrap();
                assert!(p.incomparable(before[k], before[k + 1]));
            }
            assert!(is_extension(&p, &s.current));
        }
    }

    #[test]
    fn pair_estimates() {
        let p = chain_plus_point(3).unwrap();
        let est = estimate_pair_probability(&p, 0, 1, 100_000, None, 3).unwrap();
        assert!((est.estimate - 1.0 / 3.0).abs() < 0.02, "{est:?}");
        let est = estimate_pair_probability(&antichain(2), 0, 1, 100_000, None, 3).unwrap();
        assert!((est.estimate - 0.5).abs() < 0.02);
        assert!(matches!(
            estimate_pair_probability(&chain(3), 0, 2, 10, None, 0),
            Err(Error::ComparablePair(..))
        ));
    }

    #[test]
    fn determinism() {
        let p = chain_plus_point(5).unwrap();
        let a = estimate_pair_probability(&p, 0, 2, 5000, Some(100), 9).unwrap();
        let b = estimate_pair_probability(&p, 0, 2, 5000, Some(100), 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn marginals_match_direct_estimators() {
        let p = crate::generators::random_poset(6, 0.3, 12);
        let m = estimate_marginals(&p, 20_000, Some(500), 6).unwrap();
        for x in 0..p.len() {
            let d = estimate_position_distribution(&p, x, 20_000, Some(500), 6).unwrap();
            for k in 0..p.len() {
                assert!((m.position[x][k] - to_f64(&d.probs[k])).abs() < 1e-12);
            }
            for y in 0..p.len() {
                if p.incomparable(x, y) {
                    let e = estimate_pair_probability(&p, x, y, 20_000, Some(500), 6).unwrap();
                    assert!((m.before[x][y] - e.estimate).abs() < 1e-12);
                    assert!((m.before[x][y] + m.before[y][x] - 1.0).abs() < 1e-12);
                } else if p.lt(x, y) {
                    assert_eq!(m.before[x][y], 1.0);
                }
            }
        }
    }

    #[test]
    fn tv_chain_and_antichain() {
        assert_eq!(tv_distance_diagnostic(&chain(4), 2, 1000, None, 0).unwrap(), 0.0);
        let tv = tv_distance_diagnostic(&antichain(5), 0, 100_000, Some(25_000), 4).unwrap();
        assert!(tv < 0.02, "{tv}");
    }
}

//! Constructors for the poset families used as examples and test corpora.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{grid_poset, is_convex_in_grid, GridKind, GridShape};
use crate::poset::Poset;

/// Cell budget for `grid_ideal`.
pub const DEFAULT_GRID_BUDGET: usize = 1_000_000;

fn labelled(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn chain(n: usize) -> Poset {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Poset::from_relations(labelled("c", n), &pairs).expect("chain")
}

pub fn antichain(n: usize) -> Poset {
    Poset::from_relations(labelled("a", n), &[]).expect("antichain")
}

/// An isolated point `p` (element 0) next to a chain `c1 < … < c(n-1)`.
pub fn chain_plus_point(n: usize) -> Result<Poset> {
    if n < 2 {
        return Err(Error::DomainError("chain_plus_point needs n >= 2".into()));
    }
    let mut labels = vec!["p".to_string()];
    labels.extend(labelled("c", n - 1));
    let pairs: Vec<_> = (2..n).map(|i| (i - 1, i)).collect();
    Poset::from_relations(labels, &pairs)
}

/// `x1 < … < xn` and `y1 < … < yn` with no relations across.
pub fn two_equal_chains(n: usize) -> Poset {
    let mut labels = labelled("x", n);
    labels.extend(labelled("y", n));
    let mut pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    pairs.extend((1..n).map(|i| (n + i - 1, n + i)));
    Poset::from_relations(labels, &pairs).expect("two chains")
}

fn check_partition(parts: &[u32]) -> Result<Vec<u32>> {
    let trimmed: Vec<u32> = parts.iter().copied().filter(|&v| v > 0).collect();
    if trimmed.len() != parts.iter().take_while(|&&v| v > 0).count() {
        return Err(Error::NotAPartition(format!("{parts:?} has interior zeros")));
    }
    if trimmed.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotAPartition(format!("{parts:?} is not nonincreasing")));
    }
    Ok(trimmed)
}

/// Cells `(row, col)` of the Young diagram of `lambda` (English notation).
pub fn young_diagram(lambda: &[u32]) -> Result<(GridShape, Poset)> {
    skew_diagram(lambda, &[])
}

/// Cells of `lambda` outside `mu`.
pub fn skew_diagram(lambda: &[u32], mu: &[u32]) -> Result<(GridShape, Poset)> {
    let lambda = check_partition(lambda)?;
    let mu = check_partition(mu)?;
    if mu.len() > lambda.len() || mu.iter().zip(&lambda).any(|(m, l)| m > l) {
        return Err(Error::NotAPartition(format!(
            "{mu:?} is not contained in {lambda:?}"
        )));
    }
    let mut cells = Vec::new();
    for (r, &len) in lambda.iter().enumerate() {
        let start = mu.get(r).copied().unwrap_or(0);
        for c in start + 1..=len {
            cells.push(vec![r as u32 + 1, c]);
        }
    }
    let kind = if mu.is_empty() {
        GridKind::Ideal
    } else {
        GridKind::Convex
    };
    let poset = grid_poset(&cells);
    Ok((
        GridShape {
            dim: 2,
            cells,
            kind,
        },
        poset,
    ))
}

/// All partitions of `n`, each nonincreasing, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(cap)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Downward closure of `generators` in `N^d`.
pub fn grid_ideal(dim: usize, generators: &[Vec<u32>]) -> Result<(GridShape, Poset)> {
    grid_ideal_with_budget(dim, generators, DEFAULT_GRID_BUDGET)
}

pub fn grid_ideal_with_budget(
    dim: usize,
    generators: &[Vec<u32>],
    budget: usize,
) -> Result<(GridShape, Poset)> {
    if dim == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    let mut volume = 0usize;
    for (index, g) in generators.iter().enumerate() {
        if g.len() != dim {
            return Err(Error::ArityMismatch {
                index,
                expected: dim,
                found: g.len(),
            });
        }
        if g.contains(&0) {
            return Err(Error::DomainError("generators must be positive".into()));
        }
        let v = g
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c as usize))
            .unwrap_or(usize::MAX);
        volume = volume.saturating_add(v);
        if volume > budget {
            return Err(Error::SizeBudgetExceeded { budget });
        }
    }
    let mut cells: BTreeSet<Vec<u32>> = BTreeSet::new();
    for g in generators {
        let mut p = vec![1u32; dim];
        'boxed: loop {
            cells.insert(p.clone());
            let mut i = 0;
            loop {
                if i == dim {
                    break 'boxed;
                }
                p[i] += 1;
                if p[i] <= g[i] {
                    break;
                }
                p[i] = 1;
                i += 1;
            }
        }
    }
    let cells: Vec<Vec<u32>> = cells.into_iter().collect();
    let poset = grid_poset(&cells);
    Ok((
        GridShape {
            dim,
            cells,
            kind: GridKind::Ideal,
        },
        poset,
    ))
}

/// The ideal generated by `ℓ e_i` (1-based: `ℓ` in coordinate `i`, `1`
/// elsewhere): `d` chains of length `ℓ` glued at the origin cell, so
/// `|P| = d(ℓ - 1) + 1`.
pub fn tripod(dim: usize, arm: u32) -> Result<(GridShape, Poset)> {
    if arm == 0 {
        return Err(Error::DomainError("arm length must be positive".into()));
    }
    let gens: Vec<Vec<u32>> = (0..dim)
        .map(|i| {
            let mut g = vec![1; dim];
            g[i] = arm;
            g
        })
        .collect();
    grid_ideal(dim, &gens)
}

/// Convex family attaining `π(P) = |P|/2 - 1`: the points `(x, t)` with `x`
/// taking two values one step apart and `t <= |P|/2`, realized in `N^2` as
/// the `2 x (size/2)` rectangle.
pub fn tightness_example_a(size: usize) -> Result<(GridShape, Poset)> {
    if size < 4 || size % 2 != 0 {
        return Err(Error::DomainError(format!(
            "tightness example needs an even size >= 4, got {size}"
        )));
    }
    let k = (size / 2) as u32;
    let cells: Vec<Vec<u32>> = (1..=2u32)
        .flat_map(|x| (1..=k).map(move |t| vec![x, t]))
        .collect();
    let report = is_convex_in_grid(&cells)?;
    Ok((
        GridShape {
            dim: 2,
            cells,
            kind: report.kind(),
        },
        report.poset,
    ))
}

/// Random order: shuffle `0..n`, then add each forward pair of the shuffled
/// sequence independently with probability `edge_prob`, and close.
pub fn random_poset(n: usize, edge_prob: f64, seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poset_from(n, edge_prob, &mut rng)
}

pub fn random_poset_from<R: Rng + ?Sized>(n: usize, edge_prob: f64, rng: &mut R) -> Poset {
    let p = edge_prob.clamp(0.0, 1.0);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    Poset::from_relations(labelled("v", n), &pairs).expect("forward pairs are acyclic")
}

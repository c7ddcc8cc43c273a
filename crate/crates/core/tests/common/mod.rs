//! Brute-force references: everything here enumerates permutations or
//! subsets directly and shares no code with the lattice engine.

#![allow(dead_code)]

use linext::Poset;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn respects(p: &Poset, order: &[usize]) -> bool {
    let mut pos = vec![0; order.len()];
    for (k, &x) in order.iter().enumerate() {
        pos[x] = k;
    }
    (0..p.len()).all(|x| (0..p.len()).all(|y| !p.lt(x, y) || pos[x] < pos[y]))
}

pub fn extensions(p: &Poset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_permutation(p.len(), |o| {
        if respects(p, o) {
            out.push(o.to_vec());
        }
    });
    out.sort();
    out
}

pub struct Brute {
    pub count: u64,
    /// `position[x][k]`: extensions with `x` at 0-based position `k`.
    pub position: Vec<Vec<u64>>,
    /// `before[x][y]`: extensions with `x` before `y`.
    pub before: Vec<Vec<u64>>,
}

pub fn brute(p: &Poset) -> Brute {
    let n = p.len();
    let mut b = Brute {
        count: 0,
        position: vec![vec![0; n]; n],
        before: vec![vec![0; n]; n],
    };
    for o in extensions(p) {
        b.count += 1;
        for (k, &x) in o.iter().enumerate() {
            b.position[x][k] += 1;
            for &y in &o[k + 1..] {
                b.before[x][y] += 1;
            }
        }
    }
    b
}

pub fn frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigUint::from(num).into(), BigUint::from(den).into())
}

/// Largest antichain by subset enumeration.
pub fn brute_width(p: &Poset) -> usize {
    let n = p.len();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n).all(|x| {
                s >> x & 1 == 0 || (0..n).all(|y| s >> y & 1 == 0 || x == y || p.incomparable(x, y))
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn brute_pi(p: &Poset, x: usize) -> usize {
    (0..p.len()).filter(|&y| y != x && p.incomparable(x, y)).count()
}

/// Random poset from a random set of forward pairs over a shuffled order.
pub fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                proptest::collection::vec(any::<u32>(), n).prop_map(|keys| {
                    let mut perm: Vec<usize> = (0..keys.len()).collect();
                    perm.sort_by_key(|&i| (keys[i], i));
                    perm
                }),
                proptest::collection::vec(proptest::bool::weighted(0.3), pairs),
            )
        })
        .prop_map(|(n, perm, mask)| {
            let mut rel = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if mask[k] {
                        rel.push((perm[a], perm[b]));
                    }
                    k += 1;
                }
            }
            let labels = (0..n).map(|i| format!("e{i}")).collect();
            Poset::from_relations(labels, &rel).expect("acyclic by construction")
        })
}

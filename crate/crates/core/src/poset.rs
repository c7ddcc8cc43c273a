//! Finite posets: construction, closure and reduction, and structural queries.
//!
//! Elements are addressed by their index in `0..n`; labels are only used at
//! the edges (file formats, reports). The strict order is stored as a dense
//! transitively closed boolean matrix.

use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    lt: Vec<bool>,
    covers: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds the poset generated by `covers` (any generating relation is
    /// accepted; the stored covers are recomputed as the transitive reduction).
    pub fn from_covers<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            pairs.push((ia, ib));
        }
        Self::from_relations(labels, &pairs)
    }

    /// Builds the poset whose order is the transitive closure of `pairs`
    /// (given as `(lower, upper)` element indices).
    pub fn from_relations(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let index = index_labels(&labels)?;
        let mut lt = vec![false; n * n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(Error::CycleDetected(labels[a].clone()));
            }
            lt[a * n + b] = true;
        }
        close(&mut lt, n);
        if let Some(x) = (0..n).find(|&x| lt[x * n + x]) {
            return Err(Error::CycleDetected(labels[x].clone()));
        }
        let covers = reduction(&lt, n);
        Ok(Poset {
            labels,
            index,
            lt,
            covers,
        })
    }

    pub fn empty() -> Self {
        Self::from_relations(Vec::new(), &[]).expect("empty poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub(crate) fn check_elem(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("#{x}")))
        }
    }

    /// `x < y` in the strict order.
    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.lt[x * self.len() + y]
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.lt(x, y) || self.lt(y, x)
    }

    #[inline]
    pub fn incomparable(&self, x: usize, y: usize) -> bool {
        x != y && !self.comparable(x, y)
    }

    /// Cover pairs `(lower, upper)` of the transitive reduction.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == x).map(|c| c.0)
    }

    /// All strictly comparable pairs `(lower, upper)`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| self.comparable(a, b)))
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.lt(y, x)).collect()
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.lt(x, y)).collect()
    }

    pub fn is_ideal(&self, set: &[usize]) -> bool {
        let member = self.membership(set);
        set.iter()
            .all(|&y| (0..self.len()).all(|x| !self.lt(x, y) || member[x]))
    }

    pub fn is_filter(&self, set: &[usize]) -> bool {
        let member = self.membership(set);
        set.iter()
            .all(|&x| (0..self.len()).all(|y| !self.lt(x, y) || member[y]))
    }

    /// `max(S)`: elements of `set` with nothing in `set` above them.
    pub fn maximal(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&x| set.iter().all(|&y| !self.lt(x, y)))
            .collect()
    }

    pub fn minimal(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&x| set.iter().all(|&y| !self.lt(y, x)))
            .collect()
    }

    fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        for &x in set {
            member[x] = true;
        }
        member
    }

    /// The poset with every relation reversed.
    pub fn dual(&self) -> Poset {
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        Poset::from_relations(self.labels.clone(), &pairs).expect("dual of a poset is a poset")
    }

    /// Induced subposet on `elems`, keeping the given element order.
    pub fn subposet(&self, elems: &[usize]) -> Result<Poset> {
        for &x in elems {
            self.check_elem(x)?;
        }
        let labels = elems.iter().map(|&x| self.labels[x].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                if self.lt(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        Poset::from_relations(labels, &pairs)
    }

    pub fn subposet_by_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Poset> {
        let elems = labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.subposet(&elems)
    }

    /// `self + other`: no relations across. Colliding labels from `other`
    /// get primes appended until unique.
    pub fn disjoint_sum(&self, other: &Poset) -> Poset {
        let offset = self.len();
        let mut labels = self.labels.clone();
        let mut taken: std::collections::HashSet<String> = labels.iter().cloned().collect();
        for l in &other.labels {
            let mut name = l.clone();
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            labels.push(name);
        }
        let mut pairs = self.covers.clone();
        pairs.extend(other.covers.iter().map(|&(a, b)| (a + offset, b + offset)));
        Poset::from_relations(labels, &pairs).expect("disjoint sum of posets is a poset")
    }

    /// Adds the precedences `(u, v)` (u below v) and closes; `None` when this
    /// would create a cycle.
    pub fn augment(&self, extra: &[(usize, usize)]) -> Option<Poset> {
        let mut pairs = self.covers.clone();
        pairs.extend_from_slice(extra);
        Poset::from_relations(self.labels.clone(), &pairs).ok()
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Warshall closure of an `n x n` relation.
pub(crate) fn close(lt: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if lt[i * n + k] {
                for j in 0..n {
                    if lt[k * n + j] {
                        lt[i * n + j] = true;
                    }
                }
            }
        }
    }
}

fn reduction(lt: &[bool], n: usize) -> Vec<(usize, usize)> {
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt[a * n + b] && !(0..n).any(|z| lt[a * n + z] && lt[z * n + b]) {
                covers.push((a, b));
            }
        }
    }
    covers
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparabilityProfile {
    /// `Π(x)`: elements incomparable to `x`.
    pub incomparable: Vec<Vec<usize>>,
    /// `π(x) = |Π(x)|`.
    pub pi: Vec<usize>,
    pub pi_max: usize,
    pub width: usize,
    /// A maximum antichain.
    pub antichain: Vec<usize>,
}

impl ComparabilityProfile {
    /// Element attaining `π(P)` (smallest index on ties).
    pub fn argmax_pi(&self) -> Option<usize> {
        (0..self.pi.len()).find(|&x| self.pi[x] == self.pi_max)
    }
}

/// Incomparability data plus width. The width is computed through Dilworth:
/// a maximum matching in the split graph `x_left -> y_right` for `x < y`
/// gives a minimum chain cover of size `n - |M|`, and König's construction
/// turns the matching into an antichain of the same size.
pub fn comparability_profile(p: &Poset) -> ComparabilityProfile {
    let n = p.len();
    let incomparable: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| p.incomparable(x, y)).collect())
        .collect();
    let pi: Vec<usize> = incomparable.iter().map(Vec::len).collect();
    let pi_max = pi.iter().copied().max().unwrap_or(0);

    let adj: Vec<Vec<usize>> = (0..n).map(|x| p.up_set(x)).collect();
    let (match_left, match_right) = max_matching(&adj, n);

    // Alternating reachability from unmatched left vertices.
    let mut seen_left = vec![false; n];
    let mut seen_right = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&x| match_left[x].is_none()).collect();
    for &x in &queue {
        seen_left[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen_right[y] {
                seen_right[y] = true;
                if let Some(x2) = match_right[y] {
                    if !seen_left[x2] {
                        seen_left[x2] = true;
                        queue.push_back(x2);
                    }
                }
            }
        }
    }
    let antichain: Vec<usize> = (0..n).filter(|&x| seen_left[x] && !seen_right[x]).collect();
    let matched = match_left.iter().filter(|m| m.is_some()).count();
    let width = n - matched;
    debug_assert_eq!(antichain.len(), width);

    ComparabilityProfile {
        incomparable,
        pi,
        pi_max,
        width,
        antichain,
    }
}

/// Kuhn's augmenting-path matching; returns (left -> right, right -> left).
fn max_matching(adj: &[Vec<usize>], n_right: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    fn augment(
        x: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        match_left: &mut [Option<usize>],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &y in &adj[x] {
            if visited[y] {
                continue;
            }
            visited[y] = true;
            let free = match match_right[y] {
                None => true,
                Some(x2) => augment(x2, adj, visited, match_left, match_right),
            };
            if free {
                match_left[x] = Some(y);
                match_right[y] = Some(x);
                return true;
            }
        }
        false
    }

    let mut match_left = vec![None; adj.len()];
    let mut match_right = vec![None; n_right];
    for x in 0..adj.len() {
        let mut visited = vec![false; n_right];
        augment(x, adj, &mut visited, &mut match_left, &mut match_right);
    }
    (match_left, match_right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSearch {
    Exact,
    Greedy,
}

/// Default size limit for the exhaustive incomparable-pair search.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncomparablePair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub product: usize,
    /// `product / best product`, when the best is known.
    #[serde(skip)]
    pub mu: Option<Ratio<usize>>,
}

/// An incomparable pair `(A, B)` with `|B| >= |A|`.
///
/// `Exact` maximizes `|A||B|` over all incomparable pairs (ties: larger `|B|`,
/// then lexicographically smallest `A`). `Greedy` starts from the element of
/// largest `π(x)` with `B = Π(x)` and keeps adding the element to `A` that
/// most increases the product, with `B` always the common incomparable set
/// of `A`; the result is a maximal pair.
pub fn max_incomparable_pair(p: &Poset, mode: PairSearch) -> Result<IncomparablePair> {
    max_incomparable_pair_with_limit(p, mode, EXHAUSTIVE_PAIR_LIMIT)
}

pub fn max_incomparable_pair_with_limit(
    p: &Poset,
    mode: PairSearch,
    limit: usize,
) -> Result<IncomparablePair> {
    if p.is_chain() {
        return Err(Error::NotApplicable("poset is a chain".into()));
    }
    let n = p.len();
    let exact = if n <= limit.min(64) {
        Some(exact_pair(p))
    } else {
        None
    };
    match mode {
        PairSearch::Exact => exact.ok_or_else(|| {
            Error::NotApplicable(format!("exact pair search limited to n <= {}", limit.min(64)))
        }),
        PairSearch::Greedy => {
            let mut pair = greedy_pair(p);
            pair.mu = exact.map(|e| Ratio::new(pair.product, e.product));
            Ok(pair)
        }
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn exact_pair(p: &Poset) -> IncomparablePair {
    let n = p.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let nbr: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| p.incomparable(x, y))
                .fold(0u64, |m, y| m | 1 << y)
        })
        .collect();

    struct Best {
        product: usize,
        b_len: usize,
        a: Vec<usize>,
        b_mask: u64,
    }
    fn better(best: &Best, product: usize, b_len: usize, a: &[usize]) -> bool {
        (product, b_len) > (best.product, best.b_len)
            || ((product, b_len) == (best.product, best.b_len) && a < best.a.as_slice())
    }
    fn walk(next: usize, a: &mut Vec<usize>, common: u64, nbr: &[u64], best: &mut Best) {
        for x in next..nbr.len() {
            let c = common & nbr[x];
            if c == 0 {
                continue;
            }
            a.push(x);
            let b_len = c.count_ones() as usize;
            if a.len() <= b_len && better(best, a.len() * b_len, b_len, a) {
                *best = Best {
                    product: a.len() * b_len,
                    b_len,
                    a: a.clone(),
                    b_mask: c,
                };
            }
            // |A| can grow by at most the remaining candidates and |B| only shrinks.
            let room = a.len() + (nbr.len() - x - 1);
            if room * b_len >= best.product {
                walk(x + 1, a, c, nbr, best);
            }
            a.pop();
        }
    }

    let mut best = Best {
        product: 0,
        b_len: 0,
        a: Vec::new(),
        b_mask: 0,
    };
    walk(0, &mut Vec::new(), full, &nbr, &mut best);
    IncomparablePair {
        a: best.a,
        b: bits(best.b_mask),
        product: best.product,
        mu: Some(Ratio::new(1, 1)),
    }
}

fn greedy_pair(p: &Poset) -> IncomparablePair {
    let n = p.len();
    let profile = comparability_profile(p);
    let seed = profile.argmax_pi().expect("non-chain poset has an element");
    let mut a = vec![seed];
    let mut b: Vec<usize> = profile.incomparable[seed].clone();
    loop {
        let mut step: Option<(usize, usize, Vec<usize>)> = None;
        for z in 0..n {
            if a.contains(&z) || b.contains(&z) {
                continue;
            }
            let nb: Vec<usize> = b.iter().copied().filter(|&y| p.incomparable(z, y)).collect();
            let prod = (a.len() + 1) * nb.len();
            if prod > a.len() * b.len() && step.as_ref().map_or(true, |s| prod > s.1) {
                step = Some((z, prod, nb));
            }
        }
        match step {
            Some((z, _, nb)) => {
                a.push(z);
                b = nb;
            }
            None => break,
        }
    }
    a.sort_unstable();
    if a.len() > b.len() || (a.len() == b.len() && b < a) {
        std::mem::swap(&mut a, &mut b);
    }
    IncomparablePair {
        product: a.len() * b.len(),
        a,
        b,
        mu: None,
    }
}

//! Balance constants, position variance, mode mass and tail checks derived
//! from exact extension marginals.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DownsetLattice, PositionDistribution};
use crate::poset::Poset;
use crate::ratio::{from_int, to_f64, RationalRepr};

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    /// `P(x ≺ y)` for every ordered pair.
    pub before: Vec<Vec<BigRational>>,
    /// `δ_xy = min(P(x ≺ y), P(y ≺ x))`; zero for comparable pairs and on the diagonal.
    pub delta_xy: Vec<Vec<BigRational>>,
    pub delta_x: Vec<BigRational>,
    pub delta: BigRational,
    /// First pair `(x, y)`, `x < y` by index, attaining `δ(P)`.
    pub witness: (usize, usize),
}

impl BalanceReport {
    pub fn from_lattice(lat: &DownsetLattice) -> Result<Self> {
        let p = lat.poset();
        if p.is_chain() {
            return Err(Error::NotApplicable("poset is a chain".into()));
        }
        let n = p.len();
        let before = lat.precedence_probabilities();
        let mut delta_xy = vec![vec![BigRational::zero(); n]; n];
        for x in 0..n {
            for y in 0..n {
                if p.incomparable(x, y) {
                    delta_xy[x][y] = before[x][y].clone().min(before[y][x].clone());
                }
            }
        }
        let delta_x: Vec<BigRational> = delta_xy
            .iter()
            .map(|row| row.iter().cloned().max().unwrap_or_else(BigRational::zero))
            .collect();
        let mut best: Option<((usize, usize), &BigRational)> = None;
        for x in 0..n {
            for y in x + 1..n {
                if p.incomparable(x, y) && best.map_or(true, |(_, d)| delta_xy[x][y] > *d) {
                    best = Some(((x, y), &delta_xy[x][y]));
                }
            }
        }
        let (witness, delta) = best.expect("non-chain has an incomparable pair");
        let delta = delta.clone();
        Ok(BalanceReport {
            before,
            delta_xy,
            delta_x,
            delta,
            witness,
        })
    }
}

pub fn balance(p: &Poset) -> Result<BalanceReport> {
    if p.is_chain() {
        return Err(Error::NotApplicable("poset is a chain".into()));
    }
    BalanceReport::from_lattice(&DownsetLattice::build(p)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionStatistics {
    pub element: usize,
    pub mean: BigRational,
    pub variance: BigRational,
    pub stddev: f64,
    /// `q(x) = max_k P(f(x) = k)`.
    pub q: BigRational,
}

impl PositionStatistics {
    pub fn from_distribution(d: &PositionDistribution) -> Self {
        let variance = variance(&d.probs);
        PositionStatistics {
            element: d.element,
            mean: d.mean.clone(),
            stddev: to_f64(&variance).sqrt(),
            q: d.probs.iter().cloned().max().unwrap_or_else(BigRational::zero),
            variance,
        }
    }

    /// `σ(x) q(x)`.
    pub fn sigma_q(&self) -> f64 {
        self.stddev * to_f64(&self.q)
    }
}

/// Variance of a law on `1..=len` given by `probs`.
pub fn variance(probs: &[BigRational]) -> BigRational {
    let mut m1 = BigRational::zero();
    let mut m2 = BigRational::zero();
    for (i, p) in probs.iter().enumerate() {
        let k = from_int(i as i64 + 1);
        m1 += p * &k;
        m2 += p * &k * &k;
    }
    let v = m2 - &m1 * &m1;
    debug_assert!(!v.is_negative());
    v
}

pub fn position_statistics(p: &Poset, x: usize) -> Result<PositionStatistics> {
    p.check_elem(x)?;
    let d = DownsetLattice::build(p)?.position_distribution(x)?;
    Ok(PositionStatistics::from_distribution(&d))
}

pub fn sigma_q_product(p: &Poset, x: usize) -> Result<f64> {
    Ok(position_statistics(p, x)?.sigma_q())
}

/// `σ(P)` as `(variance, argmax)` over all elements.
pub fn max_variance(lat: &DownsetLattice) -> Option<(BigRational, usize)> {
    let mut best: Option<(BigRational, usize)> = None;
    for d in lat.position_distributions() {
        let v = variance(&d.probs);
        if best.as_ref().map_or(true, |b| v > b.0) {
            best = Some((v, d.element));
        }
    }
    best
}

/// `(P(X >= c), P(X <= c))` for a law `probs[k]` on `offset + k`.
pub fn tail_probabilities(
    probs: &[BigRational],
    offset: i64,
    center: &BigRational,
) -> (BigRational, BigRational) {
    let mut upper = BigRational::zero();
    let mut lower = BigRational::zero();
    for (i, p) in probs.iter().enumerate() {
        let v = from_int(offset + i as i64);
        if &v >= center {
            upper += p;
        }
        if &v <= center {
            lower += p;
        }
    }
    (upper, lower)
}

/// `(P(f(x) >= E f(x)), P(f(x) <= E f(x)))`.
pub fn grunbaum_check(p: &Poset, x: usize) -> Result<(BigRational, BigRational)> {
    p.check_elem(x)?;
    let d = DownsetLattice::build(p)?.position_distribution(x)?;
    Ok(tail_probabilities(&d.probs, 1, &d.mean))
}

/// `(1/|A|) Σ_{x∈A} σ²(x)`.
pub fn average_variance(p: &Poset, set: &[usize]) -> Result<BigRational> {
    if set.is_empty() {
        return Err(Error::DomainError("average over an empty set".into()));
    }
    for &x in set {
        p.check_elem(x)?;
    }
    let lat = DownsetLattice::build(p)?;
    average_variance_in(&lat, set)
}

pub fn average_variance_in(lat: &DownsetLattice, set: &[usize]) -> Result<BigRational> {
    let dists = lat.position_distributions();
    let mut sum = BigRational::zero();
    for &x in set {
        lat.poset().check_elem(x)?;
        sum += variance(&dists[x].probs);
    }
    Ok(sum / from_int(set.len() as i64))
}

/// Serializable summary of a poset's balance and variance data.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub elements: usize,
    pub extensions: String,
    pub width: usize,
    pub pi: usize,
    pub delta: Option<RationalRepr>,
    pub delta_witness: Option<(String, String)>,
    pub sigma: f64,
    pub variance: RationalRepr,
    pub sigma_argmax: Option<String>,
    pub per_element: Option<Vec<ElementRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementRow {
    pub label: String,
    pub pi: usize,
    pub mean: RationalRepr,
    pub variance: RationalRepr,
    pub q: RationalRepr,
    pub delta_x: RationalRepr,
}

impl SummaryReport {
    pub fn from_lattice(lat: &DownsetLattice, full: bool) -> Self {
        let p = lat.poset();
        let profile = crate::poset::comparability_profile(p);
        let balance = BalanceReport::from_lattice(lat).ok();
        let dists = lat.position_distributions();
        let stats: Vec<PositionStatistics> =
            dists.iter().map(PositionStatistics::from_distribution).collect();
        let argmax = stats
            .iter()
            .fold(None::<&PositionStatistics>, |best, s| match best {
                Some(b) if b.variance >= s.variance => Some(b),
                _ => Some(s),
            });
        let variance = argmax.map_or_else(BigRational::zero, |s| s.variance.clone());
        let per_element = full.then(|| {
            stats
                .iter()
                .map(|s| ElementRow {
                    label: p.label(s.element).to_string(),
                    pi: profile.pi[s.element],
                    mean: (&s.mean).into(),
                    variance: (&s.variance).into(),
                    q: (&s.q).into(),
                    delta_x: RationalRepr::from(
                        &balance
                            .as_ref()
                            .map_or_else(BigRational::zero, |b| b.delta_x[s.element].clone()),
                    ),
                })
                .collect()
        });
        SummaryReport {
            elements: p.len(),
            extensions: lat.extension_count().to_string(),
            width: profile.width,
            pi: profile.pi_max,
            delta: balance.as_ref().map(|b| (&b.delta).into()),
            delta_witness: balance.as_ref().map(|b| {
                (
                    p.label(b.witness.0).to_string(),
                    p.label(b.witness.1).to_string(),
                )
            }),
            sigma: to_f64(&variance).sqrt(),
            variance: (&variance).into(),
            sigma_argmax: argmax.map(|s| p.label(s.element).to_string()),
            per_element,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antichain, chain, chain_plus_point};
    use crate::ratio::small;
    use num_traits::One;

    #[test]
    fn antichain_balance() {
        let b = balance(&antichain(2)).unwrap();
        assert_eq!(b.delta, small(1, 2));
    }

    #[test]
    fn two_plus_one_balance() {
        let p = chain_plus_point(3).unwrap();
        let b = balance(&p).unwrap();
        assert_eq!(b.delta, small(1, 3));
        assert_eq!(b.witness, (0, 1));
        assert_eq!(p.label(b.witness.0), "p");
        assert_eq!(p.label(b.witness.1), "c1");
    }

    #[test]
    fn chain_balance_not_applicable() {
        assert!(matches!(balance(&chain(4)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn chain_element_statistics() {
        let s = position_statistics(&chain(5), 3).unwrap();
        assert!(s.variance.is_zero());
        assert!(s.q.is_one());
        assert_eq!(s.sigma_q(), 0.0);
    }

    #[test]
    fn isolated_point_statistics() {
        for n in 2..=8i64 {
            let p = chain_plus_point(n as usize).unwrap();
            let s = position_statistics(&p, 0).unwrap();
            assert_eq!(s.variance, small(n * n - 1, 12));
            assert_eq!(s.q, small(1, n));
        }
        let s = position_statistics(&chain_plus_point(3).unwrap(), 0).unwrap();
        assert_eq!(s.variance, small(2, 3));
    }

    #[test]
    fn grunbaum_on_point() {
        let (up, down) = grunbaum_check(&chain_plus_point(3).unwrap(), 0).unwrap();
        assert_eq!((up, down), (small(2, 3), small(2, 3)));
    }

    #[test]
    fn average_variance_errors_and_chain() {
        assert!(average_variance(&chain(3), &[1]).unwrap().is_zero());
        assert!(average_variance(&chain(3), &[]).is_err());
        assert!(matches!(
            average_variance(&chain(3), &[9]),
            Err(Error::UnknownElement(_))
        ));
    }

    #[test]
    fn tails_of_unit_mass() {
        let (u, l) = tail_probabilities(&[from_int(1)], 3, &from_int(3));
        assert!(u.is_one() && l.is_one());
    }
}

//! Unidirectional two-chain posets `X ⊔ Y` with cross relations `x_i < y_j`,
//! the sandwich events `Ψ`/`Φ`, the statistic `g`, and the bounds built on
//! them.
//!
//! Indices follow the usual convention: `x_i` for `1 <= i <= m`, `y_j` for
//! `1 <= j <= n`. As poset elements, `x_i` is `i - 1` and `y_j` is `m + j - 1`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{conditional_in, DownsetLattice, EventSpec};
use crate::poset::Poset;
use crate::ratio::{from_int, ratio, small};
use crate::stats::tail_probabilities;

/// On-disk form: `{"m": m, "n": n, "cross": [[i, j], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoChainSpec {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub cross: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoChainPoset {
    pub m: usize,
    pub n: usize,
    /// Sorted, deduplicated generating relations `(i, j)` meaning `x_i < y_j`.
    pub cross: Vec<(usize, usize)>,
    pub poset: Poset,
}

pub fn make_two_chain(m: usize, n: usize, cross: &[(usize, usize)]) -> Result<TwoChainPoset> {
    let mut labels: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    labels.extend((1..=n).map(|j| format!("y{j}")));
    let mut pairs: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
    pairs.extend((1..n).map(|j| (m + j - 1, m + j)));
    let mut set = BTreeSet::new();
    for &(i, j) in cross {
        if !(1..=m).contains(&i) || !(1..=n).contains(&j) {
            return Err(Error::IndexOutOfRange(format!(
                "cross pair ({i},{j}) outside [1,{m}]x[1,{n}]"
            )));
        }
        set.insert((i, j));
        pairs.push((i - 1, m + j - 1));
    }
    Ok(TwoChainPoset {
        m,
        n,
        cross: set.into_iter().collect(),
        poset: Poset::from_relations(labels, &pairs)?,
    })
}

impl TwoChainSpec {
    pub fn build(&self) -> Result<TwoChainPoset> {
        let cross: Vec<(usize, usize)> = self.cross.iter().map(|c| (c[0], c[1])).collect();
        make_two_chain(self.m, self.n, &cross)
    }
}

impl From<&TwoChainPoset> for TwoChainSpec {
    fn from(t: &TwoChainPoset) -> Self {
        TwoChainSpec {
            m: t.m,
            n: t.n,
            cross: t.cross.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GStatistic {
    /// `i` of `x_i`.
    pub i: usize,
    /// `probs[g] = P(g(x_i) = g)` for `g = 0..=n`.
    pub probs: Vec<BigRational>,
    pub mean: BigRational,
}

impl TwoChainPoset {
    pub fn free(m: usize, n: usize) -> TwoChainPoset {
        make_two_chain(m, n, &[]).expect("free two-chain")
    }

    pub fn is_free(&self) -> bool {
        self.cross.is_empty()
    }

    pub fn x(&self, i: usize) -> usize {
        debug_assert!((1..=self.m).contains(&i));
        i - 1
    }

    pub fn y(&self, j: usize) -> usize {
        debug_assert!((1..=self.n).contains(&j));
        self.m + j - 1
    }

    fn check_i(&self, i: usize) -> Result<()> {
        if (1..=self.m).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("i = {i} not in [1,{}]", self.m)))
        }
    }

    fn check_j(&self, j: usize) -> Result<()> {
        if (1..=self.n).contains(&j) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("j = {j} not in [1,{}]", self.n)))
        }
    }

    pub fn lattice(&self) -> Result<DownsetLattice> {
        DownsetLattice::build(&self.poset)
    }

    /// `Ψ_{i,j} = {y_j ≺ x_i ≺ y_{j+1}}`, `j ∈ 0..=n`, with the missing
    /// neighbour dropped at either end.
    pub fn psi_event(&self, i: usize, j: usize) -> Result<EventSpec> {
        self.check_i(i)?;
        if j > self.n {
            return Err(Error::IndexOutOfRange(format!("j = {j} not in [0,{}]", self.n)));
        }
        let x = self.x(i);
        let mut req = Vec::new();
        if j >= 1 {
            req.push((self.y(j), x));
        }
        if j < self.n {
            req.push((x, self.y(j + 1)));
        }
        Ok(EventSpec::new(req))
    }

    /// `Φ_{j,i} = {x_i ≺ y_j ≺ x_{i+1}}`, `i ∈ 0..=m`.
    pub fn phi_event(&self, j: usize, i: usize) -> Result<EventSpec> {
        self.check_j(j)?;
        if i > self.m {
            return Err(Error::IndexOutOfRange(format!("i = {i} not in [0,{}]", self.m)));
        }
        let y = self.y(j);
        let mut req = Vec::new();
        if i >= 1 {
            req.push((self.x(i), y));
        }
        if i < self.m {
            req.push((y, self.x(i + 1)));
        }
        Ok(EventSpec::new(req))
    }

    pub fn psi_probability(&self, i: usize, j: usize) -> Result<BigRational> {
        let e = self.psi_event(i, j)?;
        self.lattice()?.event_probability(&e)
    }

    pub fn phi_probability(&self, j: usize, i: usize) -> Result<BigRational> {
        let e = self.phi_event(j, i)?;
        self.lattice()?.event_probability(&e)
    }

    /// Law of `g(x_i) = |{y : y ≺ x_i}|`, read off the position marginal via
    /// `g(x_i) = f(x_i) - i`.
    pub fn g_distribution(&self, i: usize) -> Result<GStatistic> {
        self.check_i(i)?;
        g_from_lattice(self, &self.lattice()?, i)
    }

    pub fn g_distributions(&self) -> Result<Vec<GStatistic>> {
        let lat = self.lattice()?;
        (1..=self.m).map(|i| g_from_lattice(self, &lat, i)).collect()
    }

    pub fn expected_g(&self, i: usize) -> Result<BigRational> {
        Ok(self.g_distribution(i)?.mean)
    }

    /// `(P(g(x_i) >= E g(x_i)), P(g(x_i) <= E g(x_i)))`.
    pub fn grunbaum_g(&self, i: usize) -> Result<(BigRational, BigRational)> {
        let g = self.g_distribution(i)?;
        Ok(tail_probabilities(&g.probs, 0, &g.mean))
    }

    /// `Q = {x_1 … x_{i-1}} ∪ {y_1 … y_j}`: what lies below `x_i` under `Ψ_{i,j}`.
    pub fn psi_block(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        self.check_i(i)?;
        if j > self.n {
            return Err(Error::IndexOutOfRange(format!("j = {j} not in [0,{}]", self.n)));
        }
        let mut q: Vec<usize> = (1..i).map(|a| self.x(a)).collect();
        q.extend((1..=j).map(|b| self.y(b)));
        Ok(q)
    }

    /// Elements strictly between `x_i` and `x_k` under `Ψ_{i,j} ∧ Ψ_{k,ℓ}`
    /// (`i < k`, `j <= ℓ`): `{x_{i+1} … x_{k-1}} ∪ {y_{j+1} … y_ℓ}`.
    pub fn psi_psi_block(&self, i: usize, j: usize, k: usize, l: usize) -> Result<Vec<usize>> {
        self.check_i(i)?;
        self.check_i(k)?;
        if !(i < k && j <= l && l <= self.n) {
            return Err(Error::DomainError(format!(
                "need i < k and j <= l <= n, got ({i},{j}),({k},{l})"
            )));
        }
        let mut q: Vec<usize> = (i + 1..k).map(|a| self.x(a)).collect();
        q.extend((j + 1..=l).map(|b| self.y(b)));
        Ok(q)
    }

    /// Elements strictly between `x_i` and `y_ℓ` under `Ψ_{i,j} ∧ Φ_{ℓ,k}`
    /// (`i <= k`, `j < ℓ`): `{x_{i+1} … x_k} ∪ {y_{j+1} … y_{ℓ-1}}`.
    pub fn psi_phi_block(&self, i: usize, j: usize, l: usize, k: usize) -> Result<Vec<usize>> {
        self.check_i(i)?;
        self.check_j(l)?;
        if !(i <= k && k <= self.m && j < l) {
            return Err(Error::DomainError(format!(
                "need i <= k <= m and j < l, got ({i},{j}),({l},{k})"
            )));
        }
        let mut q: Vec<usize> = (i + 1..=k).map(|a| self.x(a)).collect();
        q.extend((j + 1..l).map(|b| self.y(b)));
        Ok(q)
    }

    /// `{x_i ≺ y_{j+1}} ∧ {y_j ≺ x_{i+1}}`, each part vacuous at the ends.
    pub fn psi_prerequisites(&self, i: usize, j: usize) -> Result<EventSpec> {
        self.check_i(i)?;
        let mut req = Vec::new();
        if j < self.n {
            req.push((self.x(i), self.y(j + 1)));
        }
        if j >= 1 && i < self.m {
            req.push((self.y(j), self.x(i + 1)));
        }
        Ok(EventSpec::new(req))
    }
}

fn g_from_lattice(t: &TwoChainPoset, lat: &DownsetLattice, i: usize) -> Result<GStatistic> {
    let d = lat.position_distribution(t.x(i))?;
    // f(x_i) >= i always, and f(x_i) <= i + n.
    let probs: Vec<BigRational> = (0..=t.n).map(|g| d.probs[g + i - 1].clone()).collect();
    debug_assert!(d.probs[..i - 1].iter().all(Zero::is_zero));
    Ok(GStatistic {
        i,
        mean: &d.mean - from_int(i as i64),
        probs,
    })
}

/// `P(Ψ_{i,j})` for `X + Y` by counting: `C(i+j-1, j) C(m-i+n-j, n-j) / C(m+n, n)`.
pub fn free_psi_closed_form(m: usize, n: usize, i: usize, j: usize) -> BigRational {
    let num = binom(i + j - 1, j) * binom(m - i + n - j, n - j);
    ratio(&num, &binom(m + n, n))
}

fn binom(n: usize, k: usize) -> BigUint {
    binomial(BigUint::from(n), BigUint::from(k))
}

/// `E g(x_i) = i n / (m + 1)` for `X + Y`.
pub fn free_expected_g(m: usize, n: usize, i: usize) -> BigRational {
    small((i * n) as i64, (m + 1) as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bl1Case {
    /// Hypothesis `i < ε j`.
    A,
    /// `P = X + Y` and `m < ε n - 1`.
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bl1Outcome {
    pub bound_holds: bool,
    pub value: BigRational,
}

/// Evaluates `P(Ψ_{i,j})` against `ε` under the chosen hypothesis. With
/// `conditioned`, case A evaluates `P(Ψ_{i,j} | x_i ≺ y_{j+1}, y_j ≺ x_{i+1})`
/// instead, which is exactly `i/(i+j)` on a free poset.
pub fn bl1_margin(
    t: &TwoChainPoset,
    i: usize,
    j: usize,
    eps: &BigRational,
    case: Bl1Case,
    conditioned: bool,
) -> Result<Bl1Outcome> {
    t.check_i(i)?;
    let psi = t.psi_event(i, j)?;
    let hyp = match case {
        Bl1Case::A => from_int(i as i64) < eps * from_int(j as i64),
        Bl1Case::B => {
            if conditioned {
                return Err(Error::DomainError(
                    "conditioning applies to case A only".into(),
                ));
            }
            t.is_free() && from_int(t.m as i64) < eps * from_int(t.n as i64) - BigRational::one()
        }
    };
    if !hyp {
        return Err(Error::HypothesisNotSatisfied(format!(
            "{case:?} at i={i}, j={j}, eps={eps}"
        )));
    }
    let lat = t.lattice()?;
    let value = if conditioned {
        conditional_in(&lat, &psi, &t.psi_prerequisites(i, j)?)?
    } else {
        lat.event_probability(&psi)?
    };
    Ok(Bl1Outcome {
        bound_holds: &value < eps,
        value,
    })
}

/// `P(Ψ_{i,ℓ-1}) / P(Ψ_{i,ℓ})` on `X + Y` three ways.
#[derive(Debug, Clone, PartialEq)]
pub struct Bl2Ratio {
    /// `(1 + (m-i)/(n-ℓ+1)) / (1 + (i-1)/ℓ)`.
    pub closed: BigRational,
    /// Quotient of the four binomials.
    pub binomial: BigRational,
    /// Quotient of exact event probabilities.
    pub exact: BigRational,
}

impl Bl2Ratio {
    pub fn agree(&self) -> bool {
        self.closed == self.exact && self.binomial == self.exact
    }
}

pub fn bl2_ratio(t: &TwoChainPoset, i: usize, l: usize) -> Result<Bl2Ratio> {
    if !t.is_free() {
        return Err(Error::DomainError("ratio identity needs X + Y".into()));
    }
    t.check_i(i)?;
    if !(1..=t.n).contains(&l) {
        return Err(Error::DomainError(format!("l = {l} not in [1,{}]", t.n)));
    }
    let (m, n) = (t.m as i64, t.n as i64);
    let (ii, ll) = (i as i64, l as i64);
    let one = BigRational::one();
    let closed = (&one + small(m - ii, n - ll + 1)) / (&one + small(ii - 1, ll));
    let binomial = ratio(
        &(binom(i + l - 2, l - 1) * binom(t.m - i + t.n - l + 1, t.n - l + 1)),
        &(binom(i + l - 1, l) * binom(t.m - i + t.n - l, t.n - l)),
    );
    let lat = t.lattice()?;
    let lo = lat.event_probability(&t.psi_event(i, l - 1)?)?;
    let hi = lat.event_probability(&t.psi_event(i, l)?)?;
    if hi.is_zero() {
        return Err(Error::DomainError("P(Ψ_{i,l}) vanishes".into()));
    }
    Ok(Bl2Ratio {
        closed,
        binomial,
        exact: lo / hi,
    })
}

/// `j, n-j > K` and `(n-j)/(m-i) < (1 + 1/K) j/i`.
pub fn bl2_hypothesis(m: usize, n: usize, i: usize, j: usize, k: usize) -> bool {
    if i == 0 || i >= m || j <= k || n < j || n - j <= k {
        return false;
    }
    ((n - j) * i * k) < (k + 1) * j * (m - i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bl2SweepResult {
    /// Largest `P(Ψ_{i,j})` among instances meeting the hypothesis.
    pub max_psi: Option<BigRational>,
    /// `(m, n, i, j)` attaining it.
    pub argmax: Option<(usize, usize, usize, usize)>,
    pub instances: usize,
}

/// Scans `X + Y` with `1 <= m <= m_max`, `1 <= n <= n_max` for instances
/// meeting the hypothesis at `K`, tracking the largest `P(Ψ_{i,j})`.
pub fn bl2_sweep(m_max: usize, n_max: usize, k: usize) -> Result<Bl2SweepResult> {
    let mut out = Bl2SweepResult {
        max_psi: None,
        argmax: None,
        instances: 0,
    };
    for m in 1..=m_max {
        for n in 1..=n_max {
            let cells: Vec<(usize, usize)> = (1..=m)
                .flat_map(|i| (0..=n).map(move |j| (i, j)))
                .filter(|&(i, j)| bl2_hypothesis(m, n, i, j, k))
                .collect();
            if cells.is_empty() {
                continue;
            }
            let g = TwoChainPoset::free(m, n).g_distributions()?;
            for (i, j) in cells {
                out.instances += 1;
                let p = &g[i - 1].probs[j];
                if out.max_psi.as_ref().map_or(true, |b| p > b) {
                    out.max_psi = Some(p.clone());
                    out.argmax = Some((m, n, i, j));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::count_extensions;

    #[test]
    fn construction() {
        assert_eq!(
            count_extensions(&TwoChainPoset::free(2, 3).poset).unwrap(),
            BigUint::from(10u32)
        );
        let t = make_two_chain(1, 1, &[(1, 1)]).unwrap();
        assert!(t.poset.is_chain());
        let t = make_two_chain(2, 2, &[(1, 2)]).unwrap();
        assert_eq!(count_extensions(&t.poset).unwrap(), BigUint::from(5u32));
        assert!(matches!(
            make_two_chain(2, 2, &[(3, 1)]),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            make_two_chain(2, 2, &[(1, 0)]),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn psi_and_phi_small() {
        let t = TwoChainPoset::free(1, 2);
        for j in 0..=2 {
            assert_eq!(t.psi_probability(1, j).unwrap(), small(1, 3));
        }
        let t = TwoChainPoset::free(2, 1);
        for i in 0..=2 {
            assert_eq!(t.phi_probability(1, i).unwrap(), small(1, 3));
        }
        let t = TwoChainPoset::free(2, 2);
        assert_eq!(t.psi_probability(1, 1).unwrap(), small(1, 3));
        assert_eq!(free_psi_closed_form(2, 2, 1, 1), small(1, 3));
    }

    #[test]
    fn expected_g_values() {
        let t = TwoChainPoset::free(2, 3);
        assert_eq!(t.expected_g(1).unwrap(), from_int(1));
        assert_eq!(t.expected_g(2).unwrap(), from_int(2));
        let t = make_two_chain(1, 1, &[(1, 1)]).unwrap();
        assert!(t.expected_g(1).unwrap().is_zero());
    }

    #[test]
    fn g_distribution_cases() {
        let g = TwoChainPoset::free(1, 2).g_distribution(1).unwrap();
        assert_eq!(g.probs, vec![small(1, 3); 3]);
        let cross: Vec<_> = (1..=3).map(|i| (i, 1)).collect();
        let t = make_two_chain(3, 2, &cross).unwrap();
        for i in 1..=3 {
            let g = t.g_distribution(i).unwrap();
            assert!(g.probs[0].is_one());
        }
    }

    #[test]
    fn bl1_examples() {
        let t = TwoChainPoset::free(1, 6);
        let out = bl1_margin(&t, 1, 5, &small(1, 4), Bl1Case::A, false).unwrap();
        assert!(out.bound_holds);
        let out = bl1_margin(&t, 1, 5, &small(1, 4), Bl1Case::A, true).unwrap();
        assert_eq!(out.value, small(1, 6));
        let t = TwoChainPoset::free(1, 10);
        for j in 0..=10 {
            assert!(bl1_margin(&t, 1, j, &small(1, 4), Bl1Case::B, false)
                .unwrap()
                .bound_holds);
        }
        assert!(matches!(
            bl1_margin(&TwoChainPoset::free(3, 3), 2, 2, &small(1, 2), Bl1Case::A, false),
            Err(Error::HypothesisNotSatisfied(_))
        ));
    }

    #[test]
    fn bl2_examples() {
        let r = bl2_ratio(&TwoChainPoset::free(2, 2), 1, 1).unwrap();
        assert_eq!(r.closed, small(3, 2));
        assert!(r.agree());
        assert!(bl2_ratio(&TwoChainPoset::free(1, 5), 1, 3).unwrap().agree());
        assert!(bl2_ratio(&TwoChainPoset::free(2, 4), 2, 2).unwrap().agree());
        assert!(matches!(
            bl2_ratio(&TwoChainPoset::free(2, 4), 2, 0),
            Err(Error::DomainError(_))
        ));
        assert!(bl2_ratio(&make_two_chain(2, 2, &[(1, 1)]).unwrap(), 1, 1).is_err());
    }

    #[test]
    fn blocks() {
        let t = TwoChainPoset::free(4, 4);
        assert_eq!(t.psi_block(3, 2).unwrap(), vec![0, 1, 4, 5]);
        assert_eq!(t.psi_psi_block(1, 1, 3, 2).unwrap(), vec![1, 5]);
        assert_eq!(t.psi_phi_block(1, 1, 3, 2).unwrap(), vec![1, 5]);
    }

    #[test]
    fn spec_round_trip() {
        let t = make_two_chain(3, 4, &[(1, 2)]).unwrap();
        let s = TwoChainSpec::from(&t);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"m":3,"n":4,"cross":[[1,2]]}"#);
        let back: TwoChainSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), t);
    }
}

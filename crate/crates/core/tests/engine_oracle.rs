mod common;

use common::*;
use linext::generators::{antichain, chain, chain_plus_point, two_equal_chains, young_diagram};
use linext::lattice::{conditional_probability, count_extensions, event_probability};
use linext::poset::comparability_profile;
use linext::ratio::small;
use linext::stats::{balance, variance};
use linext::two_chain::TwoChainPoset;
use linext::{BigRational, BigUint, DownsetLattice, Error, EventSpec, Poset};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn hook_length_count(lambda: &[u32]) -> BigUint {
    let n: u32 = lambda.iter().sum();
    let mut num = BigUint::one();
    for k in 1..=n {
        num *= k;
    }
    let mut den = BigUint::one();
    for (r, &row) in lambda.iter().enumerate() {
        for c in 0..row {
            let arm = row - c - 1;
            let leg = lambda[r + 1..].iter().filter(|&&l| l > c).count() as u32;
            den *= arm + leg + 1;
        }
    }
    num / den
}

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn fixtures_match_brute_force() {
    // Each fixture value was produced by `brute` and frozen.
    let cases: Vec<(&str, Poset, u64)> = vec![
        ("chain-5", chain(5), 1),
        ("antichain-4", antichain(4), 24),
        ("chain-plus-point-6", chain_plus_point(6).unwrap(), 6),
        ("two-equal-chains-3", two_equal_chains(3), 20),
        ("young-3,2,1", young_diagram(&[3, 2, 1]).unwrap().1, 16),
        ("young-2,2", young_diagram(&[2, 2]).unwrap().1, 2),
    ];
    for (name, p, expected) in cases {
        assert_eq!(brute(&p).count, expected, "{name}");
        assert_eq!(count_extensions(&p).unwrap(), BigUint::from(expected), "{name}");
    }
}

#[test]
fn two_plus_one_statistics() {
    let p = Poset::from_covers(&["a", "b", "c"], &[("a", "b")]).unwrap();
    let lat = DownsetLattice::build(&p).unwrap();
    assert_eq!(lat.extension_count(), &BigUint::from(3u32));
    let c = lat.position_distribution(2).unwrap();
    assert_eq!(c.probs, vec![small(1, 3); 3]);
    assert_eq!(balance(&p).unwrap().delta, small(1, 3));
    let prof = comparability_profile(&p);
    assert_eq!((prof.width, prof.pi_max), (2, 2));
}

#[test]
fn hook_length_formula_on_young_diagrams() {
    for lambda in [vec![4, 3, 1], vec![5, 5], vec![3, 3, 3], vec![6, 2, 2, 1], vec![4, 4, 2, 2]] {
        let (_, p) = young_diagram(&lambda).unwrap();
        assert_eq!(count_extensions(&p).unwrap(), hook_length_count(&lambda), "{lambda:?}");
    }
}

#[test]
fn wide_posets_use_frontier_keys() {
    // Two chains of 40: C(80, 40) extensions, past the 64-bit mask path.
    let t = TwoChainPoset::free(40, 40);
    assert_eq!(count_extensions(&t.poset).unwrap(), binom(80, 40));
    // 2 x 33 rectangle: Catalan(33) standard Young tableaux.
    let (_, p) = young_diagram(&[33, 33]).unwrap();
    assert_eq!(count_extensions(&p).unwrap(), binom(66, 33) / 34u32);
    let p = chain_plus_point(70).unwrap();
    let lat = DownsetLattice::build(&p).unwrap();
    assert_eq!(lat.extension_count(), &BigUint::from(70u32));
    let d = lat.position_distribution(p.index_of("p").unwrap()).unwrap();
    assert!(d.probs.iter().all(|q| q == &small(1, 70)));
}

#[test]
fn budget_is_enforced() {
    let err = DownsetLattice::build_with_budget(&antichain(12), 1000).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { budget: 1000, .. }));
    assert!(DownsetLattice::build_with_budget(&antichain(12), 4096).is_ok());
}

#[test]
fn null_condition_is_rejected() {
    let p = chain(3);
    let r = conditional_probability(&p, &EventSpec::precedes(0, 1), &EventSpec::precedes(2, 0));
    assert_eq!(r, Err(Error::ConditionNullEvent));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engine_matches_permutation_filter(p in arb_poset(7)) {
        let b = brute(&p);
        let lat = DownsetLattice::build(&p).unwrap();
        prop_assert_eq!(lat.extension_count(), &BigUint::from(b.count));
        for d in lat.position_distributions() {
            for (k, q) in d.probs.iter().enumerate() {
                prop_assert_eq!(q, &frac(b.position[d.element][k], b.count));
            }
        }
        let pre = lat.precedence_probabilities();
        for x in 0..p.len() {
            for y in 0..p.len() {
                if x != y {
                    prop_assert_eq!(&pre[x][y], &frac(b.before[x][y], b.count));
                }
            }
        }
    }

    #[test]
    fn event_probabilities_match_enumeration(p in arb_poset(6), picks in proptest::collection::vec((0usize..6, 0usize..6), 1..4)) {
        let n = p.len();
        let req: Vec<(usize, usize)> = picks.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let ev = EventSpec::new(req);
        let exts = extensions(&p);
        let hits = exts.iter().filter(|o| ev.holds_in(o)).count() as u64;
        prop_assert_eq!(event_probability(&p, &ev).unwrap(), frac(hits, exts.len() as u64));
    }

    #[test]
    fn sampler_only_returns_extensions(p in arb_poset(8), seed in any::<u64>()) {
        let lat = DownsetLattice::build(&p).unwrap();
        for o in linext::lattice::sample_extensions(&lat, 5, seed) {
            prop_assert!(respects(&p, &o));
        }
    }

    #[test]
    fn width_and_range_match_enumeration(p in arb_poset(10)) {
        let prof = comparability_profile(&p);
        prop_assert_eq!(prof.width, brute_width(&p));
        for x in 0..p.len() {
            prop_assert_eq!(prof.pi[x], brute_pi(&p, x));
        }
        // The reported antichain is one.
        for &a in &prof.antichain {
            for &b in &prof.antichain {
                prop_assert!(a == b || p.incomparable(a, b));
            }
        }
        prop_assert_eq!(prof.antichain.len(), prof.width);
        prop_assert!(prof.width <= prof.pi_max + 1);
    }

    #[test]
    fn closure_is_transitive_and_irreflexive(p in arb_poset(10)) {
        let n = p.len();
        for x in 0..n {
            prop_assert!(!p.lt(x, x));
            for y in 0..n {
                for z in 0..n {
                    if p.lt(x, y) && p.lt(y, z) {
                        prop_assert!(p.lt(x, z));
                    }
                }
            }
        }
        for &(a, b) in p.covers() {
            prop_assert!(p.lt(a, b));
            prop_assert!((0..n).all(|m| !(p.lt(a, m) && p.lt(m, b))));
        }
    }

    #[test]
    fn marginals_are_laws(p in arb_poset(8)) {
        let lat = DownsetLattice::build(&p).unwrap();
        let n = p.len();
        let dists = lat.position_distributions();
        for d in &dists {
            prop_assert!(d.probs.iter().sum::<BigRational>().is_one());
        }
        for k in 0..n {
            let col: BigRational = dists.iter().map(|d| d.probs[k].clone()).sum();
            prop_assert!(col.is_one());
        }
        let pre = lat.precedence_probabilities();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                prop_assert!((&pre[x][y] + &pre[y][x]).is_one());
                if p.lt(x, y) {
                    prop_assert!(pre[x][y].is_one());
                }
            }
        }
    }

    #[test]
    fn chain_rule_for_events(p in arb_poset(7), a in (0usize..7, 0usize..7), b in (0usize..7, 0usize..7)) {
        let n = p.len();
        let e1 = EventSpec::precedes(a.0 % n, a.1 % n);
        let e2 = EventSpec::precedes(b.0 % n, b.1 % n);
        prop_assume!(a.0 % n != a.1 % n && b.0 % n != b.1 % n);
        let p1 = event_probability(&p, &e1).unwrap();
        let p12 = event_probability(&p, &e1.and(&e2)).unwrap();
        if p1.is_zero() {
            prop_assert_eq!(conditional_probability(&p, &e2, &e1), Err(Error::ConditionNullEvent));
        } else {
            let c = conditional_probability(&p, &e2, &e1).unwrap();
            prop_assert_eq!(c * p1, p12);
        }
    }

    #[test]
    fn duality_reverses_positions(p in arb_poset(8)) {
        let n = p.len();
        let d = p.dual();
        let lat = DownsetLattice::build(&p).unwrap();
        let dlat = DownsetLattice::build(&d).unwrap();
        prop_assert_eq!(lat.extension_count(), dlat.extension_count());
        for x in 0..n {
            let a = lat.position_distribution(x).unwrap();
            let b = dlat.position_distribution(x).unwrap();
            let rev: Vec<BigRational> = b.probs.iter().rev().cloned().collect();
            prop_assert_eq!(&a.probs, &rev);
            prop_assert_eq!(variance(&a.probs), variance(&b.probs));
        }
    }

    #[test]
    fn balance_is_symmetric_and_at_most_half(p in arb_poset(8)) {
        prop_assume!(!p.is_chain());
        let b = balance(&p).unwrap();
        let half = small(1, 2);
        prop_assert!(b.delta <= half && b.delta > BigRational::zero());
        for x in 0..p.len() {
            for y in 0..p.len() {
                prop_assert_eq!(&b.delta_xy[x][y], &b.delta_xy[y][x]);
            }
        }
        let (w0, w1) = b.witness;
        prop_assert_eq!(&b.delta_xy[w0][w1], &b.delta);
        prop_assert!(p.incomparable(w0, w1));
    }

    #[test]
    fn variance_identity(p in arb_poset(8)) {
        // Var f(x) = E f(x)^2 - (E f(x))^2, from the brute-force counts.
        let b = brute(&p);
        let lat = DownsetLattice::build(&p).unwrap();
        for d in lat.position_distributions() {
            let mut m1 = BigRational::zero();
            let mut m2 = BigRational::zero();
            for (k, &c) in b.position[d.element].iter().enumerate() {
                let q = frac(c, b.count);
                let v = BigRational::from_integer(((k + 1) as i64).into());
                m1 += &q * &v;
                m2 += q * &v * &v;
            }
            prop_assert_eq!(&d.mean, &m1);
            prop_assert_eq!(variance(&d.probs), m2 - &m1 * &m1);
        }
    }
}

mod common;

use common::*;
use linext::generators::{
    grid_ideal, partitions, random_poset, skew_diagram, tightness_example_a, tripod, young_diagram,
};
use linext::grid::{is_convex_in_grid, GridKind};
use linext::io::poset_to_json;
use linext::lattice::count_extensions;
use linext::poset::{comparability_profile, max_incomparable_pair, PairSearch};
use linext::verify::{builtin_corpus, sigma_q_scan, SIGMA_Q_WINDOW};
use linext::{BigUint, Poset};
use num_traits::One;
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
            let leg = lambda[r + 1..].iter().filter(|&&l| l > c).count() as u32;
            den *= row - c + leg;
        }
    }
    num / den
}

#[test]
fn hook_length_formula_up_to_twelve_cells() {
    let mut shapes = 0;
    for size in 1..=12 {
        for lambda in partitions(size) {
            let (shape, p) = young_diagram(&lambda).unwrap();
            assert_eq!(shape.kind, GridKind::Ideal);
            assert_eq!(count_extensions(&p).unwrap(), hook_length_count(&lambda), "{lambda:?}");
            shapes += 1;
        }
    }
    // p(1) + … + p(12)
    assert_eq!(shapes, 271);
}

#[test]
fn generated_grids_have_declared_kind() {
    let mut shapes = vec![
        (young_diagram(&[4, 2, 1]).unwrap().0, GridKind::Ideal),
        (tripod(3, 4).unwrap().0, GridKind::Ideal),
        (grid_ideal(3, &[vec![2, 2, 1], vec![1, 1, 3]]).unwrap().0, GridKind::Ideal),
        (skew_diagram(&[3, 3, 2], &[1, 1]).unwrap().0, GridKind::Convex),
    ];
    for size in (4..=20).step_by(2) {
        shapes.push((tightness_example_a(size).unwrap().0, GridKind::Ideal));
    }
    for (shape, kind) in shapes {
        assert_eq!(shape.kind, kind);
        let report = is_convex_in_grid(&shape.cells).unwrap();
        assert_eq!(report.kind(), kind);
        assert_eq!(report.poset, shape.poset());
    }
}

#[test]
fn random_poset_is_reproducible() {
    assert_eq!(
        poset_to_json(&random_poset(6, 0.4, 7)),
        r#"{"labels":["v1","v2","v3","v4","v5","v6"],"covers":[["v3","v1"],["v3","v6"],["v5","v3"],["v6","v2"]]}"#
    );
    assert_eq!(random_poset(9, 0.3, 42), random_poset(9, 0.3, 42));
}

#[test]
fn variance_is_bounded_by_inverse_square_of_q() {
    // σ²(x) q(x)² ≤ 1/4 on the corpus, so the constant 1 suffices.
    let (lo, hi, worst) = sigma_q_scan(&builtin_corpus()).unwrap();
    assert!(worst <= linext::ratio::small(1, 4), "{worst}");
    assert!(SIGMA_Q_WINDOW.0 <= lo && hi <= SIGMA_Q_WINDOW.1, "{lo} {hi}");
}

#[test]
fn pair_search_ordering_at_twenty() {
    for seed in 0..5 {
        let p = random_poset(20, 0.15, seed);
        if p.is_chain() {
            continue;
        }
        let exact = max_incomparable_pair(&p, PairSearch::Exact).unwrap();
        let greedy = max_incomparable_pair(&p, PairSearch::Greedy).unwrap();
        let pi = comparability_profile(&p).pi_max;
        assert!(exact.product >= greedy.product && greedy.product >= pi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closure_and_reduction_round_trip(p in arb_poset(12)) {
        let again = Poset::from_relations(p.labels().to_vec(), &p.relations()).unwrap();
        prop_assert_eq!(&again, &p);
        let covers: Vec<(String, String)> = p.covers().iter()
            .map(|&(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
            .collect();
        let back = Poset::from_covers(p.labels(), &covers).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.covers(), p.covers());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incomparability_is_symmetric(p in arb_poset(12)) {
        let prof = comparability_profile(&p);
        for x in 0..p.len() {
            for &y in &prof.incomparable[x] {
                prop_assert!(prof.incomparable[y].contains(&x));
            }
            prop_assert_eq!(prof.incomparable[x].len(), prof.pi[x]);
        }
    }

    #[test]
    fn pair_search_ordering(p in arb_poset(12)) {
        prop_assume!(!p.is_chain());
        let exact = max_incomparable_pair(&p, PairSearch::Exact).unwrap();
        let greedy = max_incomparable_pair(&p, PairSearch::Greedy).unwrap();
        let pi = comparability_profile(&p).pi_max;
        prop_assert!(exact.product >= greedy.product);
        prop_assert!(greedy.product >= pi);
        for pair in [&exact, &greedy] {
            prop_assert!(pair.b.len() >= pair.a.len());
            prop_assert_eq!(pair.product, pair.a.len() * pair.b.len());
            for &a in &pair.a {
                for &b in &pair.b {
                    prop_assert!(p.incomparable(a, b));
                }
            }
        }
        // Exhaustive check of the maximum on small instances.
        if p.len() <= 8 {
            let n = p.len();
            let mut best = 0;
            for s in 1u32..1 << n {
                let common: Vec<usize> = (0..n)
                    .filter(|&y| (0..n).all(|x| s >> x & 1 == 0 || p.incomparable(x, y)))
                    .collect();
                best = best.max(s.count_ones() as usize * common.len());
            }
            prop_assert_eq!(exact.product, best);
        }
    }
}

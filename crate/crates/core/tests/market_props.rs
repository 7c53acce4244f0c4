mod common;

use proptest::prelude::*;

use stablelab::market::{
    deferred_acceptance, deferred_acceptance_trace, distance_to_stability, divorce_distance, enumerate_stable,
    enumerate_stable_within, random_market, random_perfect_marriage, Marriage, MarriageMarket, Model,
    OracleBounds,
};
use stablelab::Error;

use common::*;

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Full), Just(Model::Partial)]
}

fn market(max_n: usize) -> impl Strategy<Value = MarriageMarket> {
    (1..=max_n, model(), any::<u64>()).prop_map(|(n, model, seed)| random_market(n, model, &mut rng(seed)))
}

fn full_market(max_n: usize) -> impl Strategy<Value = MarriageMarket> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_market(n, Model::Full, &mut rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classical_facts_hold(m in market(5)) {
        prop_assert_eq!(check_classical(&m), Ok(()));
    }

    #[test]
    fn stability_agrees_with_blocking_pairs_on_perfect_marriages(m in full_market(6), seed in any::<u64>()) {
        let mu = random_perfect_marriage(m.n(), &mut rng(seed));
        let blocking = m.blocking_pairs(&mu).unwrap();
        prop_assert_eq!(m.is_stable(&mu).unwrap(), blocking.is_empty());
        for (w, m_) in blocking {
            prop_assert!(m.is_blocking_pair(&mu, w, m_).unwrap());
        }
    }

    #[test]
    fn enumeration_matches_the_stability_predicate(m in market(4)) {
        let stable = enumerate_stable(&m).unwrap();
        for mu in &stable {
            prop_assert!(m.is_stable(mu).unwrap());
        }
        let mut sorted = stable.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, stable);
    }

    #[test]
    fn transposing_swaps_the_proposing_side(m in market(5)) {
        let women_optimal = deferred_acceptance(&m.transpose()).transpose();
        prop_assert!(m.is_stable(&women_optimal).unwrap());
        let stable = enumerate_stable(&m).unwrap();
        let t_stable: Vec<Marriage> = {
            let mut v: Vec<_> = enumerate_stable(&m.transpose()).unwrap().iter().map(Marriage::transpose).collect();
            v.sort();
            v
        };
        prop_assert_eq!(stable, t_stable);
    }

    #[test]
    fn no_woman_rejects_a_man_twice(m in market(6)) {
        let run = deferred_acceptance_trace(&m);
        let mut r: Vec<_> = run.rejections().collect();
        let before = r.len();
        r.sort();
        r.dedup();
        prop_assert_eq!(r.len(), before);
    }

    #[test]
    fn divorce_distance_is_a_metric(n in 1usize..8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (
            random_perfect_marriage(n, &mut rng(a)),
            random_perfect_marriage(n, &mut rng(b)),
            random_perfect_marriage(n, &mut rng(c)),
        );
        let d = |p: &Marriage, q: &Marriage| divorce_distance(p, q).unwrap();
        prop_assert_eq!(d(&x, &x), 0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert!(d(&x, &y) <= n);
        prop_assert_eq!(d(&x, &y) == 0, x == y);
    }

    #[test]
    fn distance_to_stability_is_zero_exactly_on_stable(m in full_market(5), seed in any::<u64>()) {
        let mu = random_perfect_marriage(m.n(), &mut rng(seed));
        let dist = distance_to_stability(&m, &mu, None).unwrap();
        prop_assert_eq!(dist == 0, m.is_stable(&mu).unwrap());
        let da = deferred_acceptance(&m);
        prop_assert!(dist <= divorce_distance(&mu, &da).unwrap());
    }

    #[test]
    fn market_json_round_trips(m in market(6)) {
        let text = m.to_json();
        prop_assert_eq!(MarriageMarket::from_json(&text).unwrap(), m);
    }

    #[test]
    fn marriage_json_round_trips(n in 1usize..10, seed in any::<u64>()) {
        let mu = random_perfect_marriage(n, &mut rng(seed));
        prop_assert_eq!(Marriage::from_json(&mu.to_json()).unwrap(), mu);
    }
}

#[test]
fn mutual_top_identity_is_the_unique_stable_marriage() {
    for n in 1..=6 {
        let m = mutual_top(n);
        assert_eq!(deferred_acceptance(&m), Marriage::identity(n));
        assert_eq!(enumerate_stable(&m).unwrap(), vec![Marriage::identity(n)]);
    }
}

#[test]
fn oracle_refuses_past_its_bound() {
    let m = random_market(9, Model::Full, &mut rng(1));
    assert!(matches!(enumerate_stable(&m), Err(Error::Capacity { n: 9, bound: 8 })));
    let p = random_market(7, Model::Partial, &mut rng(1));
    assert!(matches!(enumerate_stable(&p), Err(Error::Capacity { n: 7, bound: 6 })));
    let tight = OracleBounds { full: 3, partial: 3 };
    assert!(enumerate_stable_within(&random_market(4, Model::Full, &mut rng(2)), tight).is_err());
}

#[test]
fn certified_distance_skips_enumeration() {
    let m = mutual_top(12);
    let id = Marriage::identity(12);
    let swapped = Marriage::from_husbands(&[2, 1, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]).unwrap();
    assert!(distance_to_stability(&m, &swapped, None).is_err());
    assert_eq!(distance_to_stability(&m, &swapped, Some(&id)).unwrap(), 2);
}

#[test]
fn distance_needs_full_lists() {
    let m = random_market(3, Model::Partial, &mut rng(4));
    assert!(matches!(
        distance_to_stability(&m, &Marriage::identity(3), None),
        Err(Error::Unsupported(_))
    ));
}

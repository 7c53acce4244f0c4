mod common;

use proptest::prelude::*;

use stablelab::embeddings::{
    build_high_mid_low, canonical_mu0, canonical_mu1, choose_delta, complete_preferences, embed_find_stable_partial,
    embed_is_single, embed_verify_stability, find_stable_partial_certificate, high_mid_low_certificate,
    verify_certificate, verify_stability_certificate, CertificateKind, DisjDomain, DisjInstance,
    EmbeddingCertificate, HighMidLowParams, PaddingOrder,
};
use stablelab::market::{
    distance_to_stability, divorce_distance, enumerate_stable, random_market, Marriage, Model, Side,
};

use common::*;

fn off_diagonal(n: usize) -> impl Strategy<Value = DisjInstance> {
    let len = n * (n - 1);
    (prop::collection::vec(any::<bool>(), len), prop::collection::vec(any::<bool>(), len))
        .prop_map(move |(x, y)| DisjInstance::new(DisjDomain::OffDiagonal(n), x, y).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_blocking_pairs_are_the_intersection(d in off_diagonal(5)) {
        let m = embed_verify_stability(&d).unwrap();
        let mut blocking = m.blocking_pairs(&Marriage::identity(5)).unwrap();
        blocking.sort();
        prop_assert_eq!(blocking, d.intersection());
        let cert = verify_stability_certificate(&d).unwrap();
        prop_assert!(verify_certificate(&m, &cert).unwrap());
    }

    #[test]
    fn partial_embedding_certificate_checks_out(d in off_diagonal(4)) {
        let m = embed_find_stable_partial(&d).unwrap();
        let cert = find_stable_partial_certificate(&d).unwrap();
        prop_assert!(verify_certificate(&m, &cert).unwrap());
        prop_assert_eq!(cert.disj, Some(d.is_disjoint()));
    }

    #[test]
    fn completion_keeps_stable_marriages(seed in any::<u64>(), pad in 0u8..3) {
        let m = random_market(3, Model::Partial, &mut rng(seed));
        let order = match pad {
            0 => PaddingOrder::Ascending,
            1 => PaddingOrder::Descending,
            _ => PaddingOrder::Shuffled(seed),
        };
        prop_assert_eq!(check_completion(&m, order), Ok(()));
    }

    #[test]
    fn lifts_match_the_oracle(seed in any::<u64>()) {
        let m = random_market(3, Model::Partial, &mut rng(seed));
        prop_assert_eq!(check_lift(&m), Ok(()));
        prop_assert_eq!(check_negation(&m), Ok(()));
        prop_assert_eq!(check_unique_full(&m), Ok(()));
    }

    #[test]
    fn mu0_is_far_from_mu1(half in 1usize..8, high_frac in 1usize..8, a in 1usize..8, b in 1usize..8) {
        let n = 2 * half;
        let high = 1 + (high_frac - 1) % half;
        let p = HighMidLowParams::from_sizes(n, high).unwrap();
        let (alpha, beta) = (1 + (a - 1) % high, 1 + (b - 1) % high);
        let d = divorce_distance(&canonical_mu0(&p, alpha, beta).unwrap(), &canonical_mu1(n).unwrap()).unwrap();
        prop_assert!(d as f64 >= (1.0 - p.delta()) * n as f64);
    }
}

#[test]
fn completion_of_a_full_market_keeps_its_stable_set_inside() {
    let m = mutual_top(3);
    let big = complete_preferences(&m);
    assert!(big.model() == Model::Full && big.n() == 6);
    let stable = enumerate_stable(&big).unwrap();
    assert!(stable.iter().all(|s| Marriage::identity(3).is_submarriage_of(s)));
}

#[test]
fn is_single_on_every_n2_input() {
    for d in DisjInstance::all(DisjDomain::OffDiagonal(2)) {
        for side in [Side::Woman, Side::Man] {
            let (m, p) = embed_is_single(&d, side).unwrap();
            assert_eq!(m.n(), 4);
            let stable = enumerate_stable(&m).unwrap();
            // Rural hospitals: single in some iff single in every.
            let some = stable.iter().any(|mu| mu.spouse(p).is_none());
            let every = stable.iter().all(|mu| mu.spouse(p).is_none());
            assert_eq!(some, every);
            assert_eq!(some, d.is_disjoint());
        }
    }
}

#[test]
fn three_tier_certificates_at_n4() {
    let p = HighMidLowParams::new(4, 1.0).unwrap();
    for d in DisjInstance::all(p.domain()) {
        let m = build_high_mid_low(&p, &d).unwrap();
        let cert = high_mid_low_certificate(&p, &d).unwrap();
        match d.witness() {
            None => assert_eq!(cert.kind, CertificateKind::None),
            Some(_) => {
                assert_eq!(cert.kind, CertificateKind::UniqueStable);
                assert!(verify_certificate(&m, &cert).unwrap());
                let mu1 = canonical_mu1(4).unwrap();
                let certified = distance_to_stability(&m, &mu1, cert.unique()).unwrap();
                assert_eq!(certified, distance_to_stability(&m, &mu1, None).unwrap());
            }
        }
    }
}

#[test]
fn wrong_certificate_is_rejected() {
    let p = HighMidLowParams::new(8, 0.5).unwrap();
    let d = DisjInstance::unique_at(p.domain(), 2, 1).unwrap();
    let m = build_high_mid_low(&p, &d).unwrap();
    let bogus = EmbeddingCertificate::unique_stable(canonical_mu1(8).unwrap(), true);
    assert!(!verify_certificate(&m, &bogus).unwrap());
}

#[test]
fn certificate_json_round_trips() {
    let cert = EmbeddingCertificate::unique_stable(Marriage::identity(2), true);
    let text = cert.to_json();
    assert_eq!(text, r#"{"kind":"unique-stable","marriage":{"n":2,"pairs":[[1,1],[2,2]]},"disj":1}"#);
    assert_eq!(EmbeddingCertificate::from_json(&text).unwrap(), cert);
}

#[test]
fn parameter_validation() {
    assert!(HighMidLowParams::new(6, 0.5).is_err());
    assert!(HighMidLowParams::new(10, 0.3).is_err());
    let p = choose_delta(20, 0.2).unwrap();
    assert!(0.2 < (1.0 - p.delta()) / 2.0);
    let wrong_domain = DisjInstance::zeros(DisjDomain::Grid(3));
    assert!(build_high_mid_low(&HighMidLowParams::new(8, 0.5).unwrap(), &wrong_domain).is_err());
    assert!(embed_verify_stability(&DisjInstance::zeros(DisjDomain::Grid(2))).is_err());
}

#[test]
fn disj_instance_json_round_trips() {
    let d = DisjInstance::unique_at(DisjDomain::OffDiagonal(3), 1, 3).unwrap();
    assert_eq!(DisjInstance::from_json(&d.to_json()).unwrap(), d);
    assert_eq!(d.intersection(), vec![(1, 3)]);
}

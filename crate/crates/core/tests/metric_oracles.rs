mod common;

use common::oracles;
use proptest::prelude::*;
use refsum::metrics::{align, chrf, lcs_len, meteor, micro_average, rouge_l, MetricTriple};

#[test]
fn fixture_pairs_match_oracles() {
    let pairs = common::metric_pairs();
    assert_eq!(pairs.len(), 20);
    for (c, r) in &pairs {
        assert!((rouge_l(c, r) - oracles::rouge_l(c, r)).abs() < 1e-6, "rouge_l {c:?} / {r:?}");
        assert!((chrf(c, r) - oracles::chrf(c, r)).abs() < 1e-6, "chrf {c:?} / {r:?}");
        assert!((meteor(c, r) - oracles::meteor(c, r)).abs() < 1e-6, "meteor {c:?} / {r:?}");
    }
}

#[test]
fn identity_is_exact() {
    for (c, _) in common::metric_pairs() {
        assert_eq!(rouge_l(&c, &c), 1.0);
        assert_eq!(chrf(&c, &c), 1.0);
    }
}

#[test]
fn worked_values() {
    // LCS("the cat sat on the mat", "a cat was sitting on the mat") = 4.
    let expected = 2.0 * (4.0 / 6.0) * (4.0 / 7.0) / (4.0 / 6.0 + 4.0 / 7.0);
    assert!((rouge_l("the cat sat on the mat", "a cat was sitting on the mat") - expected).abs() < 1e-12);
    // Two single-token chunks out of two matches.
    let fmean = 1.0;
    assert!((meteor("a b", "b a") - fmean * (1.0 - 0.5 * 1.0)).abs() < 1e-12);
}

#[test]
fn micro_average_of_fixture() {
    let rows: Vec<MetricTriple> = common::metric_pairs()
        .iter()
        .map(|(c, r)| MetricTriple::score(c, r))
        .collect();
    let mean = micro_average(&rows).unwrap();
    let by_hand = rows.iter().map(|m| m.chrf).sum::<f64>() / rows.len() as f64;
    assert!((mean.chrf - by_hand).abs() < 1e-15);
}

const VOCAB: &[&str] = &["the", "The", "cat", "mat", "a", "है", "में", "ভালো", "அவர்", "x"];

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(VOCAB), 0..8).prop_map(|w| w.join(" "))
}

proptest! {
    #[test]
    fn rouge_matches_brute_force(c in sentence(), r in sentence()) {
        prop_assert!((rouge_l(&c, &r) - oracles::rouge_l(&c, &r)).abs() < 1e-12);
        let ct = oracles::tokens(&c, true);
        let rt = oracles::tokens(&r, true);
        prop_assert_eq!(lcs_len(&ct, &rt), oracles::lcs_brute(&ct, &rt));
    }

    #[test]
    fn chrf_matches_naive_counts(c in sentence(), r in sentence()) {
        prop_assert!((chrf(&c, &r) - oracles::chrf(&c, &r)).abs() < 1e-12);
    }

    #[test]
    fn meteor_matches_exhaustive_alignment(c in sentence(), r in sentence()) {
        let ct = oracles::tokens(&c, true);
        let rt = oracles::tokens(&r, true);
        let a = align(&ct, &rt, 200_000);
        prop_assert!(a.exact);
        prop_assert_eq!((a.matches, a.chunks), oracles::meteor_alignment(&ct, &rt));
        prop_assert!((meteor(&c, &r) - oracles::meteor(&c, &r)).abs() < 1e-12);
    }

    #[test]
    fn scores_are_bounded(c in sentence(), r in sentence()) {
        let m = MetricTriple::score(&c, &r);
        for v in [m.rouge_l, m.chrf, m.meteor] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert_eq!(rouge_l(&c, &r), rouge_l(&r, &c));
    }
}

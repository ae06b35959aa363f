mod common;

use common::checks::{self, document_inputs};
use common::oracles;
use proptest::prelude::*;
use refsum::encoder::StubEncoder;
use refsum::extract::{hiporank_rank, salience_rank, ExtractError, ExtractorConfig, HipoRankConfig};
use refsum::segment::segment;

#[test]
fn hiporank_matches_oracle_on_seeded_documents() {
    for seed in 0..50 {
        checks::hiporank_case(seed, 1e-9).unwrap();
    }
}

#[test]
fn hiporank_oracle_with_other_parameters() {
    let config = HipoRankConfig { alpha: 0.1, lambda_intra: 0.3, lambda_inter: 2.0, k: 100 };
    for seed in 100..120 {
        let doc = checks::random_document(seed);
        let got = checks::library_scores(&doc, &config);
        let want = oracles::hiporank(&doc, 0.1, 0.3, 2.0);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9, "seed {seed}: {g} vs {w}");
        }
    }
}

#[test]
fn alpha_one_removes_positional_preference() {
    // With no discount a single section of identical sentences scores flat.
    let v = vec![1.0, 0.0, 0.0];
    let doc = vec![vec![v.clone(), v.clone(), v.clone(), v]];
    let scores = checks::library_scores(&doc, &HipoRankConfig { alpha: 1.0, ..Default::default() });
    assert!(scores.iter().all(|s| (s - 1.0).abs() < 1e-12));
}

#[test]
fn fewer_sentences_than_k_forwards_everything() {
    let sentences = segment(&["One. Two.", "Three."]);
    let summary = hiporank_rank("t", &sentences, &StubEncoder::default(), &HipoRankConfig::default()).unwrap();
    assert_eq!(summary.items.len(), 3);
    let salient = salience_rank("t", &sentences, &StubEncoder::default(), 50).unwrap();
    let mut ids = salient.global_indices();
    ids.sort_unstable();
    assert_eq!(ids, [0, 1, 2]);
}

#[test]
fn extractor_config_dispatch_and_errors() {
    let sentences = segment(&["Alpha beta. Gamma delta.", "Epsilon."]);
    let stub = StubEncoder::default();
    let hip = ExtractorConfig::HipoRank(HipoRankConfig { k: 2, ..Default::default() });
    assert_eq!(hip.extract("t", &sentences, &stub, &stub).unwrap().items.len(), 2);
    let sal = ExtractorConfig::Salience { k: 1 };
    assert_eq!(sal.extract("t", &sentences, &stub, &stub).unwrap().items.len(), 1);
    assert!(matches!(sal.extract("t", &[], &stub, &stub), Err(ExtractError::EmptyInput)));
    assert!(matches!(ExtractorConfig::Salience { k: 0 }.validate(), Err(ExtractError::InvalidK)));

    let json = serde_json::to_value(&hip).unwrap();
    assert_eq!(json["method"], "hiporank");
    assert_eq!(serde_json::from_value::<ExtractorConfig>(json).unwrap(), hip);
}

#[test]
fn graph_edges_follow_the_documented_shape() {
    let doc = checks::random_document(7);
    let sizes: Vec<usize> = doc.iter().map(Vec::len).collect();
    let (records, embedder) = document_inputs(&doc);
    let sections = refsum::extract::hiporank::sections_by_reference(&records);
    let graph = refsum::extract::build_graph(&sections, &embedder).unwrap();
    let n: usize = sizes.iter().sum();
    let intra: usize = sizes.iter().map(|s| s * (s - 1)).sum();
    assert_eq!(graph.sentence_count(), n);
    assert_eq!(graph.intra_edges().count(), intra);
    assert_eq!(graph.inter_edges().count(), n * (sizes.len() - 1));
}

fn score_vector() -> impl Strategy<Value = Vec<f64>> {
    // Coarse grid so that ties are common.
    prop::collection::vec((-40i32..=40).prop_map(|x| x as f64 / 8.0), 1..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn salience_selection_is_transform_invariant(values in score_vector(), k in 1usize..60) {
        prop_assert_eq!(checks::salience_case(&values, k), Ok(()));
    }

    #[test]
    fn hiporank_oracle_property(seed in any::<u64>()) {
        prop_assert_eq!(checks::hiporank_case(seed, 1e-9), Ok(()));
    }

    #[test]
    fn summaries_are_unmodified_subsets(texts in prop::collection::vec("[a-z]{1,6}( [a-z]{1,6}){0,4}\\.", 1..12), k in 1usize..10) {
        let joined = texts.join(" ");
        let sentences = segment(&[joined.as_str(), "Another source. With two sentences."]);
        let stub = StubEncoder::default();
        let config = HipoRankConfig { k, ..Default::default() };
        for summary in [
            hiporank_rank("t", &sentences, &stub, &config).unwrap(),
            salience_rank("t", &sentences, &stub, k).unwrap(),
        ] {
            prop_assert_eq!(summary.items.len(), k.min(sentences.len()));
            let mut seen = std::collections::HashSet::new();
            for item in &summary.items {
                prop_assert!(seen.insert(item.sentence.global_index));
                prop_assert_eq!(&sentences[item.sentence.global_index], &item.sentence);
            }
            for w in summary.items.windows(2) {
                prop_assert!(w[0].score >= w[1].score);
            }
        }
    }
}

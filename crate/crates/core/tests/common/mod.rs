//! Shared helpers for the integration tests: corpus builders, brute-force
//! oracles and a local HTTP fixture server.
#![allow(dead_code)]

pub mod checks;
pub mod oracles;
pub mod server;

use std::path::PathBuf;

use refsum::corpus::{import_corpus, ImportFormat, SectionInstance};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn mini_corpus() -> Vec<SectionInstance> {
    import_corpus(&data_path("mini_corpus.jsonl"), ImportFormat::CanonicalJsonl).expect("mini corpus")
}

pub fn metric_pairs() -> Vec<(String, String)> {
    checks::read_pairs(&fixture_path("metric_pairs.tsv"))
}

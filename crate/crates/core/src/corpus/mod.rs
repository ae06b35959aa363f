//! Section-instance data model, importers, stratified splitting and dataset
//! statistics.

mod import;
mod model;
mod split;
mod stats;

use std::path::PathBuf;

pub use import::{
    check_instance, import_corpus, import_release, parse_canonical, to_canonical_line,
    write_canonical, ImportFormat,
};
pub use model::{Cell, Domain, Language, ReferenceDocument, SectionInstance, Split};
pub use split::{allocate, split_counts, stratified_split, SplitPolicy, SplitRatios};
pub use stats::{compute_stats, CorpusStats, CorpusTotals};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}:{line}: field `{field}`: {reason}")]
    Malformed {
        source_name: String,
        line: usize,
        field: String,
        reason: String,
    },
    #[error("{source_name}:{line}: field `language`: unsupported language `{value}`")]
    UnknownLanguage {
        source_name: String,
        line: usize,
        value: String,
    },
    #[error("{source_name}:{line}: field `domain`: unsupported domain `{value}`")]
    UnknownDomain {
        source_name: String,
        line: usize,
        value: String,
    },
    #[error("{source_name}:{line}: field `id`: duplicate id `{id}`")]
    DuplicateId {
        source_name: String,
        line: usize,
        id: String,
    },
    #[error("unknown corpus format `{0}` (expected canonical-jsonl or xwikiref-release)")]
    UnknownFormat(String),
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),
    #[error("{labelled} instances already carry a split label; refusing to resplit without overwrite")]
    PresetSplits { labelled: usize },
}

//! Training-setup partitions, the end-to-end pipeline and aggregated
//! evaluation reports.

mod partition;
mod pipeline;
mod report;

pub use partition::{partition, Setup, SetupPartition};
pub use pipeline::{
    config_hash, corpus_hash, run_experiment, run_pipeline, Backends, InstanceFailure,
    InstanceRow, PipelineConfig, RunOutcome, Stage,
};
pub use report::{build_report, read_rows_tsv, rows_tsv, EvalReport, RunMetadata, ScoreSummary};

use crate::extract::ExtractError;
use crate::metrics::MetricsError;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("unknown setup `{0}` (expected ml, md or mlmd)")]
    UnknownSetup(String),
    #[error("invalid extractor configuration: {0}")]
    Extractor(#[from] ExtractError),
    #[error("no instance was scored: {0}")]
    Metrics(#[from] MetricsError),
    #[error("could not start worker pool: {0}")]
    Workers(String),
    #[error("malformed rows file at line {line}: {reason}")]
    Rows { line: usize, reason: String },
}

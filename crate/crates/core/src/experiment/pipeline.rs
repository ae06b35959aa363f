use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::partition::Setup;
use super::report::{build_report, EvalReport, RunMetadata};
use super::PipelineError;
use crate::corpus::{to_canonical_line, Domain, Language, SectionInstance};
use crate::encoder::{Embedder, LikelihoodScorer};
use crate::extract::ExtractorConfig;
use crate::generate::{GenerationRequest, Generator};
use crate::metrics::MetricTriple;
use crate::segment::Segmenter;

/// Everything that determines a run's output. Worker count is excluded:
/// it never changes results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub setup: Setup,
    pub extractor: ExtractorConfig,
    #[serde(skip)]
    pub workers: usize,
}

impl PipelineConfig {
    pub fn new(setup: Setup, extractor: ExtractorConfig) -> Self {
        Self {
            setup,
            extractor,
            workers: 1,
        }
    }
}

/// Model-backed collaborators of a run.
#[derive(Clone, Copy)]
pub struct Backends<'a> {
    pub scorer: &'a dyn LikelihoodScorer,
    pub embedder: &'a dyn Embedder,
    pub generator: &'a dyn Generator,
    pub segmenter: &'a Segmenter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub id: String,
    pub language: Language,
    pub domain: Domain,
    pub group: String,
    pub generated: String,
    pub metrics: MetricTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Extract,
    Generate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Extract => "extract",
            Stage::Generate => "generate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub id: String,
    pub stage: Stage,
    pub reason: String,
}

/// Successful rows and quarantined failures, both ordered by instance id.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub rows: Vec<InstanceRow>,
    pub failures: Vec<InstanceFailure>,
}

fn process(
    inst: &SectionInstance,
    config: &PipelineConfig,
    backends: &Backends<'_>,
) -> Result<InstanceRow, InstanceFailure> {
    let fail = |stage, reason: String| InstanceFailure {
        id: inst.id.clone(),
        stage,
        reason,
    };
    let sentences = backends.segmenter.segment(&inst.reference_texts());
    let summary = config
        .extractor
        .extract(&inst.section_title, &sentences, backends.scorer, backends.embedder)
        .map_err(|e| fail(Stage::Extract, e.to_string()))?;
    let request = GenerationRequest::new(
        inst.language,
        inst.article_title.clone(),
        inst.section_title.clone(),
        summary.texts(),
    )
    .map_err(|e| fail(Stage::Generate, e.to_string()))?;
    let generated = backends
        .generator
        .generate(&request)
        .map_err(|e| fail(Stage::Generate, e.to_string()))?;
    Ok(InstanceRow {
        id: inst.id.clone(),
        language: inst.language,
        domain: inst.domain,
        group: config.setup.group_key(inst),
        metrics: MetricTriple::score(&generated.text, &inst.target_text),
        generated: generated.text,
    })
}

/// Segment, extract, generate and score every instance.
///
/// Instances are processed on `config.workers` threads; results are sorted
/// by instance id, so output does not depend on scheduling. A failing
/// instance is recorded and skipped.
pub fn run_pipeline(
    instances: &[SectionInstance],
    config: &PipelineConfig,
    backends: &Backends<'_>,
) -> Result<RunOutcome, PipelineError> {
    config.extractor.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| PipelineError::Workers(e.to_string()))?;
    let results: Vec<Result<InstanceRow, InstanceFailure>> =
        pool.install(|| instances.par_iter().map(|i| process(i, config, backends)).collect());

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    failures.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(RunOutcome { rows, failures })
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 over the canonical serialization of the configuration.
pub fn config_hash(config: &PipelineConfig, generator_label: &str) -> String {
    let value = serde_json::json!({
        "pipeline": config,
        "generator": generator_label,
    });
    sha256_hex(value.to_string().as_bytes())
}

/// SHA-256 over canonical lines of the instances sorted by id.
pub fn corpus_hash(instances: &[SectionInstance]) -> String {
    let mut lines: Vec<(&str, String)> = instances
        .iter()
        .map(|i| (i.id.as_str(), to_canonical_line(i)))
        .collect();
    lines.sort();
    let mut hasher = Sha256::new();
    for (_, line) in lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

/// Run the pipeline over `instances` and assemble the report.
pub fn run_experiment(
    instances: &[SectionInstance],
    config: &PipelineConfig,
    backends: &Backends<'_>,
) -> Result<(EvalReport, RunOutcome), PipelineError> {
    let outcome = run_pipeline(instances, config, backends)?;
    let partition = super::partition::partition(instances, config.setup);
    let metadata = RunMetadata {
        setup: config.setup,
        extractor: config.extractor.clone(),
        generator: backends.generator.label().to_string(),
        k: config.extractor.k(),
        config_hash: config_hash(config, backends.generator.label()),
        corpus_hash: corpus_hash(instances),
        instances: instances.len(),
        scored: outcome.rows.len(),
        failed: outcome.failures.len(),
        failures: outcome.failures.clone(),
        groups: partition.group_sizes(),
    };
    let report = build_report(&outcome.rows, metadata)?;
    Ok((report, outcome))
}

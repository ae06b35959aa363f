use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::Failure;

/// Optional settings read from `--config`. Flags and environment variables
/// take precedence over every field here.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<PathBuf>,
    pub format: Option<String>,
    pub model_service_url: Option<String>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub ratios: Option<String>,
    pub setup: Option<String>,
    pub extractor: Option<String>,
    pub generator: Option<String>,
    pub encoder: Option<String>,
    pub split: Option<String>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub lambda_intra: Option<f64>,
    pub lambda_inter: Option<f64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read --config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Failure::usage(format!("invalid --config {}: {e}", path.display())))
    }
}

/// First present value wins.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn require_corpus(flag: Option<PathBuf>, file: &FileConfig) -> Result<PathBuf, Failure> {
    flag.or_else(|| file.corpus.clone())
        .ok_or_else(|| Failure::usage("missing corpus path: pass --corpus <PATH> or set `corpus` in --config"))
}

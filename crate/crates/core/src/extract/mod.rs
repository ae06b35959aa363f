//! Unsupervised extractive ranking of reference sentences.

pub mod hiporank;
pub mod salience;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encoder::{Embedder, LikelihoodScorer};
use crate::segment::SentenceRecord;
use crate::transport::GatewayError;

pub use hiporank::{
    build_graph, hiporank_rank, score_sentences, DocumentGraph, Edge, HipoRankConfig, NodeId,
};
pub use salience::salience_rank;

/// Sentences forwarded to generation when no other budget is given.
pub const DEFAULT_K: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractMethod {
    Salience,
    #[serde(rename = "hiporank")]
    HipoRank,
}

impl ExtractMethod {
    pub fn label(self) -> &'static str {
        match self {
            ExtractMethod::Salience => "salience",
            ExtractMethod::HipoRank => "hiporank",
        }
    }
}

impl fmt::Display for ExtractMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ExtractMethod {
    type Err = ExtractError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "salience" => Ok(ExtractMethod::Salience),
            "hiporank" => Ok(ExtractMethod::HipoRank),
            other => Err(ExtractError::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("no sentences to rank")]
    EmptyInput,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("unknown extraction method `{0}` (expected salience or hiporank)")]
    UnknownMethod(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("score for sentence {global_index} is not finite")]
    NonFiniteScore { global_index: usize },
    #[error("embedding for sentence node {node} has zero norm or wrong dimension")]
    BadEmbedding { node: usize },
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub sentence: SentenceRecord,
    pub score: f64,
}

/// Top-k sentences ordered by descending score, ties by ascending
/// `global_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractiveSummary {
    pub items: Vec<ScoredSentence>,
    pub k_requested: usize,
    pub method: ExtractMethod,
}

impl ExtractiveSummary {
    /// Rank `scored` and keep the first `min(k, n)`.
    pub fn select(
        mut scored: Vec<ScoredSentence>,
        k: usize,
        method: ExtractMethod,
    ) -> Result<Self, ExtractError> {
        if k == 0 {
            return Err(ExtractError::InvalidK);
        }
        if let Some(bad) = scored.iter().find(|s| !s.score.is_finite()) {
            return Err(ExtractError::NonFiniteScore {
                global_index: bad.sentence.global_index,
            });
        }
        scored.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then(a.sentence.global_index.cmp(&b.sentence.global_index))
        });
        scored.truncate(k);
        Ok(Self {
            items: scored,
            k_requested: k,
            method,
        })
    }

    pub fn texts(&self) -> Vec<String> {
        self.items.iter().map(|s| s.sentence.text.clone()).collect()
    }

    pub fn global_indices(&self) -> Vec<usize> {
        self.items.iter().map(|s| s.sentence.global_index).collect()
    }
}

/// Extraction method together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum ExtractorConfig {
    Salience { k: usize },
    #[serde(rename = "hiporank")]
    HipoRank(HipoRankConfig),
}

impl ExtractorConfig {
    pub fn method(&self) -> ExtractMethod {
        match self {
            ExtractorConfig::Salience { .. } => ExtractMethod::Salience,
            ExtractorConfig::HipoRank(_) => ExtractMethod::HipoRank,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            ExtractorConfig::Salience { k } => *k,
            ExtractorConfig::HipoRank(cfg) => cfg.k,
        }
    }

    pub fn validate(&self) -> Result<(), ExtractError> {
        match self {
            ExtractorConfig::Salience { k } if *k == 0 => Err(ExtractError::InvalidK),
            ExtractorConfig::Salience { .. } => Ok(()),
            ExtractorConfig::HipoRank(cfg) => cfg.validate(),
        }
    }

    pub fn extract(
        &self,
        section_title: &str,
        sentences: &[SentenceRecord],
        scorer: &dyn LikelihoodScorer,
        embedder: &dyn Embedder,
    ) -> Result<ExtractiveSummary, ExtractError> {
        match self {
            ExtractorConfig::Salience { k } => salience_rank(section_title, sentences, scorer, *k),
            ExtractorConfig::HipoRank(cfg) => hiporank_rank(section_title, sentences, embedder, cfg),
        }
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn records(n: usize) -> Vec<SentenceRecord> {
        (0..n)
            .map(|i| SentenceRecord {
                text: format!("sentence {i}."),
                ref_index: 0,
                sent_index: i,
                global_index: i,
            })
            .collect()
    }

    pub fn scored(scores: &[f64]) -> Vec<ScoredSentence> {
        records(scores.len())
            .into_iter()
            .zip(scores)
            .map(|(sentence, &score)| ScoredSentence { sentence, score })
            .collect()
    }
}

//! Sentence embeddings and language-model likelihood scores.
//!
//! Two backends implement [`Embedder`] and [`LikelihoodScorer`]:
//!
//! * [`StubEncoder`] is pure and platform-independent. A text is first
//!   truncated to 512 whitespace tokens, then hashed with 64-bit FNV-1a
//!   over its UTF-8 bytes. The embedding expands that hash through a
//!   splitmix64 stream into 64 reals in [-1, 1) and L2-normalizes them.
//!   The likelihood is `-(hash % 1000) / 1000 - 0.001 * byte_len`.
//! * [`HttpEncoder`] calls `POST /embed {"sentences": [..]}` returning
//!   `{"dim": d, "vectors": [[..]]}` and `POST /loglik {"texts": [..]}`
//!   returning `{"scores": [..]}`.

use serde::{Deserialize, Serialize};

use crate::hashing::{fnv1a64, SplitMix64};
use crate::transport::{run_batched, GatewayError, HttpConfig, JsonClient};

pub const STUB_DIM: usize = 64;
pub const DEFAULT_MAX_INPUT_TOKENS: usize = 512;

/// One unit-norm vector per input sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingBatch {
    pub vectors: Vec<Vec<f64>>,
    /// Vector dimension; 0 only for an empty batch from a backend that does
    /// not declare its dimension up front.
    pub dim: usize,
}

impl EmbeddingBatch {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Length-normalized log-likelihood. Only comparable within one backend and
/// run.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LikelihoodScore(pub f64);

impl LikelihoodScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub trait Embedder: Send + Sync {
    fn embed(&self, sentences: &[&str]) -> Result<EmbeddingBatch, GatewayError>;
}

pub trait LikelihoodScorer: Send + Sync {
    fn score_likelihood(&self, texts: &[&str]) -> Result<Vec<LikelihoodScore>, GatewayError>;
}

fn check_non_empty(texts: &[&str]) -> Result<(), GatewayError> {
    match texts.iter().position(|t| t.trim().is_empty()) {
        Some(i) => Err(GatewayError::InvalidInput(format!("text {i} is empty"))),
        None => Ok(()),
    }
}

/// Keep at most `max_tokens` whitespace tokens. Texts within the limit are
/// returned unchanged.
pub fn truncate_tokens(text: &str, max_tokens: usize) -> std::borrow::Cow<'_, str> {
    match text.split_whitespace().nth(max_tokens) {
        None => std::borrow::Cow::Borrowed(text),
        Some(_) => std::borrow::Cow::Owned(
            text.split_whitespace()
                .take(max_tokens)
                .collect::<Vec<_>>()
                .join(" "),
        ),
    }
}

#[derive(Debug, Clone)]
pub struct StubEncoder {
    pub max_input_tokens: usize,
}

impl Default for StubEncoder {
    fn default() -> Self {
        Self {
            max_input_tokens: DEFAULT_MAX_INPUT_TOKENS,
        }
    }
}

impl StubEncoder {
    pub fn embed_one(&self, text: &str) -> Vec<f64> {
        let text = truncate_tokens(text, self.max_input_tokens);
        let mut stream = SplitMix64::new(fnv1a64(text.as_bytes()));
        let raw: Vec<f64> = (0..STUB_DIM).map(|_| stream.next_signed_unit()).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        raw.into_iter().map(|x| x / norm).collect()
    }

    pub fn likelihood_one(&self, text: &str) -> LikelihoodScore {
        let text = truncate_tokens(text, self.max_input_tokens);
        let hash = fnv1a64(text.as_bytes());
        LikelihoodScore(-((hash % 1000) as f64) / 1000.0 - 0.001 * text.len() as f64)
    }
}

impl Embedder for StubEncoder {
    fn embed(&self, sentences: &[&str]) -> Result<EmbeddingBatch, GatewayError> {
        check_non_empty(sentences)?;
        Ok(EmbeddingBatch {
            vectors: sentences.iter().map(|s| self.embed_one(s)).collect(),
            dim: STUB_DIM,
        })
    }
}

impl LikelihoodScorer for StubEncoder {
    fn score_likelihood(&self, texts: &[&str]) -> Result<Vec<LikelihoodScore>, GatewayError> {
        check_non_empty(texts)?;
        Ok(texts.iter().map(|t| self.likelihood_one(t)).collect())
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    sentences: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct LoglikRequest<'a> {
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct LoglikResponse {
    scores: Vec<f64>,
}

/// Client for the model service's `/embed` and `/loglik` endpoints.
#[derive(Debug, Clone)]
pub struct HttpEncoder {
    client: JsonClient,
}

impl HttpEncoder {
    pub fn new(config: HttpConfig) -> Self {
        Self {
            client: JsonClient::new(config),
        }
    }

    fn embed_batch(&self, batch: &[&str]) -> Result<Vec<Vec<f64>>, GatewayError> {
        let url = self.client.url("/embed");
        let resp: EmbedResponse = self.client.post("/embed", &EmbedRequest { sentences: batch })?;
        if resp.vectors.len() != batch.len() {
            return Err(GatewayError::protocol(
                &url,
                format!("sent {} sentences, got {} vectors", batch.len(), resp.vectors.len()),
            ));
        }
        for (i, v) in resp.vectors.iter().enumerate() {
            if v.len() != resp.dim {
                return Err(GatewayError::protocol(
                    &url,
                    format!("vector {i} has dimension {}, declared {}", v.len(), resp.dim),
                ));
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
                return Err(GatewayError::protocol(&url, format!("vector {i} has norm {norm}")));
            }
        }
        Ok(resp.vectors)
    }

    fn loglik_batch(&self, batch: &[&str]) -> Result<Vec<LikelihoodScore>, GatewayError> {
        let url = self.client.url("/loglik");
        let resp: LoglikResponse = self.client.post("/loglik", &LoglikRequest { texts: batch })?;
        if resp.scores.len() != batch.len() {
            return Err(GatewayError::protocol(
                &url,
                format!("sent {} texts, got {} scores", batch.len(), resp.scores.len()),
            ));
        }
        if let Some(i) = resp.scores.iter().position(|s| !s.is_finite()) {
            return Err(GatewayError::protocol(&url, format!("score {i} is not finite")));
        }
        Ok(resp.scores.into_iter().map(LikelihoodScore).collect())
    }
}

impl Embedder for HttpEncoder {
    fn embed(&self, sentences: &[&str]) -> Result<EmbeddingBatch, GatewayError> {
        check_non_empty(sentences)?;
        let cfg = self.client.config();
        let vectors = run_batched(sentences, cfg.batch_size, cfg.max_in_flight, |b| self.embed_batch(b))?;
        let dim = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(GatewayError::protocol(
                &self.client.url("/embed"),
                "dimension differs between batches",
            ));
        }
        Ok(EmbeddingBatch { vectors, dim })
    }
}

impl LikelihoodScorer for HttpEncoder {
    fn score_likelihood(&self, texts: &[&str]) -> Result<Vec<LikelihoodScore>, GatewayError> {
        check_non_empty(texts)?;
        let cfg = self.client.config();
        run_batched(texts, cfg.batch_size, cfg.max_in_flight, |b| self.loglik_batch(b))
    }
}

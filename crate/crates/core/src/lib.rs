//! Cross-lingual multi-document summarization of encyclopedic sections.
//!
//! Reference documents cited by a Wikipedia section are segmented into
//! sentences, ranked by an unsupervised extractor ([`extract::salience_rank`]
//! or [`extract::hiporank_rank`]), and the top sentences are handed to an
//! abstractive generator ([`generate`]). Generated text is evaluated with
//! ROUGE-L, chrF++ and METEOR ([`metrics`]) and reported per language,
//! domain and (domain, language) cell ([`experiment`]).
//!
//! Model-backed steps go through two gateways, each with a deterministic
//! stub so that the full pipeline runs offline:
//!
//! ```
//! use refsum::encoder::StubEncoder;
//! use refsum::extract::{hiporank_rank, HipoRankConfig};
//! use refsum::segment::segment;
//!
//! let sentences = segment(&["The film opened in 1975. It ran for five years.",
//!                           "Critics praised the score. The cast toured India."]);
//! let config = HipoRankConfig { k: 2, ..Default::default() };
//! let summary = hiporank_rank("Reception", &sentences, &StubEncoder::default(), &config)?;
//! assert_eq!(summary.items.len(), 2);
//! # Ok::<(), refsum::extract::ExtractError>(())
//! ```
//!
//! The guide in `book/` walks through each stage.

pub mod corpus;
pub mod encoder;
pub mod experiment;
pub mod extract;
pub mod generate;
mod hashing;
pub mod metrics;
pub mod segment;
pub mod transport;

pub use hashing::{fnv1a64, SplitMix64};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/extraction.md")]
    mod extraction {}
    #[doc = include_str!("../../../book/src/generation.md")]
    mod generation {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! Title-conditioned salience ranking.
//!
//! Every sentence is prefixed with the section title and a single space,
//! scored by the language-model backend, and the k most likely sentences
//! are kept. The backend is only ever queried, never updated.

use super::{ExtractError, ExtractMethod, ExtractiveSummary, ScoredSentence};
use crate::encoder::LikelihoodScorer;
use crate::segment::SentenceRecord;

pub fn salience_input(section_title: &str, sentence: &str) -> String {
    format!("{section_title} {sentence}")
}

pub fn salience_rank(
    section_title: &str,
    sentences: &[SentenceRecord],
    scorer: &dyn LikelihoodScorer,
    k: usize,
) -> Result<ExtractiveSummary, ExtractError> {
    if sentences.is_empty() {
        return Err(ExtractError::EmptyInput);
    }
    if k == 0 {
        return Err(ExtractError::InvalidK);
    }
    let inputs: Vec<String> = sentences
        .iter()
        .map(|s| salience_input(section_title, &s.text))
        .collect();
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let scores = scorer.score_likelihood(&refs)?;
    if scores.len() != sentences.len() {
        return Err(ExtractError::Gateway(crate::transport::GatewayError::Protocol {
            endpoint: String::new(),
            message: format!("{} texts scored as {}", sentences.len(), scores.len()),
        }));
    }
    let scored = sentences
        .iter()
        .zip(scores)
        .map(|(sentence, score)| ScoredSentence {
            sentence: sentence.clone(),
            score: score.value(),
        })
        .collect();
    ExtractiveSummary::select(scored, k, ExtractMethod::Salience)
}

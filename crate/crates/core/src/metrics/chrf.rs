//! chrF++: character n-gram F-score extended with word n-grams.

use std::collections::HashMap;
use std::hash::Hash;

use super::text::words;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChrfParams {
    pub char_order: usize,
    pub word_order: usize,
    pub beta: f64,
}

impl Default for ChrfParams {
    fn default() -> Self {
        Self {
            char_order: 6,
            word_order: 2,
            beta: 2.0,
        }
    }
}

fn ngram_counts<T: Hash + Eq + Clone>(items: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    if n == 0 || items.len() < n {
        return counts;
    }
    for window in items.windows(n) {
        *counts.entry(window).or_insert(0) += 1;
    }
    counts
}

/// F-beta of one n-gram order, or `None` when the reference has no n-grams
/// of that order.
fn order_fscore<T: Hash + Eq + Clone>(cand: &[T], refr: &[T], n: usize, beta: f64) -> Option<f64> {
    let ref_counts = ngram_counts(refr, n);
    if ref_counts.is_empty() {
        return None;
    }
    let cand_counts = ngram_counts(cand, n);
    let ref_total: usize = ref_counts.values().sum();
    let cand_total: usize = cand_counts.values().sum();
    let matched: usize = cand_counts
        .iter()
        .map(|(gram, c)| (*c).min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    if matched == 0 {
        return Some(0.0);
    }
    let p = matched as f64 / cand_total as f64;
    let r = matched as f64 / ref_total as f64;
    let b2 = beta * beta;
    Some((1.0 + b2) * p * r / (b2 * p + r))
}

pub fn chrf_with(candidate: &str, reference: &str, params: &ChrfParams) -> f64 {
    let cand_words = words(candidate, false);
    let ref_words = words(reference, false);
    let cand_chars: Vec<char> = cand_words.iter().flat_map(|w| w.chars()).collect();
    let ref_chars: Vec<char> = ref_words.iter().flat_map(|w| w.chars()).collect();

    let char_scores = (1..=params.char_order)
        .filter_map(|n| order_fscore(&cand_chars, &ref_chars, n, params.beta));
    let word_scores = (1..=params.word_order)
        .filter_map(|n| order_fscore(&cand_words, &ref_words, n, params.beta));
    let (sum, count) = char_scores
        .chain(word_scores)
        .fold((0.0, 0usize), |(s, c), f| (s + f, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// chrF++ with character order 6, word order 2 and beta 2.
pub fn chrf(candidate: &str, reference: &str) -> f64 {
    chrf_with(candidate, reference, &ChrfParams::default())
}

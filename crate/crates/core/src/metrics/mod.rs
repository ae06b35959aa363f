//! ROUGE-L, chrF++ and METEOR, scored per instance and micro-averaged.
//!
//! All three tokenize on whitespace after NFC normalization. ROUGE-L and
//! METEOR compare lowercased tokens; chrF++ is case-sensitive.

mod chrf;
mod meteor;
mod rouge;
mod text;

use serde::{Deserialize, Serialize};

pub use chrf::{chrf, chrf_with, ChrfParams};
pub use meteor::{align, meteor, meteor_with, Alignment, MeteorParams};
pub use rouge::{lcs_len, rouge_l};
pub use text::words;

/// Scores in [0, 1]. Tables multiply by 100.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple {
    pub rouge_l: f64,
    pub chrf: f64,
    pub meteor: f64,
}

impl MetricTriple {
    pub fn score(candidate: &str, reference: &str) -> Self {
        Self {
            rouge_l: rouge_l(candidate, reference),
            chrf: chrf(candidate, reference),
            meteor: meteor(candidate, reference),
        }
    }

    pub fn scaled(&self) -> Self {
        Self {
            rouge_l: self.rouge_l * 100.0,
            chrf: self.chrf * 100.0,
            meteor: self.meteor * 100.0,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cannot average an empty set of rows")]
    EmptyRows,
}

/// Uniform mean of instance-level scores.
pub fn micro_average<'a, I>(rows: I) -> Result<MetricTriple, MetricsError>
where
    I: IntoIterator<Item = &'a MetricTriple>,
{
    let (sum, n) = rows.into_iter().fold((MetricTriple::default(), 0usize), |(acc, n), r| {
        (
            MetricTriple {
                rouge_l: acc.rouge_l + r.rouge_l,
                chrf: acc.chrf + r.chrf,
                meteor: acc.meteor + r.meteor,
            },
            n + 1,
        )
    });
    if n == 0 {
        return Err(MetricsError::EmptyRows);
    }
    let n = n as f64;
    Ok(MetricTriple {
        rouge_l: sum.rouge_l / n,
        chrf: sum.chrf / n,
        meteor: sum.meteor / n,
    })
}

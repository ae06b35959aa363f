//! Stratified train/val/test assignment per (domain, language) cell.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::{Cell, SectionInstance, Split};
use super::CorpusError;
use crate::hashing::fnv1a64;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.6,
            val: 0.2,
            test: 0.2,
        }
    }
}

impl SplitRatios {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self, CorpusError> {
        let ratios = Self { train, val, test };
        ratios.validate()?;
        Ok(ratios)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let parts = self.as_array();
        if parts.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(CorpusError::InvalidRatios(format!(
                "ratios must be positive, got {parts:?}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > EPS {
            return Err(CorpusError::InvalidRatios(format!(
                "ratios must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 3] {
        [self.train, self.val, self.test]
    }
}

impl std::str::FromStr for SplitRatios {
    type Err = CorpusError;

    /// Parses `"0.6,0.2,0.2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CorpusError::InvalidRatios(format!("`{s}`: {e}")))?;
        match parts.as_slice() {
            [train, val, test] => SplitRatios::new(*train, *val, *test),
            _ => Err(CorpusError::InvalidRatios(format!(
                "`{s}`: expected three comma-separated values"
            ))),
        }
    }
}

/// Number of instances per split for a cell of size `n`: floor of each
/// exact share, then the leftover instances go to the largest fractional
/// remainders, ties resolved train > val > test.
pub fn allocate(n: usize, ratios: &SplitRatios) -> [usize; 3] {
    let exact = ratios.as_array().map(|r| r * n as f64);
    let mut counts = exact.map(|x| (x + EPS).floor() as usize);
    let fractions: Vec<f64> = exact
        .iter()
        .zip(counts.iter())
        .map(|(x, c)| (x - *c as f64).max(0.0))
        .collect();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| {
        if (fractions[a] - fractions[b]).abs() < EPS {
            a.cmp(&b)
        } else {
            fractions[b].total_cmp(&fractions[a])
        }
    });
    let assigned: usize = counts.iter().sum();
    for &slot in order.iter().take(n.saturating_sub(assigned)) {
        counts[slot] += 1;
    }
    counts
}

/// Controls interaction with split labels already present in the corpus.
#[derive(Debug, Clone, Copy, Default)]
pub struct SplitPolicy {
    /// Reassign every instance even if some already carry a label.
    pub overwrite_existing: bool,
}

/// Assign split labels stratified by (domain, language).
///
/// Within each cell, members are ordered by id and shuffled with a ChaCha8
/// stream seeded from `seed` and the cell label, so the result does not
/// depend on input order. Returned instances keep the input order.
pub fn stratified_split(
    corpus: &[SectionInstance],
    ratios: &SplitRatios,
    seed: u64,
    policy: SplitPolicy,
) -> Result<Vec<SectionInstance>, CorpusError> {
    ratios.validate()?;
    let labelled = corpus.iter().filter(|i| i.split != Split::Unassigned).count();
    if labelled > 0 && !policy.overwrite_existing {
        return Err(CorpusError::PresetSplits { labelled });
    }

    let mut cells: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (idx, inst) in corpus.iter().enumerate() {
        cells.entry(inst.cell()).or_default().push(idx);
    }

    let mut out = corpus.to_vec();
    for (cell, mut members) in cells {
        members.sort_by(|&a, &b| corpus[a].id.cmp(&corpus[b].id));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a64(cell.to_string().as_bytes()));
        members.shuffle(&mut rng);
        let [train, val, _] = allocate(members.len(), ratios);
        for (rank, idx) in members.into_iter().enumerate() {
            out[idx].split = if rank < train {
                Split::Train
            } else if rank < train + val {
                Split::Val
            } else {
                Split::Test
            };
        }
    }
    Ok(out)
}

/// Per-cell `[train, val, test]` counts.
pub fn split_counts(corpus: &[SectionInstance]) -> BTreeMap<Cell, [usize; 3]> {
    let mut counts: BTreeMap<Cell, [usize; 3]> = BTreeMap::new();
    for inst in corpus {
        let slot = match inst.split {
            Split::Train => 0,
            Split::Val => 1,
            Split::Test => 2,
            Split::Unassigned => continue,
        };
        counts.entry(inst.cell()).or_default()[slot] += 1;
    }
    counts
}

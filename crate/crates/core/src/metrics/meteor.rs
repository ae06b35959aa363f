//! Exact-match METEOR.
//!
//! The alignment maps candidate unigrams to identical reference unigrams,
//! one-to-one. Among alignments with the maximum number of matches the one
//! with the fewest chunks is chosen, where a chunk is a maximal run of
//! matches adjacent in both the candidate and the reference. The search is
//! a depth-first branch and bound that is exact unless it exhausts
//! [`MeteorParams::search_budget`] expanded nodes, in which case the best
//! alignment found so far is used. Search order is fixed, so the result is
//! deterministic either way.

use std::collections::HashMap;

use super::text::words;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeteorParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub search_budget: usize,
}

impl Default for MeteorParams {
    fn default() -> Self {
        Self {
            alpha: 0.9,
            beta: 3.0,
            gamma: 0.5,
            search_budget: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alignment {
    pub matches: usize,
    pub chunks: usize,
    /// False when the search budget cut the search short.
    pub exact: bool,
}

struct Search<'a> {
    /// Word-type id per candidate position.
    cand: &'a [usize],
    /// Reference positions per word-type id, ascending.
    ref_positions: &'a [Vec<usize>],
    used: Vec<bool>,
    /// Matches still to be made per type.
    need: Vec<usize>,
    /// Candidate occurrences at or after the current position per type.
    remaining: Vec<usize>,
    best: usize,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    /// `prev` is the reference position matched at `pos - 1`, if any.
    fn descend(&mut self, pos: usize, prev: Option<usize>, chunks: usize) {
        if chunks >= self.best {
            return;
        }
        if pos == self.cand.len() {
            self.best = chunks;
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return;
        }
        let ty = self.cand[pos];
        self.remaining[ty] -= 1;

        if self.need[ty] > 0 {
            self.need[ty] -= 1;
            // Continuing the current chunk first, then the rest in order.
            let continuation = prev.map(|p| p + 1);
            let candidates: Vec<usize> = continuation
                .into_iter()
                .filter(|j| self.ref_positions[ty].binary_search(j).is_ok())
                .chain(
                    self.ref_positions[ty]
                        .iter()
                        .copied()
                        .filter(|j| Some(*j) != continuation),
                )
                .collect();
            for j in candidates {
                if self.used[j] {
                    continue;
                }
                self.used[j] = true;
                let extra = usize::from(Some(j) != continuation);
                self.descend(pos + 1, Some(j), chunks + extra);
                self.used[j] = false;
            }
            self.need[ty] += 1;
        }
        // Leaving this occurrence unmatched is allowed only if later
        // occurrences can still satisfy the quota.
        if self.remaining[ty] >= self.need[ty] {
            self.descend(pos + 1, None, chunks);
        }
        self.remaining[ty] += 1;
    }
}

/// Maximum-match, minimum-chunk exact alignment of two token sequences.
pub fn align<T: AsRef<str>>(cand: &[T], refr: &[T], budget: usize) -> Alignment {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let cand_ids = intern(&mut ids, cand);
    let ref_ids = intern(&mut ids, refr);
    let types = ids.len();

    let mut ref_positions = vec![Vec::new(); types];
    for (j, &t) in ref_ids.iter().enumerate() {
        ref_positions[t].push(j);
    }
    let mut remaining = vec![0usize; types];
    for &t in &cand_ids {
        remaining[t] += 1;
    }
    let need: Vec<usize> = (0..types)
        .map(|t| remaining[t].min(ref_positions[t].len()))
        .collect();
    let matches: usize = need.iter().sum();
    if matches == 0 {
        return Alignment {
            matches: 0,
            chunks: 0,
            exact: true,
        };
    }

    let mut search = Search {
        cand: &cand_ids,
        ref_positions: &ref_positions,
        used: vec![false; ref_ids.len()],
        need,
        remaining,
        // Every match in its own chunk is always achievable.
        best: matches + 1,
        nodes: 0,
        budget,
    };
    search.descend(0, None, 0);
    Alignment {
        matches,
        chunks: search.best.min(matches),
        exact: search.nodes <= budget,
    }
}

fn intern<'a, T: AsRef<str>>(ids: &mut HashMap<&'a str, usize>, seq: &'a [T]) -> Vec<usize> {
    seq.iter()
        .map(|w| {
            let next = ids.len();
            *ids.entry(w.as_ref()).or_insert(next)
        })
        .collect()
}

pub fn meteor_with(candidate: &str, reference: &str, params: &MeteorParams) -> f64 {
    let cand = words(candidate, true);
    let refr = words(reference, true);
    let alignment = align(&cand, &refr, params.search_budget);
    if alignment.matches == 0 {
        return 0.0;
    }
    let m = alignment.matches as f64;
    let p = m / cand.len() as f64;
    let r = m / refr.len() as f64;
    let f_mean = p * r / (params.alpha * p + (1.0 - params.alpha) * r);
    let penalty = params.gamma * (alignment.chunks as f64 / m).powf(params.beta);
    f_mean * (1.0 - penalty)
}

/// METEOR with alpha 0.9, beta 3, gamma 0.5.
pub fn meteor(candidate: &str, reference: &str) -> f64 {
    meteor_with(candidate, reference, &MeteorParams::default())
}

//! Hierarchical and positional graph ranking.
//!
//! Each reference document is one section of a pseudo-document, in
//! reference order. The graph has one node per sentence and one per
//! section; a section embedding is the normalized mean of its sentence
//! embeddings and every edge weight starts from cosine similarity.
//!
//! *Intra-section edges* connect every ordered pair of distinct sentences
//! of the same section. With boundary distance `d(i) = min(pos, n - 1 - pos)`
//! the edge `j -> i` has weight `sim(i, j)` when `d(i) <= d(j)` (it points
//! toward the boundary) and `alpha * sim(i, j)` otherwise.
//!
//! *Inter-section edges* run from every other section `t` to sentence `i`
//! with weight `sim(e_i, E_t) * B(section(i))`, where `B(p) = 1` for the
//! first and last section and `alpha` otherwise.
//!
//! A sentence scores
//! `lambda_intra * mean(incoming intra) + lambda_inter * mean(incoming inter)`,
//! an empty mean being zero. No sentence-sentence edge crosses sections and
//! section nodes are not scored.

use serde::{Deserialize, Serialize};

use super::{ExtractError, ExtractMethod, ExtractiveSummary, ScoredSentence, DEFAULT_K};
use crate::encoder::Embedder;
use crate::segment::SentenceRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HipoRankConfig {
    /// Discount for edges directed away from a boundary, in [0, 1].
    pub alpha: f64,
    pub lambda_intra: f64,
    pub lambda_inter: f64,
    pub k: usize,
}

impl Default for HipoRankConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            lambda_intra: 1.0,
            lambda_inter: 1.0,
            k: DEFAULT_K,
        }
    }
}

impl HipoRankConfig {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(ExtractError::InvalidConfig(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        for (name, v) in [("lambda_intra", self.lambda_intra), ("lambda_inter", self.lambda_inter)] {
            if !v.is_finite() || v < 0.0 {
                return Err(ExtractError::InvalidConfig(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.k == 0 {
            return Err(ExtractError::InvalidK);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeId {
    Sentence(usize),
    Section(usize),
}

/// A directed edge into a sentence node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: NodeId,
    /// Target sentence node.
    pub target: usize,
    /// Cosine similarity before positional weighting.
    pub similarity: f64,
    /// Whether the `alpha` discount applies.
    pub discounted: bool,
}

impl Edge {
    pub fn weight(&self, alpha: f64) -> f64 {
        if self.discounted {
            self.similarity * alpha
        } else {
            self.similarity
        }
    }
}

/// Sentence and section nodes with their pairwise similarities. Positional
/// discounts are stored as flags so one graph serves any `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentGraph {
    sections: Vec<Vec<usize>>,
    section_of: Vec<usize>,
    position_of: Vec<usize>,
    sentence_embeddings: Vec<Vec<f64>>,
    section_embeddings: Vec<Vec<f64>>,
    /// Per section, row-major `n x n` similarities.
    intra_similarity: Vec<Vec<f64>>,
    /// Per sentence, similarity to every section node.
    inter_similarity: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn boundary_distance(pos: usize, len: usize) -> usize {
    pos.min(len - 1 - pos)
}

impl DocumentGraph {
    /// Build from per-section sentence counts and one embedding per
    /// sentence in section order. Embeddings are normalized on entry.
    pub fn from_embeddings(
        section_sizes: &[usize],
        embeddings: Vec<Vec<f64>>,
    ) -> Result<Self, ExtractError> {
        let total: usize = section_sizes.iter().sum();
        if total == 0 {
            return Err(ExtractError::EmptyInput);
        }
        if embeddings.len() != total {
            return Err(ExtractError::InvalidConfig(format!(
                "{} embeddings for {total} sentences",
                embeddings.len()
            )));
        }
        let dim = embeddings[0].len();
        let mut sentence_embeddings = Vec::with_capacity(total);
        for (node, v) in embeddings.into_iter().enumerate() {
            let n = norm(&v);
            if v.len() != dim || dim == 0 || !(n.is_finite() && n > 0.0) {
                return Err(ExtractError::BadEmbedding { node });
            }
            sentence_embeddings.push(v.into_iter().map(|x| x / n).collect::<Vec<_>>());
        }

        let mut sections = Vec::new();
        let mut section_of = Vec::with_capacity(total);
        let mut position_of = Vec::with_capacity(total);
        let mut next = 0;
        for &size in section_sizes.iter().filter(|&&s| s > 0) {
            let id = sections.len();
            sections.push((next..next + size).collect::<Vec<_>>());
            section_of.extend(std::iter::repeat_n(id, size));
            position_of.extend(0..size);
            next += size;
        }

        // A mean that cancels to zero has no direction; it stays the zero
        // vector and contributes zero similarity.
        let section_embeddings: Vec<Vec<f64>> = sections
            .iter()
            .map(|members| {
                let mut mean = vec![0.0; dim];
                for &s in members {
                    for (m, x) in mean.iter_mut().zip(&sentence_embeddings[s]) {
                        *m += x;
                    }
                }
                let n = norm(&mean);
                if n > 1e-12 {
                    mean.iter_mut().for_each(|m| *m /= n);
                } else {
                    mean.iter_mut().for_each(|m| *m = 0.0);
                }
                mean
            })
            .collect();

        let intra_similarity = sections
            .iter()
            .map(|members| {
                let n = members.len();
                let mut sim = vec![0.0; n * n];
                for a in 0..n {
                    for b in (a + 1)..n {
                        let s = dot(&sentence_embeddings[members[a]], &sentence_embeddings[members[b]])
                            .clamp(-1.0, 1.0);
                        sim[a * n + b] = s;
                        sim[b * n + a] = s;
                    }
                }
                sim
            })
            .collect();

        let inter_similarity = sentence_embeddings
            .iter()
            .map(|e| {
                section_embeddings
                    .iter()
                    .map(|sec| dot(e, sec).clamp(-1.0, 1.0))
                    .collect()
            })
            .collect();

        Ok(Self {
            sections,
            section_of,
            position_of,
            sentence_embeddings,
            section_embeddings,
            intra_similarity,
            inter_similarity,
        })
    }

    pub fn sentence_count(&self) -> usize {
        self.section_of.len()
    }

    pub fn sections(&self) -> &[Vec<usize>] {
        &self.sections
    }

    pub fn section_of(&self, sentence: usize) -> usize {
        self.section_of[sentence]
    }

    pub fn sentence_embeddings(&self) -> &[Vec<f64>] {
        &self.sentence_embeddings
    }

    pub fn section_embeddings(&self) -> &[Vec<f64>] {
        &self.section_embeddings
    }

    fn section_is_boundary(&self, section: usize) -> bool {
        boundary_distance(section, self.sections.len()) == 0
    }

    /// Incoming intra-section edges of `target`.
    pub fn intra_edges_into(&self, target: usize) -> impl Iterator<Item = Edge> + '_ {
        let section = self.section_of[target];
        let members = &self.sections[section];
        let n = members.len();
        let pos_t = self.position_of[target];
        let d_t = boundary_distance(pos_t, n);
        let sim = &self.intra_similarity[section];
        (0..n).filter(move |&p| p != pos_t).map(move |pos_s| Edge {
            source: NodeId::Sentence(members[pos_s]),
            target,
            similarity: sim[pos_t * n + pos_s],
            discounted: d_t > boundary_distance(pos_s, n),
        })
    }

    /// Incoming inter-section edges of `target`, one per other section.
    pub fn inter_edges_into(&self, target: usize) -> impl Iterator<Item = Edge> + '_ {
        let own = self.section_of[target];
        let discounted = !self.section_is_boundary(own);
        (0..self.sections.len()).filter(move |&t| t != own).map(move |t| Edge {
            source: NodeId::Section(t),
            target,
            similarity: self.inter_similarity[target][t],
            discounted,
        })
    }

    pub fn intra_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.sentence_count()).flat_map(move |i| self.intra_edges_into(i))
    }

    pub fn inter_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.sentence_count()).flat_map(move |i| self.inter_edges_into(i))
    }
}

/// Group sentences into sections by reference document, preserving order.
pub fn sections_by_reference(sentences: &[SentenceRecord]) -> Vec<Vec<&SentenceRecord>> {
    let mut sections: Vec<Vec<&SentenceRecord>> = Vec::new();
    let mut current: Option<usize> = None;
    for s in sentences {
        if current != Some(s.ref_index) {
            sections.push(Vec::new());
            current = Some(s.ref_index);
        }
        sections.last_mut().expect("pushed above").push(s);
    }
    sections
}

/// Embed every sentence once and build the graph.
pub fn build_graph(
    sections: &[Vec<&SentenceRecord>],
    embedder: &dyn Embedder,
) -> Result<DocumentGraph, ExtractError> {
    let texts: Vec<&str> = sections
        .iter()
        .flatten()
        .map(|s| s.text.as_str())
        .collect();
    if texts.is_empty() {
        return Err(ExtractError::EmptyInput);
    }
    let batch = embedder.embed(&texts)?;
    let sizes: Vec<usize> = sections.iter().map(Vec::len).collect();
    DocumentGraph::from_embeddings(&sizes, batch.vectors)
}

/// `(sentence node, score)` for every sentence node, in node order.
pub fn score_sentences(graph: &DocumentGraph, config: &HipoRankConfig) -> Vec<(usize, f64)> {
    let mean = |edges: &mut dyn Iterator<Item = Edge>| {
        let (sum, count) = edges.fold((0.0, 0usize), |(s, c), e| (s + e.weight(config.alpha), c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    };
    (0..graph.sentence_count())
        .map(|i| {
            let intra = mean(&mut graph.intra_edges_into(i));
            let inter = mean(&mut graph.inter_edges_into(i));
            (i, config.lambda_intra * intra + config.lambda_inter * inter)
        })
        .collect()
}

/// Rank sentences by graph importance and keep the top `config.k`.
/// `section_title` does not influence the ranking.
pub fn hiporank_rank(
    _section_title: &str,
    sentences: &[SentenceRecord],
    embedder: &dyn Embedder,
    config: &HipoRankConfig,
) -> Result<ExtractiveSummary, ExtractError> {
    config.validate()?;
    if sentences.is_empty() {
        return Err(ExtractError::EmptyInput);
    }
    let sections = sections_by_reference(sentences);
    let graph = build_graph(&sections, embedder)?;
    let ordered: Vec<&SentenceRecord> = sections.into_iter().flatten().collect();
    let scored = score_sentences(&graph, config)
        .into_iter()
        .map(|(node, score)| ScoredSentence {
            sentence: ordered[node].clone(),
            score,
        })
        .collect();
    ExtractiveSummary::select(scored, config.k, ExtractMethod::HipoRank)
}

//! Property checks shared by the proptests and the acceptance runner. Each
//! returns a description of the first violation.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refsum::corpus::{
    allocate, stratified_split, Domain, Language, ReferenceDocument, SectionInstance, Split,
    SplitPolicy, SplitRatios,
};
use refsum::encoder::{EmbeddingBatch, Embedder, LikelihoodScore, LikelihoodScorer};
use refsum::extract::{hiporank_rank, salience_rank, HipoRankConfig};
use refsum::segment::SentenceRecord;
use refsum::transport::GatewayError;

use super::oracles;

/// Embeddings looked up by sentence text.
pub struct TableEmbedder(pub HashMap<String, Vec<f64>>);

impl Embedder for TableEmbedder {
    fn embed(&self, sentences: &[&str]) -> Result<EmbeddingBatch, GatewayError> {
        let vectors: Vec<Vec<f64>> = sentences.iter().map(|s| self.0[*s].clone()).collect();
        let dim = vectors.first().map_or(0, Vec::len);
        Ok(EmbeddingBatch { vectors, dim })
    }
}

/// Likelihoods looked up by the scored text.
pub struct TableScorer(pub HashMap<String, f64>);

impl LikelihoodScorer for TableScorer {
    fn score_likelihood(&self, texts: &[&str]) -> Result<Vec<LikelihoodScore>, GatewayError> {
        Ok(texts.iter().map(|t| LikelihoodScore(self.0[*t])).collect())
    }
}

pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Up to 5 sections of up to 8 sentences with random unit embeddings.
pub fn random_document(seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sections = rng.random_range(1..=5);
    (0..sections)
        .map(|_| {
            let n = rng.random_range(1..=8);
            (0..n).map(|_| random_unit(&mut rng, 16)).collect()
        })
        .collect()
}

/// Sentence records and an embedder for a document given as embeddings.
pub fn document_inputs(doc: &[Vec<Vec<f64>>]) -> (Vec<SentenceRecord>, TableEmbedder) {
    let mut records = Vec::new();
    let mut table = HashMap::new();
    for (s, sec) in doc.iter().enumerate() {
        for (p, e) in sec.iter().enumerate() {
            let text = format!("section {s} sentence {p}.");
            table.insert(text.clone(), e.clone());
            records.push(SentenceRecord {
                text,
                ref_index: s,
                sent_index: p,
                global_index: records.len(),
            });
        }
    }
    (records, TableEmbedder(table))
}

/// Library scores in global-index order.
pub fn library_scores(doc: &[Vec<Vec<f64>>], config: &HipoRankConfig) -> Vec<f64> {
    let (records, embedder) = document_inputs(doc);
    let all = HipoRankConfig { k: records.len(), ..*config };
    let summary = hiporank_rank("t", &records, &embedder, &all).expect("rank");
    let mut scores = vec![f64::NAN; records.len()];
    for item in summary.items {
        scores[item.sentence.global_index] = item.score;
    }
    scores
}

fn argsort(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

pub fn hiporank_case(seed: u64, tolerance: f64) -> Result<(), String> {
    let doc = random_document(seed);
    let config = HipoRankConfig::default();
    let got = library_scores(&doc, &config);
    let want = oracles::hiporank(&doc, config.alpha, config.lambda_intra, config.lambda_inter);
    for (i, (g, w)) in got.iter().zip(&want).enumerate() {
        if (g - w).abs() > tolerance {
            return Err(format!("seed {seed}: node {i} scored {g}, oracle {w}"));
        }
    }

    let reversed: Vec<Vec<Vec<f64>>> = doc
        .iter()
        .rev()
        .map(|sec| sec.iter().rev().cloned().collect())
        .collect();
    let back = library_scores(&reversed, &config);
    let n = got.len();
    for i in 0..n {
        if (got[i] - back[n - 1 - i]).abs() > 1e-12 {
            return Err(format!("seed {seed}: reversal moved node {i}: {} vs {}", got[i], back[n - 1 - i]));
        }
    }

    let order = argsort(&got);
    for c in [0.25, 2.0, 8.0] {
        let scaled = HipoRankConfig {
            lambda_intra: config.lambda_intra * c,
            lambda_inter: config.lambda_inter * c,
            ..config
        };
        if argsort(&library_scores(&doc, &scaled)) != order {
            return Err(format!("seed {seed}: scaling lambdas by {c} changed the ranking"));
        }
    }
    Ok(())
}

fn salience_inputs(values: &[f64], f: impl Fn(f64) -> f64) -> (Vec<SentenceRecord>, TableScorer) {
    let mut records = Vec::new();
    let mut table = HashMap::new();
    for (i, v) in values.iter().enumerate() {
        let text = format!("sentence {i}.");
        table.insert(format!("Title {text}"), f(*v));
        records.push(SentenceRecord {
            text,
            ref_index: 0,
            sent_index: i,
            global_index: i,
        });
    }
    (records, TableScorer(table))
}

fn salience_top(values: &[f64], k: usize, f: impl Fn(f64) -> f64) -> Vec<(usize, f64)> {
    let (records, scorer) = salience_inputs(values, f);
    salience_rank("Title", &records, &scorer, k)
        .expect("rank")
        .items
        .into_iter()
        .map(|s| (s.sentence.global_index, s.score))
        .collect()
}

/// Top-k under the raw scores equals top-k under affine, exp and cube
/// transforms, and equal scores are ordered by ascending index.
pub fn salience_case(values: &[f64], k: usize) -> Result<(), String> {
    let base = salience_top(values, k, |x| x);
    let ids: Vec<usize> = base.iter().map(|p| p.0).collect();
    type Transform = (&'static str, fn(f64) -> f64);
    let transforms: [Transform; 3] = [
        ("affine", |x| 2.0 * x + 3.0),
        ("exp", f64::exp),
        ("cube", |x| x * x * x),
    ];
    for (name, f) in transforms {
        let other: Vec<usize> = salience_top(values, k, f).iter().map(|p| p.0).collect();
        if other != ids {
            return Err(format!("{name} changed selection {ids:?} -> {other:?}"));
        }
    }
    for w in base.windows(2) {
        if w[0].1 == w[1].1 && w[0].0 > w[1].0 {
            return Err(format!("tie between {} and {} not broken by index", w[0].0, w[1].0));
        }
    }
    if let Some(&(last_id, last_score)) = base.last() {
        let kept: std::collections::HashSet<usize> = ids.iter().copied().collect();
        for (i, v) in values.iter().enumerate() {
            if !kept.contains(&i) && (*v > last_score || (*v == last_score && i < last_id)) {
                return Err(format!("sentence {i} ({v}) should have been kept"));
            }
        }
    }
    Ok(())
}

/// Split a corpus with the given cell sizes and check every cell's counts
/// and the partition of ids.
pub fn split_case(corpus: &[SectionInstance], ratios: &SplitRatios, seed: u64) -> Result<(), String> {
    let split = stratified_split(corpus, ratios, seed, SplitPolicy::default()).map_err(|e| e.to_string())?;
    if split.len() != corpus.len() {
        return Err(format!("{} instances in, {} out", corpus.len(), split.len()));
    }
    let mut in_ids: Vec<&str> = corpus.iter().map(|i| i.id.as_str()).collect();
    let mut out_ids: Vec<&str> = split.iter().map(|i| i.id.as_str()).collect();
    in_ids.sort_unstable();
    out_ids.sort_unstable();
    if in_ids != out_ids {
        return Err("split output is not a permutation of the input".into());
    }

    let mut cells: BTreeMap<String, [usize; 3]> = BTreeMap::new();
    for inst in &split {
        let slot = match inst.split {
            Split::Train => 0,
            Split::Val => 1,
            Split::Test => 2,
            Split::Unassigned => return Err(format!("{} left unassigned", inst.id)),
        };
        cells.entry(inst.cell().to_string()).or_default()[slot] += 1;
    }
    for (cell, counts) in cells {
        let n = counts.iter().sum();
        let want = expected_allocation(n, ratios);
        if counts != want {
            return Err(format!("cell {cell} of {n}: got {counts:?}, want {want:?}"));
        }
        if allocate(n, ratios) != want {
            return Err(format!("allocate({n}) disagrees with the oracle"));
        }
    }
    Ok(())
}

/// Floor per split, then hand out the remainder by largest fractional part,
/// ties going to train, then val, then test.
pub fn expected_allocation(n: usize, ratios: &SplitRatios) -> [usize; 3] {
    let shares = [ratios.train, ratios.val, ratios.test].map(|r| r * n as f64);
    let mut counts = shares.map(|s| (s + 1e-9).floor() as usize);
    let mut left = n - counts.iter().sum::<usize>();
    let mut order = [0usize, 1, 2];
    // Stable sort keeps priority order among equal remainders.
    order.sort_by(|&a, &b| {
        let ra = ((shares[a] - counts[a] as f64) * 1e6).round();
        let rb = ((shares[b] - counts[b] as f64) * 1e6).round();
        rb.total_cmp(&ra)
    });
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

pub fn instance(id: &str, domain: Domain, language: Language, refs: &[&str], target: &str) -> SectionInstance {
    SectionInstance {
        id: id.into(),
        language,
        domain,
        article_title: format!("Article {id}"),
        section_title: "Career".into(),
        references: refs
            .iter()
            .enumerate()
            .map(|(i, t)| ReferenceDocument {
                url: format!("https://example.org/{id}/{i}"),
                text: (*t).into(),
            })
            .collect(),
        target_text: target.into(),
        split: Split::Unassigned,
    }
}

/// One unlabelled instance per slot, cells assigned from `sizes` in
/// (domain, language) order.
pub fn synthetic_corpus(sizes: &[usize]) -> Vec<SectionInstance> {
    let cells: Vec<(Domain, Language)> = Domain::ALL
        .into_iter()
        .flat_map(|d| Language::ALL.into_iter().map(move |l| (d, l)))
        .collect();
    let mut out = Vec::new();
    for (c, &size) in sizes.iter().enumerate() {
        let (d, l) = cells[c % cells.len()];
        for i in 0..size {
            out.push(instance(&format!("c{c:02}-{i:04}"), d, l, &["One. Two."], "t"));
        }
    }
    out
}

/// `candidate<TAB>reference` lines; `#` starts a comment line.
pub fn read_pairs(path: &Path) -> Vec<(String, String)> {
    let text = std::fs::read_to_string(path).expect("pair fixture");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (c, r) = l.split_once('\t').expect("tab-separated pair");
            (c.to_string(), r.to_string())
        })
        .collect()
}

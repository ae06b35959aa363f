//! Slow reference implementations written straight from the metric and
//! ranking definitions. They share no code with the library.

use unicode_normalization::UnicodeNormalization;

pub fn tokens(text: &str, lowercase: bool) -> Vec<String> {
    let nfc: String = text.nfc().collect();
    let nfc = if lowercase { nfc.to_lowercase() } else { nfc };
    nfc.split_whitespace().map(String::from).collect()
}

fn is_subsequence(sub: &[&String], of: &[String]) -> bool {
    let mut it = of.iter();
    sub.iter().all(|s| it.any(|o| o == *s))
}

/// Longest common subsequence by enumerating every subsequence of `a`.
pub fn lcs_brute(a: &[String], b: &[String]) -> usize {
    assert!(a.len() <= 16, "brute force is exponential");
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let sub: Vec<&String> = (0..a.len()).filter(|i| mask & (1 << i) != 0).map(|i| &a[i]).collect();
        if is_subsequence(&sub, b) {
            best = size;
        }
    }
    best
}

pub fn rouge_l(candidate: &str, reference: &str) -> f64 {
    let c = tokens(candidate, true);
    let r = tokens(reference, true);
    let l = lcs_brute(&c, &r) as f64;
    if l == 0.0 {
        return 0.0;
    }
    let p = l / c.len() as f64;
    let rec = l / r.len() as f64;
    2.0 * p * rec / (p + rec)
}

/// All n-grams as owned vectors, duplicates kept.
fn ngrams<T: Clone>(seq: &[T], n: usize) -> Vec<Vec<T>> {
    if seq.len() < n {
        return Vec::new();
    }
    (0..=seq.len() - n).map(|i| seq[i..i + n].to_vec()).collect()
}

/// Clipped match count by linear scanning.
fn clipped_matches<T: PartialEq>(cand: &[Vec<T>], refr: &[Vec<T>]) -> usize {
    let mut taken = vec![false; refr.len()];
    let mut matched = 0;
    for g in cand {
        if let Some(j) = (0..refr.len()).find(|&j| !taken[j] && refr[j] == *g) {
            taken[j] = true;
            matched += 1;
        }
    }
    matched
}

fn fbeta<T: PartialEq>(cand: &[Vec<T>], refr: &[Vec<T>], beta: f64) -> Option<f64> {
    if refr.is_empty() {
        return None;
    }
    let m = clipped_matches(cand, refr) as f64;
    if m == 0.0 {
        return Some(0.0);
    }
    let p = m / cand.len() as f64;
    let r = m / refr.len() as f64;
    Some((1.0 + beta * beta) * p * r / (beta * beta * p + r))
}

/// chrF++: mean F2 over character orders 1..=6 (whitespace dropped) and word
/// orders 1..=2, skipping orders the reference is too short for.
pub fn chrf(candidate: &str, reference: &str) -> f64 {
    let cw = tokens(candidate, false);
    let rw = tokens(reference, false);
    let cc: Vec<char> = cw.concat().chars().collect();
    let rc: Vec<char> = rw.concat().chars().collect();
    let mut scores = Vec::new();
    for n in 1..=6 {
        scores.extend(fbeta(&ngrams(&cc, n), &ngrams(&rc, n), 2.0));
    }
    for n in 1..=2 {
        scores.extend(fbeta(&ngrams(&cw, n), &ngrams(&rw, n), 2.0));
    }
    if scores.is_empty() {
        0.0
    } else {
        scores.iter().sum::<f64>() / scores.len() as f64
    }
}

fn chunk_count(pairs: &[(usize, usize)]) -> usize {
    let mut sorted = pairs.to_vec();
    sorted.sort();
    let mut chunks = 0;
    let mut prev: Option<(usize, usize)> = None;
    for &(i, j) in &sorted {
        match prev {
            Some((pi, pj)) if i == pi + 1 && j == pj + 1 => {}
            _ => chunks += 1,
        }
        prev = Some((i, j));
    }
    chunks
}

fn enumerate_alignments(
    c: &[String],
    r: &[String],
    pos: usize,
    used: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    best: &mut (usize, usize),
) {
    if pos == c.len() {
        let m = pairs.len();
        let k = chunk_count(pairs);
        if m > best.0 || (m == best.0 && k < best.1) {
            *best = (m, k);
        }
        return;
    }
    enumerate_alignments(c, r, pos + 1, used, pairs, best);
    for j in 0..r.len() {
        if !used[j] && r[j] == c[pos] {
            used[j] = true;
            pairs.push((pos, j));
            enumerate_alignments(c, r, pos + 1, used, pairs, best);
            pairs.pop();
            used[j] = false;
        }
    }
}

/// Exact-match alignment found by exhaustive search: (matches, chunks).
pub fn meteor_alignment(c: &[String], r: &[String]) -> (usize, usize) {
    let mut best = (0, usize::MAX);
    enumerate_alignments(c, r, 0, &mut vec![false; r.len()], &mut Vec::new(), &mut best);
    if best.0 == 0 {
        (0, 0)
    } else {
        best
    }
}

pub fn meteor(candidate: &str, reference: &str) -> f64 {
    let c = tokens(candidate, true);
    let r = tokens(reference, true);
    let (m, chunks) = meteor_alignment(&c, &r);
    if m == 0 {
        return 0.0;
    }
    let m = m as f64;
    let p = m / c.len() as f64;
    let rec = m / r.len() as f64;
    let f_mean = p * rec / (0.9 * p + 0.1 * rec);
    f_mean * (1.0 - 0.5 * (chunks as f64 / m).powi(3))
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na < 1e-12 || nb < 1e-12 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// HipoRank scores by summing every incoming edge of every sentence.
/// `sections[s][p]` is the embedding of sentence `p` of section `s`.
/// Returns scores in section-major order.
pub fn hiporank(sections: &[Vec<Vec<f64>>], alpha: f64, lambda_intra: f64, lambda_inter: f64) -> Vec<f64> {
    let centroids: Vec<Vec<f64>> = sections
        .iter()
        .map(|sec| {
            let mut m = vec![0.0; sec[0].len()];
            for e in sec {
                let n = e.iter().map(|x| x * x).sum::<f64>().sqrt();
                for (a, x) in m.iter_mut().zip(e) {
                    *a += x / n;
                }
            }
            m
        })
        .collect();
    let ns = sections.len();
    let mut scores = Vec::new();
    for (s, sec) in sections.iter().enumerate() {
        let n = sec.len();
        let dist = |p: usize| p.min(n - 1 - p);
        for i in 0..n {
            let mut intra = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let sim = cosine(&sec[i], &sec[j]);
                intra += if dist(i) <= dist(j) { sim } else { alpha * sim };
            }
            let intra = if n > 1 { intra / (n - 1) as f64 } else { 0.0 };

            let boundary = if s == 0 || s == ns - 1 { 1.0 } else { alpha };
            let mut inter = 0.0;
            for (t, centroid) in centroids.iter().enumerate() {
                if t != s {
                    inter += cosine(&sec[i], centroid) * boundary;
                }
            }
            let inter = if ns > 1 { inter / (ns - 1) as f64 } else { 0.0 };
            scores.push(lambda_intra * intra + lambda_inter * inter);
        }
    }
    scores
}

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde_json::{Map, Value};

use super::model::{Cell, Domain, Language, SectionInstance};
use crate::segment::Segmenter;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusTotals {
    pub articles: usize,
    pub sections: usize,
    pub references: usize,
    pub ref_sentences: usize,
}

/// Dataset tables: article and section counts, mean references per section
/// and mean reference sentences per section, each per (domain, language).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    pub articles_by_cell: BTreeMap<Cell, usize>,
    pub sections_by_cell: BTreeMap<Cell, usize>,
    pub avg_refs_by_cell: BTreeMap<Cell, f64>,
    pub avg_ref_sentences_by_cell: BTreeMap<Cell, f64>,
    pub totals: CorpusTotals,
}

#[derive(Default)]
struct CellAccumulator<'a> {
    articles: HashSet<(Language, &'a str)>,
    sections: usize,
    references: usize,
    sentences: usize,
}

pub fn compute_stats(corpus: &[SectionInstance], segmenter: &Segmenter) -> CorpusStats {
    let mut cells: BTreeMap<Cell, CellAccumulator<'_>> = BTreeMap::new();
    for inst in corpus {
        let acc = cells.entry(inst.cell()).or_default();
        acc.articles.insert(inst.article_key());
        acc.sections += 1;
        acc.references += inst.references.len();
        acc.sentences += segmenter.count(&inst.reference_texts());
    }

    let mut stats = CorpusStats::default();
    for (cell, acc) in cells {
        let sections = acc.sections as f64;
        stats.articles_by_cell.insert(cell, acc.articles.len());
        stats.sections_by_cell.insert(cell, acc.sections);
        stats.avg_refs_by_cell.insert(cell, acc.references as f64 / sections);
        stats
            .avg_ref_sentences_by_cell
            .insert(cell, acc.sentences as f64 / sections);
        stats.totals.articles += acc.articles.len();
        stats.totals.sections += acc.sections;
        stats.totals.references += acc.references;
        stats.totals.ref_sentences += acc.sentences;
    }
    stats
}

impl CorpusStats {
    /// Markdown grid of one per-cell table: domains as rows, languages as
    /// columns. Count tables get a total column and row.
    pub fn render_counts(&self, title: &str, table: &BTreeMap<Cell, usize>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "### {title}\n");
        let _ = writeln!(out, "{} Total |", header());
        let _ = writeln!(out, "{}---|", separator());
        let mut column_totals = [0usize; 8];
        for domain in Domain::ALL {
            let mut row_total = 0;
            let _ = write!(out, "| {domain} |");
            for (i, language) in Language::ALL.into_iter().enumerate() {
                let v = table.get(&Cell::new(domain, language)).copied().unwrap_or(0);
                row_total += v;
                column_totals[i] += v;
                let _ = write!(out, " {v} |");
            }
            let _ = writeln!(out, " {row_total} |");
        }
        let _ = write!(out, "| Total |");
        for v in column_totals {
            let _ = write!(out, " {v} |");
        }
        let _ = writeln!(out, " {} |", column_totals.iter().sum::<usize>());
        out
    }

    pub fn render_means(&self, title: &str, table: &BTreeMap<Cell, f64>, decimals: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "### {title}\n");
        let _ = writeln!(out, "{}", header());
        let _ = writeln!(out, "{}", separator());
        for domain in Domain::ALL {
            let _ = write!(out, "| {domain} |");
            for language in Language::ALL {
                match table.get(&Cell::new(domain, language)) {
                    Some(v) => {
                        let _ = write!(out, " {v:.decimals$} |");
                    }
                    None => out.push_str(" - |"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// All four tables, in dataset-card order.
    pub fn render_markdown(&self) -> String {
        [
            self.render_counts("Articles per domain per language", &self.articles_by_cell),
            self.render_counts("Sections per domain per language", &self.sections_by_cell),
            self.render_means("Average references per section", &self.avg_refs_by_cell, 2),
            self.render_means(
                "Average reference sentences per section",
                &self.avg_ref_sentences_by_cell,
                1,
            ),
        ]
        .join("\n")
    }

    pub fn to_json(&self) -> Value {
        fn grid<T: Clone + Into<Value>>(table: &BTreeMap<Cell, T>) -> Value {
            let mut outer = Map::new();
            for (cell, v) in table {
                let inner = outer
                    .entry(cell.domain.label())
                    .or_insert_with(|| Value::Object(Map::new()));
                if let Value::Object(m) = inner {
                    m.insert(cell.language.code().to_string(), v.clone().into());
                }
            }
            Value::Object(outer)
        }
        serde_json::json!({
            "articles": grid(&self.articles_by_cell),
            "sections": grid(&self.sections_by_cell),
            "avg_refs": grid(&self.avg_refs_by_cell),
            "avg_ref_sentences": grid(&self.avg_ref_sentences_by_cell),
            "totals": {
                "articles": self.totals.articles,
                "sections": self.totals.sections,
                "references": self.totals.references,
                "ref_sentences": self.totals.ref_sentences,
            }
        })
    }
}

fn header() -> String {
    let mut s = String::from("| Domain/Lang |");
    for l in Language::ALL {
        let _ = write!(s, " {l} |");
    }
    s
}

fn separator() -> String {
    "|---|".to_string() + &"---|".repeat(Language::ALL.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::model::{ReferenceDocument, Split};

    fn inst(id: &str, domain: Domain, language: Language, title: &str, refs: &[&str]) -> SectionInstance {
        SectionInstance {
            id: id.into(),
            language,
            domain,
            article_title: title.into(),
            section_title: "s".into(),
            references: refs
                .iter()
                .map(|t| ReferenceDocument { url: String::new(), text: (*t).into() })
                .collect(),
            target_text: "t".into(),
            split: Split::Unassigned,
        }
    }

    #[test]
    fn empty_corpus_gives_zero_stats() {
        let stats = compute_stats(&[], &Segmenter::default());
        assert_eq!(stats, CorpusStats::default());
        assert_eq!(stats.totals.articles, 0);
    }

    #[test]
    fn counts_and_means() {
        let corpus = vec![
            inst("1", Domain::Books, Language::En, "A", &["One. Two.", "Three."]),
            inst("2", Domain::Books, Language::En, "A", &["Four."]),
            inst("3", Domain::Books, Language::En, "B", &["Five! Six? Seven."]),
            inst("4", Domain::Films, Language::Hi, "A", &["एक। दो।"]),
        ];
        let stats = compute_stats(&corpus, &Segmenter::default());
        let be = Cell::new(Domain::Books, Language::En);
        let fh = Cell::new(Domain::Films, Language::Hi);
        assert_eq!(stats.articles_by_cell[&be], 2);
        assert_eq!(stats.sections_by_cell[&be], 3);
        assert!((stats.avg_refs_by_cell[&be] - 4.0 / 3.0).abs() < 1e-12);
        assert!((stats.avg_ref_sentences_by_cell[&be] - 7.0 / 3.0).abs() < 1e-12);
        assert_eq!(stats.articles_by_cell[&fh], 1);
        assert_eq!(stats.avg_ref_sentences_by_cell[&fh], 2.0);
        assert_eq!(stats.totals.articles, 3);
        assert_eq!(stats.totals.sections, 4);
        assert_eq!(stats.totals.references, 5);
        assert_eq!(stats.totals.ref_sentences, 9);

        let md = stats.render_markdown();
        assert!(md.contains("| books | 0 | 2 | 0 | 0 | 0 | 0 | 0 | 0 | 2 |"));
        assert_eq!(stats.to_json()["articles"]["films"]["hi"], 1);
    }
}

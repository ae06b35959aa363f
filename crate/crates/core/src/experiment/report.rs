use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::partition::Setup;
use super::pipeline::{InstanceFailure, InstanceRow};
use super::PipelineError;
use crate::corpus::{Cell, Domain, Language};
use crate::extract::ExtractorConfig;
use crate::metrics::{micro_average, MetricTriple};

/// Mean scores over `instances` rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub instances: usize,
    #[serde(flatten)]
    pub scores: MetricTriple,
}

impl ScoreSummary {
    fn of<'a>(rows: impl IntoIterator<Item = &'a InstanceRow>) -> Option<Self> {
        let metrics: Vec<&MetricTriple> = rows.into_iter().map(|r| &r.metrics).collect();
        let scores = micro_average(metrics.iter().copied()).ok()?;
        Some(Self {
            instances: metrics.len(),
            scores,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub setup: Setup,
    pub extractor: ExtractorConfig,
    pub generator: String,
    pub k: usize,
    pub config_hash: String,
    pub corpus_hash: String,
    pub instances: usize,
    pub scored: usize,
    pub failed: usize,
    pub failures: Vec<InstanceFailure>,
    pub groups: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub overall: ScoreSummary,
    pub by_language: BTreeMap<String, ScoreSummary>,
    pub by_domain: BTreeMap<String, ScoreSummary>,
    /// Keyed `domain/lang`.
    pub by_cell: BTreeMap<String, ScoreSummary>,
    pub run_metadata: RunMetadata,
}

fn grouped<K: Ord>(
    rows: &[InstanceRow],
    key: impl Fn(&InstanceRow) -> K,
) -> BTreeMap<K, ScoreSummary> {
    let mut buckets: BTreeMap<K, Vec<&InstanceRow>> = BTreeMap::new();
    for row in rows {
        buckets.entry(key(row)).or_default().push(row);
    }
    buckets
        .into_iter()
        .filter_map(|(k, v)| ScoreSummary::of(v).map(|s| (k, s)))
        .collect()
}

/// Aggregate instance rows. Every mean is uniform over the rows it covers.
pub fn build_report(rows: &[InstanceRow], run_metadata: RunMetadata) -> Result<EvalReport, PipelineError> {
    let overall = ScoreSummary {
        instances: rows.len(),
        scores: micro_average(rows.iter().map(|r| &r.metrics))?,
    };
    Ok(EvalReport {
        overall,
        by_language: grouped(rows, |r| r.language.code().to_string()),
        by_domain: grouped(rows, |r| r.domain.label().to_string()),
        by_cell: grouped(rows, |r| Cell::new(r.domain, r.language).to_string()),
        run_metadata,
    })
}

impl EvalReport {
    /// Pretty JSON with object keys sorted.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn render_markdown(&self) -> String {
        let mut out = String::new();
        let m = &self.run_metadata;
        let _ = writeln!(
            out,
            "## {} / {} / {}\n",
            m.setup,
            m.extractor.method().label(),
            m.generator
        );
        let _ = writeln!(
            out,
            "{} instances scored, {} failed.\n",
            m.scored, m.failed
        );
        out.push_str(&summary_table("Overall", [("all".to_string(), &self.overall)]));
        out.push('\n');
        out.push_str(&summary_table(
            "Per language",
            self.by_language.iter().map(|(k, v)| (k.clone(), v)),
        ));
        out.push('\n');
        out.push_str(&summary_table(
            "Per domain",
            self.by_domain.iter().map(|(k, v)| (k.clone(), v)),
        ));
        for (name, pick) in [
            ("ROUGE-L", (|t: &MetricTriple| t.rouge_l) as fn(&MetricTriple) -> f64),
            ("chrF++", |t| t.chrf),
            ("METEOR", |t| t.meteor),
        ] {
            out.push('\n');
            out.push_str(&self.cell_grid(name, pick));
        }
        out
    }

    fn cell_grid(&self, name: &str, pick: fn(&MetricTriple) -> f64) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "### {name} per domain and language\n");
        out.push_str("| Domain/Lang |");
        for l in Language::ALL {
            let _ = write!(out, " {l} |");
        }
        out.push('\n');
        out.push_str(&("|---|".to_string() + &"---|".repeat(Language::ALL.len())));
        out.push('\n');
        for d in Domain::ALL {
            let _ = write!(out, "| {d} |");
            for l in Language::ALL {
                match self.by_cell.get(&Cell::new(d, l).to_string()) {
                    Some(s) => {
                        let _ = write!(out, " {:.2} |", pick(&s.scores) * 100.0);
                    }
                    None => out.push_str(" - |"),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn summary_table<'a>(title: &str, rows: impl IntoIterator<Item = (String, &'a ScoreSummary)>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "### {title}\n");
    out.push_str("| Group | n | ROUGE-L | chrF++ | METEOR |\n|---|---|---|---|---|\n");
    for (key, s) in rows {
        let p = s.scores.scaled();
        let _ = writeln!(
            out,
            "| {key} | {} | {:.2} | {:.2} | {:.2} |",
            s.instances, p.rouge_l, p.chrf, p.meteor
        );
    }
    out
}

const TSV_HEADER: &str = "id\tlanguage\tdomain\tgroup\trouge_l\tchrf\tmeteor\tgenerated";

fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_field(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

/// Instance-level sidecar. Scores use shortest round-trip formatting, so
/// [`read_rows_tsv`] recovers them bit for bit.
pub fn rows_tsv(rows: &[InstanceRow]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            escape_field(&r.id),
            r.language.code(),
            r.domain.label(),
            escape_field(&r.group),
            r.metrics.rouge_l,
            r.metrics.chrf,
            r.metrics.meteor,
            escape_field(&r.generated)
        );
    }
    out
}

pub fn read_rows_tsv(text: &str) -> Result<Vec<InstanceRow>, PipelineError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if i == 0 {
            if line != TSV_HEADER {
                return Err(PipelineError::Rows { line: 1, reason: "unexpected header".into() });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| PipelineError::Rows { line: line_no, reason: reason.into() };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 8 {
            return Err(bad("expected 8 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad score"));
        rows.push(InstanceRow {
            id: unescape_field(fields[0]).ok_or_else(|| bad("bad escape"))?,
            language: fields[1].parse().map_err(|_| bad("bad language"))?,
            domain: fields[2].parse().map_err(|_| bad("bad domain"))?,
            group: unescape_field(fields[3]).ok_or_else(|| bad("bad escape"))?,
            metrics: MetricTriple {
                rouge_l: num(fields[4])?,
                chrf: num(fields[5])?,
                meteor: num(fields[6])?,
            },
            generated: unescape_field(fields[7]).ok_or_else(|| bad("bad escape"))?,
        });
    }
    Ok(rows)
}

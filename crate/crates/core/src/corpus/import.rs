//! Corpus importers and the canonical line-delimited exporter.
//!
//! The canonical format stores one section instance per line:
//!
//! ```text
//! {"id": str, "language": str, "domain": str, "article_title": str,
//!  "section_title": str, "references": [{"url": str, "text": str}],
//!  "target_text": str, "split": str|null}
//! ```
//!
//! All text fields are NFC-normalized on import. A `null` or missing split
//! means [`Split::Unassigned`], and unassigned instances export as `null`.

use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{Map, Value};
use unicode_normalization::UnicodeNormalization;

use super::model::{Domain, Language, ReferenceDocument, SectionInstance, Split};
use super::CorpusError;

/// Registered importer ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportFormat {
    /// `canonical-jsonl`: the storage format described in the module docs.
    CanonicalJsonl,
    /// `xwikiref-release`: a directory (or single file) of JSON / JSON-lines
    /// records as distributed with the public dataset release. See
    /// [`import_release`] for the field mapping.
    ReleaseDump,
}

impl ImportFormat {
    pub fn id(self) -> &'static str {
        match self {
            ImportFormat::CanonicalJsonl => "canonical-jsonl",
            ImportFormat::ReleaseDump => "xwikiref-release",
        }
    }
}

impl FromStr for ImportFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical-jsonl" => Ok(ImportFormat::CanonicalJsonl),
            "xwikiref-release" => Ok(ImportFormat::ReleaseDump),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

/// Load and validate a corpus. Input order is preserved.
pub fn import_corpus(path: &Path, format: ImportFormat) -> Result<Vec<SectionInstance>, CorpusError> {
    match format {
        ImportFormat::CanonicalJsonl => {
            let text = read_to_string(path)?;
            parse_canonical(&text, &path.display().to_string())
        }
        ImportFormat::ReleaseDump => import_release(path),
    }
}

fn read_to_string(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse canonical JSON-lines text. Blank lines are skipped; line numbers
/// in errors are 1-based physical lines.
pub fn parse_canonical(text: &str, source_name: &str) -> Result<Vec<SectionInstance>, CorpusError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
            source_name: source_name.to_string(),
            line: line_no,
            field: "<record>".into(),
            reason: e.to_string(),
        })?;
        let record = RecordReader::new(&value, source_name, line_no)?;
        let instance = record.canonical()?;
        if !seen.insert(instance.id.clone()) {
            return Err(CorpusError::DuplicateId {
                source_name: source_name.to_string(),
                line: line_no,
                id: instance.id,
            });
        }
        out.push(instance);
    }
    Ok(out)
}

/// Serialize one instance as a canonical line (no trailing newline).
pub fn to_canonical_line(instance: &SectionInstance) -> String {
    let refs: Vec<Value> = instance
        .references
        .iter()
        .map(|r| serde_json::json!({"url": r.url, "text": r.text}))
        .collect();
    let split = match instance.split {
        Split::Unassigned => Value::Null,
        s => Value::String(s.label().to_string()),
    };
    // serde_json::Map is ordered by key, so the line layout is stable.
    let mut map = Map::new();
    map.insert("id".into(), instance.id.clone().into());
    map.insert("language".into(), instance.language.code().into());
    map.insert("domain".into(), instance.domain.label().into());
    map.insert("article_title".into(), instance.article_title.clone().into());
    map.insert("section_title".into(), instance.section_title.clone().into());
    map.insert("references".into(), Value::Array(refs));
    map.insert("target_text".into(), instance.target_text.clone().into());
    map.insert("split".into(), split);
    Value::Object(map).to_string()
}

pub fn write_canonical<W: Write>(instances: &[SectionInstance], mut writer: W) -> io::Result<()> {
    for instance in instances {
        writeln!(writer, "{}", to_canonical_line(instance))?;
    }
    writer.flush()
}

/// Check the record-level invariants of an in-memory instance. Returns the
/// offending field name and reason.
pub fn check_instance(instance: &SectionInstance) -> Result<(), (&'static str, String)> {
    if instance.id.trim().is_empty() {
        return Err(("id", "must be non-empty".into()));
    }
    if instance.references.is_empty() {
        return Err(("references", "must contain at least one reference".into()));
    }
    for (i, r) in instance.references.iter().enumerate() {
        if r.text.split_whitespace().next().is_none() {
            return Err(("references", format!("reference {i} has empty text")));
        }
    }
    Ok(())
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Field access over one JSON record with error context.
struct RecordReader<'a> {
    obj: &'a Map<String, Value>,
    source_name: &'a str,
    line: usize,
}

impl<'a> RecordReader<'a> {
    fn new(value: &'a Value, source_name: &'a str, line: usize) -> Result<Self, CorpusError> {
        let obj = value.as_object().ok_or_else(|| CorpusError::Malformed {
            source_name: source_name.to_string(),
            line,
            field: "<record>".into(),
            reason: "expected a JSON object".into(),
        })?;
        Ok(Self { obj, source_name, line })
    }

    fn err(&self, field: &str, reason: impl Into<String>) -> CorpusError {
        CorpusError::Malformed {
            source_name: self.source_name.to_string(),
            line: self.line,
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// First present key among `keys`.
    fn lookup(&self, keys: &[&str]) -> Option<(&'a str, &'a Value)> {
        keys.iter()
            .find_map(|k| self.obj.get_key_value(*k))
            .map(|(k, v)| (k.as_str(), v))
    }

    fn string(&self, keys: &[&str]) -> Result<Option<String>, CorpusError> {
        match self.lookup(keys) {
            None | Some((_, Value::Null)) => Ok(None),
            Some((_, Value::String(s))) => Ok(Some(nfc(s))),
            Some((k, _)) => Err(self.err(k, "expected a string")),
        }
    }

    fn required_string(&self, keys: &[&str]) -> Result<String, CorpusError> {
        self.string(keys)?
            .ok_or_else(|| self.err(keys[0], "missing required field"))
    }

    fn language(&self, value: Option<String>) -> Result<Language, CorpusError> {
        let value = value.ok_or_else(|| self.err("language", "missing required field"))?;
        Language::from_str(&value).map_err(|_| CorpusError::UnknownLanguage {
            source_name: self.source_name.to_string(),
            line: self.line,
            value,
        })
    }

    fn domain(&self, value: Option<String>) -> Result<Domain, CorpusError> {
        let value = value.ok_or_else(|| self.err("domain", "missing required field"))?;
        parse_domain(&value).ok_or_else(|| CorpusError::UnknownDomain {
            source_name: self.source_name.to_string(),
            line: self.line,
            value,
        })
    }

    fn split(&self, value: Option<String>) -> Result<Split, CorpusError> {
        match value {
            None => Ok(Split::Unassigned),
            Some(s) => Split::from_str(&s).map_err(|reason| self.err("split", reason)),
        }
    }

    fn references(&self, keys: &[&str]) -> Result<Vec<ReferenceDocument>, CorpusError> {
        let (key, value) = self
            .lookup(keys)
            .ok_or_else(|| self.err("references", "missing required field"))?;
        let items = value
            .as_array()
            .ok_or_else(|| self.err(key, "expected an array"))?;
        items
            .iter()
            .enumerate()
            .map(|(i, item)| match item {
                Value::String(text) => Ok(ReferenceDocument {
                    url: String::new(),
                    text: nfc(text),
                }),
                Value::Object(map) => {
                    let url = match map.get("url") {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => nfc(s),
                        Some(_) => return Err(self.err(key, format!("reference {i}: `url` must be a string"))),
                    };
                    let text = match map.get("text").or_else(|| map.get("content")) {
                        Some(Value::String(s)) => nfc(s),
                        Some(_) => return Err(self.err(key, format!("reference {i}: `text` must be a string"))),
                        None => return Err(self.err(key, format!("reference {i}: missing `text`"))),
                    };
                    Ok(ReferenceDocument { url, text })
                }
                _ => Err(self.err(key, format!("reference {i}: expected an object or string"))),
            })
            .collect()
    }

    fn finish(&self, instance: SectionInstance) -> Result<SectionInstance, CorpusError> {
        check_instance(&instance).map_err(|(field, reason)| self.err(field, reason))?;
        Ok(instance)
    }

    fn canonical(&self) -> Result<SectionInstance, CorpusError> {
        let instance = SectionInstance {
            id: self.required_string(&["id"])?,
            language: self.language(self.string(&["language"])?)?,
            domain: self.domain(self.string(&["domain"])?)?,
            article_title: self.required_string(&["article_title"])?,
            section_title: self.required_string(&["section_title"])?,
            references: self.references(&["references"])?,
            target_text: self.required_string(&["target_text"])?,
            split: self.split(self.string(&["split"])?)?,
        };
        self.finish(instance)
    }

    fn release(&self, hints: &PathHints, fallback_id: String) -> Result<SectionInstance, CorpusError> {
        let language = self
            .string(&["language", "lang"])?
            .or_else(|| hints.language.map(|l| l.code().to_string()));
        let domain = self
            .string(&["domain"])?
            .or_else(|| hints.domain.map(|d| d.label().to_string()));
        let split = match self.string(&["split"])? {
            Some(s) => self.split(Some(s))?,
            None => hints.split.unwrap_or_default(),
        };
        let instance = SectionInstance {
            id: self.string(&["id"])?.unwrap_or(fallback_id),
            language: self.language(language)?,
            domain: self.domain(domain)?,
            article_title: self.required_string(&["article_title", "title", "page_title"])?,
            section_title: self.required_string(&["section_title", "section", "section_name"])?,
            references: self.references(&["references", "refs", "citations"])?,
            target_text: self.required_string(&["target_text", "section_text", "content", "text"])?,
            split,
        };
        self.finish(instance)
    }
}

/// Accepts the canonical plural labels plus the singular forms used in
/// some release file names.
fn parse_domain(s: &str) -> Option<Domain> {
    let lower = s.to_lowercase();
    Domain::from_str(&lower).ok().or(match lower.as_str() {
        "book" => Some(Domain::Books),
        "film" | "movies" | "movie" => Some(Domain::Films),
        "politician" => Some(Domain::Politicians),
        "sportsman" | "sports" => Some(Domain::Sportsmen),
        "writer" => Some(Domain::Writers),
        _ => None,
    })
}

/// Language, domain and split inferred from path components and file-name
/// tokens (split on `_`, `-`, `.`).
#[derive(Debug, Default, Clone, Copy)]
struct PathHints {
    language: Option<Language>,
    domain: Option<Domain>,
    split: Option<Split>,
}

impl PathHints {
    fn from_path(path: &Path) -> Self {
        let mut hints = PathHints::default();
        for component in path.components() {
            let part = component.as_os_str().to_string_lossy();
            for token in part.split(['_', '-', '.']) {
                let token = token.to_lowercase();
                if let Ok(lang) = Language::from_str(&token) {
                    hints.language = Some(lang);
                } else if let Some(domain) = parse_domain(&token) {
                    hints.domain = Some(domain);
                } else if let Ok(split) = Split::from_str(&token) {
                    if split != Split::Unassigned {
                        hints.split = Some(split);
                    }
                }
            }
        }
        hints
    }
}

/// Import the public release layout.
///
/// `path` may be a single file or a directory, which is walked in sorted
/// order for `*.json` and `*.jsonl` files. A `.json` file holds either one
/// array of records or JSON lines; `.jsonl` holds JSON lines.
///
/// Field mapping (first present key wins):
///
/// | canonical       | release keys                                         |
/// |-----------------|------------------------------------------------------|
/// | `id`            | `id`, else `<file stem>:<record number>`             |
/// | `language`      | `language`, `lang`, else a path token such as `hi`   |
/// | `domain`        | `domain`, else a path token such as `books`/`film`   |
/// | `article_title` | `article_title`, `title`, `page_title`               |
/// | `section_title` | `section_title`, `section`, `section_name`           |
/// | `references`    | `references`, `refs`, `citations`; items are `{url, text|content}` objects or bare text strings |
/// | `target_text`   | `target_text`, `section_text`, `content`, `text`     |
/// | `split`         | `split`, else a path token `train`/`val`/`test`      |
pub fn import_release(path: &Path) -> Result<Vec<SectionInstance>, CorpusError> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut files: Vec<PathBuf> = walkdir::WalkDir::new(path)
            .sort_by_file_name()
            .into_iter()
            .filter_map(Result::ok)
            .filter(|e| e.file_type().is_file())
            .map(|e| e.into_path())
            .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "jsonl")))
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for file in files {
        let relative = file.strip_prefix(path).unwrap_or(&file);
        let hints = PathHints::from_path(relative);
        let source_name = file.display().to_string();
        let stem = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = read_to_string(&file)?;
        for (line, value) in release_records(&text, &source_name)? {
            let reader = RecordReader::new(&value, &source_name, line)?;
            let instance = reader.release(&hints, format!("{stem}:{line}"))?;
            if !seen.insert(instance.id.clone()) {
                return Err(CorpusError::DuplicateId {
                    source_name,
                    line,
                    id: instance.id,
                });
            }
            out.push(instance);
        }
    }
    Ok(out)
}

/// Returns (record number, value) pairs. Record numbers are physical line
/// numbers for JSON lines and 1-based element indices for arrays.
fn release_records(text: &str, source_name: &str) -> Result<Vec<(usize, Value)>, CorpusError> {
    if text.trim_start().starts_with('[') {
        let value: Value = serde_json::from_str(text).map_err(|e| CorpusError::Malformed {
            source_name: source_name.to_string(),
            line: e.line(),
            field: "<record>".into(),
            reason: e.to_string(),
        })?;
        let Value::Array(items) = value else { unreachable!() };
        return Ok(items.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect());
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map(|v| (i + 1, v))
                .map_err(|e| CorpusError::Malformed {
                    source_name: source_name.to_string(),
                    line: i + 1,
                    field: "<record>".into(),
                    reason: e.to_string(),
                })
        })
        .collect()
}

//! Rule-based multilingual sentence segmentation.
//!
//! Text is whitespace-normalized and split after tokens ending in one of
//! `.` `?` `!` `।` `॥` (optionally followed by closing quotes or brackets),
//! provided the terminator is followed by whitespace or the end of the text.
//! A period does not end a sentence when it closes
//!
//! * a decimal number continued by the next token (`3. 5`),
//! * a single-letter initial or a dotted run of them (`J.`, `J.K.`, `ए.पी.जे.`),
//! * an entry of the abbreviation list (`Dr.`, `e.g.`, `डॉ.`).
//!
//! Joining the sentences of one reference with single spaces reproduces its
//! whitespace-normalized text.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const BUNDLED_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

const TERMINATORS: [char; 5] = ['.', '?', '!', '\u{0964}', '\u{0965}'];
const CLOSERS: [char; 10] = ['"', '\'', '\u{201d}', '\u{2019}', ')', ']', '}', '\u{bb}', '\u{300d}', '*'];
const OPENERS: [char; 8] = ['"', '\'', '\u{201c}', '\u{2018}', '(', '[', '{', '\u{ab}'];

/// A segmented sentence with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub text: String,
    /// Index of the reference document the sentence came from.
    pub ref_index: usize,
    /// Position within that reference.
    pub sent_index: usize,
    /// Position in concatenation order over all references.
    pub global_index: usize,
}

#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Self::from_list(BUNDLED_ABBREVIATIONS)
    }
}

impl Segmenter {
    /// Build from a guard list: one token per line, `#` starts a comment
    /// line, a trailing period is ignored.
    pub fn from_list(list: &str) -> Self {
        let abbreviations = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.trim_end_matches('.').to_lowercase())
            .collect();
        Self { abbreviations }
    }

    pub fn is_abbreviation(&self, stem: &str) -> bool {
        self.abbreviations.contains(&stem.to_lowercase())
    }

    /// Whether `token` closes a sentence given the token that follows it.
    pub fn ends_sentence(&self, token: &str, next: Option<&str>) -> bool {
        let core = token.trim_end_matches(CLOSERS);
        let Some(last) = core.chars().last() else {
            return false;
        };
        if !TERMINATORS.contains(&last) {
            return false;
        }
        if last != '.' {
            return true;
        }
        let stem = core[..core.len() - 1].trim_start_matches(OPENERS);
        if stem.ends_with(|c: char| c.is_ascii_digit())
            && next.is_some_and(|n| n.starts_with(|c: char| c.is_ascii_digit()))
        {
            return false;
        }
        if is_initials(stem) {
            return false;
        }
        !self.is_abbreviation(stem)
    }

    /// Sentences of one text, whitespace-normalized.
    pub fn split_text(&self, text: &str) -> Vec<String> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let mut sentences = Vec::new();
        let mut start = 0;
        for i in 0..tokens.len() {
            if self.ends_sentence(tokens[i], tokens.get(i + 1).copied()) {
                sentences.push(tokens[start..=i].join(" "));
                start = i + 1;
            }
        }
        if start < tokens.len() {
            sentences.push(tokens[start..].join(" "));
        }
        sentences
    }

    /// Segment an ordered list of reference texts.
    pub fn segment<S: AsRef<str>>(&self, reference_texts: &[S]) -> Vec<SentenceRecord> {
        let mut out = Vec::new();
        for (ref_index, text) in reference_texts.iter().enumerate() {
            for (sent_index, text) in self.split_text(text.as_ref()).into_iter().enumerate() {
                let global_index = out.len();
                out.push(SentenceRecord {
                    text,
                    ref_index,
                    sent_index,
                    global_index,
                });
            }
        }
        out
    }

    pub fn count<S: AsRef<str>>(&self, reference_texts: &[S]) -> usize {
        reference_texts
            .iter()
            .map(|t| self.split_text(t.as_ref()).len())
            .sum()
    }
}

/// Initial forms: a single uppercase or caseless letter (`J`, `ए`), or a
/// dotted run of letters that may carry Indic vowel signs (`J.K`, `ए.पी.जे`).
fn is_initials(stem: &str) -> bool {
    if stem.contains('.') {
        return stem.split('.').all(|part| is_letter_with_marks(part, true));
    }
    is_letter_with_marks(stem, false)
}

fn is_letter_with_marks(part: &str, allow_marks: bool) -> bool {
    let mut chars = part.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    let base_ok = first.is_alphabetic() && !first.is_lowercase() && !is_indic_mark(first);
    if allow_marks {
        base_ok && chars.all(is_indic_mark)
    } else {
        base_ok && chars.next().is_none()
    }
}

/// Dependent vowel signs, virama, nukta and the candrabindu/anusvara/visarga
/// group, at their common offsets inside each 128-codepoint Indic block.
fn is_indic_mark(c: char) -> bool {
    let cp = c as u32;
    (0x0900..=0x0dff).contains(&cp)
        && matches!(cp & 0x7f, 0x00..=0x03 | 0x3a..=0x4f | 0x51..=0x57 | 0x62..=0x63)
}

/// Segment with the bundled abbreviation list.
pub fn segment<S: AsRef<str>>(reference_texts: &[S]) -> Vec<SentenceRecord> {
    static DEFAULT: OnceLock<Segmenter> = OnceLock::new();
    DEFAULT.get_or_init(Segmenter::default).segment(reference_texts)
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Wikipedia language edition of a section instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Bn,
    En,
    Hi,
    Ml,
    Mr,
    Or,
    Pa,
    Ta,
}

impl Language {
    pub const ALL: [Language; 8] = [
        Language::Bn,
        Language::En,
        Language::Hi,
        Language::Ml,
        Language::Mr,
        Language::Or,
        Language::Pa,
        Language::Ta,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Language::Bn => "bn",
            Language::En => "en",
            Language::Hi => "hi",
            Language::Ml => "ml",
            Language::Mr => "mr",
            Language::Or => "or",
            Language::Pa => "pa",
            Language::Ta => "ta",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::ALL
            .into_iter()
            .find(|l| l.code() == s)
            .ok_or_else(|| format!("unknown language `{s}`"))
    }
}

/// Topical domain of the article a section belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Books,
    Films,
    Politicians,
    Sportsmen,
    Writers,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::Books,
        Domain::Films,
        Domain::Politicians,
        Domain::Sportsmen,
        Domain::Writers,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Domain::Books => "books",
            Domain::Films => "films",
            Domain::Politicians => "politicians",
            Domain::Sportsmen => "sportsmen",
            Domain::Writers => "writers",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.label() == s)
            .ok_or_else(|| format!("unknown domain `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
    #[default]
    Unassigned,
}

impl Split {
    pub fn label(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
            Split::Unassigned => "unassigned",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" | "validation" | "dev" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            "unassigned" => Ok(Split::Unassigned),
            other => Err(format!("unknown split `{other}`")),
        }
    }
}

/// A (domain, language) stratum. Ordered domain-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub domain: Domain,
    pub language: Language,
}

impl Cell {
    pub fn new(domain: Domain, language: Language) -> Self {
        Self { domain, language }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.domain, self.language)
    }
}

/// One cited source document of a section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceDocument {
    pub url: String,
    pub text: String,
}

/// One (article, section) row: the cited references and the gold section body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionInstance {
    pub id: String,
    pub language: Language,
    pub domain: Domain,
    pub article_title: String,
    pub section_title: String,
    pub references: Vec<ReferenceDocument>,
    pub target_text: String,
    pub split: Split,
}

impl SectionInstance {
    pub fn cell(&self) -> Cell {
        Cell::new(self.domain, self.language)
    }

    /// Articles are identified by language edition and title.
    pub fn article_key(&self) -> (Language, &str) {
        (self.language, self.article_title.as_str())
    }

    pub fn reference_texts(&self) -> Vec<&str> {
        self.references.iter().map(|r| r.text.as_str()).collect()
    }
}

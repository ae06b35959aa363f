//! Boundary to the abstractive generation stage.
//!
//! The generator input is a flat string
//! `<lang> | <article_title> | <section_title> | <s1> <s2> ...` with the
//! ranked sentences joined by single spaces. Inside each field `\` and `|`
//! are escaped as `\\` and `\|`, so [`parse_input`] recovers the fields.

use serde::{Deserialize, Serialize};

use crate::corpus::Language;
use crate::transport::{GatewayError, HttpConfig, JsonClient};

pub const DEFAULT_MAX_OUTPUT_TOKENS: usize = 512;
pub const STUB_OUTPUT_TOKENS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub language: Language,
    pub article_title: String,
    pub section_title: String,
    /// Extracted sentences, highest score first.
    pub ranked_sentences: Vec<String>,
    pub max_output_tokens: usize,
}

impl GenerationRequest {
    pub fn new(
        language: Language,
        article_title: impl Into<String>,
        section_title: impl Into<String>,
        ranked_sentences: Vec<String>,
    ) -> Result<Self, GatewayError> {
        if ranked_sentences.is_empty() {
            return Err(GatewayError::InvalidInput(
                "generation request needs at least one sentence".into(),
            ));
        }
        Ok(Self {
            language,
            article_title: article_title.into(),
            section_title: section_title.into(),
            ranked_sentences,
            max_output_tokens: DEFAULT_MAX_OUTPUT_TOKENS,
        })
    }

    pub fn joined_sentences(&self) -> String {
        self.ranked_sentences.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationResult {
    pub text: String,
    pub backend: String,
}

fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        if c == '\\' || c == '|' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn unescape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
                continue;
            }
        }
        out.push(c);
    }
    out
}

pub fn format_input(request: &GenerationRequest) -> String {
    format!(
        "{} | {} | {} | {}",
        request.language.code(),
        escape(&request.article_title),
        escape(&request.section_title),
        escape(&request.joined_sentences()),
    )
}

/// Fields recovered from a formatted input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInput {
    pub language: String,
    pub article_title: String,
    pub section_title: String,
    pub sentences: String,
}

/// Inverse of [`format_input`]: splits on unescaped ` | ` separators.
pub fn parse_input(formatted: &str) -> Option<ParsedInput> {
    let mut fields = Vec::with_capacity(4);
    let mut current = String::new();
    let mut chars = formatted.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                current.push(c);
                if let Some(next) = chars.next() {
                    current.push(next);
                }
            }
            '|' if fields.len() < 3 && current.ends_with(' ') && chars.peek() == Some(&' ') => {
                current.pop();
                chars.next();
                fields.push(unescape(&current));
                current.clear();
            }
            _ => current.push(c),
        }
    }
    fields.push(unescape(&current));
    let [language, article_title, section_title, sentences]: [String; 4] = fields.try_into().ok()?;
    Some(ParsedInput {
        language,
        article_title,
        section_title,
        sentences,
    })
}

pub trait Generator: Send + Sync {
    fn label(&self) -> &str;
    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, GatewayError>;
}

/// Extract-and-truncate baseline: the leading `max_tokens` whitespace
/// tokens of the joined sentences, as a byte prefix of that text.
#[derive(Debug, Clone)]
pub struct StubGenerator {
    pub max_tokens: usize,
}

impl Default for StubGenerator {
    fn default() -> Self {
        Self {
            max_tokens: STUB_OUTPUT_TOKENS,
        }
    }
}

impl StubGenerator {
    pub fn truncate<'a>(&self, joined: &'a str) -> &'a str {
        let trimmed = joined.trim_start();
        let mut end = 0;
        let mut tokens = 0;
        let mut in_token = false;
        for (i, c) in trimmed.char_indices() {
            if c.is_whitespace() {
                if in_token {
                    in_token = false;
                    tokens += 1;
                    end = i;
                    if tokens == self.max_tokens {
                        return &trimmed[..end];
                    }
                }
            } else {
                in_token = true;
            }
        }
        if in_token {
            end = trimmed.len();
        }
        &trimmed[..end]
    }
}

impl Generator for StubGenerator {
    fn label(&self) -> &str {
        "stub"
    }

    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, GatewayError> {
        let joined = request.joined_sentences();
        let text = self.truncate(&joined);
        if text.is_empty() {
            return Err(GatewayError::EmptyGeneration);
        }
        Ok(GenerationResult {
            text: text.to_string(),
            backend: self.label().to_string(),
        })
    }
}

#[derive(Serialize)]
struct WireRequest<'a> {
    language: &'a str,
    article_title: &'a str,
    section_title: &'a str,
    sentences: &'a [String],
    max_output_tokens: usize,
}

#[derive(Deserialize)]
struct WireResponse {
    text: String,
}

/// Client for `POST /generate`.
#[derive(Debug, Clone)]
pub struct HttpGenerator {
    client: JsonClient,
}

impl HttpGenerator {
    pub fn new(config: HttpConfig) -> Self {
        Self {
            client: JsonClient::new(config),
        }
    }
}

impl Generator for HttpGenerator {
    fn label(&self) -> &str {
        "remote"
    }

    fn generate(&self, request: &GenerationRequest) -> Result<GenerationResult, GatewayError> {
        let body = WireRequest {
            language: request.language.code(),
            article_title: &request.article_title,
            section_title: &request.section_title,
            sentences: &request.ranked_sentences,
            max_output_tokens: request.max_output_tokens,
        };
        let resp: WireResponse = self.client.post("/generate", &body)?;
        if resp.text.trim().is_empty() {
            return Err(GatewayError::EmptyGeneration);
        }
        Ok(GenerationResult {
            text: resp.text,
            backend: self.label().to_string(),
        })
    }
}

//! `refsum` command-line entry point.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when work
//! was attempted and failed.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "refsum", version, about = "Summarize encyclopedic sections from their cited references")]
pub struct Cli {
    /// TOML file with default settings; flags and environment win over it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate, describe or split a corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Rank reference sentences for each instance and print the top k.
    Extract(ExtractArgs),
    /// Score candidate lines against reference lines.
    Score(ScoreArgs),
    /// Run extraction, generation and scoring and write a report.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Corpus file (canonical JSONL) or release directory.
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// canonical-jsonl or xwikiref-release.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Check every record and report the instance count.
    Validate(CorpusArgs),
    /// Print per-cell article, section and reference tables.
    Stats {
        #[command(flatten)]
        input: CorpusArgs,
        /// Emit JSON instead of markdown.
        #[arg(long)]
        json: bool,
    },
    /// Assign train/val/test labels per (domain, language) cell.
    Split {
        #[command(flatten)]
        input: CorpusArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Train, validation and test fractions.
        #[arg(long, value_name = "T,V,T")]
        ratios: Option<String>,
        /// Destination for the labelled corpus (canonical JSONL).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Replace split labels already present in the input.
        #[arg(long)]
        overwrite: bool,
    },
}

#[derive(Debug, Args)]
pub struct ExtractorArgs {
    /// Number of sentences to keep.
    #[arg(long)]
    pub k: Option<usize>,
    /// Discount for positional and boundary edges (hiporank).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda_intra: Option<f64>,
    #[arg(long)]
    pub lambda_inter: Option<f64>,
    /// stub or remote.
    #[arg(long)]
    pub encoder: Option<String>,
    /// Base URL of the model service.
    #[arg(long, env = "MODEL_SERVICE_URL")]
    pub model_service_url: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    /// salience or hiporank.
    #[arg(long)]
    pub method: Option<String>,
    #[command(flatten)]
    pub extractor: ExtractorArgs,
    /// Only this instance.
    #[arg(long)]
    pub id: Option<String>,
    /// train, val, test or all.
    #[arg(long)]
    pub split: Option<String>,
    /// Write JSON lines here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// One candidate per line.
    #[arg(long, value_name = "FILE")]
    pub candidate: PathBuf,
    /// One reference per line, aligned with the candidates.
    #[arg(long, value_name = "FILE")]
    pub reference: PathBuf,
    /// tsv or json.
    #[arg(long, default_value = "tsv")]
    pub format: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    /// ml, md or mlmd.
    #[arg(long)]
    pub setup: Option<String>,
    /// salience or hiporank.
    #[arg(long)]
    pub extractor: Option<String>,
    #[command(flatten)]
    pub params: ExtractorArgs,
    /// stub or remote.
    #[arg(long)]
    pub generator: Option<String>,
    /// train, val, test or all.
    #[arg(long)]
    pub split: Option<String>,
    /// Concurrent instances.
    #[arg(long, env = "WORKERS")]
    pub workers: Option<usize>,
    /// Report path; instance rows go next to it with a `.rows.tsv` suffix.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also write the markdown tables here.
    #[arg(long, value_name = "FILE")]
    pub markdown: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Failure::Runtime(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

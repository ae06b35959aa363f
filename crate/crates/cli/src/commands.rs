use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use refsum::corpus::{
    compute_stats, import_corpus, split_counts, stratified_split, write_canonical, CorpusError,
    ImportFormat, SectionInstance, Split, SplitPolicy, SplitRatios,
};
use refsum::encoder::{Embedder, HttpEncoder, LikelihoodScorer, StubEncoder};
use refsum::experiment::{
    rows_tsv, run_experiment, Backends, PipelineConfig, PipelineError, Setup,
};
use refsum::extract::{ExtractMethod, ExtractorConfig, HipoRankConfig, DEFAULT_K};
use refsum::generate::{Generator, HttpGenerator, StubGenerator};
use refsum::metrics::{micro_average, MetricTriple};
use refsum::segment::Segmenter;
use refsum::transport::HttpConfig;
use serde_json::json;

use crate::config::{pick, require_corpus, FileConfig};
use crate::{Cli, Command, CorpusAction, CorpusArgs, ExtractArgs, ExtractorArgs, Failure, RunArgs, ScoreArgs};

const DEFAULT_SEED: u64 = 13;

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Corpus { action } => corpus(action, &file),
        Command::Extract(args) => extract(args, &file),
        Command::Score(args) => score(args),
        Command::Run(args) => run(args, &file),
    }
}

fn load_corpus(args: CorpusArgs, file: &FileConfig) -> Result<Vec<SectionInstance>, Failure> {
    let path = require_corpus(args.corpus, file)?;
    let format: ImportFormat = pick(args.format, file.format.clone(), "canonical-jsonl".into())
        .parse()
        .map_err(|e: CorpusError| Failure::usage(e.to_string()))?;
    import_corpus(&path, format).map_err(|e| Failure::usage(e.to_string()))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

fn corpus(action: CorpusAction, file: &FileConfig) -> Result<(), Failure> {
    match action {
        CorpusAction::Validate(input) => {
            let corpus = load_corpus(input, file)?;
            println!("ok: {} instances", corpus.len());
        }
        CorpusAction::Stats { input, json } => {
            let corpus = load_corpus(input, file)?;
            let stats = compute_stats(&corpus, &Segmenter::default());
            if json {
                println!("{}", serde_json::to_string_pretty(&stats.to_json()).expect("json"));
            } else {
                print!("{}", stats.render_markdown());
            }
        }
        CorpusAction::Split { input, seed, ratios, out, overwrite } => {
            let corpus = load_corpus(input, file)?;
            let ratios: SplitRatios = pick(ratios, file.ratios.clone(), "0.6,0.2,0.2".into())
                .parse()
                .map_err(|e: CorpusError| Failure::usage(e.to_string()))?;
            let seed = pick(seed, file.seed, DEFAULT_SEED);
            let out = out
                .or_else(|| file.out.clone())
                .ok_or_else(|| Failure::usage("missing output path: pass --out <FILE>"))?;
            let split = stratified_split(&corpus, &ratios, seed, SplitPolicy { overwrite_existing: overwrite })
                .map_err(|e| Failure::usage(e.to_string()))?;
            let mut buf = Vec::new();
            write_canonical(&split, &mut buf).expect("in-memory write");
            write_file(&out, &buf)?;
            let mut totals = [0usize; 3];
            for counts in split_counts(&split).values() {
                for (t, c) in totals.iter_mut().zip(counts) {
                    *t += c;
                }
            }
            println!(
                "train {} / val {} / test {} written to {}",
                totals[0],
                totals[1],
                totals[2],
                out.display()
            );
        }
    }
    Ok(())
}

fn extractor_config(method: &str, args: &ExtractorArgs, file: &FileConfig) -> Result<ExtractorConfig, Failure> {
    let method: ExtractMethod = method.parse().map_err(|e: refsum::extract::ExtractError| Failure::usage(e.to_string()))?;
    let k = pick(args.k, file.k, DEFAULT_K);
    let config = match method {
        ExtractMethod::Salience => ExtractorConfig::Salience { k },
        ExtractMethod::HipoRank => {
            let d = HipoRankConfig::default();
            ExtractorConfig::HipoRank(HipoRankConfig {
                alpha: pick(args.alpha, file.alpha, d.alpha),
                lambda_intra: pick(args.lambda_intra, file.lambda_intra, d.lambda_intra),
                lambda_inter: pick(args.lambda_inter, file.lambda_inter, d.lambda_inter),
                k,
            })
        }
    };
    config.validate().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(config)
}

fn service_config(url: Option<String>, file: &FileConfig, what: &str) -> Result<HttpConfig, Failure> {
    let url = url
        .or_else(|| file.model_service_url.clone())
        .ok_or_else(|| Failure::usage(format!("remote {what} needs --model-service-url or MODEL_SERVICE_URL")))?;
    Ok(HttpConfig::new(url).with_env_overrides())
}

enum EncoderBackend {
    Stub(StubEncoder),
    Remote(HttpEncoder),
}

impl EncoderBackend {
    fn select(args: &ExtractorArgs, file: &FileConfig) -> Result<Self, Failure> {
        match pick(args.encoder.clone(), file.encoder.clone(), "stub".into()).as_str() {
            "stub" => Ok(EncoderBackend::Stub(StubEncoder::default())),
            "remote" => Ok(EncoderBackend::Remote(HttpEncoder::new(service_config(
                args.model_service_url.clone(),
                file,
                "encoder",
            )?))),
            other => Err(Failure::usage(format!("unknown encoder `{other}` (expected stub or remote)"))),
        }
    }

    fn scorer(&self) -> &dyn LikelihoodScorer {
        match self {
            EncoderBackend::Stub(e) => e,
            EncoderBackend::Remote(e) => e,
        }
    }

    fn embedder(&self) -> &dyn Embedder {
        match self {
            EncoderBackend::Stub(e) => e,
            EncoderBackend::Remote(e) => e,
        }
    }
}

fn split_filter(value: Option<String>, file: &FileConfig) -> Result<Option<Split>, Failure> {
    match pick(value, file.split.clone(), "test".into()).as_str() {
        "all" => Ok(None),
        s => s.parse().map(Some).map_err(|e: String| Failure::usage(e)),
    }
}

fn select_split(corpus: Vec<SectionInstance>, split: Option<Split>) -> Result<Vec<SectionInstance>, Failure> {
    let Some(split) = split else {
        return Ok(corpus);
    };
    let selected: Vec<SectionInstance> = corpus.into_iter().filter(|i| i.split == split).collect();
    if selected.is_empty() {
        return Err(Failure::usage(format!(
            "no instances labelled `{}`; run `corpus split` first or pass --split all",
            split.label()
        )));
    }
    Ok(selected)
}

fn extract(args: ExtractArgs, file: &FileConfig) -> Result<(), Failure> {
    let method = pick(args.method, file.extractor.clone(), "hiporank".into());
    let config = extractor_config(&method, &args.extractor, file)?;
    let encoder = EncoderBackend::select(&args.extractor, file)?;
    let split = if args.id.is_some() { None } else { split_filter(args.split, file)? };
    let mut corpus = select_split(load_corpus(args.input, file)?, split)?;
    if let Some(id) = &args.id {
        corpus.retain(|i| &i.id == id);
        if corpus.is_empty() {
            return Err(Failure::usage(format!("no instance with id `{id}`")));
        }
    }
    corpus.sort_by(|a, b| a.id.cmp(&b.id));

    let segmenter = Segmenter::default();
    let mut out = String::new();
    for inst in &corpus {
        let sentences = segmenter.segment(&inst.reference_texts());
        let summary = config
            .extract(&inst.section_title, &sentences, encoder.scorer(), encoder.embedder())
            .map_err(|e| Failure::runtime(format!("{}: {e}", inst.id)))?;
        let items: Vec<_> = summary
            .items
            .iter()
            .map(|s| {
                json!({
                    "global_index": s.sentence.global_index,
                    "ref_index": s.sentence.ref_index,
                    "sent_index": s.sentence.sent_index,
                    "score": s.score,
                    "text": s.sentence.text,
                })
            })
            .collect();
        let line = json!({"id": inst.id, "method": summary.method, "k": summary.k_requested, "sentences": items});
        out.push_str(&line.to_string());
        out.push('\n');
    }
    emit(args.out.as_deref(), &out)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::runtime(format!("cannot write output: {e}")))
        }
    }
}

fn read_lines(path: &Path, flag: &str) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read --{flag} {}: {e}", path.display())))?;
    Ok(text.lines().map(str::to_string).collect())
}

fn score(args: ScoreArgs) -> Result<(), Failure> {
    if args.format != "tsv" && args.format != "json" {
        return Err(Failure::usage(format!("unknown --format `{}` (expected tsv or json)", args.format)));
    }
    let candidates = read_lines(&args.candidate, "candidate")?;
    let references = read_lines(&args.reference, "reference")?;
    if candidates.len() != references.len() {
        return Err(Failure::usage(format!(
            "{} candidate lines but {} reference lines",
            candidates.len(),
            references.len()
        )));
    }
    let rows: Vec<MetricTriple> = candidates
        .iter()
        .zip(&references)
        .map(|(c, r)| MetricTriple::score(c, r))
        .collect();
    let mean = micro_average(&rows).map_err(|e| Failure::usage(e.to_string()))?;
    let text = if args.format == "json" {
        let body = json!({"rows": rows, "mean": mean, "lines": rows.len()});
        serde_json::to_string_pretty(&body).expect("json") + "\n"
    } else {
        let mut s = String::from("line\trouge_l\tchrf\tmeteor\n");
        for (i, m) in rows.iter().enumerate() {
            s.push_str(&format!("{}\t{}\t{}\t{}\n", i + 1, m.rouge_l, m.chrf, m.meteor));
        }
        s.push_str(&format!("mean\t{}\t{}\t{}\n", mean.rouge_l, mean.chrf, mean.meteor));
        s
    };
    emit(None, &text)
}

fn sidecar_path(report: &Path) -> PathBuf {
    report.with_extension("rows.tsv")
}

fn run(args: RunArgs, file: &FileConfig) -> Result<(), Failure> {
    let setup: Setup = pick(args.setup, file.setup.clone(), "mlmd".into())
        .parse()
        .map_err(|e: PipelineError| Failure::usage(e.to_string()))?;
    let method = pick(args.extractor, file.extractor.clone(), "hiporank".into());
    let extractor = extractor_config(&method, &args.params, file)?;
    let encoder = EncoderBackend::select(&args.params, file)?;
    let generator: Box<dyn Generator> =
        match pick(args.generator, file.generator.clone(), "stub".into()).as_str() {
            "stub" => Box::new(StubGenerator::default()),
            "remote" => Box::new(HttpGenerator::new(service_config(
                args.params.model_service_url.clone(),
                file,
                "generator",
            )?)),
            other => return Err(Failure::usage(format!("unknown generator `{other}` (expected stub or remote)"))),
        };
    let workers = pick(args.workers, file.workers, 1);
    if workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    let out = pick(args.out, file.out.clone(), PathBuf::from("report.json"));
    let split = split_filter(args.split, file)?;
    let instances = select_split(load_corpus(args.input, file)?, split)?;

    let segmenter = Segmenter::default();
    let backends = Backends {
        scorer: encoder.scorer(),
        embedder: encoder.embedder(),
        generator: generator.as_ref(),
        segmenter: &segmenter,
    };
    let config = PipelineConfig { setup, extractor, workers };
    let (report, outcome) = run_experiment(&instances, &config, &backends).map_err(|e| match e {
        PipelineError::Extractor(_) | PipelineError::UnknownSetup(_) => Failure::usage(e.to_string()),
        _ => Failure::runtime(e.to_string()),
    })?;

    write_file(&out, (report.to_json() + "\n").as_bytes())?;
    write_file(&sidecar_path(&out), rows_tsv(&outcome.rows).as_bytes())?;
    let markdown = report.render_markdown();
    if let Some(path) = &args.markdown {
        write_file(path, markdown.as_bytes())?;
    }
    print!("{markdown}");
    for f in &outcome.failures {
        eprintln!("skipped {} at {}: {}", f.id, f.stage, f.reason);
    }
    Ok(())
}

//! `signspot` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 data error, 3 some
//! entries failed.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info, warn};
use serde::{Deserialize, Serialize};

use signspot::config::ConfigFile;
use signspot::metrics::{self, EvaluationReport, ExternalMetric};
use signspot::pipeline::{self, ExternalScores, GlossSource, PipelineError, RunConfig, DEFAULT_SWEEP};
use signspot::segmenter;
use signspot::spotter::{self, SpottedGloss};
use signspot::translator::{ChatClient, ResponseCache, TranslationJob, Translator};
use signspot::vocab::{self, GlossLabel, Vocabulary, DEFAULT_MIN_COUNT, INDEX_GLOSS};

#[derive(Parser)]
#[command(
    name = "signspot",
    version,
    about = "Gloss spotting, LLM translation and BLEU scoring"
)]
struct Cli {
    /// TOML file with [spotting], [client] and [run] sections.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vocabulary commands.
    #[command(subcommand)]
    Vocab(VocabCommand),
    /// Cut training windows from annotated spans.
    Segment(SegmentArgs),
    /// Turn score streams into gloss sequences.
    Spot(SpotArgs),
    /// Translate gloss sequences to sentences.
    Translate(TranslateArgs),
    /// Score translations or recognition output.
    #[command(subcommand)]
    Evaluate(EvaluateCommand),
    /// Run spotting, translation and scoring over a manifest.
    Run(RunArgs),
    /// Repeat a run over several spotting thresholds.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum VocabCommand {
    /// Build a vocabulary file from a span manifest.
    Build(VocabBuildArgs),
}

#[derive(Args)]
struct VocabBuildArgs {
    /// Span manifest (JSON lines with video_id, start_frame, end_frame, gloss).
    #[arg(long)]
    spans: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Keep glosses with at least this many spans.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: usize,
    /// Glosses to leave out; repeatable.
    #[arg(long, default_values_t = [INDEX_GLOSS.to_string()])]
    exclude: Vec<String>,
    /// Do not exclude any gloss.
    #[arg(long, conflicts_with = "exclude")]
    no_exclusions: bool,
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long)]
    spans: PathBuf,
    /// Vocabulary file; defaults to [run].vocab.
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Window manifest to write (video_id, class_id, frame list per line).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = segmenter::DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = segmenter::DEFAULT_STRIDE)]
    stride: usize,
}

#[derive(Args)]
struct SpotArgs {
    /// Score stream files.
    #[arg(required = true)]
    scores: Vec<PathBuf>,
    #[command(flatten)]
    spotting: SpottingFlags,
    /// Output file (JSON lines); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TranslateArgs {
    /// JSON lines with `id` and `glosses`, as written by `spot`.
    #[arg(long)]
    input: PathBuf,
    /// Output file (JSON lines); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    client: ClientFlags,
}

#[derive(Subcommand)]
enum EvaluateCommand {
    /// Corpus BLEU-1..4 of hypotheses against references.
    Bleu(BleuArgs),
    /// Per-instance and per-class accuracy of class predictions.
    Accuracy(AccuracyArgs),
}

#[derive(Args)]
struct BleuArgs {
    /// One hypothesis per line, or a records.jsonl from `run`/`translate`.
    #[arg(long)]
    hyps: PathBuf,
    /// One reference per line.
    #[arg(long)]
    refs: PathBuf,
    /// Externally computed per-sentence scores, as NAME=FILE.
    #[arg(long, value_parser = parse_external)]
    external: Option<ExternalScores>,
    /// Row label in the Markdown table.
    #[arg(long, default_value = "System")]
    label: String,
    /// Print the JSON report instead of a Markdown table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AccuracyArgs {
    /// One predicted class id per line.
    #[arg(long)]
    predictions: PathBuf,
    /// One true class id per line.
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated thresholds; values outside [0, 1] are clamped.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SWEEP)]
    thresholds: Vec<f64>,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args)]
struct SpottingFlags {
    #[arg(long)]
    vocab: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    window_size: Option<usize>,
}

#[derive(Args)]
struct ClientFlags {
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// Name of the environment variable holding the API key.
    #[arg(long)]
    api_key_env: Option<String>,
    #[arg(long)]
    max_concurrency: Option<usize>,
    #[arg(long)]
    max_retries: Option<u32>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Send empty gloss lists to the endpoint instead of answering locally.
    #[arg(long)]
    call_on_empty: bool,
    /// Send variant-distinguished labels unchanged.
    #[arg(long)]
    keep_variants: bool,
}

#[derive(Args)]
struct RunFlags {
    #[command(flatten)]
    spotting: SpottingFlags,
    #[command(flatten)]
    client: ClientFlags,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_gloss_source)]
    gloss_source: Option<GlossSource>,
    /// Stop at the first failing entry.
    #[arg(long)]
    fail_fast: bool,
    /// Externally computed per-sentence scores, as NAME=FILE.
    #[arg(long, value_parser = parse_external)]
    external: Option<ExternalScores>,
}

fn parse_gloss_source(text: &str) -> Result<GlossSource, String> {
    text.parse()
}

fn parse_external(text: &str) -> Result<ExternalScores, String> {
    let (name, path) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=FILE, got {text:?}"))?;
    Ok(ExternalScores {
        name: name.to_owned(),
        path: PathBuf::from(path),
    })
}

impl SpottingFlags {
    fn apply(&self, config: &mut RunConfig) {
        if let Some(v) = &self.vocab {
            config.vocab_path = Some(v.clone());
        }
        if let Some(v) = self.threshold {
            config.spotting.threshold = v;
        }
        if let Some(v) = self.window_size {
            config.spotting.window_size = v;
        }
    }
}

impl ClientFlags {
    fn apply(&self, config: &mut RunConfig) {
        let client = &mut config.client;
        if let Some(v) = &self.endpoint {
            client.endpoint_url = v.clone();
        }
        if let Some(v) = &self.model {
            client.model_name = v.clone();
        }
        if let Some(v) = &self.api_key_env {
            client.api_key_env = (!v.is_empty()).then(|| v.clone());
        }
        if let Some(v) = self.max_concurrency {
            client.max_concurrency = v;
        }
        if let Some(v) = self.max_retries {
            client.max_retries = v;
        }
        if let Some(v) = &self.cache_dir {
            config.cache_dir = Some(v.clone());
        }
        if self.call_on_empty {
            config.translator.skip_empty = false;
        }
        if self.keep_variants {
            config.translator.strip_variants = false;
        }
    }
}

impl RunFlags {
    fn apply(&self, config: &mut RunConfig) {
        self.spotting.apply(config);
        self.client.apply(config);
        if let Some(v) = &self.out {
            config.output_dir = v.clone();
        }
        if let Some(v) = self.gloss_source {
            config.gloss_source = v;
        }
        if self.fail_fast {
            config.fail_fast = true;
        }
        if let Some(v) = &self.external {
            config.external_scores = Some(v.clone());
        }
    }
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(err: PipelineError) -> Self {
        Self {
            code: err.exit_code() as u8,
            message: err.to_string(),
        }
    }
}

macro_rules! data_err {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(err: $ty) -> Self {
                Failure::data(err.to_string())
            }
        }
    )*};
}
data_err!(
    io::Error,
    vocab::VocabError,
    spotter::ScoreError,
    metrics::MetricsError,
    serde_json::Error
);

/// Completed with nothing failed, or with this many failed entries.
type Status = Result<usize, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match dispatch(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            warn!("{failed} entries failed");
            ExitCode::from(3)
        }
        Err(failure) => {
            error!("{}", failure.message);
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn base_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let mut config = RunConfig::new("signspot-out");
    if let Some(path) = path {
        ConfigFile::load(path)?.apply(&mut config);
    }
    Ok(config)
}

fn dispatch(cli: &Cli) -> Status {
    let mut config = base_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Vocab(VocabCommand::Build(args)) => vocab_build(args),
        Command::Segment(args) => {
            if let Some(v) = &args.vocab {
                config.vocab_path = Some(v.clone());
            }
            segment(args, &config)
        }
        Command::Spot(args) => {
            args.spotting.apply(&mut config);
            spot(args, &config)
        }
        Command::Translate(args) => {
            args.client.apply(&mut config);
            translate(args, &config)
        }
        Command::Evaluate(EvaluateCommand::Bleu(args)) => evaluate_bleu(args),
        Command::Evaluate(EvaluateCommand::Accuracy(args)) => evaluate_accuracy(args),
        Command::Run(args) => {
            args.run.apply(&mut config);
            run(args, &config)
        }
        Command::Sweep(args) => {
            args.run.apply(&mut config);
            sweep(args, &config)
        }
    }
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(path)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn load_vocab(config: &RunConfig) -> Result<Vocabulary, Failure> {
    let path = config
        .vocab_path
        .as_ref()
        .ok_or_else(|| Failure::config("no vocabulary given (--vocab or [run].vocab)"))?;
    Vocabulary::load(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn vocab_build(args: &VocabBuildArgs) -> Status {
    let spans = vocab::read_spans(open(&args.spans)?)?;
    let exclusions: BTreeSet<GlossLabel> = if args.no_exclusions {
        BTreeSet::new()
    } else {
        args.exclude
            .iter()
            .map(GlossLabel::new)
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::config(e.to_string()))?
    };
    if args.min_count == 0 {
        return Err(Failure::config("--min-count must be at least 1"));
    }
    let vocab = vocab::build_vocabulary(&spans, args.min_count, &exclusions)?;
    vocab.save(&args.out)?;
    eprintln!(
        "{} glosses from {} spans (min_count {}), hash {}",
        vocab.len(),
        spans.len(),
        vocab.min_count(),
        vocab.content_hash()
    );
    Ok(0)
}

fn segment(args: &SegmentArgs, config: &RunConfig) -> Status {
    if args.window == 0 || args.stride == 0 {
        return Err(Failure::config("--window and --stride must be at least 1"));
    }
    let vocab = load_vocab(config)?;
    let spans = vocab::read_spans(open(&args.spans)?)?;
    let corpus = segmenter::segment_corpus(&spans, &vocab, args.window, args.stride)
        .map_err(|e| Failure::data(e.to_string()))?;
    let mut out = output(Some(&args.out))?;
    segmenter::write_window_manifest(&mut out, &corpus.windows)?;
    out.flush()?;
    eprintln!(
        "{} windows from {} spans, {} spans outside the vocabulary",
        corpus.windows.len(),
        spans.len(),
        corpus.skipped_spans
    );
    Ok(0)
}

/// Input line for `translate`; other fields are ignored.
#[derive(Deserialize)]
struct SpotLine {
    id: String,
    glosses: Vec<GlossLabel>,
}

#[derive(Serialize)]
struct SpotOutput<'a> {
    id: &'a str,
    glosses: Vec<&'a GlossLabel>,
    threshold: f64,
    items: &'a [SpottedGloss],
}

fn spot(args: &SpotArgs, config: &RunConfig) -> Status {
    config.spotting.validate().map_err(Failure::config)?;
    let vocab = load_vocab(config)?;
    let mut out = output(args.out.as_deref())?;
    let mut failed = 0;
    for path in &args.scores {
        let spotted = spotter::load_score_stream(path).and_then(|stream| {
            stream.check_vocabulary(&vocab)?;
            spotter::spot(&stream, &config.spotting)
        });
        match spotted {
            Ok(seq) => {
                let line = SpotOutput {
                    id: &seq.video_id,
                    glosses: seq
                        .items
                        .iter()
                        .filter_map(|g| vocab.label_of(g.class_id))
                        .collect(),
                    threshold: seq.threshold,
                    items: &seq.items,
                };
                serde_json::to_writer(&mut out, &line)?;
                out.write_all(b"\n")?;
            }
            Err(err) => {
                error!("stage=spot file={} error={err}", path.display());
                failed += 1;
            }
        }
    }
    out.flush()?;
    all_failed_is_data_error(failed, args.scores.len())
}

fn all_failed_is_data_error(failed: usize, total: usize) -> Status {
    if failed > 0 && failed == total {
        Err(Failure::data(format!("all {total} inputs failed")))
    } else {
        Ok(failed)
    }
}

#[derive(Serialize)]
struct TranslateOutput {
    id: String,
    glosses: Vec<String>,
    hypothesis: Option<String>,
    no_translation: bool,
    raw_response: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn translate(args: &TranslateArgs, config: &RunConfig) -> Status {
    let mut jobs = Vec::new();
    for (idx, line) in open(&args.input)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SpotLine = serde_json::from_str(&line)
            .map_err(|e| Failure::data(format!("{} line {}: {e}", args.input.display(), idx + 1)))?;
        jobs.push(TranslationJob {
            video_id: parsed.id,
            glosses: parsed.glosses,
        });
    }
    let client = ChatClient::new(config.client.clone()).map_err(|e| Failure::config(e.to_string()))?;
    let cache = match &config.cache_dir {
        Some(dir) => Some(ResponseCache::open(dir)?),
        None => None,
    };
    let translator = Translator::new(client, cache, config.translator);
    let mut out = output(args.out.as_deref())?;
    let mut failed = 0;
    for (job, result) in jobs.iter().zip(translator.translate_all(&jobs)) {
        let line = match result {
            Ok(record) => TranslateOutput {
                id: record.video_id,
                glosses: record.glosses,
                no_translation: record.hypothesis.is_no_translation(),
                hypothesis: record.hypothesis.into(),
                raw_response: record.raw_response,
                error: None,
            },
            Err(err) => {
                error!("stage=translate entry={} error={err}", job.video_id);
                failed += 1;
                TranslateOutput {
                    id: job.video_id.clone(),
                    glosses: job.glosses.iter().map(|g| g.to_string()).collect(),
                    hypothesis: None,
                    no_translation: false,
                    raw_response: String::new(),
                    error: Some(err.to_string()),
                }
            }
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    info!(
        "stage=translate entries={} requests={} cache_hits={}",
        jobs.len(),
        translator.client().requests_sent(),
        translator.cache_hits()
    );
    all_failed_is_data_error(failed, jobs.len())
}

#[derive(Deserialize)]
struct HypothesisLine {
    hypothesis: Option<String>,
    #[serde(default)]
    no_translation: bool,
}

/// Hypotheses and the number of explicit no-translation answers.
fn read_hypotheses(path: &Path) -> Result<(Vec<String>, usize), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "jsonl") {
        let mut hyps = Vec::new();
        let mut no_translation = 0;
        for (idx, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let parsed: HypothesisLine = serde_json::from_str(line)
                .map_err(|e| Failure::data(format!("{} record {}: {e}", path.display(), idx + 1)))?;
            no_translation += usize::from(parsed.no_translation);
            hyps.push(parsed.hypothesis.unwrap_or_default());
        }
        Ok((hyps, no_translation))
    } else {
        Ok((text.lines().map(str::to_owned).collect(), 0))
    }
}

fn evaluate_bleu(args: &BleuArgs) -> Status {
    let (hyps, no_translation) = read_hypotheses(&args.hyps)?;
    let refs: Vec<String> = fs::read_to_string(&args.refs)
        .map_err(|e| Failure::data(format!("{}: {e}", args.refs.display())))?
        .lines()
        .map(str::to_owned)
        .collect();
    let bleu = metrics::corpus_bleu(&hyps, &refs, metrics::MAX_ORDER)?;
    let mut report = EvaluationReport::new(bleu, hyps.len(), no_translation);
    if let Some(ext) = &args.external {
        let scores = metrics::read_external_scores(open(&ext.path)?)?;
        if scores.len() != hyps.len() {
            return Err(Failure::data(format!(
                "{} has {} scores for {} hypotheses",
                ext.path.display(),
                scores.len(),
                hyps.len()
            )));
        }
        report = report.with_external(ExternalMetric::from_scores(&ext.name, &scores));
    }
    let mut out = io::stdout().lock();
    if args.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        write!(
            out,
            "{}",
            metrics::render_markdown_table(&[(&args.label, &report)])
        )?;
    }
    Ok(0)
}

fn read_ids(path: &Path) -> Result<Vec<usize>, Failure> {
    let mut ids = Vec::new();
    for (idx, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let value = line.trim();
        if value.is_empty() {
            continue;
        }
        ids.push(
            value
                .parse()
                .map_err(|e| Failure::data(format!("{} line {}: {e}", path.display(), idx + 1)))?,
        );
    }
    Ok(ids)
}

fn evaluate_accuracy(args: &AccuracyArgs) -> Status {
    let report = metrics::accuracy(&read_ids(&args.predictions)?, &read_ids(&args.labels)?)?;
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(0)
}

fn run(args: &RunArgs, config: &RunConfig) -> Status {
    let manifest = pipeline::load_manifest(&args.manifest)?;
    let outcome = pipeline::run(&manifest, config)?;
    let bleu = &outcome.report.bleu;
    eprintln!(
        "{} entries, {} failed, {} requests, {} cache hits; BLEU-1..4 {:.2} {:.2} {:.2} {:.2}; outputs in {}",
        manifest.len(),
        outcome.failures,
        outcome.network_requests,
        outcome.cache_hits,
        bleu[0],
        bleu[1],
        bleu[2],
        bleu[3],
        config.output_dir.display()
    );
    Ok(outcome.failures)
}

fn sweep(args: &SweepArgs, config: &RunConfig) -> Status {
    let manifest = pipeline::load_manifest(&args.manifest)?;
    let outcome = pipeline::sweep_threshold(&manifest, config, &args.thresholds)?;
    for violation in outcome.monotonicity_violations() {
        warn!(
            "stage=sweep entry={} glosses at {} are not a subsequence of those at {}",
            violation.id, violation.higher, violation.lower
        );
    }
    let table = fs::read_to_string(config.output_dir.join("sweep.md"))?;
    print!("{table}");
    Ok(outcome.rows.iter().map(|r| r.failures).max().unwrap_or(0))
}

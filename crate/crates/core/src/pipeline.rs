//! End-to-end runs: score streams → glosses → translations → BLEU.
//!
//! A run reads a JSON-lines manifest, derives each entry's glosses from its
//! score stream or from annotated ground truth, translates them, scores every
//! hypothesis against its reference and writes a fixed output layout:
//!
//! ```text
//! <output_dir>/records.jsonl   one line per manifest entry, manifest order
//! <output_dir>/report.json     corpus scores
//! <output_dir>/report.md       the same scores as a Markdown table
//! <output_dir>/cache/          response cache (unless configured elsewhere)
//! ```
//!
//! Per-entry failures are recorded and the run continues unless
//! `fail_fast` is set.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{self, EvaluationReport, ExternalMetric, MetricsError, MAX_ORDER};
use crate::spotter::{self, ScoreError, SpottingConfig};
use crate::translator::{
    ChatClient, ClientConfig, ResponseCache, TranslateError, TranslationJob, TranslationRecord, Translator,
    TranslatorOptions,
};
use crate::vocab::{GlossLabel, VocabError, Vocabulary};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const REPORT_FILE: &str = "report.json";
pub const REPORT_MD_FILE: &str = "report.md";
pub const CACHE_DIR: &str = "cache";

pub const DEFAULT_SWEEP: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("manifest line {line}: {detail}")]
    Manifest { line: usize, detail: String },
    #[error("manifest id {0:?} appears more than once")]
    DuplicateId(String),
    #[error("entry {id}: {what} required by gloss source {source_name} is missing")]
    MissingInput {
        id: String,
        what: &'static str,
        source_name: &'static str,
    },
    #[error("vocabulary: {0}")]
    Vocab(#[from] VocabError),
    #[error("entry {id}: {source}")]
    Entry {
        id: String,
        #[source]
        source: EntryError,
    },
    #[error("external scores: {0}")]
    ExternalScores(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl PipelineError {
    /// Process exit code: 1 for configuration problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            _ => 2,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> PipelineError {
    let context = context.into();
    move |source| PipelineError::Io { context, source }
}

#[derive(Debug, Error)]
pub enum EntryError {
    #[error("score stream {path}: {source}")]
    Scores {
        path: PathBuf,
        #[source]
        source: ScoreError,
    },
    #[error("spotted class {0} is not in the vocabulary")]
    UnknownClass(usize),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    #[serde(rename = "scores", default, skip_serializing_if = "Option::is_none")]
    pub scores_path: Option<PathBuf>,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt_glosses: Option<Vec<GlossLabel>>,
}

/// Parses a JSON-lines manifest. Relative score paths are resolved against
/// `base_dir`. Ids must be unique.
pub fn read_manifest<R: BufRead>(reader: R, base_dir: &Path) -> Result<Vec<ManifestEntry>, PipelineError> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err("reading manifest"))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut entry: ManifestEntry = serde_json::from_str(&line).map_err(|e| PipelineError::Manifest {
            line: idx + 1,
            detail: e.to_string(),
        })?;
        if !seen.insert(entry.id.clone()) {
            return Err(PipelineError::DuplicateId(entry.id));
        }
        if let Some(path) = &entry.scores_path {
            if path.is_relative() {
                entry.scores_path = Some(base_dir.join(path));
            }
        }
        entries.push(entry);
    }
    Ok(entries)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>, PipelineError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(format!("opening manifest {}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    read_manifest(BufReader::new(file), base)
}

pub fn write_manifest<W: Write>(mut out: W, entries: &[ManifestEntry]) -> io::Result<()> {
    for entry in entries {
        serde_json::to_writer(&mut out, entry)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Where an entry's glosses come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlossSource {
    /// Spot the entry's score stream.
    Spotter,
    /// Use the annotated glosses as they are.
    GroundTruth,
    /// Use the annotated glosses that the vocabulary knows.
    GroundTruthInVocab,
}

impl GlossSource {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spotter => "spotter",
            Self::GroundTruth => "ground_truth",
            Self::GroundTruthInVocab => "ground_truth_in_vocab",
        }
    }

    /// Row label used in Markdown reports.
    pub fn method_label(self) -> &'static str {
        match self {
            Self::Spotter => "Spotter+GPT",
            Self::GroundTruth => "GT+GPT",
            Self::GroundTruthInVocab => "Sub-GT+GPT",
        }
    }

    fn needs_vocab(self) -> bool {
        !matches!(self, Self::GroundTruth)
    }
}

impl std::str::FromStr for GlossSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spotter" => Ok(Self::Spotter),
            "ground_truth" => Ok(Self::GroundTruth),
            "ground_truth_in_vocab" => Ok(Self::GroundTruthInVocab),
            other => Err(format!(
                "unknown gloss source {other:?} (expected spotter, ground_truth or ground_truth_in_vocab)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalScores {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spotting: SpottingConfig,
    pub client: ClientConfig,
    pub vocab_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Defaults to `<output_dir>/cache`.
    pub cache_dir: Option<PathBuf>,
    pub gloss_source: GlossSource,
    pub translator: TranslatorOptions,
    pub fail_fast: bool,
    pub external_scores: Option<ExternalScores>,
}

impl RunConfig {
    pub fn new(output_dir: impl Into<PathBuf>) -> Self {
        Self {
            spotting: SpottingConfig::default(),
            client: ClientConfig::default(),
            vocab_path: None,
            output_dir: output_dir.into(),
            cache_dir: None,
            gloss_source: GlossSource::Spotter,
            translator: TranslatorOptions::default(),
            fail_fast: false,
            external_scores: None,
        }
    }

    pub fn cache_dir(&self) -> PathBuf {
        self.cache_dir
            .clone()
            .unwrap_or_else(|| self.output_dir.join(CACHE_DIR))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.spotting.validate().map_err(PipelineError::Config)?;
        self.client
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.gloss_source.needs_vocab() && self.vocab_path.is_none() {
            return Err(PipelineError::Config(format!(
                "gloss source {} needs a vocabulary file",
                self.gloss_source.name()
            )));
        }
        Ok(())
    }

    fn build_translator(&self) -> Result<Translator, PipelineError> {
        let client =
            ChatClient::new(self.client.clone()).map_err(|e| PipelineError::Config(e.to_string()))?;
        let cache_dir = self.cache_dir();
        let cache = ResponseCache::open(&cache_dir)
            .map_err(io_err(format!("creating cache {}", cache_dir.display())))?;
        Ok(Translator::new(client, Some(cache), self.translator))
    }
}

/// One line of `records.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub id: String,
    pub glosses: Vec<String>,
    pub hypothesis: Option<String>,
    pub no_translation: bool,
    pub raw_response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunRecord {
    fn from_translation(record: TranslationRecord) -> Self {
        Self {
            id: record.video_id,
            glosses: record.glosses,
            no_translation: record.hypothesis.is_no_translation(),
            hypothesis: record.hypothesis.into(),
            raw_response: record.raw_response,
            error: None,
        }
    }

    fn failed(id: &str, glosses: Vec<String>, error: String) -> Self {
        Self {
            id: id.to_owned(),
            glosses,
            hypothesis: None,
            no_translation: false,
            raw_response: String::new(),
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<RunRecord>,
    pub report: EvaluationReport,
    /// Spotted class ids per entry (spotter source only, `None` on failure).
    pub spotted: Vec<Option<Vec<usize>>>,
    pub failures: usize,
    pub network_requests: usize,
    pub cache_hits: usize,
}

struct Resolved {
    glosses: Vec<GlossLabel>,
    spotted: Option<Vec<usize>>,
}

fn check_inputs(manifest: &[ManifestEntry], source: GlossSource) -> Result<(), PipelineError> {
    for entry in manifest {
        let (missing, what) = match source {
            GlossSource::Spotter => (entry.scores_path.is_none(), "scores"),
            _ => (entry.gt_glosses.is_none(), "gt_glosses"),
        };
        if missing {
            return Err(PipelineError::MissingInput {
                id: entry.id.clone(),
                what,
                source_name: source.name(),
            });
        }
    }
    Ok(())
}

fn resolve_glosses(
    entry: &ManifestEntry,
    source: GlossSource,
    vocab: Option<&Vocabulary>,
    spotting: &SpottingConfig,
) -> Result<Resolved, EntryError> {
    match source {
        GlossSource::Spotter => {
            let vocab = vocab.expect("vocabulary loaded for spotter source");
            let path = entry.scores_path.clone().expect("checked before resolving");
            let scores_err = |source| EntryError::Scores {
                path: path.clone(),
                source,
            };
            let stream = spotter::load_score_stream(&path).map_err(scores_err)?;
            stream.check_vocabulary(vocab).map_err(scores_err)?;
            let sequence = spotter::spot(&stream, spotting).map_err(scores_err)?;
            let glosses = sequence
                .items
                .iter()
                .map(|g| {
                    vocab
                        .label_of(g.class_id)
                        .cloned()
                        .ok_or(EntryError::UnknownClass(g.class_id))
                })
                .collect::<Result<_, _>>()?;
            Ok(Resolved {
                glosses,
                spotted: Some(sequence.class_ids()),
            })
        }
        GlossSource::GroundTruth => Ok(Resolved {
            glosses: entry.gt_glosses.clone().unwrap_or_default(),
            spotted: None,
        }),
        GlossSource::GroundTruthInVocab => {
            let vocab = vocab.expect("vocabulary loaded for ground_truth_in_vocab source");
            let glosses = entry
                .gt_glosses
                .iter()
                .flatten()
                .filter(|g| vocab.contains(g.as_str()))
                .cloned()
                .collect();
            Ok(Resolved {
                glosses,
                spotted: None,
            })
        }
    }
}

/// Runs the whole pipeline and writes the output layout.
pub fn run(manifest: &[ManifestEntry], config: &RunConfig) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let translator = config.build_translator()?;
    run_with_translator(manifest, config, &translator)
}

fn load_vocab(config: &RunConfig) -> Result<Option<Vocabulary>, PipelineError> {
    match (&config.vocab_path, config.gloss_source.needs_vocab()) {
        (Some(path), true) => Ok(Some(Vocabulary::load(path)?)),
        _ => Ok(None),
    }
}

fn run_with_translator(
    manifest: &[ManifestEntry],
    config: &RunConfig,
    translator: &Translator,
) -> Result<RunOutcome, PipelineError> {
    let mut ids = HashSet::new();
    if let Some(dup) = manifest.iter().find(|e| !ids.insert(e.id.as_str())) {
        return Err(PipelineError::DuplicateId(dup.id.clone()));
    }
    check_inputs(manifest, config.gloss_source)?;
    let vocab = load_vocab(config)?;
    let requests_before = translator.client().requests_sent();
    let hits_before = translator.cache_hits();
    info!(
        "stage=run entries={} source={} threshold={}",
        manifest.len(),
        config.gloss_source.name(),
        config.spotting.threshold
    );

    let resolved: Vec<Result<Resolved, EntryError>> = manifest
        .par_iter()
        .map(|entry| resolve_glosses(entry, config.gloss_source, vocab.as_ref(), &config.spotting))
        .collect();

    if config.fail_fast {
        if let Some((entry, Err(_))) = manifest.iter().zip(&resolved).find(|(_, r)| r.is_err()) {
            let idx = manifest.iter().position(|e| e.id == entry.id).unwrap();
            let Err(source) = resolved.into_iter().nth(idx).unwrap() else {
                unreachable!()
            };
            return Err(PipelineError::Entry {
                id: entry.id.clone(),
                source,
            });
        }
    }

    let jobs: Vec<TranslationJob> = manifest
        .iter()
        .zip(&resolved)
        .filter_map(|(entry, r)| {
            r.as_ref().ok().map(|r| TranslationJob {
                video_id: entry.id.clone(),
                glosses: r.glosses.clone(),
            })
        })
        .collect();
    let mut translated = translator.translate_all(&jobs).into_iter();

    let mut records = Vec::with_capacity(manifest.len());
    let mut spotted = Vec::with_capacity(manifest.len());
    let mut failures = 0;
    for (entry, resolved) in manifest.iter().zip(resolved) {
        match resolved {
            Err(err) => {
                warn!("stage=spot entry={} error={err}", entry.id);
                failures += 1;
                spotted.push(None);
                records.push(RunRecord::failed(&entry.id, Vec::new(), err.to_string()));
            }
            Ok(resolved) => {
                spotted.push(resolved.spotted);
                match translated.next().expect("one translation per job") {
                    Ok(record) => records.push(RunRecord::from_translation(record)),
                    Err(err) => {
                        warn!("stage=translate entry={} error={err}", entry.id);
                        if config.fail_fast {
                            return Err(PipelineError::Entry {
                                id: entry.id.clone(),
                                source: err.into(),
                            });
                        }
                        failures += 1;
                        let words = resolved
                            .glosses
                            .iter()
                            .map(|g| {
                                if config.translator.strip_variants {
                                    g.base()
                                } else {
                                    g.as_str()
                                }
                                .to_owned()
                            })
                            .collect();
                        records.push(RunRecord::failed(&entry.id, words, err.to_string()));
                    }
                }
            }
        }
    }

    let report = score_records(&records, manifest, config)?;
    write_outputs(&config.output_dir, &records, &report, config.gloss_source)?;
    let outcome = RunOutcome {
        records,
        report,
        spotted,
        failures,
        network_requests: translator.client().requests_sent() - requests_before,
        cache_hits: translator.cache_hits() - hits_before,
    };
    info!(
        "stage=report entries={} failures={} requests={} cache_hits={} bleu4={:.2}",
        manifest.len(),
        outcome.failures,
        outcome.network_requests,
        outcome.cache_hits,
        outcome.report.bleu[MAX_ORDER - 1]
    );
    Ok(outcome)
}

fn score_records(
    records: &[RunRecord],
    manifest: &[ManifestEntry],
    config: &RunConfig,
) -> Result<EvaluationReport, PipelineError> {
    let hyps: Vec<&str> = records
        .iter()
        .map(|r| r.hypothesis.as_deref().unwrap_or(""))
        .collect();
    let refs: Vec<&str> = manifest.iter().map(|e| e.reference.as_str()).collect();
    let no_translation = records.iter().filter(|r| r.no_translation).count();
    let bleu = metrics::corpus_bleu(&hyps, &refs, MAX_ORDER)?;
    let external = match &config.external_scores {
        None => None,
        Some(ext) => {
            let file = File::open(&ext.path).map_err(io_err(format!("opening {}", ext.path.display())))?;
            let scores = metrics::read_external_scores(BufReader::new(file))?;
            if scores.len() != records.len() {
                return Err(PipelineError::ExternalScores(format!(
                    "{} has {} scores for {} entries",
                    ext.path.display(),
                    scores.len(),
                    records.len()
                )));
            }
            ExternalMetric::from_scores(&ext.name, &scores)
        }
    };
    Ok(EvaluationReport::new(bleu, records.len(), no_translation).with_external(external))
}

fn write_outputs(
    dir: &Path,
    records: &[RunRecord],
    report: &EvaluationReport,
    source: GlossSource,
) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(io_err(format!("creating {}", dir.display())))?;

    let records_path = dir.join(RECORDS_FILE);
    let write_records = || -> io::Result<()> {
        let mut out = BufWriter::new(File::create(&records_path)?);
        for record in records {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    };
    write_records().map_err(io_err(format!("writing {}", records_path.display())))?;

    let report_path = dir.join(REPORT_FILE);
    let json = serde_json::to_string_pretty(report).expect("report serialises") + "\n";
    fs::write(&report_path, json).map_err(io_err(format!("writing {}", report_path.display())))?;

    let md_path = dir.join(REPORT_MD_FILE);
    fs::write(&md_path, render_report_markdown(report, source))
        .map_err(io_err(format!("writing {}", md_path.display())))?;
    Ok(())
}

fn render_report_markdown(report: &EvaluationReport, source: GlossSource) -> String {
    let mut md = metrics::render_markdown_table(&[(source.method_label(), report)]);
    md.push_str(&format!(
        "\nBLEU: tokenizer={} smoothing={} case_sensitive={} sentences={} no_translation={} BP={:.3} hyp_len={} ref_len={}\n",
        report.tokenizer,
        report.smoothing,
        report.case_sensitive,
        report.n_sentences,
        report.n_no_translation,
        report.bp,
        report.hyp_len,
        report.ref_len
    ));
    if let Some(metric) = &report.external_metric {
        md.push_str(&format!("{} values are externally computed.\n", metric.name));
    }
    md
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub threshold: f64,
    pub report: EvaluationReport,
    pub failures: usize,
    pub spotted: Vec<Option<Vec<usize>>>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub entry_ids: Vec<String>,
    /// Rows in the order the thresholds were given.
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub id: String,
    pub lower: f64,
    pub higher: f64,
}

impl SweepOutcome {
    /// Entries whose glosses at a higher threshold are not a subsequence of
    /// those at a lower one. Empty for a correct spotter.
    pub fn monotonicity_violations(&self) -> Vec<MonotonicityViolation> {
        let mut violations = Vec::new();
        for low in &self.rows {
            for high in &self.rows {
                if high.threshold <= low.threshold {
                    continue;
                }
                for (i, id) in self.entry_ids.iter().enumerate() {
                    if let (Some(lo), Some(hi)) = (&low.spotted[i], &high.spotted[i]) {
                        if !is_subsequence(hi, lo) {
                            violations.push(MonotonicityViolation {
                                id: id.clone(),
                                lower: low.threshold,
                                higher: high.threshold,
                            });
                        }
                    }
                }
            }
        }
        violations
    }
}

fn is_subsequence<T: PartialEq>(needle: &[T], haystack: &[T]) -> bool {
    let mut rest = haystack.iter();
    needle.iter().all(|x| rest.any(|y| y == x))
}

/// Sub-directory holding one sweep step's outputs.
pub fn sweep_dir_name(threshold: f64) -> String {
    format!("threshold-{threshold:.2}")
}

/// Runs the pipeline once per threshold, sharing one translator and cache.
/// Thresholds outside [0, 1] are clamped.
pub fn sweep_threshold(
    manifest: &[ManifestEntry],
    config: &RunConfig,
    thresholds: &[f64],
) -> Result<SweepOutcome, PipelineError> {
    if config.gloss_source != GlossSource::Spotter {
        return Err(PipelineError::Config(
            "a threshold sweep needs the spotter gloss source".into(),
        ));
    }
    if thresholds.is_empty() {
        return Err(PipelineError::Config("no thresholds to sweep".into()));
    }
    if thresholds.iter().any(|t| t.is_nan()) {
        return Err(PipelineError::Config("threshold is NaN".into()));
    }
    config.validate()?;
    let translator = config.build_translator()?;

    let mut rows = Vec::with_capacity(thresholds.len());
    for &requested in thresholds {
        let threshold = requested.clamp(0.0, 1.0);
        if threshold != requested {
            warn!("stage=sweep threshold {requested} clamped to {threshold}");
        }
        let mut step = config.clone();
        step.spotting.threshold = threshold;
        step.cache_dir = Some(config.cache_dir());
        step.output_dir = config.output_dir.join(sweep_dir_name(threshold));
        let outcome = run_with_translator(manifest, &step, &translator)?;
        rows.push(SweepRow {
            threshold,
            report: outcome.report,
            failures: outcome.failures,
            spotted: outcome.spotted,
        });
    }

    let sweep = SweepOutcome {
        entry_ids: manifest.iter().map(|e| e.id.clone()).collect(),
        rows,
    };
    write_sweep(&config.output_dir, &sweep)?;
    Ok(sweep)
}

#[derive(Serialize)]
struct SweepJsonRow<'a> {
    threshold: f64,
    report: &'a EvaluationReport,
}

fn write_sweep(dir: &Path, sweep: &SweepOutcome) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(io_err(format!("creating {}", dir.display())))?;
    let rows: Vec<SweepJsonRow<'_>> = sweep
        .rows
        .iter()
        .map(|r| SweepJsonRow {
            threshold: r.threshold,
            report: &r.report,
        })
        .collect();
    let json = serde_json::to_string_pretty(&rows).expect("sweep serialises") + "\n";
    let json_path = dir.join("sweep.json");
    fs::write(&json_path, json).map_err(io_err(format!("writing {}", json_path.display())))?;

    let labels: Vec<String> = sweep
        .rows
        .iter()
        .map(|r| format!("threshold {:.2}", r.threshold))
        .collect();
    let table: Vec<(&str, &EvaluationReport)> = labels
        .iter()
        .zip(&sweep.rows)
        .map(|(label, row)| (label.as_str(), &row.report))
        .collect();
    let md_path = dir.join("sweep.md");
    fs::write(&md_path, metrics::render_markdown_table(&table))
        .map_err(io_err(format!("writing {}", md_path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parsing_resolves_paths_and_rejects_duplicates() {
        let text = r#"{"id":"a","scores":"s/a.jsonl","reference":"Ja."}
{"id":"b","reference":"Nein.","gt_glosses":["NEIN1"]}
"#;
        let entries = read_manifest(text.as_bytes(), Path::new("/data")).unwrap();
        assert_eq!(
            entries[0].scores_path.as_deref(),
            Some(Path::new("/data/s/a.jsonl"))
        );
        assert_eq!(entries[1].gt_glosses.as_ref().unwrap()[0].as_str(), "NEIN1");

        let dup = "{\"id\":\"a\",\"reference\":\"x\"}\n{\"id\":\"a\",\"reference\":\"y\"}\n";
        assert!(matches!(
            read_manifest(dup.as_bytes(), Path::new(".")),
            Err(PipelineError::DuplicateId(_))
        ));
        let bad = "{\"id\":\"a\"}\n";
        assert!(matches!(
            read_manifest(bad.as_bytes(), Path::new(".")),
            Err(PipelineError::Manifest { line: 1, .. })
        ));
    }

    #[test]
    fn gloss_source_names_round_trip() {
        for source in [
            GlossSource::Spotter,
            GlossSource::GroundTruth,
            GlossSource::GroundTruthInVocab,
        ] {
            assert_eq!(source.name().parse::<GlossSource>().unwrap(), source);
        }
        assert!("gt".parse::<GlossSource>().is_err());
    }

    #[test]
    fn subsequence_helper() {
        assert!(is_subsequence(&[1, 3], &[1, 2, 3]));
        assert!(!is_subsequence(&[3, 1], &[1, 2, 3]));
        assert!(is_subsequence::<u8>(&[], &[]));
    }

    #[test]
    fn spotter_source_requires_vocab() {
        let config = RunConfig::new("/tmp/x");
        assert!(matches!(config.validate(), Err(PipelineError::Config(_))));
        assert_eq!(PipelineError::Config(String::new()).exit_code(), 1);
        assert_eq!(PipelineError::DuplicateId(String::new()).exit_code(), 2);
    }
}

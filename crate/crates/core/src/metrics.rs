//! Corpus BLEU and isolated-recognition accuracy.
//!
//! BLEU follows sacreBLEU's defaults exactly: the `13a` tokenizer,
//! case-sensitive matching, a single reference per hypothesis, and `exp`
//! smoothing. `BLEU-n` is the cumulative score over orders `1..=n`, the same
//! value sacreBLEU reports with `max_ngram_order = n`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{self, BufRead};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("{hyps} hypotheses but {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("cannot score an empty corpus")]
    EmptyCorpus,
    #[error("max_order must be at least 1")]
    InvalidOrder,
    #[error("external score file line {line}: {value:?} is not a number")]
    BadExternalScore { line: usize, value: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

// mteval-v13a punctuation rules, applied in order
static TOKENIZER_RULES: LazyLock<[(Regex, &'static str); 4]> = LazyLock::new(|| {
    [
        (Regex::new(r"([\{-~\[-` -&\(-\+:-@/])").unwrap(), " $1 "),
        (Regex::new(r"([^0-9])([\.,])").unwrap(), "$1 $2 "),
        (Regex::new(r"([\.,])([^0-9])").unwrap(), " $1 $2"),
        (Regex::new(r"([0-9])(-)").unwrap(), "$1 $2 "),
    ]
});

/// Splits `text` the way the mteval `13a` tokenizer does.
pub fn tokenize_13a(text: &str) -> Vec<String> {
    let mut line = text
        .replace("<skipped>", "")
        .replace("-\n", "")
        .replace('\n', " ");
    if line.contains('&') {
        line = line
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    let mut line = format!(" {line} ");
    for (re, replacement) in TOKENIZER_RULES.iter() {
        line = re.replace_all(&line, *replacement).into_owned();
    }
    line.split_whitespace().map(str::to_owned).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// BLEU-1 .. BLEU-max_order on the 0-100 scale.
    pub bleu: Vec<f64>,
    /// Smoothed modified n-gram precisions (0-100).
    pub precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

fn ngram_counts(tokens: &[String], max_order: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for n in 1..=max_order {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

pub fn corpus_bleu<H, R>(
    hypotheses: &[H],
    references: &[R],
    max_order: usize,
) -> Result<BleuReport, MetricsError>
where
    H: AsRef<str>,
    R: AsRef<str>,
{
    if max_order == 0 {
        return Err(MetricsError::InvalidOrder);
    }
    if hypotheses.len() != references.len() {
        return Err(MetricsError::LengthMismatch {
            hyps: hypotheses.len(),
            refs: references.len(),
        });
    }
    if hypotheses.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }

    let mut correct = vec![0usize; max_order];
    let mut total = vec![0usize; max_order];
    let mut hyp_len = 0;
    let mut ref_len = 0;
    for (hyp, reference) in hypotheses.iter().zip(references) {
        let hyp_tokens = tokenize_13a(hyp.as_ref().trim_end());
        let ref_tokens = tokenize_13a(reference.as_ref().trim_end());
        hyp_len += hyp_tokens.len();
        ref_len += ref_tokens.len();
        let ref_counts = ngram_counts(&ref_tokens, max_order);
        for (gram, count) in ngram_counts(&hyp_tokens, max_order) {
            let order = gram.len() - 1;
            total[order] += count;
            correct[order] += count.min(ref_counts.get(gram).copied().unwrap_or(0));
        }
    }
    Ok(bleu_from_stats(&correct, &total, hyp_len, ref_len))
}

/// Scores from sufficient statistics: matched and total n-gram counts per
/// order plus corpus lengths.
pub fn bleu_from_stats(correct: &[usize], total: &[usize], hyp_len: usize, ref_len: usize) -> BleuReport {
    let max_order = correct.len();
    let brevity_penalty = if hyp_len >= ref_len {
        1.0
    } else if hyp_len > 0 {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    } else {
        0.0
    };

    let mut precisions = vec![0.0; max_order];
    if correct.iter().any(|&c| c > 0) {
        let mut smooth = 1.0;
        for n in 0..max_order {
            // an order with no n-grams at all leaves it and every higher order at 0
            if total[n] == 0 {
                break;
            }
            precisions[n] = if correct[n] == 0 {
                smooth *= 2.0;
                100.0 / (smooth * total[n] as f64)
            } else {
                100.0 * correct[n] as f64 / total[n] as f64
            };
        }
    }

    let bleu = (1..=max_order)
        .map(|order| {
            if precisions[..order].contains(&0.0) {
                return 0.0;
            }
            let log_sum: f64 = precisions[..order].iter().map(|p| p.ln()).sum();
            brevity_penalty * (log_sum / order as f64).exp()
        })
        .collect();

    BleuReport {
        bleu,
        precisions,
        brevity_penalty,
        hyp_len,
        ref_len,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalMetric {
    pub name: String,
    pub mean: f64,
}

impl ExternalMetric {
    pub fn from_scores(name: impl Into<String>, scores: &[f64]) -> Option<Self> {
        if scores.is_empty() {
            return None;
        }
        Some(Self {
            name: name.into(),
            mean: scores.iter().sum::<f64>() / scores.len() as f64,
        })
    }
}

/// Reads one externally computed sentence score per line. Blank lines and
/// `#` comments are ignored.
pub fn read_external_scores<R: BufRead>(reader: R) -> Result<Vec<f64>, MetricsError> {
    let mut scores = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let value = line.trim();
        if value.is_empty() || value.starts_with('#') {
            continue;
        }
        scores.push(value.parse().map_err(|_| MetricsError::BadExternalScore {
            line: idx + 1,
            value: value.to_owned(),
        })?);
    }
    Ok(scores)
}

/// Translation scores as written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub bleu: Vec<f64>,
    pub precisions: Vec<f64>,
    pub bp: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
    pub tokenizer: String,
    pub smoothing: String,
    pub case_sensitive: bool,
    pub n_sentences: usize,
    pub n_no_translation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_metric: Option<ExternalMetric>,
}

impl EvaluationReport {
    pub fn new(bleu: BleuReport, n_sentences: usize, n_no_translation: usize) -> Self {
        Self {
            bleu: bleu.bleu,
            precisions: bleu.precisions,
            bp: bleu.brevity_penalty,
            hyp_len: bleu.hyp_len,
            ref_len: bleu.ref_len,
            tokenizer: "13a".into(),
            smoothing: "exp".into(),
            case_sensitive: true,
            n_sentences,
            n_no_translation,
            external_metric: None,
        }
    }

    pub fn with_external(mut self, metric: Option<ExternalMetric>) -> Self {
        self.external_metric = metric;
        self
    }
}

/// Scores hypotheses where `None` marks a missing translation; those enter
/// the corpus as empty strings.
pub fn evaluate_translations<R: AsRef<str>>(
    hypotheses: &[Option<&str>],
    references: &[R],
) -> Result<EvaluationReport, MetricsError> {
    let hyps: Vec<&str> = hypotheses.iter().map(|h| h.unwrap_or("")).collect();
    let bleu = corpus_bleu(&hyps, references, MAX_ORDER)?;
    let missing = hypotheses.iter().filter(|h| h.is_none()).count();
    Ok(EvaluationReport::new(bleu, hypotheses.len(), missing))
}

/// Markdown table with the columns `B-1 B-2 B-3 B-4` and the external metric
/// (`BLEURT` unless the rows carry another name).
pub fn render_markdown_table(rows: &[(&str, &EvaluationReport)]) -> String {
    let metric_name = rows
        .iter()
        .find_map(|(_, r)| r.external_metric.as_ref().map(|m| m.name.as_str()))
        .unwrap_or("BLEURT");
    let mut out = String::new();
    let _ = writeln!(out, "| Method | B-1 | B-2 | B-3 | B-4 | {metric_name} |");
    out.push_str("|---|---:|---:|---:|---:|---:|\n");
    for (label, report) in rows {
        let _ = write!(out, "| {label} |");
        for order in 0..MAX_ORDER {
            match report.bleu.get(order) {
                Some(b) => {
                    let _ = write!(out, " {b:.2} |");
                }
                None => out.push_str(" - |"),
            }
        }
        match &report.external_metric {
            Some(m) => {
                let _ = writeln!(out, " {:.2} |", m.mean);
            }
            None => out.push_str(" - |\n"),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub per_instance: f64,
    pub per_class: f64,
    /// Classes with at least one labelled instance.
    pub class_count: usize,
    pub instance_count: usize,
}

pub fn accuracy(predictions: &[usize], labels: &[usize]) -> Result<AccuracyReport, MetricsError> {
    if predictions.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            hyps: predictions.len(),
            refs: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let mut per_class: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut correct = 0;
    for (&pred, &label) in predictions.iter().zip(labels) {
        let slot = per_class.entry(label).or_default();
        slot.1 += 1;
        if pred == label {
            slot.0 += 1;
            correct += 1;
        }
    }
    // sort so the float sum does not depend on hash order
    let mut ratios: Vec<(usize, f64)> = per_class
        .iter()
        .map(|(&class, &(ok, n))| (class, ok as f64 / n as f64))
        .collect();
    ratios.sort_by_key(|(class, _)| *class);
    let mean = ratios.iter().map(|(_, r)| r).sum::<f64>() / ratios.len() as f64;
    Ok(AccuracyReport {
        per_instance: 100.0 * correct as f64 / labels.len() as f64,
        per_class: 100.0 * mean,
        class_count: ratios.len(),
        instance_count: labels.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-6
    }

    #[test]
    fn tokenizer_examples() {
        assert_eq!(
            tokenize_13a("Es gab nur ein Programm in der DDR."),
            ["Es", "gab", "nur", "ein", "Programm", "in", "der", "DDR", "."]
        );
        assert!(tokenize_13a("").is_empty());
        assert_eq!(tokenize_13a("3.5"), ["3.5"]);
        assert_eq!(tokenize_13a("Hallo, Welt!"), ["Hallo", ",", "Welt", "!"]);
        assert_eq!(tokenize_13a("&amp;&lt;"), ["&", "<"]);
    }

    #[test]
    fn identity_scores_full_marks_up_to_available_orders() {
        let r = corpus_bleu(&["the cat sat"], &["the cat sat"], 4).unwrap();
        assert!(close(r.bleu[0], 100.0));
        assert!(close(r.bleu[2], 100.0));
        // no 4-grams in a three-token corpus
        assert_eq!(r.bleu[3], 0.0);
        assert_eq!(r.brevity_penalty, 1.0);
    }

    #[test]
    fn short_hypothesis_pays_brevity_penalty() {
        let r = corpus_bleu(&["the cat"], &["the cat sat"], 4).unwrap();
        let expected = 100.0 * (1.0f64 - 3.0 / 2.0).exp();
        assert!(close(r.bleu[0], expected));
        assert!((r.bleu[0] - 60.65).abs() < 0.01);
        assert_eq!((r.hyp_len, r.ref_len), (2, 3));
    }

    #[test]
    fn smoothing_halves_for_each_order_without_matches() {
        // unigram matches, no bigram/trigram matches
        let stats = bleu_from_stats(&[2, 0, 0, 0], &[4, 3, 2, 1], 4, 4);
        assert!(close(stats.precisions[0], 50.0));
        assert!(close(stats.precisions[1], 100.0 / (2.0 * 3.0)));
        assert!(close(stats.precisions[2], 100.0 / (4.0 * 2.0)));
        assert!(close(stats.precisions[3], 100.0 / (8.0 * 1.0)));
    }

    #[test]
    fn empty_hypotheses_score_zero() {
        let r = corpus_bleu(&[""], &["the cat"], 4).unwrap();
        assert_eq!(r.bleu, vec![0.0; 4]);
        assert_eq!(r.brevity_penalty, 0.0);
    }

    #[test]
    fn bleu_input_errors() {
        assert!(matches!(
            corpus_bleu(&["a"], &["a", "b"], 4),
            Err(MetricsError::LengthMismatch { .. })
        ));
        assert!(matches!(
            corpus_bleu(&["a"], &["a"], 0),
            Err(MetricsError::InvalidOrder)
        ));
        assert!(matches!(
            corpus_bleu::<&str, &str>(&[], &[], 4),
            Err(MetricsError::EmptyCorpus)
        ));
    }

    #[test]
    fn missing_translations_count_as_empty() {
        let report = evaluate_translations(&[Some("the cat sat"), None], &["the cat sat", "a dog"]).unwrap();
        assert_eq!(report.n_no_translation, 1);
        assert_eq!(report.n_sentences, 2);
        assert_eq!(report.hyp_len, 3);
        assert_eq!(report.ref_len, 5);
    }

    #[test]
    fn report_json_layout() {
        let report = evaluate_translations(&[Some("a b")], &["a b"]).unwrap();
        let value = serde_json::to_value(&report).unwrap();
        for key in [
            "bleu",
            "precisions",
            "bp",
            "hyp_len",
            "ref_len",
            "tokenizer",
            "smoothing",
            "case_sensitive",
            "n_sentences",
            "n_no_translation",
        ] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert!(value.get("external_metric").is_none());
        let with = report.with_external(ExternalMetric::from_scores("BLEURT", &[0.2, 0.4]));
        let value = serde_json::to_value(&with).unwrap();
        assert_eq!(value["external_metric"]["name"], "BLEURT");
    }

    #[test]
    fn markdown_table_columns() {
        let report = evaluate_translations(&[Some("a b c d")], &["a b c d"]).unwrap();
        let md = render_markdown_table(&[("Spotter+GPT", &report)]);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| Method | B-1 | B-2 | B-3 | B-4 | BLEURT |");
        assert_eq!(
            lines[2],
            "| Spotter+GPT | 100.00 | 100.00 | 100.00 | 100.00 | - |"
        );
    }

    #[test]
    fn external_scores_parse() {
        let scores = read_external_scores("0.5\n\n# note\n0.25\n".as_bytes()).unwrap();
        assert_eq!(scores, [0.5, 0.25]);
        assert!(read_external_scores("x\n".as_bytes()).is_err());
        assert_eq!(ExternalMetric::from_scores("m", &scores).unwrap().mean, 0.375);
    }

    #[test]
    fn accuracy_examples() {
        let perfect = accuracy(&[1; 10], &[1; 10]).unwrap();
        assert_eq!((perfect.per_instance, perfect.per_class), (100.0, 100.0));

        // class 0: 3 instances 2 correct, class 1: 1 instance 0 correct
        let r = accuracy(&[0, 0, 1, 0], &[0, 0, 0, 1]).unwrap();
        assert!(close(r.per_instance, 50.0));
        assert!((r.per_class - 33.333).abs() < 0.01);
        assert_eq!(r.class_count, 2);
        assert!(accuracy(&[1], &[1, 2]).is_err());
        assert!(accuracy(&[], &[]).is_err());
    }

    proptest! {
        #[test]
        fn perfect_hypotheses_score_one_hundred(words in prop::collection::vec("[a-z]{1,6}", 1..8), n in 1usize..5) {
            let sentences: Vec<String> = (0..n).map(|i| words[i % words.len()..].join(" ")).collect();
            let r = corpus_bleu(&sentences, &sentences, 4).unwrap();
            prop_assert!((r.bleu[0] - 100.0).abs() < 1e-9);
        }

        #[test]
        fn shorter_hypotheses_lower_brevity_penalty(len in 4usize..20, cut in 1usize..3) {
            let reference: Vec<String> = (0..len).map(|i| format!("w{i}")).collect();
            let reference = reference.join(" ");
            let words: Vec<&str> = reference.split(' ').collect();
            let short = words[..len - cut].join(" ");
            let shorter = words[..len - cut - 1].join(" ");
            let a = corpus_bleu(&[short], &[&reference], 4).unwrap();
            let b = corpus_bleu(&[shorter], &[&reference], 4).unwrap();
            prop_assert!(a.brevity_penalty < 1.0);
            prop_assert!(b.brevity_penalty < a.brevity_penalty);
        }

        #[test]
        fn accuracy_is_permutation_invariant(pairs in prop::collection::vec((0usize..5, 0usize..5), 1..40), rot in 0usize..40) {
            let (p, l): (Vec<usize>, Vec<usize>) = pairs.iter().copied().unzip();
            let mut rotated = pairs.clone();
            rotated.rotate_left(rot % pairs.len());
            let (rp, rl): (Vec<usize>, Vec<usize>) = rotated.into_iter().unzip();
            let a = accuracy(&p, &l).unwrap();
            let b = accuracy(&rp, &rl).unwrap();
            prop_assert!((a.per_instance - b.per_instance).abs() < 1e-9);
            prop_assert!((a.per_class - b.per_class).abs() < 1e-9);
            prop_assert!(a.per_class <= 100.0 && a.per_instance <= 100.0);
        }
    }
}

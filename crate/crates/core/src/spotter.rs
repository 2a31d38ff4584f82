//! Decoding of per-window classifier scores into a gloss sequence.
//!
//! The isolated-sign classifier is slid over a continuous video with stride
//! 1, producing one probability vector per window: `T - window_size + 1`
//! windows for a video of `T` frames. [`spot`] turns that stream into glosses
//! in three steps:
//!
//! 1. take the argmax class of every window ([`argmax_predictions`]),
//! 2. drop predictions whose probability is below the threshold,
//! 3. collapse runs of the same class into one item ([`collapse`]).
//!
//! Filtering always happens before collapsing. Two runs of the same class
//! separated only by filtered windows therefore merge into one gloss.
//!
//! # Score files
//!
//! UTF-8 JSON lines. The first line is a header object:
//!
//! ```text
//! {"v":1,"video_id":"clip-01","num_frames":120,"vocab_hash":"…","window_size":16,"format":"dense"}
//! ```
//!
//! followed by one line per window in start-frame order, either a dense array
//! of probabilities (`"format":"dense"`) or an array of `[class_id, prob]`
//! pairs sorted by descending probability (`"format":"topk"`). An optional
//! `num_classes` header field enables class-range checks on top-k files.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocab::Vocabulary;

pub const DEFAULT_THRESHOLD: f64 = 0.7;
pub const DEFAULT_WINDOW_SIZE: usize = 16;
pub const SCORE_FORMAT_VERSION: u32 = 1;

/// Tolerance on probability sums.
pub const SUM_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("malformed score-file header: {0}")]
    MalformedHeader(String),
    #[error("unsupported score-file version {0}")]
    UnsupportedVersion(u32),
    #[error("line {line}: malformed window: {source}")]
    MalformedWindow {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(
        "expected {expected} windows for {num_frames} frames (window size {window_size}), found {found}"
    )]
    WindowCount {
        num_frames: usize,
        window_size: usize,
        expected: usize,
        found: usize,
    },
    #[error("window {window}: probability {value} outside [0, 1]")]
    ProbabilityRange { window: usize, value: f64 },
    #[error("window {window}: dense probabilities sum to {sum}, expected 1 ± {SUM_TOLERANCE}")]
    DenseSum { window: usize, sum: f64 },
    #[error("window {window}: top-k probabilities sum to {sum}, more than 1 + {SUM_TOLERANCE}")]
    SparseSum { window: usize, sum: f64 },
    #[error("window {window}: class {class_id} listed more than once")]
    DuplicateClass { window: usize, class_id: usize },
    #[error("window {window}: class {class_id} outside vocabulary of {num_classes}")]
    ClassOutOfRange {
        window: usize,
        class_id: usize,
        num_classes: usize,
    },
    #[error("window {window}: top-k entries not sorted by descending probability")]
    UnsortedTopK { window: usize },
    #[error("window {window} has no scores")]
    EmptyWindow { window: usize },
    #[error("window {window}: has {found} classes, expected {expected}")]
    InconsistentWidth {
        window: usize,
        expected: usize,
        found: usize,
    },
    #[error("window {window}: form does not match the header format")]
    FormatMismatch { window: usize },
    #[error("score stream was produced under vocabulary {found}, expected {expected}")]
    VocabHashMismatch { expected: String, found: String },
    #[error("stream window size {stream} differs from configured {configured}")]
    WindowSizeMismatch { stream: usize, configured: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreFormat {
    Dense,
    Topk,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WindowProbs {
    Dense(Vec<f64>),
    /// `(class_id, prob)` sorted by descending probability.
    TopK(Vec<(usize, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowScore {
    pub start_frame: usize,
    pub probs: WindowProbs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreHeader {
    pub v: u32,
    pub video_id: String,
    pub num_frames: usize,
    pub vocab_hash: String,
    pub window_size: usize,
    pub format: ScoreFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_classes: Option<usize>,
}

/// Number of stride-1 windows over a video of `num_frames` frames. Videos
/// shorter than one window are padded and yield exactly one.
pub fn expected_window_count(num_frames: usize, window_size: usize) -> usize {
    if num_frames >= window_size {
        num_frames - window_size + 1
    } else {
        1
    }
}

/// A validated score stream for one video. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreStream {
    header: ScoreHeader,
    windows: Vec<WindowScore>,
}

impl ScoreStream {
    /// Validates `windows` against the header. Window start frames are taken
    /// from their position.
    pub fn new(header: ScoreHeader, probs: Vec<WindowProbs>) -> Result<Self, ScoreError> {
        if header.v != SCORE_FORMAT_VERSION {
            return Err(ScoreError::UnsupportedVersion(header.v));
        }
        if header.num_frames == 0 {
            return Err(ScoreError::MalformedHeader(
                "num_frames must be at least 1".into(),
            ));
        }
        if header.window_size == 0 {
            return Err(ScoreError::MalformedHeader(
                "window_size must be at least 1".into(),
            ));
        }
        let expected = expected_window_count(header.num_frames, header.window_size);
        if probs.len() != expected {
            return Err(ScoreError::WindowCount {
                num_frames: header.num_frames,
                window_size: header.window_size,
                expected,
                found: probs.len(),
            });
        }
        let mut dense_width = header.num_classes;
        for (window, p) in probs.iter().enumerate() {
            validate_window(window, p, header.format, header.num_classes, &mut dense_width)?;
        }
        let windows = probs
            .into_iter()
            .enumerate()
            .map(|(start_frame, probs)| WindowScore { start_frame, probs })
            .collect();
        Ok(Self { header, windows })
    }

    pub fn header(&self) -> &ScoreHeader {
        &self.header
    }

    pub fn video_id(&self) -> &str {
        &self.header.video_id
    }

    pub fn num_frames(&self) -> usize {
        self.header.num_frames
    }

    pub fn vocab_hash(&self) -> &str {
        &self.header.vocab_hash
    }

    pub fn window_size(&self) -> usize {
        self.header.window_size
    }

    pub fn windows(&self) -> &[WindowScore] {
        &self.windows
    }

    /// Rejects streams produced under a different vocabulary, or naming
    /// classes the vocabulary does not have.
    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<(), ScoreError> {
        if self.header.vocab_hash != vocab.content_hash() {
            return Err(ScoreError::VocabHashMismatch {
                expected: vocab.content_hash().to_owned(),
                found: self.header.vocab_hash.clone(),
            });
        }
        let num_classes = vocab.len();
        for (window, w) in self.windows.iter().enumerate() {
            let found = match &w.probs {
                WindowProbs::Dense(p) if p.len() != num_classes => {
                    return Err(ScoreError::InconsistentWidth {
                        window,
                        expected: num_classes,
                        found: p.len(),
                    })
                }
                WindowProbs::Dense(_) => None,
                WindowProbs::TopK(pairs) => pairs.iter().map(|(c, _)| *c).find(|&c| c >= num_classes),
            };
            if let Some(class_id) = found {
                return Err(ScoreError::ClassOutOfRange {
                    window,
                    class_id,
                    num_classes,
                });
            }
        }
        Ok(())
    }
}

fn validate_window(
    window: usize,
    probs: &WindowProbs,
    format: ScoreFormat,
    num_classes: Option<usize>,
    dense_width: &mut Option<usize>,
) -> Result<(), ScoreError> {
    let check_range = |value: f64| {
        if (0.0..=1.0).contains(&value) {
            Ok(())
        } else {
            Err(ScoreError::ProbabilityRange { window, value })
        }
    };
    match (probs, format) {
        (WindowProbs::Dense(p), ScoreFormat::Dense) => {
            if p.is_empty() {
                return Err(ScoreError::EmptyWindow { window });
            }
            match *dense_width {
                Some(expected) if expected != p.len() => {
                    return Err(ScoreError::InconsistentWidth {
                        window,
                        expected,
                        found: p.len(),
                    })
                }
                _ => *dense_width = Some(p.len()),
            }
            p.iter().copied().try_for_each(check_range)?;
            let sum: f64 = p.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(ScoreError::DenseSum { window, sum });
            }
        }
        (WindowProbs::TopK(pairs), ScoreFormat::Topk) => {
            if pairs.is_empty() {
                return Err(ScoreError::EmptyWindow { window });
            }
            let mut seen = std::collections::HashSet::with_capacity(pairs.len());
            for &(class_id, prob) in pairs {
                check_range(prob)?;
                if !seen.insert(class_id) {
                    return Err(ScoreError::DuplicateClass { window, class_id });
                }
                if let Some(n) = num_classes {
                    if class_id >= n {
                        return Err(ScoreError::ClassOutOfRange {
                            window,
                            class_id,
                            num_classes: n,
                        });
                    }
                }
            }
            if pairs.windows(2).any(|w| w[0].1 < w[1].1) {
                return Err(ScoreError::UnsortedTopK { window });
            }
            let sum: f64 = pairs.iter().map(|(_, p)| p).sum();
            if sum > 1.0 + SUM_TOLERANCE {
                return Err(ScoreError::SparseSum { window, sum });
            }
        }
        _ => return Err(ScoreError::FormatMismatch { window }),
    }
    Ok(())
}

pub fn read_score_stream<R: BufRead>(reader: R) -> Result<ScoreStream, ScoreError> {
    let mut lines = reader.lines();
    let header_line = match lines.next() {
        Some(line) => line?,
        None => return Err(ScoreError::MalformedHeader("empty file".into())),
    };
    let header: ScoreHeader =
        serde_json::from_str(&header_line).map_err(|e| ScoreError::MalformedHeader(e.to_string()))?;

    let mut probs = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 2;
        let parsed = match header.format {
            ScoreFormat::Dense => serde_json::from_str(&line).map(WindowProbs::Dense),
            ScoreFormat::Topk => serde_json::from_str(&line).map(WindowProbs::TopK),
        };
        probs.push(parsed.map_err(|source| ScoreError::MalformedWindow {
            line: line_no,
            source,
        })?);
    }
    ScoreStream::new(header, probs)
}

pub fn load_score_stream(path: impl AsRef<Path>) -> Result<ScoreStream, ScoreError> {
    read_score_stream(BufReader::new(File::open(path)?))
}

pub fn write_score_stream<W: Write>(mut out: W, stream: &ScoreStream) -> io::Result<()> {
    serde_json::to_writer(&mut out, &stream.header)?;
    out.write_all(b"\n")?;
    for window in &stream.windows {
        match &window.probs {
            WindowProbs::Dense(p) => serde_json::to_writer(&mut out, p)?,
            WindowProbs::TopK(p) => serde_json::to_writer(&mut out, p)?,
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpottingConfig {
    pub threshold: f64,
    pub window_size: usize,
}

impl Default for SpottingConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            window_size: DEFAULT_WINDOW_SIZE,
        }
    }
}

impl SpottingConfig {
    pub fn new(threshold: f64, window_size: usize) -> Result<Self, String> {
        let config = Self {
            threshold,
            window_size,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(format!("threshold {} outside [0, 1]", self.threshold));
        }
        if self.window_size == 0 {
            return Err("window_size must be at least 1".into());
        }
        Ok(())
    }
}

/// Argmax of one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub class_id: usize,
    pub prob: f64,
}

/// One prediction per window, in window order. Ties go to the lowest class id.
pub fn argmax_predictions(stream: &ScoreStream) -> Vec<Prediction> {
    stream.windows.iter().map(|w| argmax(&w.probs)).collect()
}

fn argmax(probs: &WindowProbs) -> Prediction {
    let better = |best: Prediction, class_id: usize, prob: f64| {
        prob > best.prob || (prob == best.prob && class_id < best.class_id)
    };
    let mut best = Prediction {
        class_id: usize::MAX,
        prob: f64::NEG_INFINITY,
    };
    match probs {
        WindowProbs::Dense(p) => {
            for (class_id, &prob) in p.iter().enumerate() {
                if better(best, class_id, prob) {
                    best = Prediction { class_id, prob };
                }
            }
        }
        WindowProbs::TopK(pairs) => {
            for &(class_id, prob) in pairs {
                if better(best, class_id, prob) {
                    best = Prediction { class_id, prob };
                }
            }
        }
    }
    best
}

/// Replaces every maximal run of equal consecutive items with one item.
pub fn collapse<T: PartialEq + Clone>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if out.last() != Some(item) {
            out.push(item.clone());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpottedGloss {
    pub class_id: usize,
    /// Highest kept probability within the run.
    pub peak_confidence: f64,
    pub first_window: usize,
    pub last_window: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlossSequence {
    pub video_id: String,
    pub threshold: f64,
    pub items: Vec<SpottedGloss>,
}

impl GlossSequence {
    pub fn class_ids(&self) -> Vec<usize> {
        self.items.iter().map(|g| g.class_id).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Keeps predictions with `prob >= threshold`, then collapses runs of the
/// same class. The index of each prediction is its window number.
pub fn filter_then_collapse(preds: &[Prediction], threshold: f64) -> Vec<SpottedGloss> {
    let mut items: Vec<SpottedGloss> = Vec::new();
    for (window, pred) in preds.iter().enumerate() {
        if pred.prob < threshold {
            continue;
        }
        match items.last_mut() {
            Some(last) if last.class_id == pred.class_id => {
                last.peak_confidence = last.peak_confidence.max(pred.prob);
                last.last_window = window;
            }
            _ => items.push(SpottedGloss {
                class_id: pred.class_id,
                peak_confidence: pred.prob,
                first_window: window,
                last_window: window,
            }),
        }
    }
    items
}

pub fn spot(stream: &ScoreStream, config: &SpottingConfig) -> Result<GlossSequence, ScoreError> {
    if stream.window_size() != config.window_size {
        return Err(ScoreError::WindowSizeMismatch {
            stream: stream.window_size(),
            configured: config.window_size,
        });
    }
    let preds = argmax_predictions(stream);
    Ok(GlossSequence {
        video_id: stream.video_id().to_owned(),
        threshold: config.threshold,
        items: filter_then_collapse(&preds, config.threshold),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn header(num_frames: usize, format: ScoreFormat) -> ScoreHeader {
        ScoreHeader {
            v: 1,
            video_id: "clip".into(),
            num_frames,
            vocab_hash: "h".into(),
            window_size: 16,
            format,
            num_classes: None,
        }
    }

    fn one_hot(class_id: usize, prob: f64, width: usize) -> WindowProbs {
        let rest = (1.0 - prob) / (width - 1) as f64;
        let mut p = vec![rest; width];
        p[class_id] = prob;
        WindowProbs::Dense(p)
    }

    fn preds(items: &[(usize, f64)]) -> Vec<Prediction> {
        items
            .iter()
            .map(|&(class_id, prob)| Prediction { class_id, prob })
            .collect()
    }

    #[test]
    fn single_window_argmax() {
        let stream = ScoreStream::new(header(16, ScoreFormat::Dense), vec![one_hot(7, 0.9, 10)]).unwrap();
        assert_eq!(argmax_predictions(&stream), preds(&[(7, 0.9)]));
    }

    #[test]
    fn hundred_frames_give_eighty_five_predictions() {
        let windows = (0..85).map(|i| one_hot(i % 4, 0.8, 4)).collect();
        let stream = ScoreStream::new(header(100, ScoreFormat::Dense), windows).unwrap();
        assert_eq!(argmax_predictions(&stream).len(), 85);
    }

    #[test]
    fn ties_break_to_lowest_class() {
        let mut p = vec![0.0; 12];
        p[9] = 0.5;
        p[3] = 0.5;
        assert_eq!(argmax(&WindowProbs::Dense(p)).class_id, 3);
        let sparse = WindowProbs::TopK(vec![(9, 0.5), (3, 0.5)]);
        assert_eq!(argmax(&sparse).class_id, 3);
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(collapse(&['A', 'A', 'B', 'B', 'A']), vec!['A', 'B', 'A']);
        assert!(collapse::<u8>(&[]).is_empty());
    }

    #[test]
    fn filter_runs_before_collapse() {
        let p = preds(&[(0, 0.9), (0, 0.8), (1, 0.6), (0, 0.95)]);
        let items = filter_then_collapse(&p, 0.7);
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].class_id, 0);
        assert_eq!(items[0].peak_confidence, 0.95);
        assert_eq!((items[0].first_window, items[0].last_window), (0, 3));

        let ids: Vec<usize> = filter_then_collapse(&p, 0.0).iter().map(|g| g.class_id).collect();
        assert_eq!(ids, [0, 1, 0]);
        assert!(filter_then_collapse(&p, 0.96).is_empty());
    }

    #[test]
    fn threshold_is_inclusive() {
        let p = preds(&[(2, 1.0), (2, 0.7)]);
        assert_eq!(filter_then_collapse(&p, 1.0).len(), 1);
        assert_eq!(filter_then_collapse(&p, 0.7)[0].last_window, 1);
    }

    #[test]
    fn short_video_has_one_window() {
        let stream = ScoreStream::new(header(5, ScoreFormat::Dense), vec![one_hot(1, 0.9, 3)]).unwrap();
        assert_eq!(stream.windows().len(), 1);
        let err = ScoreStream::new(header(5, ScoreFormat::Dense), vec![]).unwrap_err();
        assert!(matches!(
            err,
            ScoreError::WindowCount {
                expected: 1,
                found: 0,
                ..
            }
        ));
    }

    #[test]
    fn spot_rejects_window_size_mismatch() {
        let stream = ScoreStream::new(header(16, ScoreFormat::Dense), vec![one_hot(1, 0.9, 3)]).unwrap();
        let config = SpottingConfig::new(0.7, 8).unwrap();
        assert!(matches!(
            spot(&stream, &config),
            Err(ScoreError::WindowSizeMismatch { .. })
        ));
        assert!(SpottingConfig::new(1.2, 16).is_err());
        assert!(SpottingConfig::new(f64::NAN, 16).is_err());
    }

    #[test]
    fn reads_minimal_dense_file() {
        let text = "{\"v\":1,\"video_id\":\"a\",\"num_frames\":16,\"vocab_hash\":\"h\",\"window_size\":16,\"format\":\"dense\"}\n[0.1,0.9]\n";
        let stream = read_score_stream(text.as_bytes()).unwrap();
        assert_eq!(stream.windows().len(), 1);
        assert_eq!(stream.vocab_hash(), "h");
    }

    #[test]
    fn window_count_mismatch_is_reported() {
        let mut text = String::from("{\"v\":1,\"video_id\":\"a\",\"num_frames\":100,\"vocab_hash\":\"h\",\"window_size\":16,\"format\":\"dense\"}\n");
        for _ in 0..80 {
            text.push_str("[0.5,0.5]\n");
        }
        match read_score_stream(text.as_bytes()) {
            Err(ScoreError::WindowCount { expected, found, .. }) => {
                assert_eq!((expected, found), (85, 80));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reader_errors_are_distinct() {
        let head = |fmt: &str| {
            format!("{{\"v\":1,\"video_id\":\"a\",\"num_frames\":16,\"vocab_hash\":\"h\",\"window_size\":16,\"format\":\"{fmt}\"}}\n")
        };
        let check = |text: String, pred: fn(&ScoreError) -> bool| {
            let err = read_score_stream(text.as_bytes()).unwrap_err();
            assert!(pred(&err), "{err:?}");
        };
        check("not json\n".into(), |e| {
            matches!(e, ScoreError::MalformedHeader(_))
        });
        check(String::new(), |e| matches!(e, ScoreError::MalformedHeader(_)));
        check(head("dense").replace("\"v\":1", "\"v\":2"), |e| {
            matches!(e, ScoreError::UnsupportedVersion(2))
        });
        check(head("dense") + "[1.5,-0.5]\n", |e| {
            matches!(e, ScoreError::ProbabilityRange { .. })
        });
        check(head("dense") + "[0.2,0.2]\n", |e| {
            matches!(e, ScoreError::DenseSum { .. })
        });
        check(head("dense") + "[0.2,oops]\n", |e| {
            matches!(e, ScoreError::MalformedWindow { line: 2, .. })
        });
        check(head("topk") + "[[3,0.5],[3,0.4]]\n", |e| {
            matches!(e, ScoreError::DuplicateClass { class_id: 3, .. })
        });
        check(head("topk") + "[[3,0.2],[4,0.4]]\n", |e| {
            matches!(e, ScoreError::UnsortedTopK { .. })
        });
        check(head("topk") + "[[3,0.7],[4,0.6]]\n", |e| {
            matches!(e, ScoreError::SparseSum { .. })
        });
        check(head("topk") + "[]\n", |e| {
            matches!(e, ScoreError::EmptyWindow { .. })
        });
        check(
            head("topk").replace("\"format\"", "\"num_classes\":4,\"format\"") + "[[7,0.7]]\n",
            |e| matches!(e, ScoreError::ClassOutOfRange { class_id: 7, .. }),
        );
    }

    #[test]
    fn topk_sum_may_fall_short_of_one() {
        let stream = ScoreStream::new(
            header(16, ScoreFormat::Topk),
            vec![WindowProbs::TopK(vec![(4, 0.6), (1, 0.1)])],
        )
        .unwrap();
        assert_eq!(argmax_predictions(&stream), preds(&[(4, 0.6)]));
    }

    #[test]
    fn write_then_read_is_identity() {
        let windows = (0..5).map(|i| one_hot(i % 3, 0.75, 3)).collect();
        let stream = ScoreStream::new(header(20, ScoreFormat::Dense), windows).unwrap();
        let mut buf = Vec::new();
        write_score_stream(&mut buf, &stream).unwrap();
        assert_eq!(read_score_stream(&buf[..]).unwrap(), stream);
    }

    fn is_subsequence(needle: &[usize], haystack: &[usize]) -> bool {
        let mut it = haystack.iter();
        needle.iter().all(|x| it.any(|y| y == x))
    }

    proptest! {
        #[test]
        fn collapse_matches_predecessor_scan(items in prop::collection::vec(0u8..5, 0..50)) {
            let expected: Vec<u8> = items
                .iter()
                .enumerate()
                .filter(|(i, x)| *i == 0 || items[i - 1] != **x)
                .map(|(_, x)| *x)
                .collect();
            prop_assert_eq!(collapse(&items), expected);
        }

        #[test]
        fn spotting_is_monotone_in_threshold(
            raw in prop::collection::vec((0usize..4, 0.0f64..=1.0), 0..60),
            t1 in 0.0f64..=1.0,
            t2 in 0.0f64..=1.0,
        ) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let p = preds(&raw);
            let low: Vec<usize> = filter_then_collapse(&p, lo).iter().map(|g| g.class_id).collect();
            let high: Vec<usize> = filter_then_collapse(&p, hi).iter().map(|g| g.class_id).collect();
            prop_assert!(is_subsequence(&high, &low));

            let all: Vec<usize> = p.iter().map(|x| x.class_id).collect();
            let zero: Vec<usize> = filter_then_collapse(&p, 0.0).iter().map(|g| g.class_id).collect();
            prop_assert_eq!(zero, collapse(&all));

            for item in filter_then_collapse(&p, hi) {
                prop_assert!(item.peak_confidence >= hi);
                prop_assert!(item.first_window <= item.last_window);
            }
        }
    }
}

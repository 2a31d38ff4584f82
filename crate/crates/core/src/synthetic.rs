//! Deterministic synthetic data: scripted score streams and a small demo
//! corpus on disk. Used by the examples and tests in place of classifier
//! output.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::pipeline::{self, ManifestEntry};
use crate::spotter::{
    self, ScoreError, ScoreFormat, ScoreHeader, ScoreStream, WindowProbs, SCORE_FORMAT_VERSION,
};
use crate::vocab::{self, GlossLabel, GlossSpan, Vocabulary, DEFAULT_MIN_COUNT, INDEX_GLOSS};

/// `windows` consecutive windows whose top class is `class_id` at `peak`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub class_id: usize,
    pub windows: usize,
    pub peak: f64,
}

impl Segment {
    pub const fn new(class_id: usize, windows: usize, peak: f64) -> Self {
        Self {
            class_id,
            windows,
            peak,
        }
    }
}

/// Dense probabilities with `peak` on `class_id` and the remainder spread
/// evenly over the other classes.
pub fn peaked(num_classes: usize, class_id: usize, peak: f64) -> Vec<f64> {
    assert!(class_id < num_classes, "class {class_id} out of range");
    if num_classes == 1 {
        return vec![1.0];
    }
    let rest = (1.0 - peak) / (num_classes - 1) as f64;
    let mut probs = vec![rest; num_classes];
    probs[class_id] = peak;
    probs
}

/// Builds a dense stream from segments. The video is exactly long enough for
/// the scripted windows at the given window size.
pub fn scripted_stream(
    video_id: &str,
    vocab: &Vocabulary,
    window_size: usize,
    segments: &[Segment],
) -> Result<ScoreStream, ScoreError> {
    let probs: Vec<WindowProbs> = segments
        .iter()
        .flat_map(|s| std::iter::repeat_n(s, s.windows))
        .map(|s| WindowProbs::Dense(peaked(vocab.len(), s.class_id, s.peak)))
        .collect();
    let header = ScoreHeader {
        v: SCORE_FORMAT_VERSION,
        video_id: video_id.to_owned(),
        num_frames: probs.len() + window_size.saturating_sub(1),
        vocab_hash: vocab.content_hash().to_owned(),
        window_size,
        format: ScoreFormat::Dense,
        num_classes: Some(vocab.len()),
    };
    ScoreStream::new(header, probs)
}

/// Glosses of the demo corpus with their training-span counts.
pub const DEMO_GLOSSES: [(&str, usize); 12] = [
    ("ABEND", 14),
    ("ESSEN", 21),
    ("FAMILIE", 17),
    ("HEUTE", 30),
    ("LETZTE", 13),
    ("MORGEN", 25),
    ("REGEN", 19),
    ("RESTAURANT", 15),
    ("SONNE", 22),
    ("URLAUB", 16),
    // too rare for the vocabulary
    ("SARDINIEN", 12),
    (INDEX_GLOSS, 60),
];

struct DemoVideo {
    id: &'static str,
    reference: &'static str,
    gt: &'static [&'static str],
    script: &'static [(&'static str, usize, f64)],
}

// Low peaks stand in for transitions between signs.
const DEMO_VIDEOS: [DemoVideo; 5] = [
    DemoVideo {
        id: "dev-0001",
        reference: "Die Familie isst am Abend im Restaurant.",
        gt: &["FAMILIE", "ESSEN", "ABEND", "RESTAURANT"],
        script: &[
            ("FAMILIE", 6, 0.92),
            ("ESSEN", 3, 0.35),
            ("ESSEN", 5, 0.81),
            ("ABEND", 4, 0.88),
            ("RESTAURANT", 7, 0.95),
        ],
    },
    DemoVideo {
        id: "dev-0002",
        reference: "Morgen regnet es.",
        gt: &["MORGEN", "REGEN"],
        script: &[("MORGEN", 5, 0.9), ("SONNE", 2, 0.55), ("REGEN", 6, 0.76)],
    },
    DemoVideo {
        id: "dev-0003",
        reference: "Heute scheint die Sonne.",
        gt: &["HEUTE", "SONNE"],
        script: &[("HEUTE", 4, 0.97), ("SONNE", 3, 0.66), ("SONNE", 4, 0.84)],
    },
    DemoVideo {
        id: "dev-0004",
        reference: "Der letzte Urlaub auf Sardinien war schön.",
        gt: &["LETZTE", "URLAUB", "SARDINIEN"],
        script: &[("LETZTE", 5, 0.86), ("URLAUB", 5, 0.72), ("HEUTE", 3, 0.6)],
    },
    DemoVideo {
        id: "dev-0005",
        reference: "Im Norden bleibt es trocken.",
        gt: &["NORDEN", "TROCKEN"],
        script: &[("REGEN", 3, 0.45), ("MORGEN", 3, 0.5), ("ABEND", 2, 0.3)],
    },
];

/// Training spans for the demo glosses, each sign eight frames longer than a
/// window plus a little variation.
pub fn demo_spans() -> Vec<GlossSpan> {
    let mut spans = Vec::new();
    for (g, &(gloss, count)) in DEMO_GLOSSES.iter().enumerate() {
        for i in 0..count {
            let start = (i * 40) as u32;
            let len = 10 + ((g * 7 + i * 3) % 20) as u32;
            let span = GlossSpan::new(
                format!("train-{:03}", i % 9),
                start,
                start + len,
                GlossLabel::new(gloss).expect("demo gloss is valid"),
            )
            .expect("demo span is valid");
            spans.push(span);
        }
    }
    spans
}

pub fn demo_vocabulary() -> Vocabulary {
    let exclusions = BTreeSet::from([GlossLabel::new(INDEX_GLOSS).unwrap()]);
    vocab::build_vocabulary(&demo_spans(), DEFAULT_MIN_COUNT, &exclusions).expect("demo vocabulary builds")
}

/// Files written by [`write_demo_corpus`].
#[derive(Debug, Clone)]
pub struct DemoCorpus {
    pub root: PathBuf,
    pub spans_path: PathBuf,
    pub vocab_path: PathBuf,
    pub manifest_path: PathBuf,
    pub vocab: Vocabulary,
    pub manifest: Vec<ManifestEntry>,
}

/// Writes a five-video corpus under `root`:
///
/// ```text
/// spans.jsonl       training spans
/// vocab.tsv         vocabulary built from them
/// scores/*.jsonl    one dense score stream per video
/// manifest.jsonl    entries with references and ground-truth glosses
/// ```
pub fn write_demo_corpus(root: impl AsRef<Path>) -> io::Result<DemoCorpus> {
    let root = root.as_ref().to_path_buf();
    fs::create_dir_all(root.join("scores"))?;

    let spans_path = root.join("spans.jsonl");
    let mut out = BufWriter::new(File::create(&spans_path)?);
    for span in demo_spans() {
        serde_json::to_writer(&mut out, &span)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;

    let vocab = demo_vocabulary();
    let vocab_path = root.join("vocab.tsv");
    vocab.save(&vocab_path)?;

    let mut manifest = Vec::new();
    for video in &DEMO_VIDEOS {
        let segments: Vec<Segment> = video
            .script
            .iter()
            .map(|&(gloss, windows, peak)| {
                let class_id = vocab
                    .class_id_of(gloss)
                    .expect("scripted gloss is in the vocabulary");
                Segment::new(class_id, windows, peak)
            })
            .collect();
        let stream = scripted_stream(video.id, &vocab, spotter::DEFAULT_WINDOW_SIZE, &segments)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        let relative = PathBuf::from("scores").join(format!("{}.jsonl", video.id));
        let mut out = BufWriter::new(File::create(root.join(&relative))?);
        spotter::write_score_stream(&mut out, &stream)?;
        out.flush()?;
        manifest.push(ManifestEntry {
            id: video.id.to_owned(),
            scores_path: Some(relative),
            reference: video.reference.to_owned(),
            gt_glosses: Some(video.gt.iter().map(|g| GlossLabel::new(*g).unwrap()).collect()),
        });
    }
    let manifest_path = root.join("manifest.jsonl");
    pipeline::write_manifest(BufWriter::new(File::create(&manifest_path)?), &manifest)?;
    for entry in &mut manifest {
        entry.scores_path = entry.scores_path.take().map(|p| root.join(p));
    }

    Ok(DemoCorpus {
        root,
        spans_path,
        vocab_path,
        manifest_path,
        vocab,
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spotter::{spot, SpottingConfig};

    #[test]
    fn peaked_sums_to_one() {
        let p = peaked(5, 2, 0.6);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(p[2], 0.6);
    }

    #[test]
    fn demo_vocabulary_drops_rare_and_excluded() {
        let vocab = demo_vocabulary();
        assert_eq!(vocab.len(), 10);
        assert!(!vocab.contains("SARDINIEN"));
        assert!(!vocab.contains(INDEX_GLOSS));
        assert_eq!(vocab.class_id_of("ABEND"), Some(0));
    }

    #[test]
    fn scripted_stream_spots_its_script() {
        let vocab = demo_vocabulary();
        let a = vocab.class_id_of("FAMILIE").unwrap();
        let b = vocab.class_id_of("ESSEN").unwrap();
        let stream = scripted_stream(
            "v",
            &vocab,
            16,
            &[
                Segment::new(a, 3, 0.9),
                Segment::new(b, 2, 0.5),
                Segment::new(a, 2, 0.8),
            ],
        )
        .unwrap();
        assert_eq!(stream.num_frames(), 7 + 15);
        let seq = spot(&stream, &SpottingConfig::default()).unwrap();
        assert_eq!(seq.class_ids(), vec![a]);
    }
}

//! Gloss vocabulary built from frame-level annotation spans.
//!
//! A [`Vocabulary`] keeps every gloss that occurs at least `min_count` times
//! and is not explicitly excluded. Class ids are dense and follow the byte
//! order of the gloss labels, so the same spans always give the same ids and
//! the same content hash, regardless of input order.
//!
//! On disk the vocabulary is a small UTF-8 text file:
//!
//! ```text
//! #vocab v1 hash=<content_hash> min_count=<k>
//! GLOSS<TAB>class_id<TAB>count
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Minimum occurrence count used when no other value is given: keeps glosses
/// seen more than 12 times.
pub const DEFAULT_MIN_COUNT: usize = 13;

/// The pointing gloss, excluded by default because it dominates the counts.
pub const INDEX_GLOSS: &str = "INDEX";

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("invalid gloss label {0:?}: must be non-empty and contain no whitespace")]
    InvalidLabel(String),
    #[error("invalid span for {video_id}: end_frame {end} must be greater than start_frame {start}")]
    DegenerateSpan { video_id: String, start: u32, end: u32 },
    #[error("min_count must be at least 1")]
    InvalidMinCount,
    #[error("vocabulary file line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("vocabulary hash mismatch: header says {declared}, entries hash to {computed}")]
    HashMismatch { declared: String, computed: String },
    #[error("span manifest line {line}: {source}")]
    SpanJson {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A variant-distinguished gloss label such as `NUM-EINER1A:1d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GlossLabel(String);

impl GlossLabel {
    pub fn new(text: impl Into<String>) -> Result<Self, VocabError> {
        let text = text.into();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(VocabError::InvalidLabel(text));
        }
        Ok(Self(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The label with its variant code removed, see [`base_label`].
    pub fn base(&self) -> &str {
        base_label(&self.0)
    }
}

impl TryFrom<String> for GlossLabel {
    type Error = VocabError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<GlossLabel> for String {
    fn from(label: GlossLabel) -> Self {
        label.0
    }
}

impl AsRef<str> for GlossLabel {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GlossLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.0)
    }
}

/// One annotated gloss occurrence. `end_frame` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlossSpan {
    pub video_id: String,
    pub start_frame: u32,
    pub end_frame: u32,
    pub gloss: GlossLabel,
}

impl GlossSpan {
    pub fn new(
        video_id: impl Into<String>,
        start_frame: u32,
        end_frame: u32,
        gloss: GlossLabel,
    ) -> Result<Self, VocabError> {
        let span = Self {
            video_id: video_id.into(),
            start_frame,
            end_frame,
            gloss,
        };
        span.validate()?;
        Ok(span)
    }

    pub fn validate(&self) -> Result<(), VocabError> {
        if self.end_frame <= self.start_frame {
            return Err(VocabError::DegenerateSpan {
                video_id: self.video_id.clone(),
                start: self.start_frame,
                end: self.end_frame,
            });
        }
        Ok(())
    }

    /// Number of frames covered by the span.
    pub fn len(&self) -> u32 {
        self.end_frame.saturating_sub(self.start_frame)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reads a span manifest: one JSON object per line with the fields
/// `video_id`, `start_frame`, `end_frame` and `gloss`. Blank lines are skipped.
pub fn read_spans<R: BufRead>(reader: R) -> Result<Vec<GlossSpan>, VocabError> {
    let mut spans = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let span: GlossSpan = serde_json::from_str(&line).map_err(|source| VocabError::SpanJson {
            line: idx + 1,
            source,
        })?;
        span.validate()?;
        spans.push(span);
    }
    Ok(spans)
}

pub fn load_spans(path: impl AsRef<Path>) -> Result<Vec<GlossSpan>, VocabError> {
    read_spans(BufReader::new(File::open(path)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VocabEntry {
    pub gloss: GlossLabel,
    pub class_id: usize,
    pub sample_count: usize,
}

#[derive(Debug, Clone)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    min_count: usize,
    exclusions: BTreeSet<GlossLabel>,
    content_hash: String,
    by_label: HashMap<String, usize>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && self.min_count == other.min_count
            && self.exclusions == other.exclusions
            && self.content_hash == other.content_hash
    }
}

/// Keeps the glosses with at least `min_count` occurrences that are not in
/// `exclusions`. Counts are span occurrences, not training windows.
pub fn build_vocabulary(
    spans: &[GlossSpan],
    min_count: usize,
    exclusions: &BTreeSet<GlossLabel>,
) -> Result<Vocabulary, VocabError> {
    if min_count == 0 {
        return Err(VocabError::InvalidMinCount);
    }
    let mut counts: BTreeMap<&GlossLabel, usize> = BTreeMap::new();
    for span in spans {
        *counts.entry(&span.gloss).or_default() += 1;
    }
    // BTreeMap iteration is the byte order of the label strings.
    let kept = counts
        .into_iter()
        .filter(|(gloss, count)| *count >= min_count && !exclusions.contains(*gloss))
        .map(|(gloss, count)| (gloss.clone(), count));
    Ok(Vocabulary::from_sorted(kept, min_count, exclusions.clone()))
}

/// Digest of the ordered `(gloss, class_id)` pairs.
fn content_hash<'a>(pairs: impl Iterator<Item = (&'a str, usize)>) -> String {
    let mut hasher = Sha256::new();
    for (gloss, class_id) in pairs {
        hasher.update(gloss.as_bytes());
        hasher.update(b"\t");
        hasher.update(class_id.to_string().as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

impl Vocabulary {
    fn from_sorted(
        glosses: impl IntoIterator<Item = (GlossLabel, usize)>,
        min_count: usize,
        exclusions: BTreeSet<GlossLabel>,
    ) -> Self {
        let entries: Vec<VocabEntry> = glosses
            .into_iter()
            .enumerate()
            .map(|(class_id, (gloss, sample_count))| VocabEntry {
                gloss,
                class_id,
                sample_count,
            })
            .collect();
        let content_hash = content_hash(entries.iter().map(|e| (e.gloss.as_str(), e.class_id)));
        let by_label = entries
            .iter()
            .map(|e| (e.gloss.as_str().to_owned(), e.class_id))
            .collect();
        Self {
            entries,
            min_count,
            exclusions,
            content_hash,
            by_label,
        }
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    /// Exclusions applied at build time. Empty for a vocabulary read from
    /// disk, since the file format does not carry them.
    pub fn exclusions(&self) -> &BTreeSet<GlossLabel> {
        &self.exclusions
    }

    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    pub fn class_id_of(&self, gloss: &str) -> Option<usize> {
        self.by_label.get(gloss).copied()
    }

    pub fn contains(&self, gloss: &str) -> bool {
        self.by_label.contains_key(gloss)
    }

    pub fn label_of(&self, class_id: usize) -> Option<&GlossLabel> {
        self.entries.get(class_id).map(|e| &e.gloss)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "#vocab v1 hash={} min_count={}",
            self.content_hash, self.min_count
        )?;
        for entry in &self.entries {
            writeln!(out, "{}\t{}\t{}", entry.gloss, entry.class_id, entry.sample_count)?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()
    }

    /// Parses a vocabulary file, checking the header, dense ordered ids,
    /// counts against `min_count`, and the declared hash.
    pub fn read_from<R: Read>(reader: R) -> Result<Self, VocabError> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(line) => line?,
            None => {
                return Err(VocabError::Format {
                    line: 1,
                    reason: "missing header".into(),
                })
            }
        };
        let (declared_hash, min_count) = parse_header(&header)?;

        let mut glosses: Vec<(GlossLabel, usize)> = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let format_err = |reason: String| VocabError::Format {
                line: line_no,
                reason,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(format_err(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let gloss = GlossLabel::new(fields[0]).map_err(|e| format_err(e.to_string()))?;
            let class_id: usize = fields[1]
                .parse()
                .map_err(|_| format_err(format!("bad class id {:?}", fields[1])))?;
            let count: usize = fields[2]
                .parse()
                .map_err(|_| format_err(format!("bad count {:?}", fields[2])))?;
            if class_id != glosses.len() {
                return Err(format_err(format!(
                    "class ids must be dense from 0, expected {} found {class_id}",
                    glosses.len()
                )));
            }
            if let Some((prev, _)) = glosses.last() {
                if prev.as_str() >= gloss.as_str() {
                    return Err(format_err(format!("gloss {gloss} is out of order")));
                }
            }
            if count < min_count {
                return Err(format_err(format!(
                    "count {count} is below min_count {min_count}"
                )));
            }
            glosses.push((gloss, count));
        }

        let vocab = Self::from_sorted(glosses, min_count, BTreeSet::new());
        if vocab.content_hash != declared_hash {
            return Err(VocabError::HashMismatch {
                declared: declared_hash,
                computed: vocab.content_hash,
            });
        }
        Ok(vocab)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, VocabError> {
        Self::read_from(File::open(path)?)
    }
}

fn parse_header(header: &str) -> Result<(String, usize), VocabError> {
    let err = |reason: &str| VocabError::Format {
        line: 1,
        reason: reason.to_owned(),
    };
    let mut parts = header.split_whitespace();
    if parts.next() != Some("#vocab") || parts.next() != Some("v1") {
        return Err(err("header must start with `#vocab v1`"));
    }
    let mut hash = None;
    let mut min_count = None;
    for part in parts {
        match part.split_once('=') {
            Some(("hash", value)) => hash = Some(value.to_owned()),
            Some(("min_count", value)) => {
                min_count = Some(value.parse::<usize>().map_err(|_| err("bad min_count"))?)
            }
            _ => return Err(err("unknown header field")),
        }
    }
    let hash = hash.ok_or_else(|| err("header lacks hash"))?;
    let min_count = min_count.ok_or_else(|| err("header lacks min_count"))?;
    if min_count == 0 {
        return Err(VocabError::InvalidMinCount);
    }
    Ok((hash, min_count))
}

// digits, optional uppercase letters, optional ":"-prefixed subvariant
static VARIANT_SUFFIX: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[0-9]+[A-Z]*(?::[0-9A-Za-z]+)?$").unwrap());

/// Strips the trailing variant code from a gloss label:
/// `NUM-EINER1A:1d` becomes `NUM-EINER`, `DDR4` becomes `DDR`.
///
/// Stripping repeats until no suffix is left, so the result is a fixed
/// point. A label that would be stripped to nothing is returned unchanged.
pub fn base_label(gloss: &str) -> &str {
    let mut current = gloss;
    while let Some(m) = VARIANT_SUFFIX.find(current) {
        if m.start() == 0 {
            break;
        }
        current = &current[..m.start()];
    }
    current
}

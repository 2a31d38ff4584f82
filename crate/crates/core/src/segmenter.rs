//! Fixed-length training windows cut from annotated gloss spans.
//!
//! Spans shorter than the window are padded by repeating their last frame.
//! Longer spans are covered by a sliding window; a tail that does not fill a
//! whole window is dropped.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::vocab::{GlossLabel, GlossSpan, Vocabulary};

pub const DEFAULT_WINDOW: usize = 16;
pub const DEFAULT_STRIDE: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("window and stride must be at least 1 (window={window}, stride={stride})")]
    InvalidParams { window: usize, stride: usize },
    #[error("span of {gloss} in {video_id} at frame {start} covers no frames")]
    DegenerateSpan {
        video_id: String,
        gloss: String,
        start: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrainingWindow {
    pub video_id: String,
    pub gloss: GlossLabel,
    /// Absolute frame numbers, non-decreasing, `window` entries long.
    pub frame_indices: Vec<u32>,
}

pub fn segment_span(
    span: &GlossSpan,
    window: usize,
    stride: usize,
) -> Result<Vec<TrainingWindow>, SegmentError> {
    if window == 0 || stride == 0 {
        return Err(SegmentError::InvalidParams { window, stride });
    }
    if span.end_frame <= span.start_frame {
        return Err(SegmentError::DegenerateSpan {
            video_id: span.video_id.clone(),
            gloss: span.gloss.to_string(),
            start: span.start_frame,
        });
    }
    let len = span.len() as usize;
    let make = |frame_indices: Vec<u32>| TrainingWindow {
        video_id: span.video_id.clone(),
        gloss: span.gloss.clone(),
        frame_indices,
    };

    if len < window {
        let last = span.end_frame - 1;
        let frames = (span.start_frame..span.end_frame)
            .chain(std::iter::repeat_n(last, window - len))
            .collect();
        return Ok(vec![make(frames)]);
    }

    let count = (len - window) / stride + 1;
    Ok((0..count)
        .map(|i| {
            let first = span.start_frame + (i * stride) as u32;
            make((first..first + window as u32).collect())
        })
        .collect())
}

#[derive(Debug, Clone, Default)]
pub struct SegmentedCorpus {
    pub windows: Vec<(TrainingWindow, usize)>,
    /// Spans dropped because their gloss is not in the vocabulary.
    pub skipped_spans: usize,
}

/// Segments every in-vocabulary span and labels its windows with the class
/// id. Output order follows the input spans.
pub fn segment_corpus(
    spans: &[GlossSpan],
    vocab: &Vocabulary,
    window: usize,
    stride: usize,
) -> Result<SegmentedCorpus, SegmentError> {
    let per_span: Vec<Option<Vec<(TrainingWindow, usize)>>> = spans
        .par_iter()
        .map(|span| match vocab.class_id_of(span.gloss.as_str()) {
            None => Ok(None),
            Some(class_id) => segment_span(span, window, stride)
                .map(|ws| Some(ws.into_iter().map(|w| (w, class_id)).collect())),
        })
        .collect::<Result<_, _>>()?;

    let mut corpus = SegmentedCorpus::default();
    for item in per_span {
        match item {
            Some(windows) => corpus.windows.extend(windows),
            None => corpus.skipped_spans += 1,
        }
    }
    Ok(corpus)
}

/// Writes `video_id<TAB>class_id<TAB>f0,f1,...` per window.
pub fn write_window_manifest<W: Write>(mut out: W, windows: &[(TrainingWindow, usize)]) -> io::Result<()> {
    for (window, class_id) in windows {
        let frames: Vec<String> = window.frame_indices.iter().map(u32::to_string).collect();
        writeln!(out, "{}\t{}\t{}", window.video_id, class_id, frames.join(","))?;
    }
    Ok(())
}

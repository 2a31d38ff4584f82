//! Gloss spotting followed by LLM translation for sign-language video.
//!
//! The pipeline turns per-window class probabilities from an isolated-sign
//! classifier into a gloss sequence, asks a chat-completion model to render
//! that sequence as a spoken-language sentence, and scores the sentences
//! with corpus BLEU.
//!
//! | module | role |
//! |---|---|
//! | [`vocab`] | frequency-filtered gloss vocabulary and span manifests |
//! | [`segmenter`] | fixed-size training windows from annotated spans |
//! | [`spotter`] | score-stream format, argmax, threshold filter, collapse |
//! | [`translator`] | prompt, chat client, response cache, normalisation |
//! | [`metrics`] | 13a tokenisation, corpus BLEU-1..4, accuracy |
//! | [`pipeline`] | manifest-driven runs and threshold sweeps |
//! | [`config`] | TOML run configuration |
//! | [`stub`] | local chat-completion server for offline use |
//!
//! Each capability has a runnable program under `examples/`:
//! `build_vocabulary`, `segment_windows`, `spot_stream`,
//! `translate_with_stub`, `evaluate_bleu`, `end_to_end`,
//! `threshold_sweep` and `live_translate`.

pub mod config;
pub mod metrics;
pub mod pipeline;
pub mod segmenter;
pub mod spotter;
pub mod stub;
pub mod synthetic;
pub mod translator;
pub mod vocab;

//! TOML run configuration.
//!
//! ```toml
//! [spotting]
//! threshold = 0.7
//! window_size = 16
//!
//! [client]
//! endpoint_url = "https://api.openai.com/v1/chat/completions"
//! api_key_env = "OPENAI_API_KEY"
//! model_name = "gpt-3.5-turbo"
//! max_retries = 5
//! retry_backoff_ms = 1000
//! max_concurrency = 4
//! temperature = 0.0
//! timeout_secs = 60
//!
//! [run]
//! vocab = "vocab.tsv"
//! output_dir = "out"
//! cache_dir = "out/cache"
//! gloss_source = "spotter"
//! skip_empty = true
//! strip_variants = true
//! fail_fast = false
//! external_metric = { name = "BLEURT", path = "bleurt.txt" }
//! ```
//!
//! Every key is optional. Relative paths resolve against the file's
//! directory. The API key itself never appears in the file, only the name of
//! the environment variable holding it.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

use crate::pipeline::{ExternalScores, GlossSource, PipelineError, RunConfig};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub spotting: SpottingSection,
    #[serde(default)]
    pub client: ClientSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpottingSection {
    pub threshold: Option<f64>,
    pub window_size: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientSection {
    pub endpoint_url: Option<String>,
    /// An empty string disables the authorization header.
    pub api_key_env: Option<String>,
    pub model_name: Option<String>,
    pub max_retries: Option<u32>,
    pub retry_backoff_ms: Option<u64>,
    pub max_concurrency: Option<usize>,
    pub temperature: Option<f64>,
    pub timeout_secs: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub vocab: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub gloss_source: Option<GlossSource>,
    pub skip_empty: Option<bool>,
    pub strip_variants: Option<bool>,
    pub fail_fast: Option<bool>,
    pub external_metric: Option<ExternalScores>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("reading {}: {e}", path.display())))?;
        let mut file = Self::parse(&text)?;
        if let Some(base) = path.parent() {
            file.resolve_paths(base);
        }
        Ok(file)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let run = &mut self.run;
        for path in [&mut run.vocab, &mut run.output_dir, &mut run.cache_dir]
            .into_iter()
            .flatten()
        {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        if let Some(ext) = &mut run.external_metric {
            if ext.path.is_relative() {
                ext.path = base.join(&ext.path);
            }
        }
    }

    /// Applies the file on top of `config`; keys absent from the file leave
    /// the existing values alone.
    pub fn apply(&self, config: &mut RunConfig) {
        let s = &self.spotting;
        if let Some(v) = s.threshold {
            config.spotting.threshold = v;
        }
        if let Some(v) = s.window_size {
            config.spotting.window_size = v;
        }

        let c = &self.client;
        if let Some(v) = &c.endpoint_url {
            config.client.endpoint_url = v.clone();
        }
        if let Some(v) = &c.api_key_env {
            config.client.api_key_env = (!v.is_empty()).then(|| v.clone());
        }
        if let Some(v) = &c.model_name {
            config.client.model_name = v.clone();
        }
        if let Some(v) = c.max_retries {
            config.client.max_retries = v;
        }
        if let Some(v) = c.retry_backoff_ms {
            config.client.retry_backoff = Duration::from_millis(v);
        }
        if let Some(v) = c.max_concurrency {
            config.client.max_concurrency = v;
        }
        if let Some(v) = c.temperature {
            config.client.temperature = v;
        }
        if let Some(v) = c.timeout_secs {
            config.client.timeout = Duration::from_secs(v);
        }

        let r = &self.run;
        if let Some(v) = &r.vocab {
            config.vocab_path = Some(v.clone());
        }
        if let Some(v) = &r.output_dir {
            config.output_dir = v.clone();
        }
        if let Some(v) = &r.cache_dir {
            config.cache_dir = Some(v.clone());
        }
        if let Some(v) = r.gloss_source {
            config.gloss_source = v;
        }
        if let Some(v) = r.skip_empty {
            config.translator.skip_empty = v;
        }
        if let Some(v) = r.strip_variants {
            config.translator.strip_variants = v;
        }
        if let Some(v) = r.fail_fast {
            config.fail_fast = v;
        }
        if let Some(v) = &r.external_metric {
            config.external_scores = Some(v.clone());
        }
    }
}

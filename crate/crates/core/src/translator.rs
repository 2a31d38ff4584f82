//! Gloss-to-sentence translation through a chat-completion endpoint.
//!
//! Every request is single-turn: the fixed [`SYSTEM_PROMPT`] plus one user
//! message holding the glosses separated by single spaces. Responses are
//! normalised into a [`Hypothesis`]; the model is told to answer
//! "No Translation" when it cannot build a sentence, and that answer maps to
//! [`Hypothesis::NoTranslation`].
//!
//! Raw responses are cached on disk, keyed by model, system prompt and user
//! message, so re-running a corpus against a warm cache makes no requests.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::Duration;

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::vocab::GlossLabel;

/// System prompt sent with every request, byte for byte.
pub const SYSTEM_PROMPT: &str = "You are a helpful assistant designed to generate a sentence based on the list of words entered by the user. You need to strictly follow these rules: 1. The user will only give the list of German words separated by a space, you just need to generate a meaningful sentence from them. 2. Only provide a response containing the generated sentence. If you cannot create a German sentence then respond with \"No Translation\".";

/// SHA-256 of [`SYSTEM_PROMPT`].
pub const SYSTEM_PROMPT_SHA256: &str = "751ff2e9b3a8418856112e8567688bc0c30b2a38bae90f1b0d59df13fb1fdb2e";

pub const DEFAULT_MODEL: &str = "gpt-3.5-turbo";
pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";
pub const DEFAULT_API_KEY_ENV: &str = "OPENAI_API_KEY";

/// Upper bound on a single retry delay.
pub const MAX_BACKOFF: Duration = Duration::from_secs(30);

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("cannot build a prompt from an empty gloss list")]
    EmptyGlossList,
    #[error("invalid client configuration: {0}")]
    InvalidConfig(String),
    #[error("{video_id}: API key environment variable {env} is not set")]
    MissingApiKey { video_id: String, env: String },
    #[error("{video_id}: gave up after {attempts} attempts, last error: {last}")]
    RetriesExhausted {
        video_id: String,
        attempts: u32,
        last: String,
    },
    #[error("{video_id}: endpoint answered HTTP {status}: {body}")]
    HttpStatus {
        video_id: String,
        status: u16,
        body: String,
    },
    #[error("{video_id}: request failed: {detail}")]
    Request { video_id: String, detail: String },
    #[error("{video_id}: unexpected response body: {detail}")]
    MalformedResponse { video_id: String, detail: String },
    #[error("{video_id}: response cache: {source}")]
    Cache {
        video_id: String,
        #[source]
        source: io::Error,
    },
}

impl TranslateError {
    pub fn video_id(&self) -> Option<&str> {
        match self {
            Self::EmptyGlossList | Self::InvalidConfig(_) => None,
            Self::MissingApiKey { video_id, .. }
            | Self::RetriesExhausted { video_id, .. }
            | Self::HttpStatus { video_id, .. }
            | Self::Request { video_id, .. }
            | Self::MalformedResponse { video_id, .. }
            | Self::Cache { video_id, .. } => Some(video_id),
        }
    }
}

/// A sentence, or the model's explicit refusal. Serialised as a string or
/// `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Option<String>", into = "Option<String>")]
pub enum Hypothesis {
    Sentence(String),
    NoTranslation,
}

impl Hypothesis {
    pub fn as_sentence(&self) -> Option<&str> {
        match self {
            Self::Sentence(s) => Some(s),
            Self::NoTranslation => None,
        }
    }

    pub fn is_no_translation(&self) -> bool {
        matches!(self, Self::NoTranslation)
    }
}

impl From<Option<String>> for Hypothesis {
    fn from(value: Option<String>) -> Self {
        value.map_or(Self::NoTranslation, Self::Sentence)
    }
}

impl From<Hypothesis> for Option<String> {
    fn from(value: Hypothesis) -> Self {
        match value {
            Hypothesis::Sentence(s) => Some(s),
            Hypothesis::NoTranslation => None,
        }
    }
}

/// Maps a raw completion to a hypothesis. "No Translation", in any case,
/// with trailing `.`/`!` and optional surrounding quotes, becomes
/// [`Hypothesis::NoTranslation`]; so does an empty answer. Anything else is
/// returned trimmed but otherwise verbatim.
pub fn normalize_response(raw: &str) -> Hypothesis {
    let trimmed = raw.trim();
    let key = trimmed.to_lowercase();
    let key = key
        .trim_matches('"')
        .trim_end_matches(['.', '!'])
        .trim_matches('"');
    if trimmed.is_empty() || key == "no translation" {
        Hypothesis::NoTranslation
    } else {
        Hypothesis::Sentence(trimmed.to_owned())
    }
}

/// The user message: base labels (variant codes removed) joined by single
/// spaces, in order.
pub fn build_user_message(glosses: &[GlossLabel]) -> Result<String, TranslateError> {
    if glosses.is_empty() {
        return Err(TranslateError::EmptyGlossList);
    }
    Ok(prompt_words(glosses, true).join(" "))
}

fn prompt_words(glosses: &[GlossLabel], strip_variants: bool) -> Vec<String> {
    glosses
        .iter()
        .map(|g| if strip_variants { g.base() } else { g.as_str() }.to_owned())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptBundle {
    pub system_text: &'static str,
    pub user_text: String,
    pub model_name: String,
}

impl PromptBundle {
    pub fn new(user_text: impl Into<String>, model_name: impl Into<String>) -> Self {
        Self {
            system_text: SYSTEM_PROMPT,
            user_text: user_text.into(),
            model_name: model_name.into(),
        }
    }

    /// Chat-completion request body.
    pub fn request_body(&self, temperature: f64) -> serde_json::Value {
        json!({
            "model": self.model_name,
            "temperature": temperature,
            "messages": [
                {"role": "system", "content": self.system_text},
                {"role": "user", "content": self.user_text},
            ],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientConfig {
    pub endpoint_url: String,
    /// Environment variable holding the bearer token. `None` sends no
    /// `Authorization` header, for local endpoints.
    pub api_key_env: Option<String>,
    pub model_name: String,
    pub max_retries: u32,
    pub retry_backoff: Duration,
    pub max_concurrency: usize,
    pub temperature: f64,
    pub timeout: Duration,
}

impl Default for ClientConfig {
    fn default() -> Self {
        Self {
            endpoint_url: DEFAULT_ENDPOINT.into(),
            api_key_env: Some(DEFAULT_API_KEY_ENV.into()),
            model_name: DEFAULT_MODEL.into(),
            max_retries: 3,
            retry_backoff: Duration::from_millis(500),
            max_concurrency: 4,
            temperature: 0.0,
            timeout: Duration::from_secs(60),
        }
    }
}

impl ClientConfig {
    /// Configuration for an unauthenticated local endpoint.
    pub fn local(endpoint_url: impl Into<String>) -> Self {
        Self {
            endpoint_url: endpoint_url.into(),
            api_key_env: None,
            retry_backoff: Duration::from_millis(10),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), TranslateError> {
        let invalid = |msg: String| Err(TranslateError::InvalidConfig(msg));
        if self.max_concurrency == 0 {
            return invalid("max_concurrency must be at least 1".into());
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return invalid(format!("temperature {} outside [0, 2]", self.temperature));
        }
        if self.endpoint_url.is_empty() {
            return invalid("endpoint_url is empty".into());
        }
        if self.model_name.is_empty() {
            return invalid("model_name is empty".into());
        }
        Ok(())
    }

    fn backoff(&self, retry: u32) -> Duration {
        let factor = 2u32.saturating_pow(retry.saturating_sub(1));
        self.retry_backoff.saturating_mul(factor).min(MAX_BACKOFF)
    }
}

/// Counting semaphore capping requests in flight.
#[derive(Debug)]
struct Semaphore {
    permits: Mutex<usize>,
    freed: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Self {
        Self {
            permits: Mutex::new(permits),
            freed: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.freed.wait(permits).unwrap();
        }
        *permits -= 1;
        Permit(self)
    }
}

struct Permit<'a>(&'a Semaphore);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.permits.lock().unwrap() += 1;
        self.0.freed.notify_one();
    }
}

/// Blocking chat-completion client with retries.
#[derive(Debug)]
pub struct ChatClient {
    config: ClientConfig,
    agent: ureq::Agent,
    in_flight: Semaphore,
    requests: AtomicUsize,
}

impl ChatClient {
    pub fn new(config: ClientConfig) -> Result<Self, TranslateError> {
        config.validate()?;
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(config.timeout))
            .build()
            .new_agent();
        Ok(Self {
            in_flight: Semaphore::new(config.max_concurrency),
            config,
            agent,
            requests: AtomicUsize::new(0),
        })
    }

    pub fn config(&self) -> &ClientConfig {
        &self.config
    }

    /// HTTP requests sent so far, retries included.
    pub fn requests_sent(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }

    fn api_key(&self, video_id: &str) -> Result<Option<String>, TranslateError> {
        let Some(env) = &self.config.api_key_env else {
            return Ok(None);
        };
        match std::env::var(env) {
            Ok(key) if !key.is_empty() => Ok(Some(key)),
            _ => Err(TranslateError::MissingApiKey {
                video_id: video_id.to_owned(),
                env: env.clone(),
            }),
        }
    }

    /// Sends one completion request, retrying transport failures, 5xx and
    /// 429 answers. Returns the assistant message content.
    pub fn complete(&self, prompt: &PromptBundle, video_id: &str) -> Result<String, TranslateError> {
        let key = self.api_key(video_id)?;
        let body = prompt.request_body(self.config.temperature);
        let attempts = self.config.max_retries + 1;
        let mut last_error = String::new();

        for attempt in 0..attempts {
            if attempt > 0 {
                let delay = self.config.backoff(attempt);
                debug!(
                    "stage=translate entry={video_id} retry={attempt} delay_ms={}",
                    delay.as_millis()
                );
                thread::sleep(delay);
            }
            match self.send_once(&body, key.as_deref()) {
                Ok((status, text)) if (200..300).contains(&status) => {
                    return extract_content(&text).map_err(|detail| TranslateError::MalformedResponse {
                        video_id: video_id.to_owned(),
                        detail,
                    });
                }
                Ok((status, text)) if status >= 500 || status == 429 => {
                    warn!(
                        "stage=translate entry={video_id} attempt={} status={status}",
                        attempt + 1
                    );
                    last_error = format!("HTTP {status}: {}", truncate(&text, 200));
                }
                Ok((status, text)) => {
                    return Err(TranslateError::HttpStatus {
                        video_id: video_id.to_owned(),
                        status,
                        body: truncate(&text, 500),
                    });
                }
                Err(err) if is_transient(&err) => {
                    warn!(
                        "stage=translate entry={video_id} attempt={} error={err}",
                        attempt + 1
                    );
                    last_error = err.to_string();
                }
                Err(err) => {
                    return Err(TranslateError::Request {
                        video_id: video_id.to_owned(),
                        detail: err.to_string(),
                    });
                }
            }
        }
        Err(TranslateError::RetriesExhausted {
            video_id: video_id.to_owned(),
            attempts,
            last: last_error,
        })
    }

    fn send_once(&self, body: &serde_json::Value, key: Option<&str>) -> Result<(u16, String), ureq::Error> {
        let _permit = self.in_flight.acquire();
        self.requests.fetch_add(1, Ordering::Relaxed);
        let mut request = self.agent.post(&self.config.endpoint_url);
        if let Some(key) = key {
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request.send_json(body)?;
        let status = response.status().as_u16();
        let text = response.body_mut().read_to_string()?;
        Ok((status, text))
    }
}

fn is_transient(err: &ureq::Error) -> bool {
    matches!(
        err,
        ureq::Error::Io(_)
            | ureq::Error::Timeout(_)
            | ureq::Error::ConnectionFailed
            | ureq::Error::HostNotFound
            | ureq::Error::Protocol(_)
    )
}

fn extract_content(text: &str) -> Result<String, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    value
        .pointer("/choices/0/message/content")
        .and_then(|c| c.as_str())
        .map(str::to_owned)
        .ok_or_else(|| "missing choices[0].message.content".to_owned())
}

fn truncate(text: &str, max_chars: usize) -> String {
    text.chars().take(max_chars).collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    model: String,
    system_sha256: String,
    user: String,
    raw_response: String,
}

/// Content-addressed response store: one JSON file per request key.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(prompt: &PromptBundle) -> String {
        let system_sha = hex::encode(Sha256::digest(prompt.system_text.as_bytes()));
        let mut hasher = Sha256::new();
        hasher.update(prompt.model_name.as_bytes());
        hasher.update([0]);
        hasher.update(system_sha.as_bytes());
        hasher.update([0]);
        hasher.update(prompt.user_text.as_bytes());
        hex::encode(hasher.finalize())
    }

    fn path_for(&self, prompt: &PromptBundle) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(prompt)))
    }

    pub fn get(&self, prompt: &PromptBundle) -> io::Result<Option<String>> {
        let path = self.path_for(prompt);
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) if entry.model == prompt.model_name && entry.user == prompt.user_text => {
                Ok(Some(entry.raw_response))
            }
            Ok(_) => {
                warn!(
                    "cache entry {} does not match its request, ignoring",
                    path.display()
                );
                Ok(None)
            }
            Err(e) => {
                warn!("unreadable cache entry {}: {e}", path.display());
                Ok(None)
            }
        }
    }

    /// Stores a response atomically (temp file, then rename).
    pub fn put(&self, prompt: &PromptBundle, raw_response: &str) -> io::Result<()> {
        let entry = CacheEntry {
            model: prompt.model_name.clone(),
            system_sha256: hex::encode(Sha256::digest(prompt.system_text.as_bytes())),
            user: prompt.user_text.clone(),
            raw_response: raw_response.to_owned(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, &entry)?;
        tmp.persist(self.path_for(prompt)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslatorOptions {
    /// Answer empty gloss lists with `NoTranslation` without a request.
    pub skip_empty: bool,
    /// Send base labels instead of variant-distinguished ones.
    pub strip_variants: bool,
}

impl Default for TranslatorOptions {
    fn default() -> Self {
        Self {
            skip_empty: true,
            strip_variants: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub video_id: String,
    /// Words sent in the user message, in prompt order.
    pub glosses: Vec<String>,
    pub hypothesis: Hypothesis,
    pub raw_response: String,
    #[serde(skip)]
    pub from_cache: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationJob {
    pub video_id: String,
    pub glosses: Vec<GlossLabel>,
}

pub struct Translator {
    client: ChatClient,
    cache: Option<ResponseCache>,
    options: TranslatorOptions,
    cache_hits: AtomicUsize,
}

impl Translator {
    pub fn new(client: ChatClient, cache: Option<ResponseCache>, options: TranslatorOptions) -> Self {
        Self {
            client,
            cache,
            options,
            cache_hits: AtomicUsize::new(0),
        }
    }

    pub fn client(&self) -> &ChatClient {
        &self.client
    }

    pub fn cache_hits(&self) -> usize {
        self.cache_hits.load(Ordering::Relaxed)
    }

    pub fn translate(
        &self,
        video_id: &str,
        glosses: &[GlossLabel],
    ) -> Result<TranslationRecord, TranslateError> {
        let words = prompt_words(glosses, self.options.strip_variants);
        if words.is_empty() && self.options.skip_empty {
            debug!("stage=translate entry={video_id} skipped=empty");
            return Ok(TranslationRecord {
                video_id: video_id.to_owned(),
                glosses: words,
                hypothesis: Hypothesis::NoTranslation,
                raw_response: String::new(),
                from_cache: false,
            });
        }
        let prompt = PromptBundle::new(words.join(" "), &self.client.config.model_name);
        let cache_err = |source| TranslateError::Cache {
            video_id: video_id.to_owned(),
            source,
        };

        if let Some(cache) = &self.cache {
            if let Some(raw) = cache.get(&prompt).map_err(cache_err)? {
                self.cache_hits.fetch_add(1, Ordering::Relaxed);
                debug!("stage=translate entry={video_id} cache=hit");
                return Ok(TranslationRecord {
                    video_id: video_id.to_owned(),
                    glosses: words,
                    hypothesis: normalize_response(&raw),
                    raw_response: raw,
                    from_cache: true,
                });
            }
        }

        let raw = self.client.complete(&prompt, video_id)?;
        if let Some(cache) = &self.cache {
            cache.put(&prompt, &raw).map_err(cache_err)?;
        }
        Ok(TranslationRecord {
            video_id: video_id.to_owned(),
            glosses: words,
            hypothesis: normalize_response(&raw),
            raw_response: raw,
            from_cache: false,
        })
    }

    /// Translates every job on up to `max_concurrency` worker threads.
    /// Results come back in job order.
    pub fn translate_all(&self, jobs: &[TranslationJob]) -> Vec<Result<TranslationRecord, TranslateError>> {
        let workers = self.client.config.max_concurrency.min(jobs.len()).max(1);
        let next = AtomicUsize::new(0);
        let mut results: Vec<(usize, Result<TranslationRecord, TranslateError>)> = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| {
                        let mut done = Vec::new();
                        loop {
                            let idx = next.fetch_add(1, Ordering::Relaxed);
                            let Some(job) = jobs.get(idx) else { break };
                            done.push((idx, self.translate(&job.video_id, &job.glosses)));
                        }
                        done
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("translation worker panicked"))
                .collect()
        });
        results.sort_by_key(|(idx, _)| *idx);
        results.into_iter().map(|(_, r)| r).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(items: &[&str]) -> Vec<GlossLabel> {
        items.iter().map(|s| GlossLabel::new(*s).unwrap()).collect()
    }

    #[test]
    fn system_prompt_digest_is_pinned() {
        assert_eq!(
            hex::encode(Sha256::digest(SYSTEM_PROMPT.as_bytes())),
            SYSTEM_PROMPT_SHA256
        );
        assert_eq!(SYSTEM_PROMPT.len(), 418);
    }

    #[test]
    fn user_message_uses_base_labels() {
        let msg = build_user_message(&labels(&["FAMILIE1", "ESSEN1", "ABEND2", "RESTAURANT1"])).unwrap();
        assert_eq!(msg, "FAMILIE ESSEN ABEND RESTAURANT");
        assert_eq!(
            build_user_message(&labels(&["LETZTE", "MEHR"])).unwrap(),
            "LETZTE MEHR"
        );
        assert_eq!(build_user_message(&labels(&["HALLO"])).unwrap(), "HALLO");
        assert!(matches!(
            build_user_message(&[]),
            Err(TranslateError::EmptyGlossList)
        ));
    }

    #[test]
    fn normalisation() {
        assert_eq!(normalize_response("No Translation."), Hypothesis::NoTranslation);
        assert_eq!(normalize_response("  no translation "), Hypothesis::NoTranslation);
        assert_eq!(
            normalize_response("\"No Translation\""),
            Hypothesis::NoTranslation
        );
        assert_eq!(normalize_response("NO TRANSLATION!"), Hypothesis::NoTranslation);
        assert_eq!(normalize_response(""), Hypothesis::NoTranslation);
        let sentence = "Die Familie geht am Abend ins Restaurant, um zu essen.";
        assert_eq!(
            normalize_response(sentence),
            Hypothesis::Sentence(sentence.into())
        );
        assert_eq!(
            normalize_response("No translation is possible here."),
            Hypothesis::Sentence("No translation is possible here.".into())
        );
    }

    #[test]
    fn hypothesis_serialises_as_nullable_string() {
        assert_eq!(serde_json::to_string(&Hypothesis::NoTranslation).unwrap(), "null");
        assert_eq!(
            serde_json::to_string(&Hypothesis::Sentence("Ja.".into())).unwrap(),
            "\"Ja.\""
        );
        let back: Hypothesis = serde_json::from_str("null").unwrap();
        assert!(back.is_no_translation());
    }

    #[test]
    fn request_body_has_two_messages() {
        let body = PromptBundle::new("A B", DEFAULT_MODEL).request_body(0.0);
        assert_eq!(body["model"], DEFAULT_MODEL);
        assert_eq!(body["temperature"], 0.0);
        assert_eq!(body["messages"][0]["role"], "system");
        assert_eq!(body["messages"][0]["content"], SYSTEM_PROMPT);
        assert_eq!(body["messages"][1]["role"], "user");
        assert_eq!(body["messages"][1]["content"], "A B");
    }

    #[test]
    fn config_validation() {
        assert!(ClientConfig::default().validate().is_ok());
        let bad = ClientConfig {
            max_concurrency: 0,
            ..ClientConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ClientConfig {
            temperature: 2.5,
            ..ClientConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn backoff_doubles_and_is_bounded() {
        let config = ClientConfig {
            retry_backoff: Duration::from_millis(100),
            ..ClientConfig::default()
        };
        assert_eq!(config.backoff(1), Duration::from_millis(100));
        assert_eq!(config.backoff(3), Duration::from_millis(400));
        assert_eq!(config.backoff(40), MAX_BACKOFF);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResponseCache::open(dir.path().join("cache")).unwrap();
        let prompt = PromptBundle::new("A B", DEFAULT_MODEL);
        assert_eq!(cache.get(&prompt).unwrap(), None);
        cache.put(&prompt, "Satz.").unwrap();
        assert_eq!(cache.get(&prompt).unwrap().as_deref(), Some("Satz."));
        let other_model = PromptBundle::new("A B", "other");
        assert_ne!(ResponseCache::key(&prompt), ResponseCache::key(&other_model));
        assert_eq!(cache.get(&other_model).unwrap(), None);
    }

    #[test]
    fn missing_key_is_reported_with_video_id() {
        let config = ClientConfig {
            endpoint_url: "http://127.0.0.1:9/none".into(),
            api_key_env: Some("SIGNSPOT_TEST_KEY_THAT_IS_NEVER_SET".into()),
            ..ClientConfig::default()
        };
        let translator = Translator::new(
            ChatClient::new(config).unwrap(),
            None,
            TranslatorOptions::default(),
        );
        let err = translator.translate("clip-7", &labels(&["A"])).unwrap_err();
        assert!(matches!(err, TranslateError::MissingApiKey { .. }));
        assert_eq!(err.video_id(), Some("clip-7"));
        assert_eq!(translator.client().requests_sent(), 0);
    }

    #[test]
    fn empty_glosses_skip_the_request() {
        let config = ClientConfig::local("http://127.0.0.1:9/none");
        let translator = Translator::new(
            ChatClient::new(config).unwrap(),
            None,
            TranslatorOptions::default(),
        );
        let record = translator.translate("v", &[]).unwrap();
        assert!(record.hypothesis.is_no_translation());
        assert_eq!(translator.client().requests_sent(), 0);
    }
}

//! A small local chat-completion server for offline runs and tests.
//!
//! It speaks just enough HTTP/1.1 to answer chat-completion POSTs, records
//! every request, and tracks how many requests were in flight at once.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};
use std::time::Duration;

use serde_json::json;

#[derive(Debug, Clone, PartialEq)]
pub struct StubRequest {
    pub model: String,
    pub system: String,
    pub user: String,
    pub temperature: Option<f64>,
    pub authorization: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StubReply {
    pub status: u16,
    pub body: String,
}

impl StubReply {
    /// A 200 answer carrying `content` as the assistant message.
    pub fn completion(content: &str) -> Self {
        let body = json!({
            "id": "stub",
            "object": "chat.completion",
            "choices": [{
                "index": 0,
                "message": {"role": "assistant", "content": content},
                "finish_reason": "stop",
            }],
        });
        Self {
            status: 200,
            body: body.to_string(),
        }
    }

    pub fn error(status: u16) -> Self {
        Self {
            status,
            body: json!({"error": {"message": "stub error"}}).to_string(),
        }
    }
}

/// Deterministic stand-in for a language model: turns `FAMILIE ESSEN` into
/// `Familie essen.` and an empty message into `No Translation.`.
pub fn echo_sentence(user: &str) -> String {
    let lower = user.trim().to_lowercase();
    let mut chars = lower.chars();
    match chars.next() {
        None => "No Translation.".to_owned(),
        Some(first) => format!("{}{}.", first.to_uppercase(), chars.as_str()),
    }
}

type Handler = dyn Fn(&StubRequest, usize) -> StubReply + Send + Sync;

#[derive(Default)]
struct Stats {
    calls: AtomicUsize,
    in_flight: AtomicUsize,
    max_in_flight: AtomicUsize,
    log: Mutex<Vec<StubRequest>>,
}

pub struct StubServer {
    addr: SocketAddr,
    stats: Arc<Stats>,
    shutdown: Arc<AtomicBool>,
    accept_thread: Option<JoinHandle<()>>,
}

impl StubServer {
    /// Starts a server whose answers come from `handler`, called with the
    /// parsed request and its zero-based arrival index.
    pub fn start<F>(handler: F) -> io::Result<Self>
    where
        F: Fn(&StubRequest, usize) -> StubReply + Send + Sync + 'static,
    {
        Self::start_with_delay(handler, Duration::ZERO)
    }

    /// Like [`StubServer::start`], holding every request for `delay` before
    /// answering.
    pub fn start_with_delay<F>(handler: F, delay: Duration) -> io::Result<Self>
    where
        F: Fn(&StubRequest, usize) -> StubReply + Send + Sync + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let stats = Arc::new(Stats::default());
        let shutdown = Arc::new(AtomicBool::new(false));
        let handler: Arc<Handler> = Arc::new(handler);

        let accept_thread = {
            let stats = Arc::clone(&stats);
            let shutdown = Arc::clone(&shutdown);
            thread::spawn(move || {
                for stream in listener.incoming() {
                    if shutdown.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let stats = Arc::clone(&stats);
                    let handler = Arc::clone(&handler);
                    thread::spawn(move || {
                        let _ = serve(stream, &stats, handler.as_ref(), delay);
                    });
                }
            })
        };
        Ok(Self {
            addr,
            stats,
            shutdown,
            accept_thread: Some(accept_thread),
        })
    }

    /// Answers every request with [`echo_sentence`] of the user message.
    pub fn echo() -> io::Result<Self> {
        Self::start(|req, _| StubReply::completion(&echo_sentence(&req.user)))
    }

    /// Answers every request with the same sentence.
    pub fn fixed(content: impl Into<String>) -> io::Result<Self> {
        let content = content.into();
        Self::start(move |_, _| StubReply::completion(&content))
    }

    /// Replays `replies` in arrival order, repeating the last one.
    pub fn scripted(replies: Vec<StubReply>) -> io::Result<Self> {
        assert!(!replies.is_empty(), "scripted stub needs at least one reply");
        Self::start(move |_, idx| replies[idx.min(replies.len() - 1)].clone())
    }

    pub fn url(&self) -> String {
        format!("http://{}/v1/chat/completions", self.addr)
    }

    /// Requests received so far.
    pub fn calls(&self) -> usize {
        self.stats.calls.load(Ordering::SeqCst)
    }

    pub fn max_in_flight(&self) -> usize {
        self.stats.max_in_flight.load(Ordering::SeqCst)
    }

    pub fn requests(&self) -> Vec<StubRequest> {
        self.stats.log.lock().unwrap().clone()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        // wake the accept loop
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.accept_thread.take() {
            let _ = handle.join();
        }
    }
}

fn serve(stream: TcpStream, stats: &Stats, handler: &Handler, delay: Duration) -> io::Result<()> {
    stream.set_read_timeout(Some(Duration::from_secs(10)))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let Some(body) = read_request_body(&mut reader)? else {
        return Ok(());
    };

    let current = stats.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
    stats.max_in_flight.fetch_max(current, Ordering::SeqCst);
    let idx = stats.calls.fetch_add(1, Ordering::SeqCst);

    let reply = match parse_chat_request(&body.0, body.1) {
        Some(request) => {
            stats.log.lock().unwrap().push(request.clone());
            if !delay.is_zero() {
                thread::sleep(delay);
            }
            handler(&request, idx)
        }
        None => StubReply::error(400),
    };
    let result = write_reply(stream, &reply);
    stats.in_flight.fetch_sub(1, Ordering::SeqCst);
    result
}

/// Returns the body and the `Authorization` header, or `None` if the peer
/// closed without sending a request.
fn read_request_body<R: BufRead>(reader: &mut R) -> io::Result<Option<(Vec<u8>, Option<String>)>> {
    let mut request_line = String::new();
    if reader.read_line(&mut request_line)? == 0 {
        return Ok(None);
    }
    let mut content_length = None;
    let mut chunked = false;
    let mut authorization = None;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            let value = value.trim();
            match name.trim().to_ascii_lowercase().as_str() {
                "content-length" => content_length = value.parse::<usize>().ok(),
                "transfer-encoding" => chunked = value.eq_ignore_ascii_case("chunked"),
                "authorization" => authorization = Some(value.to_owned()),
                _ => {}
            }
        }
    }
    let mut body = Vec::new();
    if chunked {
        loop {
            let mut size_line = String::new();
            reader.read_line(&mut size_line)?;
            let size = usize::from_str_radix(size_line.trim().split(';').next().unwrap_or("0"), 16)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            let mut chunk = vec![0; size + 2];
            reader.read_exact(&mut chunk)?;
            if size == 0 {
                break;
            }
            body.extend_from_slice(&chunk[..size]);
        }
    } else if let Some(len) = content_length {
        body.resize(len, 0);
        reader.read_exact(&mut body)?;
    }
    Ok(Some((body, authorization)))
}

fn parse_chat_request(body: &[u8], authorization: Option<String>) -> Option<StubRequest> {
    let value: serde_json::Value = serde_json::from_slice(body).ok()?;
    let messages = value.get("messages")?.as_array()?;
    let content_of = |role: &str| {
        messages
            .iter()
            .find(|m| m.get("role").and_then(|r| r.as_str()) == Some(role))
            .and_then(|m| m.get("content"))
            .and_then(|c| c.as_str())
            .map(str::to_owned)
    };
    Some(StubRequest {
        model: value.get("model")?.as_str()?.to_owned(),
        system: content_of("system").unwrap_or_default(),
        user: content_of("user")?,
        temperature: value.get("temperature").and_then(|t| t.as_f64()),
        authorization,
    })
}

fn write_reply(mut stream: TcpStream, reply: &StubReply) -> io::Result<()> {
    let reason = match reply.status {
        200 => "OK",
        400 => "Bad Request",
        401 => "Unauthorized",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    };
    write!(
        stream,
        "HTTP/1.1 {} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
        reply.status,
        reply.body.len(),
        reply.body
    )?;
    stream.flush()
}

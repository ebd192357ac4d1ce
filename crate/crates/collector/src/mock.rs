//! Bundled mock of the token and search endpoints, for tests and demos.
//!
//! Time comes from a shared [`Clock`], so with a [`SimClock`](crate::SimClock)
//! rate-limit windows pass instantly. Every search request is logged with the
//! time and window it arrived in.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use serde_json::{json, Value};
use tiny_http::{Header, Method, Response, Server};
use twexplore::Tweet;

use crate::auth::basic_payload;
use crate::clock::Clock;

pub const TOKEN_PATH: &str = "/oauth2/token";
pub const SEARCH_PATH: &str = "/1.1/search/tweets.json";

#[derive(Debug, Clone)]
pub struct MockConfig {
    pub consumer_key: String,
    pub consumer_secret: String,
    pub token: String,
    /// Largest page served, whatever `count` asks for.
    pub page_size: usize,
    /// Requests allowed per window; `None` means unlimited.
    pub window_limit: Option<u32>,
    pub window_secs: i64,
    /// Send `x-rate-limit-*` headers.
    pub rate_headers: bool,
    /// Include `search_metadata.next_results` when more pages exist.
    pub search_metadata: bool,
    /// Answer this many search requests with 503 before serving.
    pub fail_first: usize,
    /// Reject every token request with 403.
    pub reject_auth: bool,
    /// Serve ids up to `max_id + 1`, repeating the previous page's oldest
    /// status the way a cursor off by one would.
    pub overlap_pages: bool,
}

impl Default for MockConfig {
    fn default() -> Self {
        MockConfig {
            consumer_key: "key".into(),
            consumer_secret: "secret".into(),
            token: "AAAA".into(),
            page_size: 100,
            window_limit: None,
            window_secs: 15 * 60,
            rate_headers: true,
            search_metadata: true,
            fail_first: 0,
            reject_auth: false,
            overlap_pages: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoggedRequest {
    pub at: i64,
    /// Index of the rate-limit window the request fell in.
    pub window: i64,
    pub query: Option<String>,
    pub max_id: Option<u64>,
    pub status: u16,
    pub served: usize,
}

struct State {
    config: MockConfig,
    /// Statuses sorted by id, newest first.
    statuses: Vec<(u64, Value)>,
    clock: Arc<dyn Clock>,
    epoch: i64,
    per_window: BTreeMap<i64, u32>,
    failures_left: usize,
    log: Vec<LoggedRequest>,
}

pub struct MockSearchServer {
    server: Arc<Server>,
    addr: SocketAddr,
    state: Arc<Mutex<State>>,
    worker: Option<JoinHandle<()>>,
}

fn header(name: &str, value: impl ToString) -> Header {
    Header::from_bytes(name.as_bytes(), value.to_string().as_bytes()).expect("valid header")
}

fn json_response(status: u16, body: Value) -> Response<std::io::Cursor<Vec<u8>>> {
    Response::from_string(body.to_string())
        .with_status_code(status)
        .with_header(header("Content-Type", "application/json"))
}

impl MockSearchServer {
    /// Serve `tweets` on an ephemeral localhost port.
    pub fn start(tweets: &[Tweet], config: MockConfig, clock: Arc<dyn Clock>) -> std::io::Result<Self> {
        Self::start_on("127.0.0.1:0", tweets, config, clock)
    }

    pub fn start_on(addr: &str, tweets: &[Tweet], config: MockConfig, clock: Arc<dyn Clock>) -> std::io::Result<Self> {
        let server = Arc::new(Server::http(addr).map_err(std::io::Error::other)?);
        let addr = server
            .server_addr()
            .to_ip()
            .ok_or_else(|| std::io::Error::other("mock server is not bound to an IP address"))?;
        let mut statuses: Vec<(u64, Value)> = tweets.iter().map(|t| (t.id, t.to_status_json())).collect();
        statuses.sort_by_key(|s| std::cmp::Reverse(s.0));
        statuses.dedup_by_key(|s| s.0);
        let state = Arc::new(Mutex::new(State {
            failures_left: config.fail_first,
            config,
            statuses,
            epoch: clock.now(),
            clock,
            per_window: BTreeMap::new(),
            log: Vec::new(),
        }));
        let worker = {
            let (server, state) = (Arc::clone(&server), Arc::clone(&state));
            std::thread::spawn(move || {
                for request in server.incoming_requests() {
                    let response = state.lock().expect("mock state").handle(&request);
                    if let Err(e) = request.respond(response) {
                        log::warn!("mock server failed to respond: {e}");
                    }
                }
            })
        };
        Ok(MockSearchServer { server, addr, state, worker: Some(worker) })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn search_url(&self) -> String {
        format!("http://{}{SEARCH_PATH}", self.addr)
    }

    pub fn auth_url(&self) -> String {
        format!("http://{}{TOKEN_PATH}", self.addr)
    }

    /// Search requests received so far, in arrival order.
    pub fn requests(&self) -> Vec<LoggedRequest> {
        self.state.lock().expect("mock state").log.clone()
    }

    /// Search requests per window index, rejected ones included.
    pub fn requests_per_window(&self) -> BTreeMap<i64, usize> {
        let mut counts = BTreeMap::new();
        for r in self.requests() {
            *counts.entry(r.window).or_default() += 1;
        }
        counts
    }
}

impl Drop for MockSearchServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

impl State {
    fn handle(&mut self, request: &tiny_http::Request) -> Response<std::io::Cursor<Vec<u8>>> {
        let url = url::Url::parse(&format!("http://mock{}", request.url()));
        let Ok(url) = url else {
            return json_response(400, json!({"errors": [{"message": "bad request"}]}));
        };
        let auth = request
            .headers()
            .iter()
            .find(|h| h.field.equiv("Authorization"))
            .map(|h| h.value.as_str().to_string())
            .unwrap_or_default();
        match (request.method(), url.path()) {
            (Method::Post, TOKEN_PATH) => self.token(&auth),
            (Method::Get, SEARCH_PATH) => self.search(&url, &auth),
            _ => json_response(404, json!({"errors": [{"message": "not found"}]})),
        }
    }

    fn token(&self, auth: &str) -> Response<std::io::Cursor<Vec<u8>>> {
        let expected = format!("Basic {}", basic_payload(&self.config.consumer_key, &self.config.consumer_secret));
        if self.config.reject_auth || auth != expected {
            return json_response(403, json!({"errors": [{"code": 99, "message": "unable to verify credentials"}]}));
        }
        json_response(200, json!({"token_type": "bearer", "access_token": self.config.token}))
    }

    fn search(&mut self, url: &url::Url, auth: &str) -> Response<std::io::Cursor<Vec<u8>>> {
        let params: BTreeMap<String, String> = url.query_pairs().into_owned().collect();
        let now = self.clock.now();
        let window = (now - self.epoch).div_euclid(self.config.window_secs);
        let reset = self.epoch + (window + 1) * self.config.window_secs;
        let max_id = params.get("max_id").and_then(|v| v.parse::<u64>().ok());
        let upper = max_id.map(|m| if self.config.overlap_pages { m.saturating_add(1) } else { m });
        let mut entry = LoggedRequest { at: now, window, query: params.get("q").cloned(), max_id, status: 200, served: 0 };

        if auth != format!("Bearer {}", self.config.token) {
            entry.status = 401;
            self.log.push(entry);
            return json_response(401, json!({"errors": [{"code": 89, "message": "invalid or expired token"}]}));
        }
        if self.failures_left > 0 {
            self.failures_left -= 1;
            entry.status = 503;
            self.log.push(entry);
            return json_response(503, json!({"errors": [{"message": "over capacity"}]}));
        }
        let used = self.per_window.entry(window).or_default();
        let limit = self.config.window_limit;
        let rate = |r: Response<std::io::Cursor<Vec<u8>>>, remaining: u32| match limit {
            Some(l) if self.config.rate_headers => r
                .with_header(header("x-rate-limit-limit", l))
                .with_header(header("x-rate-limit-remaining", remaining))
                .with_header(header("x-rate-limit-reset", reset)),
            _ => r,
        };
        if limit.is_some_and(|l| *used >= l) {
            entry.status = 429;
            self.log.push(entry);
            let body = json!({"errors": [{"code": 88, "message": "rate limit exceeded"}]});
            return rate(json_response(429, body), 0);
        }
        *used += 1;
        let remaining = limit.map_or(u32::MAX, |l| l - *used);

        let count = params.get("count").and_then(|c| c.parse::<usize>().ok()).unwrap_or(15).clamp(1, self.config.page_size);
        let older: Vec<&(u64, Value)> = self.statuses.iter().filter(|(id, _)| upper.is_none_or(|m| *id <= m)).collect();
        let page: Vec<Value> = older.iter().take(count).map(|(_, v)| v.clone()).collect();
        entry.served = page.len();
        let mut metadata = json!({"count": count, "query": params.get("q").cloned().unwrap_or_default()});
        if older.len() > count {
            let next = older[count - 1].0 - 1;
            let q: String = url::form_urlencoded::byte_serialize(params.get("q").map_or("", String::as_str).as_bytes()).collect();
            metadata["next_results"] = json!(format!("?max_id={next}&q={q}&count={count}&include_entities=1"));
        }
        let mut body = json!({"statuses": page});
        if self.config.search_metadata {
            body["search_metadata"] = metadata;
        }
        self.log.push(entry);
        rate(json_response(200, body), remaining)
    }
}

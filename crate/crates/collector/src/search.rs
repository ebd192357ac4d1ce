//! One page of search results and the rate-limit budget it consumes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CollectorError;

/// Historical search budget: 180 requests per 15-minute window.
pub const DEFAULT_WINDOW_LIMIT: u32 = 180;
pub const DEFAULT_WINDOW_SECS: i64 = 15 * 60;
/// Largest page the search endpoint serves.
pub const PAGE_SIZE: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateBudget {
    pub remaining: u32,
    /// Epoch seconds at which the window resets.
    pub window_reset: i64,
    pub window_limit: u32,
}

impl RateBudget {
    pub fn new(window_limit: u32, window_reset: i64) -> Self {
        let window_limit = window_limit.max(1);
        RateBudget { remaining: window_limit, window_reset, window_limit }
    }

    /// A request may go out now.
    pub fn allows(&self, now: i64) -> bool {
        self.remaining > 0 || now >= self.window_reset
    }

    /// Start a fresh window when the current one is over.
    pub fn roll(&mut self, now: i64, window_secs: i64) {
        if now >= self.window_reset {
            self.remaining = self.window_limit;
            self.window_reset = now + window_secs;
        }
    }

    fn update(&mut self, headers: &RateHeaders) {
        match (headers.remaining, headers.reset) {
            (Some(remaining), Some(reset)) => {
                if let Some(limit) = headers.limit {
                    self.window_limit = limit.max(1);
                }
                self.window_limit = self.window_limit.max(remaining);
                self.remaining = remaining;
                self.window_reset = reset;
            }
            _ => self.remaining = self.remaining.saturating_sub(1),
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct RateHeaders {
    limit: Option<u32>,
    remaining: Option<u32>,
    reset: Option<i64>,
}

impl RateHeaders {
    fn read(r: &ureq::Response) -> Self {
        let num = |name: &str| r.header(name).and_then(|v| v.trim().parse::<i64>().ok());
        RateHeaders {
            limit: num("x-rate-limit-limit").map(|v| v.clamp(0, u32::MAX as i64) as u32),
            remaining: num("x-rate-limit-remaining").map(|v| v.clamp(0, u32::MAX as i64) as u32),
            reset: num("x-rate-limit-reset"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchPage {
    /// Raw statuses, newest first as served.
    pub statuses: Vec<Value>,
    /// `min id - 1`, absent when the page is empty.
    pub next_max_id: Option<u64>,
    /// Whether the server advertised a further page. `None` when the
    /// response carries no `search_metadata`.
    pub has_more: Option<bool>,
}

/// Tweet id of a raw status, preferring the string form.
pub fn status_id(status: &Value) -> Option<u64> {
    match status.get("id_str").and_then(Value::as_str) {
        Some(s) => s.parse().ok(),
        None => status.get("id").and_then(Value::as_u64),
    }
}

#[derive(Deserialize)]
struct SearchResponse {
    statuses: Vec<Value>,
    search_metadata: Option<Value>,
}

/// Fetch up to [`PAGE_SIZE`] statuses with ids at most `max_id`, updating
/// `budget` from the response headers or, without them, by one request.
pub fn search_page(
    agent: &ureq::Agent,
    endpoint: &str,
    bearer: &str,
    query: &str,
    max_id: Option<u64>,
    budget: &mut RateBudget,
) -> Result<SearchPage, CollectorError> {
    let mut request = agent
        .get(endpoint)
        .set("Authorization", &format!("Bearer {bearer}"))
        .query("q", query)
        .query("count", &PAGE_SIZE.to_string())
        .query("tweet_mode", "extended");
    if let Some(id) = max_id {
        request = request.query("max_id", &id.to_string());
    }
    let response = match request.call() {
        Ok(r) => r,
        Err(ureq::Error::Status(429, r)) => {
            let headers = RateHeaders::read(&r);
            budget.remaining = 0;
            if let Some(reset) = headers.reset {
                budget.window_reset = reset;
            }
            return Err(CollectorError::RateLimited { reset: headers.reset });
        }
        Err(ureq::Error::Status(code @ (401 | 403), _)) => return Err(CollectorError::Auth { status: code }),
        Err(e) => return Err(CollectorError::from_ureq(e)),
    };
    budget.update(&RateHeaders::read(&response));
    let body = response.into_string().map_err(|e| CollectorError::Transport(e.to_string()))?;
    let parsed: SearchResponse =
        serde_json::from_str(&body).map_err(|e| CollectorError::Protocol(format!("search response: {e}")))?;

    let mut min_id: Option<u64> = None;
    for s in &parsed.statuses {
        let id = status_id(s).ok_or_else(|| CollectorError::Protocol("status without an id".into()))?;
        min_id = Some(min_id.map_or(id, |m| m.min(id)));
    }
    let has_more = parsed
        .search_metadata
        .as_ref()
        .map(|m| m.get("next_results").and_then(Value::as_str).is_some_and(|s| !s.is_empty()));
    Ok(SearchPage { next_max_id: min_id.and_then(|m| m.checked_sub(1)), statuses: parsed.statuses, has_more })
}

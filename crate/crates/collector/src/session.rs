//! The collection loop: paginate to exhaustion, pace, deduplicate, persist.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::auth::{obtain_bearer, ApiCredentials};
use crate::clock::Clock;
use crate::search::{search_page, status_id, RateBudget, DEFAULT_WINDOW_LIMIT, DEFAULT_WINDOW_SECS};
use crate::CollectorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub base: Duration,
    pub cap: Duration,
    pub max_attempts: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { base: Duration::from_secs(2), cap: Duration::from_secs(60), max_attempts: 5 }
    }
}

impl RetryPolicy {
    /// Wait after failed attempt number `attempt` (1-based).
    pub fn backoff(&self, attempt: u32) -> Duration {
        let factor = 1u32.checked_shl(attempt.saturating_sub(1)).unwrap_or(u32::MAX);
        self.base.saturating_mul(factor).min(self.cap)
    }

    /// Run `f`, retrying transport errors.
    pub fn run<T>(&self, clock: &dyn Clock, mut f: impl FnMut() -> Result<T, CollectorError>) -> Result<T, CollectorError> {
        let mut attempt = 1;
        loop {
            match f() {
                Err(CollectorError::Transport(msg)) if attempt < self.max_attempts => {
                    let wait = self.backoff(attempt);
                    log::warn!("attempt {attempt} failed ({msg}); retrying in {wait:?}");
                    clock.sleep(wait);
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CollectorConfig {
    pub endpoint: String,
    pub auth_url: String,
    /// Budget assumed until the server reports its own.
    pub window_limit: u32,
    pub window_secs: i64,
    pub retry: RetryPolicy,
    pub timeout: Duration,
}

impl CollectorConfig {
    pub fn new(endpoint: impl Into<String>, auth_url: impl Into<String>) -> Self {
        CollectorConfig {
            endpoint: endpoint.into(),
            auth_url: auth_url.into(),
            window_limit: DEFAULT_WINDOW_LIMIT,
            window_secs: DEFAULT_WINDOW_SECS,
            retry: RetryPolicy::default(),
            timeout: Duration::from_secs(30),
        }
    }

    pub fn agent(&self) -> ureq::Agent {
        ureq::AgentBuilder::new().timeout(self.timeout).build()
    }
}

/// Summary of one collection run, also written next to the output as
/// `<output>.meta.json`. Times are epoch seconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionSession {
    pub query: String,
    pub started_at: i64,
    pub finished_at: i64,
    pub pages_fetched: u64,
    pub tweets_written: u64,
    pub duplicates_skipped: u64,
    pub oldest_id: Option<u64>,
    pub newest_id: Option<u64>,
    /// Times the collector waited for a rate-limit window to reset.
    #[serde(default)]
    pub rate_limit_waits: u64,
}

impl CollectionSession {
    fn new(query: &str, now: i64) -> Self {
        CollectionSession {
            query: query.to_string(),
            started_at: now,
            finished_at: now,
            pages_fetched: 0,
            tweets_written: 0,
            duplicates_skipped: 0,
            oldest_id: None,
            newest_id: None,
            rate_limit_waits: 0,
        }
    }

    fn record(&mut self, id: u64) {
        self.tweets_written += 1;
        self.oldest_id = Some(self.oldest_id.map_or(id, |o| o.min(id)));
        self.newest_id = Some(self.newest_id.map_or(id, |n| n.max(id)));
    }
}

/// Path of the session sidecar for an output file.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn read_sidecar(output: &Path) -> Option<CollectionSession> {
    let file = File::open(sidecar_path(output)).ok()?;
    serde_json::from_reader(file).ok()
}

/// Collect every status the endpoint serves for `query`, appending them to
/// `sink` as JSON lines.
///
/// Pages are requested newest first with a `max_id` cursor. Collection stops
/// on an empty page, or when the server's `search_metadata` says no further
/// page exists. An exhausted budget means sleeping until the window resets.
pub fn collect(
    query: &str,
    sink: &Path,
    config: &CollectorConfig,
    credentials: &ApiCredentials,
    clock: &dyn Clock,
) -> Result<CollectionSession, CollectorError> {
    let agent = config.agent();
    let mut session = CollectionSession::new(query, clock.now());
    let bearer = config.retry.run(clock, || obtain_bearer(&agent, credentials, &config.auth_url))?;
    let mut out = BufWriter::new(OpenOptions::new().create(true).append(true).open(sink)?);
    let mut budget = RateBudget::new(config.window_limit, clock.now() + config.window_secs);
    let mut seen = HashSet::new();
    let mut max_id: Option<u64> = None;

    loop {
        let now = clock.now();
        if !budget.allows(now) {
            let wait = budget.window_reset - now;
            log::info!("rate budget exhausted; sleeping {wait}s until the window resets");
            clock.sleep(Duration::from_secs(wait as u64));
            session.rate_limit_waits += 1;
        }
        budget.roll(clock.now(), config.window_secs);

        let result = config.retry.run(clock, || search_page(&agent, &config.endpoint, &bearer, query, max_id, &mut budget));
        let page = match result {
            Ok(page) => page,
            Err(CollectorError::RateLimited { reset }) => {
                // Never spin: wait at least a second even if the reset is stale.
                let now = clock.now();
                budget.remaining = 0;
                budget.window_reset = reset.unwrap_or(now + config.window_secs).max(now + 1);
                continue;
            }
            Err(e) => {
                out.flush()?;
                return Err(e);
            }
        };
        session.pages_fetched += 1;
        for status in &page.statuses {
            let id = status_id(status).expect("search_page checks ids");
            if !seen.insert(id) {
                session.duplicates_skipped += 1;
                continue;
            }
            serde_json::to_writer(&mut out, status).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
            session.record(id);
        }
        log::debug!("page {}: {} statuses", session.pages_fetched, page.statuses.len());
        if page.statuses.is_empty() || page.has_more == Some(false) {
            break;
        }
        match (page.next_max_id, max_id) {
            (None, _) => break,
            (Some(next), Some(prev)) if next >= prev => {
                return Err(CollectorError::Protocol(format!("cursor did not advance ({next} >= {prev})")));
            }
            (next, _) => max_id = next,
        }
    }
    out.flush()?;
    session.finished_at = clock.now();
    let meta = File::create(sidecar_path(sink))?;
    serde_json::to_writer_pretty(meta, &session).map_err(std::io::Error::from)?;
    Ok(session)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::SimClock;

    #[test]
    fn backoff_doubles_up_to_cap() {
        let p = RetryPolicy::default();
        let waits: Vec<u64> = (1..=7).map(|a| p.backoff(a).as_secs()).collect();
        assert_eq!(waits, vec![2, 4, 8, 16, 32, 60, 60]);
    }

    #[test]
    fn retries_transport_errors_only() {
        let clock = SimClock::starting_at(0);
        let p = RetryPolicy::default();
        let mut calls = 0;
        let r: Result<(), _> = p.run(&clock, || {
            calls += 1;
            Err(CollectorError::Transport("down".into()))
        });
        assert!(matches!(r, Err(CollectorError::Transport(_))));
        assert_eq!(calls, 5);
        assert_eq!(clock.slept(), Duration::from_secs(2 + 4 + 8 + 16));

        let mut calls = 0;
        let r: Result<(), _> = p.run(&clock, || {
            calls += 1;
            Err(CollectorError::Auth { status: 401 })
        });
        assert!(matches!(r, Err(CollectorError::Auth { .. })));
        assert_eq!(calls, 1);
    }

    #[test]
    fn sidecar_sits_next_to_output() {
        assert_eq!(sidecar_path(Path::new("/tmp/x.jsonl")), PathBuf::from("/tmp/x.jsonl.meta.json"));
    }
}

//! Search-API collector: app-only authentication, `max_id` pagination to
//! exhaustion, rate-limit pacing and JSONL persistence. A mock server with
//! the same wire format is bundled for tests and offline demos.

pub mod auth;
pub mod clock;
pub mod mock;
pub mod search;
pub mod session;

pub use auth::{basic_payload, obtain_bearer, ApiCredentials};
pub use clock::{Clock, SimClock, SystemClock};
pub use mock::{MockConfig, MockSearchServer};
pub use search::{search_page, RateBudget, SearchPage};
pub use session::{collect, read_sidecar, sidecar_path, CollectionSession, CollectorConfig, RetryPolicy};

#[derive(Debug, thiserror::Error)]
pub enum CollectorError {
    #[error("authentication failed (HTTP {status})")]
    Auth { status: u16 },
    #[error("invalid credentials: {0}")]
    Credentials(&'static str),
    #[error("rate limited{}", .reset.map(|r| format!(" until {r}")).unwrap_or_default())]
    RateLimited { reset: Option<i64> },
    /// Network failure or server-side error; retried with backoff.
    #[error("transport error: {0}")]
    Transport(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CollectorError {
    fn from_ureq(e: ureq::Error) -> Self {
        match e {
            ureq::Error::Status(code, _) if code >= 500 => CollectorError::Transport(format!("HTTP {code}")),
            ureq::Error::Status(code, r) => CollectorError::Protocol(format!("HTTP {code} from {}", r.get_url())),
            ureq::Error::Transport(t) => CollectorError::Transport(t.to_string()),
        }
    }
}

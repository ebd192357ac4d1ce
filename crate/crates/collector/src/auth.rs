//! Application-only (OAuth2 client credentials) authentication.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::Deserialize;

use crate::CollectorError;

/// RFC 3986 unreserved characters stay as they are.
const ENCODE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

#[derive(Clone, PartialEq, Eq)]
pub struct ApiCredentials {
    pub consumer_key: String,
    pub consumer_secret: String,
    /// A ready token skips the token exchange.
    pub bearer_token: Option<String>,
}

impl std::fmt::Debug for ApiCredentials {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ApiCredentials")
            .field("consumer_key", &self.consumer_key)
            .field("consumer_secret", &"<redacted>")
            .field("bearer_token", &self.bearer_token.as_ref().map(|_| "<redacted>"))
            .finish()
    }
}

impl ApiCredentials {
    pub fn new(key: impl Into<String>, secret: impl Into<String>) -> Result<Self, CollectorError> {
        let c = ApiCredentials { consumer_key: key.into(), consumer_secret: secret.into(), bearer_token: None };
        c.validate()?;
        Ok(c)
    }

    pub fn from_bearer(token: impl Into<String>) -> Result<Self, CollectorError> {
        let c = ApiCredentials { consumer_key: String::new(), consumer_secret: String::new(), bearer_token: Some(token.into()) };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CollectorError> {
        match &self.bearer_token {
            Some(t) if !t.is_empty() => Ok(()),
            Some(_) => Err(CollectorError::Credentials("bearer token is empty")),
            None if self.consumer_key.is_empty() || self.consumer_secret.is_empty() => {
                Err(CollectorError::Credentials("consumer key and secret are required"))
            }
            None => Ok(()),
        }
    }

    /// Value of the `Authorization` header for the token request.
    pub fn basic_authorization(&self) -> String {
        format!("Basic {}", basic_payload(&self.consumer_key, &self.consumer_secret))
    }
}

/// Base64 of `key:secret`, each part percent-encoded first.
pub fn basic_payload(key: &str, secret: &str) -> String {
    let joined = format!("{}:{}", utf8_percent_encode(key, ENCODE), utf8_percent_encode(secret, ENCODE));
    STANDARD.encode(joined)
}

#[derive(Deserialize)]
struct TokenResponse {
    token_type: String,
    access_token: String,
}

/// Exchange the consumer key and secret for a bearer token.
pub fn obtain_bearer(agent: &ureq::Agent, credentials: &ApiCredentials, auth_url: &str) -> Result<String, CollectorError> {
    credentials.validate()?;
    if let Some(token) = &credentials.bearer_token {
        return Ok(token.clone());
    }
    let response = agent
        .post(auth_url)
        .set("Authorization", &credentials.basic_authorization())
        .set("Content-Type", "application/x-www-form-urlencoded;charset=UTF-8")
        .send_string("grant_type=client_credentials");
    let response = match response {
        Ok(r) => r,
        Err(ureq::Error::Status(code @ (401 | 403), _)) => return Err(CollectorError::Auth { status: code }),
        Err(e) => return Err(CollectorError::from_ureq(e)),
    };
    let body = response.into_string().map_err(|e| CollectorError::Transport(e.to_string()))?;
    let token: TokenResponse =
        serde_json::from_str(&body).map_err(|e| CollectorError::Protocol(format!("token response: {e}")))?;
    if !token.token_type.eq_ignore_ascii_case("bearer") || token.access_token.is_empty() {
        return Err(CollectorError::Protocol(format!("unexpected token type `{}`", token.token_type)));
    }
    Ok(token.access_token)
}

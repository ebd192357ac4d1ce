//! Collector settings from a key-value file and credentials from the environment.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use twexplore_collector::ApiCredentials;

pub const DEFAULT_ENDPOINT: &str = "https://api.twitter.com/1.1/search/tweets.json";
pub const DEFAULT_AUTH_URL: &str = "https://api.twitter.com/oauth2/token";

/// `key = value` lines; blank lines and `#` comments are ignored.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`", n + 1);
        };
        let value = value.trim().trim_matches('"');
        out.insert(key.trim().to_ascii_lowercase(), value.to_string());
    }
    Ok(out)
}

pub fn load_config(path: Option<&Path>) -> Result<BTreeMap<String, String>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            parse_key_values(&text).with_context(|| format!("parsing config {}", p.display()))
        }
        None => Ok(BTreeMap::new()),
    }
}

/// Credentials from `<PREFIX>_BEARER_TOKEN` or `<PREFIX>_CONSUMER_KEY` and
/// `<PREFIX>_CONSUMER_SECRET`, falling back to the config file.
pub fn credentials(
    prefix: &str,
    config: &BTreeMap<String, String>,
    env: impl Fn(&str) -> Option<String>,
) -> Result<ApiCredentials> {
    let get = |name: &str| {
        env(&format!("{prefix}_{}", name.to_ascii_uppercase()))
            .or_else(|| config.get(name).cloned())
            .filter(|v| !v.is_empty())
    };
    if let Some(token) = get("bearer_token") {
        return Ok(ApiCredentials::from_bearer(token)?);
    }
    match (get("consumer_key"), get("consumer_secret")) {
        (Some(k), Some(s)) => Ok(ApiCredentials::new(k, s)?),
        _ => bail!(
            "no credentials: set {prefix}_CONSUMER_KEY and {prefix}_CONSUMER_SECRET (or {prefix}_BEARER_TOKEN), \
             or consumer_key/consumer_secret in the config file"
        ),
    }
}

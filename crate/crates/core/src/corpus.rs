//! JSON-lines tweet corpora: parsing, streaming ingest and corpus statistics.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use chrono::{DateTime, TimeZone, Utc};
use serde::Deserialize;
use serde_json::{json, Value};

/// Textual date format used by the platform, e.g. `Wed Oct 10 20:19:24 +0000 2018`.
pub const PLATFORM_DATE_FORMAT: &str = "%a %b %d %H:%M:%S %z %Y";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserRef {
    pub id: u64,
    pub screen_name: String,
    pub followers_count: u64,
    pub friends_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub id: u64,
    /// UTC epoch seconds.
    pub created_at: i64,
    pub text: String,
    pub lang: Option<String>,
    pub author: UserRef,
    /// Hashtags without the leading `#`.
    pub hashtags: Vec<String>,
    pub retweet_of: Option<Box<Tweet>>,
}

impl Tweet {
    pub fn is_retweet(&self) -> bool {
        self.retweet_of.is_some()
    }

    /// Serialize back into the platform status schema, as one JSON value.
    pub fn to_status_json(&self) -> Value {
        let mut status = json!({
            "id": self.id,
            "id_str": self.id.to_string(),
            "created_at": format_platform_date(self.created_at),
            "full_text": self.text,
            "user": {
                "id": self.author.id,
                "id_str": self.author.id.to_string(),
                "screen_name": self.author.screen_name,
                "followers_count": self.author.followers_count,
                "friends_count": self.author.friends_count,
            },
            "entities": {
                "hashtags": self.hashtags.iter().map(|h| json!({ "text": h })).collect::<Vec<_>>(),
            },
        });
        if let Some(lang) = &self.lang {
            status["lang"] = json!(lang);
        }
        if let Some(original) = &self.retweet_of {
            status["retweeted_status"] = original.to_status_json();
        }
        status
    }

    pub fn to_json_line(&self) -> String {
        self.to_status_json().to_string()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing mandatory field `{0}`")]
    MissingField(&'static str),
    #[error("invalid field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("line is not valid UTF-8")]
    Utf8,
}

#[derive(Debug, thiserror::Error)]
#[error("{}{kind}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    /// 1-based line number, when parsing from a file.
    pub line: Option<usize>,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl From<ParseErrorKind> for ParseError {
    fn from(kind: ParseErrorKind) -> Self {
        ParseError { line: None, kind }
    }
}

#[derive(Deserialize)]
struct RawStatus {
    id: Option<u64>,
    id_str: Option<String>,
    created_at: Option<String>,
    full_text: Option<String>,
    text: Option<String>,
    extended_tweet: Option<RawExtended>,
    lang: Option<String>,
    user: Option<RawUser>,
    entities: Option<RawEntities>,
    retweeted_status: Option<Box<RawStatus>>,
}

#[derive(Deserialize)]
struct RawExtended {
    full_text: Option<String>,
}

#[derive(Deserialize)]
struct RawUser {
    id: Option<u64>,
    id_str: Option<String>,
    screen_name: Option<String>,
    followers_count: Option<u64>,
    friends_count: Option<u64>,
}

#[derive(Deserialize)]
struct RawEntities {
    #[serde(default)]
    hashtags: Vec<RawHashtag>,
}

#[derive(Deserialize)]
struct RawHashtag {
    text: String,
}

fn pick_id(
    id_str: Option<&str>,
    id: Option<u64>,
    field: &'static str,
) -> Result<u64, ParseErrorKind> {
    let value = match (id_str, id) {
        (Some(s), _) => s.trim().parse::<u64>().map_err(|e| ParseErrorKind::InvalidField {
            field,
            reason: e.to_string(),
        })?,
        (None, Some(n)) => n,
        (None, None) => return Err(ParseErrorKind::MissingField(field)),
    };
    if value == 0 {
        return Err(ParseErrorKind::InvalidField { field, reason: "id must be positive".into() });
    }
    Ok(value)
}

fn clean_hashtag(raw: &str) -> Option<String> {
    let tag = raw.trim().trim_start_matches(['#', '\u{FF03}']);
    if tag.is_empty() || tag.chars().any(char::is_whitespace) {
        None
    } else {
        Some(tag.to_string())
    }
}

/// Parse a timestamp in the platform's textual format or ISO-8601 into epoch seconds.
pub fn parse_date(s: &str) -> Option<i64> {
    let s = s.trim();
    DateTime::parse_from_str(s, PLATFORM_DATE_FORMAT)
        .or_else(|_| DateTime::parse_from_rfc3339(s))
        .map(|dt| dt.timestamp())
        .ok()
}

pub fn format_platform_date(epoch_secs: i64) -> String {
    match Utc.timestamp_opt(epoch_secs, 0).single() {
        Some(dt) => dt.format(PLATFORM_DATE_FORMAT).to_string(),
        None => epoch_secs.to_string(),
    }
}

pub fn format_iso_date(epoch_secs: i64) -> String {
    match Utc.timestamp_opt(epoch_secs, 0).single() {
        Some(dt) => dt.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        None => epoch_secs.to_string(),
    }
}

fn convert(raw: RawStatus, depth: usize) -> Result<Tweet, ParseErrorKind> {
    let id = pick_id(raw.id_str.as_deref(), raw.id, "id")?;
    let created_raw = raw.created_at.ok_or(ParseErrorKind::MissingField("created_at"))?;
    let created_at = parse_date(&created_raw).ok_or_else(|| ParseErrorKind::InvalidField {
        field: "created_at",
        reason: format!("unrecognised date `{created_raw}`"),
    })?;
    let text = raw
        .full_text
        .or(raw.extended_tweet.and_then(|e| e.full_text))
        .or(raw.text)
        .ok_or(ParseErrorKind::MissingField("text"))?;
    let user = raw.user.ok_or(ParseErrorKind::MissingField("user"))?;
    let screen_name = user
        .screen_name
        .filter(|s| !s.is_empty())
        .ok_or(ParseErrorKind::MissingField("user.screen_name"))?;
    let author = UserRef {
        id: pick_id(user.id_str.as_deref(), user.id, "user.id")?,
        screen_name,
        followers_count: user.followers_count.unwrap_or(0),
        friends_count: user.friends_count.unwrap_or(0),
    };
    let hashtags = raw
        .entities
        .map(|e| e.hashtags.iter().filter_map(|h| clean_hashtag(&h.text)).collect())
        .unwrap_or_default();
    // One nesting level only: a retweet of a retweet attaches to the direct source.
    let retweet_of = match raw.retweeted_status {
        Some(inner) if depth == 0 => Some(Box::new(convert(*inner, depth + 1)?)),
        _ => None,
    };
    Ok(Tweet { id, created_at, text, lang: raw.lang, author, hashtags, retweet_of })
}

/// Parse one status line.
pub fn parse_tweet(line: &str) -> Result<Tweet, ParseError> {
    let raw: RawStatus = serde_json::from_str(line).map_err(ParseErrorKind::Json)?;
    Ok(convert(raw, 0)?)
}

/// Streaming reader over a JSON-lines corpus.
///
/// Malformed lines are logged, counted in [`CorpusReader::skipped`] and
/// skipped. Blank lines are ignored without being counted. Only genuine I/O
/// failures surface as errors.
pub struct CorpusReader<R> {
    reader: R,
    buf: Vec<u8>,
    line_no: usize,
    skipped: usize,
    failed: bool,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R) -> Self {
        CorpusReader { reader, buf: Vec::new(), line_no: 0, skipped: 0, failed: false }
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = io::Result<Tweet>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
            self.line_no += 1;
            let parsed = match std::str::from_utf8(&self.buf) {
                Ok(line) if line.trim().is_empty() => continue,
                Ok(line) => parse_tweet(line),
                Err(_) => Err(ParseError::from(ParseErrorKind::Utf8)),
            };
            match parsed {
                Ok(tweet) => return Some(Ok(tweet)),
                Err(err) => {
                    log::warn!("skipping corpus record: {}", err.at(self.line_no));
                    self.skipped += 1;
                }
            }
        }
    }
}

/// Open a corpus file for streaming.
pub fn read_corpus(path: impl AsRef<Path>) -> io::Result<CorpusReader<BufReader<File>>> {
    Ok(CorpusReader::new(BufReader::new(File::open(path)?)))
}

/// Read a whole corpus into memory, returning the tweets and the number of skipped lines.
pub fn load_corpus(path: impl AsRef<Path>) -> io::Result<(Vec<Tweet>, usize)> {
    let mut reader = read_corpus(path)?;
    let tweets = reader.by_ref().collect::<io::Result<Vec<_>>>()?;
    Ok((tweets, reader.skipped()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimelineSeries {
    /// Bin width in seconds.
    pub bin_width: i64,
    /// `(bin_start, count)`, ascending; interior empty bins are present.
    pub bins: Vec<(i64, u64)>,
}

impl TimelineSeries {
    pub fn total(&self) -> u64 {
        self.bins.iter().map(|&(_, c)| c).sum()
    }
}

/// Histogram of tweet creation times, with bins aligned to multiples of
/// `bin_width` seconds since the epoch.
///
/// # Panics
/// If `bin_width` is not positive.
pub fn timeline<'a>(tweets: impl IntoIterator<Item = &'a Tweet>, bin_width: i64) -> TimelineSeries {
    assert!(bin_width > 0, "bin width must be positive");
    let mut counts: HashMap<i64, u64> = HashMap::new();
    for t in tweets {
        *counts.entry(t.created_at.div_euclid(bin_width)).or_default() += 1;
    }
    let bins = match (counts.keys().min(), counts.keys().max()) {
        (Some(&lo), Some(&hi)) => (lo..=hi)
            .map(|b| (b * bin_width, counts.get(&b).copied().unwrap_or(0)))
            .collect(),
        _ => Vec::new(),
    };
    TimelineSeries { bin_width, bins }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    pub reference_size: usize,
    pub candidate_size: usize,
    pub shared: usize,
    /// `shared / reference_size`, 0 for an empty reference.
    pub containment: f64,
    /// Share of the missing reference tweets that are original tweets.
    pub missing_original_fraction: f64,
    /// Share of the missing reference tweets that are retweets.
    pub missing_retweet_fraction: f64,
}

/// How much of a reference collection a candidate collection recovers.
///
/// Missing tweets (`reference \ candidate`) are classified as original or
/// retweet using `reference_tweets`; missing ids absent from
/// `reference_tweets` count towards neither fraction.
pub fn overlap<'a>(
    reference_ids: &BTreeSet<u64>,
    candidate_ids: &BTreeSet<u64>,
    reference_tweets: impl IntoIterator<Item = &'a Tweet>,
) -> OverlapReport {
    let shared = reference_ids.intersection(candidate_ids).count();
    let missing: BTreeSet<u64> = reference_ids.difference(candidate_ids).copied().collect();
    let mut kind: HashMap<u64, bool> = HashMap::new();
    for t in reference_tweets {
        if missing.contains(&t.id) {
            kind.insert(t.id, t.is_retweet());
        }
    }
    let missing_retweets = kind.values().filter(|&&rt| rt).count();
    let missing_originals = kind.len() - missing_retweets;
    let frac = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    OverlapReport {
        reference_size: reference_ids.len(),
        candidate_size: candidate_ids.len(),
        shared,
        containment: frac(shared, reference_ids.len()),
        missing_original_fraction: frac(missing_originals, missing.len()),
        missing_retweet_fraction: frac(missing_retweets, missing.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str =
        r#"{"id_str":"1","created_at":"Wed Oct 10 20:19:24 +0000 2018","text":"hi","user":{"id_str":"2","screen_name":"u"},"entities":{}}"#;

    #[test]
    fn minimal_record() {
        let t = parse_tweet(MINIMAL).unwrap();
        assert_eq!(t.id, 1);
        assert_eq!(t.author.id, 2);
        assert!(t.hashtags.is_empty());
        assert!(t.retweet_of.is_none());
    }

    #[test]
    fn prefers_full_text() {
        let line = r#"{"id":5,"created_at":"2018-10-10T20:19:24Z","text":"short…","full_text":"the long one","user":{"id":7,"screen_name":"a"}}"#;
        assert_eq!(parse_tweet(line).unwrap().text, "the long one");
    }

    #[test]
    fn missing_mandatory_fields() {
        for (line, field) in [
            (r#"{"created_at":"2018-10-10T20:19:24Z","text":"x","user":{"id":7,"screen_name":"a"}}"#, "id"),
            (r#"{"id":1,"text":"x","user":{"id":7,"screen_name":"a"}}"#, "created_at"),
            (r#"{"id":1,"created_at":"2018-10-10T20:19:24Z","user":{"id":7,"screen_name":"a"}}"#, "text"),
            (r#"{"id":1,"created_at":"2018-10-10T20:19:24Z","text":"x"}"#, "user"),
        ] {
            match parse_tweet(line) {
                Err(ParseError { kind: ParseErrorKind::MissingField(f), .. }) => assert_eq!(f, field),
                other => panic!("expected missing {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_unknown_date_format() {
        let line = r#"{"id":1,"created_at":"10/10/2018","text":"x","user":{"id":7,"screen_name":"a"}}"#;
        assert!(matches!(
            parse_tweet(line).unwrap_err().kind,
            ParseErrorKind::InvalidField { field: "created_at", .. }
        ));
    }

    #[test]
    fn hashtags_are_cleaned() {
        let line = r##"{"id":1,"created_at":"2018-10-10T20:19:24Z","text":"x","user":{"id":7,"screen_name":"a"},"entities":{"hashtags":[{"text":"#Brexit"},{"text":"two words"},{"text":"ok"}]},"extra":{"ignored":true}}"##;
        assert_eq!(parse_tweet(line).unwrap().hashtags, vec!["Brexit", "ok"]);
    }

    #[test]
    fn nesting_is_one_level() {
        let line = r#"{"id":3,"created_at":"2018-10-10T20:19:24Z","text":"RT","user":{"id":7,"screen_name":"a"},
            "retweeted_status":{"id":2,"created_at":"2018-10-10T20:00:00Z","text":"RT","user":{"id":8,"screen_name":"b"},
              "retweeted_status":{"id":1,"created_at":"2018-10-10T19:00:00Z","text":"orig","user":{"id":9,"screen_name":"c"}}}}"#;
        let t = parse_tweet(&line.replace('\n', "")).unwrap();
        let rt = t.retweet_of.as_ref().unwrap();
        assert_eq!(rt.author.id, 8);
        assert!(rt.retweet_of.is_none());
    }

    #[test]
    fn reader_skips_and_counts() {
        let data = format!("{MINIMAL}\n{{not json\n\n{MINIMAL}\n{MINIMAL}");
        let mut reader = CorpusReader::new(data.as_bytes());
        let tweets: Vec<_> = reader.by_ref().map(Result::unwrap).collect();
        assert_eq!(tweets.len(), 3);
        assert_eq!(reader.skipped(), 1);
    }

    #[test]
    fn reader_on_empty_input() {
        let mut reader = CorpusReader::new(&b""[..]);
        assert_eq!(reader.by_ref().count(), 0);
        assert_eq!(reader.skipped(), 0);
    }

    fn at(created_at: i64) -> Tweet {
        let mut t = parse_tweet(MINIMAL).unwrap();
        t.created_at = created_at;
        t
    }

    #[test]
    fn timeline_direct_binning() {
        let tweets = [at(0), at(10), at(3610)];
        let series = timeline(&tweets, 3600);
        assert_eq!(series.bins, vec![(0, 2), (3600, 1)]);
        assert!(timeline(&[], 3600).bins.is_empty());
    }

    #[test]
    fn timeline_fills_gaps_and_handles_negative_times() {
        let tweets = [at(-5), at(25)];
        let series = timeline(&tweets, 10);
        assert_eq!(series.bins, vec![(-10, 1), (0, 0), (10, 0), (20, 1)]);
    }

    #[test]
    fn overlap_basics() {
        let reference: BTreeSet<u64> = (1..=10).collect();
        let candidate: BTreeSet<u64> = (1..=8).collect();
        let r = overlap(&reference, &candidate, std::iter::empty());
        assert_eq!(r.containment, 0.8);
        assert_eq!(r.shared, 8);

        let same = overlap(&reference, &reference, std::iter::empty());
        assert_eq!(same.containment, 1.0);
        assert_eq!(same.missing_original_fraction, 0.0);
        assert_eq!(same.missing_retweet_fraction, 0.0);

        let empty = overlap(&BTreeSet::new(), &candidate, std::iter::empty());
        assert_eq!(empty.containment, 0.0);
    }
}

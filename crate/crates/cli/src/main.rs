//! `twexplore`: collect tweets, build retweet or hashtag networks, detect
//! communities, lay them out and export them for the explorer UI.
//!
//! Graph-producing steps read and write explorer documents, so the stages
//! chain through files:
//!
//! ```text
//! twexplore build  --input corpus.jsonl --type retweet --output graph.json
//! twexplore detect --input graph.json
//! twexplore layout --input graph.json
//! twexplore export --input graph.json --output graph.graphml
//! ```
//!
//! Every subcommand prints a one-line JSON summary on stdout.

mod config;
mod serve;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use chrono::{DateTime, NaiveDate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use twexplore::community::louvain;
use twexplore::corpus::{self, format_iso_date, parse_tweet, Tweet};
use twexplore::export::{self, DocumentMetadata, ExplorerDocument, ImportedGraph, NetworkType};
use twexplore::layout::{self, AttractionModel};
use twexplore::network::{self, HashtagNetworkOptions, RetweetNetworkOptions};
use twexplore::synth::SyntheticCorpus;
use twexplore::{DegreeMode, Graph, LayoutParams, LouvainParams};
use twexplore_collector::{self as collector, CollectorConfig, MockConfig, MockSearchServer, SystemClock};

#[derive(Parser)]
#[command(name = "twexplore", version, about = "Tweet corpus to network explorer pipeline")]
struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Page through the search endpoint and append results as JSON lines.
    Collect(CollectArgs),
    /// Build a retweet or hashtag network from a JSONL corpus.
    Build(BuildArgs),
    /// Louvain community detection on an explorer document.
    Detect(DetectArgs),
    /// Force-directed layout of an explorer document.
    Layout(LayoutArgs),
    /// Convert an explorer document to another format.
    Export(ExportArgs),
    /// Corpus statistics: counts, timeline and collection overlap.
    Stats(StatsArgs),
    /// Serve a directory (explorer UI plus documents) over HTTP.
    Serve(ServeArgs),
    /// Write a seeded synthetic corpus.
    Synth(SynthArgs),
    /// Run the bundled mock search server on a corpus.
    MockServer(MockServerArgs),
}

#[derive(Args)]
struct CollectArgs {
    #[arg(long)]
    query: String,
    #[arg(long)]
    output: PathBuf,
    /// Search endpoint URL (config key `endpoint`).
    #[arg(long)]
    endpoint: Option<String>,
    /// Token endpoint URL (config key `auth_url`).
    #[arg(long)]
    auth_url: Option<String>,
    /// Prefix of the credential environment variables.
    #[arg(long, default_value = "TWEXPLORE")]
    credentials_env: String,
    /// `key = value` file with consumer_key, consumer_secret, bearer_token, endpoint, auth_url.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Requests per window assumed until the server reports its budget.
    #[arg(long, default_value_t = collector::search::DEFAULT_WINDOW_LIMIT)]
    window_limit: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum NetworkKind {
    Retweet,
    Hashtag,
}

#[derive(Clone, Copy, ValueEnum)]
enum DegreeArg {
    In,
    Out,
    Total,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "type", value_enum)]
    kind: NetworkKind,
    #[arg(long)]
    output: PathBuf,
    /// Keep only the largest weakly connected component.
    #[arg(long)]
    giant_component: bool,
    /// Drop nodes with fewer than K distinct neighbours (single pass).
    #[arg(long, value_name = "K")]
    min_degree: Option<usize>,
    #[arg(long, value_enum, requires = "min_degree")]
    degree_mode: Option<DegreeArg>,
    /// Keep only tweets with this language tag.
    #[arg(long)]
    language: Option<String>,
    /// Earliest tweet time (RFC 3339, YYYY-MM-DD or epoch seconds).
    #[arg(long)]
    since: Option<String>,
    /// Latest tweet time, inclusive; a bare date means the end of that day.
    #[arg(long)]
    until: Option<String>,
    /// Hashtags to leave out (comma separated, hashtag networks only).
    #[arg(long, value_delimiter = ',')]
    exclude_tags: Vec<String>,
    /// Drop co-occurrence edges lighter than this (hashtag networks only).
    #[arg(long)]
    min_cooccurrence: Option<u64>,
    /// Keep hashtags case-sensitive (hashtag networks only).
    #[arg(long)]
    no_case_fold: bool,
    /// Query recorded in the document metadata; defaults to the collection sidecar's.
    #[arg(long)]
    query: Option<String>,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to rewriting the input.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    resolution: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Spring,
    Linlog,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to rewriting the input.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 300)]
    iterations: usize,
    #[arg(long, default_value_t = 0.7)]
    theta: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "spring")]
    model: ModelArg,
    #[arg(long, default_value_t = 1.0)]
    repulsion: f64,
    #[arg(long, default_value_t = 1.0)]
    attraction: f64,
    #[arg(long, default_value_t = 0.0)]
    gravity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Explorer,
    Graphml,
    Gml,
    Csv,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    /// Inferred from the output extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// JSONL corpus to summarize.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Timeline bin width, e.g. 1h, 15m, 1day.
    #[arg(long, default_value = "1h")]
    timeline_bin: humantime::Duration,
    /// Compare two collections (JSONL corpora or files of one id per line).
    #[arg(long, num_args = 2, value_names = ["REFERENCE", "CANDIDATE"])]
    overlap: Option<Vec<PathBuf>>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = ".")]
    dir: PathBuf,
    #[arg(long, default_value_t = 8000)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: String,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 500)]
    tweets: usize,
    #[arg(long, default_value_t = 60)]
    users: usize,
    #[arg(long, default_value_t = 3)]
    groups: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct MockServerArgs {
    /// JSONL corpus to serve.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 0)]
    port: u16,
    #[arg(long)]
    window_limit: Option<u32>,
    #[arg(long, default_value_t = 100)]
    page_size: usize,
}

fn summary(command: &str, fields: Value) {
    let mut out = json!({ "command": command });
    if let (Some(o), Value::Object(f)) = (out.as_object_mut(), fields) {
        o.extend(f);
    }
    println!("{out}");
}

fn graph_summary(g: &Graph) -> String {
    format!("{} nodes, {} edges", g.node_count(), g.edge_count())
}

/// Epoch seconds from RFC 3339, a bare date or an integer.
fn parse_instant(s: &str, end_of_day: bool) -> Result<i64> {
    if let Ok(n) = s.parse::<i64>() {
        return Ok(n);
    }
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.timestamp());
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        let t = if end_of_day { d.and_hms_opt(23, 59, 59) } else { d.and_hms_opt(0, 0, 0) };
        return Ok(t.expect("valid time of day").and_utc().timestamp());
    }
    bail!("cannot parse `{s}` as a time (RFC 3339, YYYY-MM-DD or epoch seconds)")
}

fn read_document(path: &Path) -> Result<ExplorerDocument> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    export::read_explorer_document(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn write_document(path: &Path, doc: &ExplorerDocument) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    export::write_explorer_document(doc, &mut out)?;
    out.flush()?;
    Ok(())
}

fn rebuild(imported: &ImportedGraph, metadata: DocumentMetadata) -> Result<ExplorerDocument> {
    Ok(export::to_explorer_document(
        &imported.graph,
        imported.communities.as_ref(),
        imported.positions.as_ref(),
        metadata,
    )?)
}

fn run_collect(args: CollectArgs) -> Result<()> {
    let file = config::load_config(args.config.as_deref())?;
    let creds = config::credentials(&args.credentials_env, &file, |k| std::env::var(k).ok())?;
    let endpoint = args.endpoint.or_else(|| file.get("endpoint").cloned()).unwrap_or(config::DEFAULT_ENDPOINT.into());
    let auth_url = args.auth_url.or_else(|| file.get("auth_url").cloned()).unwrap_or(config::DEFAULT_AUTH_URL.into());
    let mut cfg = CollectorConfig::new(endpoint, auth_url);
    cfg.window_limit = args.window_limit;
    let session = collector::collect(&args.query, &args.output, &cfg, &creds, &SystemClock)?;
    summary(
        "collect",
        json!({
            "query": session.query,
            "output": args.output,
            "pages_fetched": session.pages_fetched,
            "tweets_written": session.tweets_written,
            "duplicates_skipped": session.duplicates_skipped,
            "rate_limit_waits": session.rate_limit_waits,
            "oldest_id": session.oldest_id.map(|i| i.to_string()),
            "newest_id": session.newest_id.map(|i| i.to_string()),
        }),
    );
    Ok(())
}

fn run_build(args: BuildArgs) -> Result<()> {
    let hashtag_only = !args.exclude_tags.is_empty() || args.min_cooccurrence.is_some() || args.no_case_fold;
    if matches!(args.kind, NetworkKind::Retweet) && hashtag_only {
        bail!("--exclude-tags, --min-cooccurrence and --no-case-fold apply to hashtag networks only");
    }
    let since = args.since.as_deref().map(|s| parse_instant(s, false)).transpose()?;
    let until = args.until.as_deref().map(|s| parse_instant(s, true)).transpose()?;
    if let (Some(a), Some(b)) = (since, until) {
        if a > b {
            bail!("--since ({}) is after --until ({})", format_iso_date(a), format_iso_date(b));
        }
    }
    let (tweets, skipped) =
        corpus::load_corpus(&args.input).with_context(|| format!("reading corpus {}", args.input.display()))?;
    let window = (since.is_some() || until.is_some()).then(|| (since.unwrap_or(i64::MIN), until.unwrap_or(i64::MAX)));
    let kept: Vec<&Tweet> = tweets
        .iter()
        .filter(|t| args.language.as_ref().is_none_or(|l| t.lang.as_deref() == Some(l.as_str())))
        .filter(|t| window.is_none_or(|(a, b)| (a..=b).contains(&t.created_at)))
        .collect();

    let (graph, network_type) = match args.kind {
        NetworkKind::Retweet => {
            let opts = RetweetNetworkOptions { track_evidence: true, ..Default::default() };
            (network::build_retweet_network(kept.iter().copied(), &opts), NetworkType::Retweet)
        }
        NetworkKind::Hashtag => {
            let opts = HashtagNetworkOptions::default()
                .with_case_fold(!args.no_case_fold)
                .with_excluded(args.exclude_tags.iter().map(|t| t.trim_start_matches('#')))
                .with_min_cooccurrence(args.min_cooccurrence.unwrap_or(1));
            (network::build_hashtag_network(kept.iter().copied(), &opts), NetworkType::Hashtag)
        }
    };
    let built = graph_summary(&graph);
    let mut graph = graph;
    if let Some(k) = args.min_degree {
        let mode = match args.degree_mode.unwrap_or(DegreeArg::Total) {
            DegreeArg::In => DegreeMode::In,
            DegreeArg::Out => DegreeMode::Out,
            DegreeArg::Total => DegreeMode::Total,
        };
        graph = graph.filter_min_degree(k, mode);
    }
    if args.giant_component {
        graph = graph.giant_component();
    }

    let sidecar = collector::read_sidecar(&args.input);
    let query = args.query.or_else(|| sidecar.as_ref().map(|s| s.query.clone())).unwrap_or_default();
    let mut meta = DocumentMetadata::new(query, network_type).with_corpus_span(kept.iter().copied());
    if let Some(s) = &sidecar {
        meta = meta.with_collected_on(s.finished_at);
    }
    let doc = export::to_explorer_document::<f64>(&graph, None, None, meta)?;
    write_document(&args.output, &doc)?;
    summary(
        "build",
        json!({
            "type": network_type,
            "tweets": tweets.len(),
            "tweets_used": kept.len(),
            "skipped_lines": skipped,
            "built": built,
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
            "summary": graph_summary(&graph),
            "output": args.output,
        }),
    );
    Ok(())
}

fn run_detect(args: DetectArgs) -> Result<()> {
    let doc = read_document(&args.input)?;
    let mut imported = export::from_explorer_document(&doc);
    let params = LouvainParams { resolution: args.resolution, seed: args.seed, ..Default::default() };
    let mut meta = doc.metadata.clone();
    let g = &imported.graph;
    let modularity = if g.total_weight() == 0 {
        // No edges: modularity is undefined, every node stands alone.
        imported.communities = Some(g.node_ids().enumerate().map(|(i, id)| (id.clone(), i)).collect());
        meta.community_count = Some(g.node_count());
        meta.modularity = None;
        None
    } else {
        let p = louvain(g, &params)?;
        meta.community_count = Some(p.community_count);
        meta.modularity = Some(export::round6(p.modularity));
        imported.communities = Some(p.assignment);
        Some(p.modularity)
    };
    let out = args.output.unwrap_or(args.input);
    write_document(&out, &rebuild(&imported, meta.clone())?)?;
    summary(
        "detect",
        json!({
            "seed": args.seed,
            "resolution": args.resolution,
            "communities": meta.community_count,
            "modularity": modularity,
            "summary": graph_summary(&imported.graph),
            "output": out,
        }),
    );
    Ok(())
}

fn run_layout(args: LayoutArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&args.theta) {
        bail!("--theta must lie in [0, 1], got {}", args.theta);
    }
    let doc = read_document(&args.input)?;
    let mut imported = export::from_explorer_document(&doc);
    let params = LayoutParams {
        iterations: args.iterations,
        theta: args.theta,
        seed: args.seed,
        attraction_model: match args.model {
            ModelArg::Spring => AttractionModel::Spring,
            ModelArg::Linlog => AttractionModel::LinLog,
        },
        repulsion_strength: args.repulsion,
        attraction_strength: args.attraction,
        gravity: args.gravity,
        ..Default::default()
    };
    let result = layout::force_layout(&imported.graph, &params);
    imported.positions = Some(result.positions.clone());
    let out = args.output.unwrap_or(args.input);
    write_document(&out, &rebuild(&imported, doc.metadata)?)?;
    summary(
        "layout",
        json!({
            "seed": args.seed,
            "theta": args.theta,
            "model": format!("{:?}", params.attraction_model).to_lowercase(),
            "iterations_run": result.iterations_run,
            "converged": result.converged,
            "final_energy": result.final_energy(),
            "summary": graph_summary(&imported.graph),
            "output": out,
        }),
    );
    Ok(())
}

fn infer_format(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
        "json" => Some(Format::Explorer),
        "graphml" | "xml" => Some(Format::Graphml),
        "gml" => Some(Format::Gml),
        "csv" => Some(Format::Csv),
        _ => None,
    }
}

fn run_export(args: ExportArgs) -> Result<()> {
    let format = match (args.format, infer_format(&args.output)) {
        (Some(f), _) | (None, Some(f)) => f,
        (None, None) => bail!("cannot infer the format of {}; pass --format", args.output.display()),
    };
    let doc = read_document(&args.input)?;
    let imported = export::from_explorer_document(&doc);
    let (g, c, p) = (&imported.graph, imported.communities.as_ref(), imported.positions.as_ref());
    let file = File::create(&args.output).with_context(|| format!("creating {}", args.output.display()))?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Explorer => export::write_explorer_document(&rebuild(&imported, doc.metadata.clone())?, &mut out)?,
        Format::Graphml => export::to_graphml(g, c, p, &mut out)?,
        Format::Gml => export::to_gml(g, c, p, &mut out)?,
        Format::Csv => export::to_edgelist_csv(g, &mut out)?,
    }
    out.flush()?;
    let name = format!("{:?}", format).to_lowercase();
    summary("export", json!({ "format": name, "summary": graph_summary(g), "output": args.output }));
    Ok(())
}

/// Ids (and tweets, where lines are statuses) of a collection. Lines holding
/// a bare integer are ids; anything else must parse as a status.
fn read_collection(path: &Path) -> Result<(BTreeSet<u64>, Vec<Tweet>, usize)> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let (mut ids, mut tweets, mut skipped) = (BTreeSet::new(), Vec::new(), 0);
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Ok(id) = line.parse::<u64>() {
            ids.insert(id);
            continue;
        }
        match parse_tweet(line) {
            Ok(t) => {
                ids.insert(t.id);
                tweets.push(t);
            }
            Err(e) => {
                log::warn!("{}:{}: {e}", path.display(), n + 1);
                skipped += 1;
            }
        }
    }
    Ok((ids, tweets, skipped))
}

fn run_stats(args: StatsArgs) -> Result<()> {
    if args.input.is_none() && args.overlap.is_none() {
        bail!("nothing to do: pass --input and/or --overlap");
    }
    let bin = Duration::from(args.timeline_bin).as_secs() as i64;
    if bin <= 0 {
        bail!("--timeline-bin must be at least one second");
    }
    let mut fields = serde_json::Map::new();
    if let Some(input) = &args.input {
        let (tweets, skipped) = corpus::load_corpus(input).with_context(|| format!("reading corpus {}", input.display()))?;
        let series = corpus::timeline(&tweets, bin);
        let retweets = tweets.iter().filter(|t| t.is_retweet()).count();
        let users: BTreeSet<u64> = tweets.iter().map(|t| t.author.id).collect();
        let mut langs: BTreeMap<String, usize> = BTreeMap::new();
        for t in &tweets {
            *langs.entry(t.lang.clone().unwrap_or_else(|| "und".into())).or_default() += 1;
        }
        let meta = DocumentMetadata::new("", NetworkType::Retweet).with_corpus_span(&tweets);
        fields.insert(
            "corpus".into(),
            json!({
                "tweets": tweets.len(),
                "skipped_lines": skipped,
                "retweets": retweets,
                "originals": tweets.len() - retweets,
                "users": users.len(),
                "languages": langs,
                "first_tweet": meta.first_tweet,
                "last_tweet": meta.last_tweet,
                "timeline": {
                    "bin_secs": bin,
                    "bins": series.bins.iter().map(|&(s, c)| json!([format_iso_date(s), c])).collect::<Vec<_>>(),
                },
            }),
        );
    }
    if let Some(paths) = &args.overlap {
        let (ref_ids, ref_tweets, ref_skipped) = read_collection(&paths[0])?;
        let (cand_ids, _, cand_skipped) = read_collection(&paths[1])?;
        let r = corpus::overlap(&ref_ids, &cand_ids, &ref_tweets);
        fields.insert(
            "overlap".into(),
            json!({
                "reference": paths[0],
                "candidate": paths[1],
                "reference_size": r.reference_size,
                "candidate_size": r.candidate_size,
                "shared": r.shared,
                "containment": r.containment,
                "missing": r.reference_size - r.shared,
                "missing_original_fraction": r.missing_original_fraction,
                "missing_retweet_fraction": r.missing_retweet_fraction,
                "skipped_lines": ref_skipped + cand_skipped,
            }),
        );
    }
    summary("stats", Value::Object(fields));
    Ok(())
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let gen = SyntheticCorpus { tweets: args.tweets, users: args.users.max(1), groups: args.groups.max(1), seed: args.seed, ..Default::default() };
    let tweets = gen.generate();
    let mut out = BufWriter::new(File::create(&args.output).with_context(|| format!("creating {}", args.output.display()))?);
    for t in &tweets {
        writeln!(out, "{}", t.to_json_line())?;
    }
    out.flush()?;
    summary("synth", json!({ "seed": args.seed, "tweets": tweets.len(), "output": args.output }));
    Ok(())
}

fn run_mock_server(args: MockServerArgs) -> Result<()> {
    let (tweets, skipped) = corpus::load_corpus(&args.corpus).with_context(|| format!("reading {}", args.corpus.display()))?;
    let config = MockConfig { window_limit: args.window_limit, page_size: args.page_size.max(1), ..Default::default() };
    let server = MockSearchServer::start_on(&format!("127.0.0.1:{}", args.port), &tweets, config, Arc::new(SystemClock))?;
    summary(
        "mock-server",
        json!({
            "tweets": tweets.len(),
            "skipped_lines": skipped,
            "endpoint": server.search_url(),
            "auth_url": server.auth_url(),
            "consumer_key": "key",
            "consumer_secret": "secret",
        }),
    );
    loop {
        std::thread::park();
    }
}

fn run_serve(args: ServeArgs) -> Result<()> {
    if !args.dir.is_dir() {
        bail!("{} is not a directory", args.dir.display());
    }
    serve::serve(&args.dir, &args.bind, args.port, |url| {
        summary("serve", json!({ "dir": args.dir, "url": url }));
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Collect(a) => run_collect(a),
        Command::Build(a) => run_build(a),
        Command::Detect(a) => run_detect(a),
        Command::Layout(a) => run_layout(a),
        Command::Export(a) => run_export(a),
        Command::Stats(a) => run_stats(a),
        Command::Serve(a) => run_serve(a),
        Command::Synth(a) => run_synth(a),
        Command::MockServer(a) => run_mock_server(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instants() {
        assert_eq!(parse_instant("1539202764", false).unwrap(), 1539202764);
        assert_eq!(parse_instant("2018-10-10T20:19:24Z", false).unwrap(), 1539202764);
        assert_eq!(parse_instant("2018-10-10", false).unwrap(), 1539129600);
        assert_eq!(parse_instant("2018-10-10", true).unwrap(), 1539129600 + 86399);
        assert!(parse_instant("last tuesday", false).is_err());
    }

    #[test]
    fn formats_from_extension() {
        assert!(infer_format(Path::new("g.GraphML")) == Some(Format::Graphml));
        assert!(infer_format(Path::new("g.json")) == Some(Format::Explorer));
        assert!(infer_format(Path::new("g.txt")).is_none());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

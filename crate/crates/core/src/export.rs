//! Explorer documents and interchange formats (GraphML, GML, CSV edge list).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::{format_iso_date, Tweet};
use crate::graph::{AttrValue, DegreeMode, Graph, NodeId, ATTR_FOLLOWERS, ATTR_FRIENDS, ATTR_LABEL};
use crate::layout::Point;
use crate::scalar::Scalar;

/// Evidence ids written per edge.
pub const EVIDENCE_CAP: usize = 100;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("node `{0}` has no community assignment")]
    MissingCommunity(NodeId),
    #[error("node `{0}` has no position")]
    MissingPosition(NodeId),
    #[error("invalid document at `{path}`: {reason}")]
    Schema { path: String, reason: String },
    #[error("invalid GraphML: {0}")]
    GraphMl(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn schema(path: impl Into<String>, reason: impl Into<String>) -> ExportError {
    ExportError::Schema { path: path.into(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkType {
    Retweet,
    Hashtag,
}

impl NetworkType {
    pub fn is_directed(self) -> bool {
        matches!(self, NetworkType::Retweet)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentMetadata {
    pub query: String,
    /// Timestamps are ISO-8601 UTC strings.
    pub collected_on: Option<String>,
    pub first_tweet: Option<String>,
    pub last_tweet: Option<String>,
    pub network_type: NetworkType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub community_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modularity: Option<f64>,
}

impl DocumentMetadata {
    pub fn new(query: impl Into<String>, network_type: NetworkType) -> Self {
        DocumentMetadata {
            query: query.into(),
            collected_on: None,
            first_tweet: None,
            last_tweet: None,
            network_type,
            community_count: None,
            modularity: None,
        }
    }

    /// Fill the first/last tweet timestamps from a corpus.
    pub fn with_corpus_span<'a>(mut self, tweets: impl IntoIterator<Item = &'a Tweet>) -> Self {
        let mut span: Option<(i64, i64)> = None;
        for t in tweets {
            span = Some(match span {
                Some((lo, hi)) => (lo.min(t.created_at), hi.max(t.created_at)),
                None => (t.created_at, t.created_at),
            });
        }
        self.first_tweet = span.map(|(lo, _)| format_iso_date(lo));
        self.last_tweet = span.map(|(_, hi)| format_iso_date(hi));
        self
    }

    pub fn with_collected_on(mut self, epoch_secs: i64) -> Self {
        self.collected_on = Some(format_iso_date(epoch_secs));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocNode {
    pub id: NodeId,
    pub label: String,
    pub community: Option<usize>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    /// Weighted in-degree (times retweeted, for retweet networks).
    pub in_degree: u64,
    pub out_degree: u64,
    pub followers: Option<u64>,
    pub friends: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocLink {
    pub source: usize,
    pub target: usize,
    pub weight: u64,
    /// Tweet ids as strings; they exceed the exact integer range of JavaScript numbers.
    pub tweet_ids: Vec<String>,
}

/// Self-contained graph document consumed by the explorer UI. Links
/// reference nodes by their index in `nodes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorerDocument {
    pub metadata: DocumentMetadata,
    pub nodes: Vec<DocNode>,
    pub links: Vec<DocLink>,
}

/// Round to 6 decimal places, normalizing negative zero.
pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn count_attr(g: &Graph, id: &str, key: &str) -> Option<u64> {
    g.node_attr(id, key).and_then(AttrValue::as_int).map(|v| v.max(0) as u64)
}

fn label_of(g: &Graph, id: &NodeId) -> String {
    g.node_attr(id, ATTR_LABEL).and_then(AttrValue::as_text).unwrap_or(id).to_string()
}

fn check_coverage<F>(
    g: &Graph,
    communities: Option<&BTreeMap<NodeId, usize>>,
    positions: Option<&BTreeMap<NodeId, Point<F>>>,
) -> Result<(), ExportError> {
    for id in g.node_ids() {
        if communities.is_some_and(|c| !c.contains_key(id)) {
            return Err(ExportError::MissingCommunity(id.clone()));
        }
        if positions.is_some_and(|p| !p.contains_key(id)) {
            return Err(ExportError::MissingPosition(id.clone()));
        }
    }
    Ok(())
}

/// Build the explorer document. Nodes are ordered by id; communities and
/// positions, when given, must cover every node.
pub fn to_explorer_document<F: Scalar>(
    g: &Graph,
    communities: Option<&BTreeMap<NodeId, usize>>,
    positions: Option<&BTreeMap<NodeId, Point<F>>>,
    metadata: DocumentMetadata,
) -> Result<ExplorerDocument, ExportError> {
    check_coverage(g, communities, positions)?;
    let index: BTreeMap<&NodeId, usize> = g.node_ids().enumerate().map(|(i, id)| (id, i)).collect();
    let nodes = g
        .node_ids()
        .map(|id| {
            let pos = positions.map(|p| p[id]);
            DocNode {
                id: id.clone(),
                label: label_of(g, id),
                community: communities.map(|c| c[id]),
                x: pos.map(|p| round6(p.x.to_f64().unwrap_or(f64::NAN))),
                y: pos.map(|p| round6(p.y.to_f64().unwrap_or(f64::NAN))),
                in_degree: g.weighted_degree(id, DegreeMode::In).unwrap_or(0),
                out_degree: g.weighted_degree(id, DegreeMode::Out).unwrap_or(0),
                followers: count_attr(g, id, ATTR_FOLLOWERS),
                friends: count_attr(g, id, ATTR_FRIENDS),
            }
        })
        .collect();
    let links = g
        .edges()
        .map(|(s, t, e)| DocLink {
            source: index[s],
            target: index[t],
            weight: e.weight,
            tweet_ids: e.tweet_ids.iter().take(EVIDENCE_CAP).map(u64::to_string).collect(),
        })
        .collect();
    Ok(ExplorerDocument { metadata, nodes, links })
}

pub fn write_explorer_document(doc: &ExplorerDocument, mut out: impl Write) -> Result<(), ExportError> {
    serde_json::to_writer_pretty(&mut out, doc).map_err(io::Error::from)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Graph plus the optional community and position layers recovered from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedGraph {
    pub graph: Graph,
    pub communities: Option<BTreeMap<NodeId, usize>>,
    pub positions: Option<BTreeMap<NodeId, Point<f64>>>,
}

/// Parse and validate an explorer document.
pub fn read_explorer_document(input: impl Read) -> Result<ExplorerDocument, ExportError> {
    let mut de = serde_json::Deserializer::from_reader(input);
    let doc: ExplorerDocument =
        serde_path_to_error::deserialize(&mut de).map_err(|e| schema(e.path().to_string(), e.inner().to_string()))?;
    let mut seen = BTreeSet::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        if !seen.insert(&n.id) {
            return Err(schema(format!("nodes[{i}].id"), format!("duplicate node id `{}`", n.id)));
        }
        if n.x.is_some() != n.y.is_some() {
            return Err(schema(format!("nodes[{i}]"), "x and y must both be set or both be null"));
        }
    }
    for (i, l) in doc.links.iter().enumerate() {
        for (field, v) in [("source", l.source), ("target", l.target)] {
            if v >= doc.nodes.len() {
                return Err(schema(format!("links[{i}].{field}"), format!("node index {v} out of range")));
            }
        }
        if l.source == l.target {
            return Err(schema(format!("links[{i}]"), "self-loop"));
        }
        if l.weight == 0 {
            return Err(schema(format!("links[{i}].weight"), "weight must be positive"));
        }
        for (j, id) in l.tweet_ids.iter().enumerate() {
            if id.parse::<u64>().is_err() {
                return Err(schema(format!("links[{i}].tweet_ids[{j}]"), format!("`{id}` is not a tweet id")));
            }
        }
    }
    Ok(doc)
}

/// Rebuild the graph and its layers from a document. Layers are present only
/// when every node carries them.
pub fn from_explorer_document(doc: &ExplorerDocument) -> ImportedGraph {
    let mut graph = Graph::new(doc.metadata.network_type.is_directed());
    for n in &doc.nodes {
        let attrs = graph.add_node(n.id.clone());
        attrs.insert(ATTR_LABEL.into(), AttrValue::Text(n.label.clone()));
        if let Some(f) = n.followers {
            attrs.insert(ATTR_FOLLOWERS.into(), AttrValue::Int(f as i64));
        }
        if let Some(f) = n.friends {
            attrs.insert(ATTR_FRIENDS.into(), AttrValue::Int(f as i64));
        }
    }
    for l in &doc.links {
        let (s, t) = (&doc.nodes[l.source].id, &doc.nodes[l.target].id);
        let tweet_ids = l.tweet_ids.iter().filter_map(|s| s.parse().ok()).collect();
        graph.insert_edge(s, t, crate::graph::EdgeAttrs { weight: l.weight, tweet_ids });
    }
    let communities = doc
        .nodes
        .iter()
        .map(|n| n.community.map(|c| (n.id.clone(), c)))
        .collect::<Option<BTreeMap<_, _>>>()
        .filter(|_| !doc.nodes.is_empty());
    let positions = doc
        .nodes
        .iter()
        .map(|n| Some((n.id.clone(), Point::new(n.x?, n.y?))))
        .collect::<Option<BTreeMap<_, _>>>()
        .filter(|_| !doc.nodes.is_empty());
    ImportedGraph { graph, communities, positions }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

const GRAPHML_KEYS: &[(&str, &str, &str)] = &[
    ("label", "node", "string"),
    ("community", "node", "int"),
    ("x", "node", "double"),
    ("y", "node", "double"),
    ("followers", "node", "long"),
    ("friends", "node", "long"),
    ("weight", "edge", "long"),
    ("tweet_ids", "edge", "string"),
];

/// GraphML 1.0. Evidence ids are written space-separated, capped like the
/// explorer document.
pub fn to_graphml<F: Scalar>(
    g: &Graph,
    communities: Option<&BTreeMap<NodeId, usize>>,
    positions: Option<&BTreeMap<NodeId, Point<F>>>,
    mut out: impl Write,
) -> Result<(), ExportError> {
    check_coverage(g, communities, positions)?;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    for (name, domain, ty) in GRAPHML_KEYS {
        let _ = writeln!(s, "  <key id=\"{name}\" for=\"{domain}\" attr.name=\"{name}\" attr.type=\"{ty}\"/>");
    }
    let edgedefault = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(s, "  <graph id=\"G\" edgedefault=\"{edgedefault}\">");
    for id in g.node_ids() {
        let _ = writeln!(s, "    <node id=\"{}\">", xml_escape(id));
        let _ = writeln!(s, "      <data key=\"label\">{}</data>", xml_escape(&label_of(g, id)));
        if let Some(c) = communities {
            let _ = writeln!(s, "      <data key=\"community\">{}</data>", c[id]);
        }
        if let Some(p) = positions {
            let p = p[id];
            let _ = writeln!(s, "      <data key=\"x\">{}</data>", round6(p.x.to_f64().unwrap_or(f64::NAN)));
            let _ = writeln!(s, "      <data key=\"y\">{}</data>", round6(p.y.to_f64().unwrap_or(f64::NAN)));
        }
        for key in [ATTR_FOLLOWERS, ATTR_FRIENDS] {
            if let Some(v) = count_attr(g, id, key) {
                let _ = writeln!(s, "      <data key=\"{key}\">{v}</data>");
            }
        }
        s.push_str("    </node>\n");
    }
    for (src, tgt, e) in g.edges() {
        let _ = writeln!(s, "    <edge source=\"{}\" target=\"{}\">", xml_escape(src), xml_escape(tgt));
        let _ = writeln!(s, "      <data key=\"weight\">{}</data>", e.weight);
        if !e.tweet_ids.is_empty() {
            let ids: Vec<String> = e.tweet_ids.iter().take(EVIDENCE_CAP).map(u64::to_string).collect();
            let _ = writeln!(s, "      <data key=\"tweet_ids\">{}</data>", ids.join(" "));
        }
        s.push_str("    </edge>\n");
    }
    s.push_str("  </graph>\n</graphml>\n");
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Read a GraphML file written by [`to_graphml`] (or any GraphML using the
/// same attribute names).
pub fn from_graphml(text: &str) -> Result<ImportedGraph, ExportError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| ExportError::GraphMl(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "graphml" {
        return Err(ExportError::GraphMl("root element is not <graphml>".into()));
    }
    let keys: BTreeMap<&str, &str> = root
        .children()
        .filter(|n| n.has_tag_name("key"))
        .filter_map(|k| Some((k.attribute("id")?, k.attribute("attr.name").unwrap_or(k.attribute("id")?))))
        .collect();
    let graph_el = root
        .children()
        .find(|n| n.has_tag_name("graph"))
        .ok_or_else(|| ExportError::GraphMl("missing <graph>".into()))?;
    let directed = match graph_el.attribute("edgedefault") {
        Some("undirected") => false,
        Some("directed") => true,
        other => return Err(ExportError::GraphMl(format!("bad edgedefault {other:?}"))),
    };
    let data = |el: roxmltree::Node<'_, '_>| -> BTreeMap<String, String> {
        el.children()
            .filter(|d| d.has_tag_name("data"))
            .filter_map(|d| {
                let key = d.attribute("key")?;
                Some((keys.get(key).unwrap_or(&key).to_string(), d.text().unwrap_or("").to_string()))
            })
            .collect()
    };
    let bad = |what: &str, v: &str| ExportError::GraphMl(format!("invalid {what} `{v}`"));

    let mut graph = Graph::new(directed);
    let mut communities = BTreeMap::new();
    let mut positions = BTreeMap::new();
    let mut node_count = 0;
    for node in graph_el.children().filter(|n| n.has_tag_name("node")) {
        node_count += 1;
        let id = node.attribute("id").ok_or_else(|| ExportError::GraphMl("node without id".into()))?;
        let d = data(node);
        let attrs = graph.add_node(id);
        if let Some(label) = d.get("label") {
            attrs.insert(ATTR_LABEL.into(), AttrValue::Text(label.clone()));
        }
        for key in [ATTR_FOLLOWERS, ATTR_FRIENDS] {
            if let Some(v) = d.get(key) {
                attrs.insert(key.into(), AttrValue::Int(v.trim().parse().map_err(|_| bad(key, v))?));
            }
        }
        if let Some(c) = d.get("community") {
            communities.insert(id.to_string(), c.trim().parse().map_err(|_| bad("community", c))?);
        }
        if let (Some(x), Some(y)) = (d.get("x"), d.get("y")) {
            let x = x.trim().parse().map_err(|_| bad("x", x))?;
            let y = y.trim().parse().map_err(|_| bad("y", y))?;
            positions.insert(id.to_string(), Point::new(x, y));
        }
    }
    for edge in graph_el.children().filter(|n| n.has_tag_name("edge")) {
        let (Some(s), Some(t)) = (edge.attribute("source"), edge.attribute("target")) else {
            return Err(ExportError::GraphMl("edge without endpoints".into()));
        };
        if !graph.contains_node(s) || !graph.contains_node(t) {
            return Err(ExportError::GraphMl(format!("edge {s} -> {t} references an unknown node")));
        }
        let d = data(edge);
        let weight = match d.get("weight") {
            Some(w) => w.trim().parse().map_err(|_| bad("weight", w))?,
            None => 1,
        };
        let tweet_ids = match d.get("tweet_ids") {
            Some(ids) => ids.split_whitespace().map(|v| v.parse().map_err(|_| bad("tweet id", v))).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        graph.insert_edge(s, t, crate::graph::EdgeAttrs { weight, tweet_ids });
    }
    let full = |n: usize| n == node_count && n > 0;
    Ok(ImportedGraph {
        graph,
        communities: full(communities.len()).then_some(communities),
        positions: full(positions.len()).then_some(positions),
    })
}

fn gml_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("&quot;"),
            '&' => out.push_str("&amp;"),
            c if c.is_ascii() && !c.is_ascii_control() => out.push(c),
            c => {
                let _ = write!(out, "&#{};", c as u32);
            }
        }
    }
    out.push('"');
    out
}

/// GML with integer node ids; the original id is kept in `name`, the
/// position in a `graphics` block.
pub fn to_gml<F: Scalar>(
    g: &Graph,
    communities: Option<&BTreeMap<NodeId, usize>>,
    positions: Option<&BTreeMap<NodeId, Point<F>>>,
    mut out: impl Write,
) -> Result<(), ExportError> {
    check_coverage(g, communities, positions)?;
    let index: BTreeMap<&NodeId, usize> = g.node_ids().enumerate().map(|(i, id)| (id, i)).collect();
    let mut s = String::from("graph [\n");
    let _ = writeln!(s, "  directed {}", g.is_directed() as u8);
    for (id, &i) in &index {
        s.push_str("  node [\n");
        let _ = writeln!(s, "    id {i}");
        let _ = writeln!(s, "    label {}", gml_string(&label_of(g, id)));
        let _ = writeln!(s, "    name {}", gml_string(id));
        if let Some(c) = communities {
            let _ = writeln!(s, "    community {}", c[*id]);
        }
        for key in [ATTR_FOLLOWERS, ATTR_FRIENDS] {
            if let Some(v) = count_attr(g, id, key) {
                let _ = writeln!(s, "    {key} {v}");
            }
        }
        if let Some(p) = positions {
            let p = p[*id];
            let _ = writeln!(
                s,
                "    graphics [\n      x {:?}\n      y {:?}\n    ]",
                round6(p.x.to_f64().unwrap_or(f64::NAN)),
                round6(p.y.to_f64().unwrap_or(f64::NAN))
            );
        }
        s.push_str("  ]\n");
    }
    for (src, tgt, e) in g.edges() {
        let _ = writeln!(s, "  edge [\n    source {}\n    target {}\n    weight {}\n  ]", index[src], index[tgt], e.weight);
    }
    s.push_str("]\n");
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// RFC-4180 edge list with header `source,target,weight`.
pub fn to_edgelist_csv(g: &Graph, out: impl Write) -> Result<(), ExportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["source", "target", "weight"])?;
    for (s, t, e) in g.edges() {
        w.write_record([s.as_str(), t.as_str(), &e.weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> Graph {
        let mut g = Graph::directed();
        g.add_interaction("1", "2", Some(77));
        g.set_node_attr("1", ATTR_LABEL, AttrValue::Text("alice".into()));
        g
    }

    #[test]
    fn empty_graph_document() {
        let meta = DocumentMetadata::new("brexit", NetworkType::Retweet).with_collected_on(0);
        let doc = to_explorer_document::<f64>(&Graph::directed(), None, None, meta.clone()).unwrap();
        assert!(doc.nodes.is_empty() && doc.links.is_empty());
        assert_eq!(doc.metadata, meta);
        assert_eq!(doc.metadata.collected_on.as_deref(), Some("1970-01-01T00:00:00Z"));
    }

    #[test]
    fn two_node_document() {
        let doc = to_explorer_document::<f64>(&pair(), None, None, DocumentMetadata::new("", NetworkType::Retweet)).unwrap();
        assert_eq!(doc.nodes.len(), 2);
        assert_eq!(doc.nodes[0].label, "alice");
        assert_eq!(doc.nodes[1].label, "2");
        assert_eq!(doc.nodes[1].in_degree, 1);
        assert_eq!(doc.links, vec![DocLink { source: 0, target: 1, weight: 1, tweet_ids: vec!["77".into()] }]);
    }

    #[test]
    fn coverage_gap_names_node() {
        let communities: BTreeMap<NodeId, usize> = [("1".to_string(), 0)].into();
        let err = to_explorer_document::<f64>(&pair(), Some(&communities), None, DocumentMetadata::new("", NetworkType::Retweet))
            .unwrap_err();
        assert!(matches!(err, ExportError::MissingCommunity(ref id) if id == "2"), "{err}");
        let positions: BTreeMap<NodeId, Point<f64>> = [("2".to_string(), Point::origin())].into();
        let err = to_graphml(&pair(), None, Some(&positions), Vec::new()).unwrap_err();
        assert!(matches!(err, ExportError::MissingPosition(ref id) if id == "1"), "{err}");
    }

    #[test]
    fn evidence_is_capped() {
        let mut g = Graph::undirected();
        for i in 0..150 {
            g.add_interaction("a", "b", Some(i));
        }
        let doc = to_explorer_document::<f64>(&g, None, None, DocumentMetadata::new("", NetworkType::Hashtag)).unwrap();
        assert_eq!(doc.links[0].weight, 150);
        assert_eq!(doc.links[0].tweet_ids.len(), EVIDENCE_CAP);
    }

    #[test]
    fn rounding() {
        assert_eq!(round6(0.1234567), 0.123457);
        assert_eq!(round6(-0.0000001).to_string(), "0");
        assert_eq!(serde_json::to_string(&round6(1.0 / 3.0)).unwrap(), "0.333333");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad = r#"{"metadata":{"query":"q","collected_on":null,"first_tweet":null,"last_tweet":null,"network_type":"retweet"},
            "nodes":[{"id":"a","label":"a","community":null,"x":null,"y":null,"in_degree":0,"out_degree":"x","followers":null,"friends":null}],"links":[]}"#;
        match read_explorer_document(bad.as_bytes()) {
            Err(ExportError::Schema { path, .. }) => assert_eq!(path, "nodes[0].out_degree"),
            other => panic!("{other:?}"),
        }
        let dangling = r#"{"metadata":{"query":"q","collected_on":null,"first_tweet":null,"last_tweet":null,"network_type":"hashtag"},
            "nodes":[{"id":"a","label":"a","community":null,"x":null,"y":null,"in_degree":0,"out_degree":0,"followers":null,"friends":null}],
            "links":[{"source":0,"target":3,"weight":1,"tweet_ids":[]}]}"#;
        match read_explorer_document(dangling.as_bytes()) {
            Err(ExportError::Schema { path, .. }) => assert_eq!(path, "links[0].target"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_rows() {
        let mut k3 = Graph::undirected();
        for (a, b) in [("a", "b"), ("b", "c"), ("a", "c")] {
            k3.add_edge(a, b, 1);
        }
        let mut buf = Vec::new();
        to_edgelist_csv(&k3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "source,target,weight\na,b,1\na,c,1\nb,c,1\n");
    }

    #[test]
    fn gml_escapes_strings() {
        let mut g = Graph::undirected();
        g.add_edge("é", "say \"hi\"", 2);
        let mut buf = Vec::new();
        to_gml::<f64>(&g, None, None, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("name \"&#233;\""));
        assert!(text.contains("label \"say &quot;hi&quot;\""));
        assert!(text.contains("directed 0"));
        assert!(text.contains("weight 2"));
    }
}

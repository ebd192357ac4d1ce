//! Weighted graph container with node attributes and edge evidence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub type NodeId = String;

/// Node attribute keys understood by the exporters.
pub const ATTR_LABEL: &str = "label";
pub const ATTR_FOLLOWERS: &str = "followers";
pub const ATTR_FRIENDS: &str = "friends";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl AttrValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            AttrValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            AttrValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

pub type NodeAttrs = BTreeMap<String, AttrValue>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeAttrs {
    pub weight: u64,
    /// Tweets evidencing the edge. Empty when evidence tracking is off.
    pub tweet_ids: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Adjacency {
    succ: BTreeSet<NodeId>,
    pred: BTreeSet<NodeId>,
}

/// Directed or undirected weighted graph.
///
/// Self-loops are rejected at insertion. Undirected edges are keyed by the
/// ordered pair `(min, max)`. All iteration orders are sorted by [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    nodes: BTreeMap<NodeId, NodeAttrs>,
    edges: BTreeMap<(NodeId, NodeId), EdgeAttrs>,
    adjacency: BTreeMap<NodeId, Adjacency>,
}

impl Graph {
    pub fn new(directed: bool) -> Self {
        Graph {
            directed,
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            adjacency: BTreeMap::new(),
        }
    }

    pub fn directed() -> Self {
        Self::new(true)
    }

    pub fn undirected() -> Self {
        Self::new(false)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Insert a node if absent and return its attribute map.
    pub fn add_node(&mut self, id: impl Into<NodeId>) -> &mut NodeAttrs {
        let id = id.into();
        self.adjacency.entry(id.clone()).or_default();
        self.nodes.entry(id).or_default()
    }

    pub fn set_node_attr(&mut self, id: &str, key: &str, value: AttrValue) {
        self.add_node(id).insert(key.to_string(), value);
    }

    pub fn node_attrs(&self, id: &str) -> Option<&NodeAttrs> {
        self.nodes.get(id)
    }

    pub fn node_attr(&self, id: &str, key: &str) -> Option<&AttrValue> {
        self.nodes.get(id).and_then(|a| a.get(key))
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &NodeAttrs)> {
        self.nodes.iter()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    /// Edges as `(source, target, attrs)`; for undirected graphs `source < target`.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, &EdgeAttrs)> {
        self.edges.iter().map(|((s, t), a)| (s, t, a))
    }

    fn key(&self, source: &str, target: &str) -> (NodeId, NodeId) {
        if self.directed || source <= target {
            (source.to_string(), target.to_string())
        } else {
            (target.to_string(), source.to_string())
        }
    }

    pub fn edge(&self, source: &str, target: &str) -> Option<&EdgeAttrs> {
        self.edges.get(&self.key(source, target))
    }

    fn edge_entry(&mut self, source: &str, target: &str) -> Option<&mut EdgeAttrs> {
        if source == target {
            return None;
        }
        self.add_node(source);
        self.add_node(target);
        self.adjacency.get_mut(source).unwrap().succ.insert(target.to_string());
        self.adjacency.get_mut(target).unwrap().pred.insert(source.to_string());
        if !self.directed {
            self.adjacency.get_mut(target).unwrap().succ.insert(source.to_string());
            self.adjacency.get_mut(source).unwrap().pred.insert(target.to_string());
        }
        let key = self.key(source, target);
        Some(self.edges.entry(key).or_default())
    }

    /// Add `weight` to the edge, creating endpoints as needed. Returns `false`
    /// (and changes nothing) for a self-loop or a zero weight.
    pub fn add_edge(&mut self, source: &str, target: &str, weight: u64) -> bool {
        if weight == 0 {
            return false;
        }
        match self.edge_entry(source, target) {
            Some(e) => {
                e.weight += weight;
                true
            }
            None => false,
        }
    }

    /// Record one interaction: weight +1, with `evidence` appended when given.
    pub fn add_interaction(&mut self, source: &str, target: &str, evidence: Option<u64>) -> bool {
        match self.edge_entry(source, target) {
            Some(e) => {
                e.weight += 1;
                e.tweet_ids.extend(evidence);
                true
            }
            None => false,
        }
    }

    /// Replace the attributes of an existing edge (or create it). Self-loops
    /// and zero weights are rejected.
    pub fn insert_edge(&mut self, source: &str, target: &str, attrs: EdgeAttrs) -> bool {
        if attrs.weight == 0 {
            return false;
        }
        match self.edge_entry(source, target) {
            Some(e) => {
                *e = attrs;
                true
            }
            None => false,
        }
    }

    /// Sort evidence lists so graphs built in different input orders compare equal.
    pub fn sort_evidence(&mut self) {
        for e in self.edges.values_mut() {
            e.tweet_ids.sort_unstable();
        }
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().map(|e| e.weight).sum()
    }

    fn adjacency_of(&self, node: &str) -> Result<&Adjacency, GraphError> {
        self.adjacency.get(node).ok_or_else(|| GraphError::UnknownNode(node.to_string()))
    }

    /// Neighbours ignoring direction.
    pub fn neighbors(&self, node: &str) -> Result<BTreeSet<&NodeId>, GraphError> {
        let adj = self.adjacency_of(node)?;
        Ok(adj.succ.iter().chain(adj.pred.iter()).collect())
    }

    pub fn successors(&self, node: &str) -> Result<impl Iterator<Item = &NodeId>, GraphError> {
        Ok(self.adjacency_of(node)?.succ.iter())
    }

    pub fn predecessors(&self, node: &str) -> Result<impl Iterator<Item = &NodeId>, GraphError> {
        Ok(self.adjacency_of(node)?.pred.iter())
    }

    /// Number of distinct neighbours in the given direction. `Total` counts
    /// the union of predecessors and successors.
    pub fn degree(&self, node: &str, mode: DegreeMode) -> Result<usize, GraphError> {
        let adj = self.adjacency_of(node)?;
        Ok(match mode {
            DegreeMode::Out => adj.succ.len(),
            DegreeMode::In => adj.pred.len(),
            DegreeMode::Total if self.directed => adj.succ.union(&adj.pred).count(),
            DegreeMode::Total => adj.succ.len(),
        })
    }

    /// Sum of incident edge weights in the given direction.
    pub fn weighted_degree(&self, node: &str, mode: DegreeMode) -> Result<u64, GraphError> {
        let adj = self.adjacency_of(node)?;
        let out = || adj.succ.iter().map(|t| self.edge(node, t).map_or(0, |e| e.weight)).sum::<u64>();
        let inc = || adj.pred.iter().map(|s| self.edge(s, node).map_or(0, |e| e.weight)).sum::<u64>();
        Ok(match mode {
            DegreeMode::Out => out(),
            DegreeMode::In => inc(),
            DegreeMode::Total if self.directed => out() + inc(),
            DegreeMode::Total => out(),
        })
    }

    /// Subgraph induced by `keep`; attributes are carried over.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Graph {
        let mut sub = Graph::new(self.directed);
        for (id, attrs) in &self.nodes {
            if keep.contains(id) {
                *sub.add_node(id.clone()) = attrs.clone();
            }
        }
        for ((s, t), attrs) in &self.edges {
            if keep.contains(s) && keep.contains(t) {
                sub.insert_edge(s, t, attrs.clone());
            }
        }
        sub
    }

    /// Weakly connected components, each sorted, ordered by their smallest node.
    pub fn weakly_connected_components(&self) -> Vec<BTreeSet<NodeId>> {
        let ids: Vec<&NodeId> = self.nodes.keys().collect();
        let index: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();

        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        for (s, t) in self.edges.keys() {
            let (a, b) = (find(&mut parent, index[s]), find(&mut parent, index[t]));
            if a != b {
                // Keep the smaller index as root so roots are component minima.
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }

        let mut groups: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().insert((*id).clone());
        }
        groups.into_values().collect()
    }

    /// Induced subgraph on the largest weakly connected component. Ties go to
    /// the component with the smallest minimum node id.
    pub fn giant_component(&self) -> Graph {
        let mut best: Option<BTreeSet<NodeId>> = None;
        // Components arrive ordered by minimum id, so strict `>` keeps the first on ties.
        for comp in self.weakly_connected_components() {
            if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
                best = Some(comp);
            }
        }
        match best {
            Some(keep) => self.induced_subgraph(&keep),
            None => Graph::new(self.directed),
        }
    }

    /// One-pass filter: keep nodes whose unweighted degree in `self` is at
    /// least `k`. Not iterated to a k-core.
    pub fn filter_min_degree(&self, k: usize, mode: DegreeMode) -> Graph {
        let keep: BTreeSet<NodeId> = self
            .nodes
            .keys()
            .filter(|id| self.degree(id, mode).is_ok_and(|d| d >= k))
            .cloned()
            .collect();
        self.induced_subgraph(&keep)
    }
}

//! Retweet and hashtag co-occurrence network construction.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::Tweet;
use crate::graph::{AttrValue, Graph, ATTR_FOLLOWERS, ATTR_FRIENDS, ATTR_LABEL};

#[derive(Debug, Clone, Default)]
pub struct RetweetNetworkOptions {
    pub track_evidence: bool,
    /// Keep only retweets whose `lang` equals this tag.
    pub language_filter: Option<String>,
    /// Inclusive `(start, end)` bounds on the retweet's `created_at`.
    pub time_window: Option<(i64, i64)>,
}

impl RetweetNetworkOptions {
    fn accepts(&self, t: &Tweet) -> bool {
        if let Some(lang) = &self.language_filter {
            if t.lang.as_deref() != Some(lang.as_str()) {
                return false;
            }
        }
        match self.time_window {
            Some((start, end)) => (start..=end).contains(&t.created_at),
            None => true,
        }
    }
}

#[derive(Debug, Clone)]
struct Observed {
    // (created_at, tweet id) of the status the snapshot came from.
    seen: (i64, u64),
    screen_name: String,
    followers: u64,
    friends: u64,
}

/// Directed retweet network: an edge `retweeter -> original author` per
/// retweet, weights counting retweets. Nodes are user ids; the
/// `label`/`followers`/`friends` attributes come from the most recent
/// observation of each user.
pub fn build_retweet_network<'a>(
    tweets: impl IntoIterator<Item = &'a Tweet>,
    opts: &RetweetNetworkOptions,
) -> Graph {
    let mut graph = Graph::directed();
    let mut users: BTreeMap<u64, Observed> = BTreeMap::new();

    for t in tweets {
        let Some(original) = t.retweet_of.as_deref() else { continue };
        if !opts.accepts(t) || original.author.id == t.author.id {
            continue;
        }
        let seen = (t.created_at, t.id);
        for user in [&t.author, &original.author] {
            let fresh = Observed {
                seen,
                screen_name: user.screen_name.clone(),
                followers: user.followers_count,
                friends: user.friends_count,
            };
            users
                .entry(user.id)
                .and_modify(|o| {
                    if seen > o.seen {
                        *o = fresh.clone();
                    }
                })
                .or_insert(fresh);
        }
        let evidence = opts.track_evidence.then_some(t.id);
        graph.add_interaction(&t.author.id.to_string(), &original.author.id.to_string(), evidence);
    }

    for (id, o) in users {
        let id = id.to_string();
        graph.set_node_attr(&id, ATTR_LABEL, AttrValue::Text(o.screen_name));
        graph.set_node_attr(&id, ATTR_FOLLOWERS, AttrValue::Int(o.followers as i64));
        graph.set_node_attr(&id, ATTR_FRIENDS, AttrValue::Int(o.friends as i64));
    }
    graph.sort_evidence();
    graph
}

/// Options for [`build_hashtag_network`]. Excluded tags are kept
/// normalized the same way as corpus hashtags.
#[derive(Debug, Clone)]
pub struct HashtagNetworkOptions {
    case_fold: bool,
    exclude_tags: BTreeSet<String>,
    min_cooccurrence: u64,
    track_evidence: bool,
}

impl Default for HashtagNetworkOptions {
    fn default() -> Self {
        HashtagNetworkOptions {
            case_fold: true,
            exclude_tags: BTreeSet::new(),
            min_cooccurrence: 1,
            track_evidence: true,
        }
    }
}

impl HashtagNetworkOptions {
    pub fn with_case_fold(mut self, on: bool) -> Self {
        self.case_fold = on;
        let tags = std::mem::take(&mut self.exclude_tags);
        self.with_excluded(tags)
    }

    /// Edges lighter than this are dropped (values below 1 act as 1).
    pub fn with_min_cooccurrence(mut self, min: u64) -> Self {
        self.min_cooccurrence = min.max(1);
        self
    }

    pub fn with_evidence(mut self, on: bool) -> Self {
        self.track_evidence = on;
        self
    }

    pub fn case_fold(&self) -> bool {
        self.case_fold
    }

    pub fn min_cooccurrence(&self) -> u64 {
        self.min_cooccurrence
    }

    /// Set the excluded tags; they are normalized like hashtags (leading `#`
    /// stripped, case-folded when folding is on).
    pub fn with_excluded<I, S>(mut self, tags: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.exclude_tags = tags.into_iter().map(|t| self.normalize(t.as_ref())).collect();
        self
    }

    pub fn excluded(&self) -> &BTreeSet<String> {
        &self.exclude_tags
    }

    fn normalize(&self, tag: &str) -> String {
        let tag = tag.trim().trim_start_matches('#');
        if self.case_fold {
            fold_case(tag)
        } else {
            tag.to_string()
        }
    }
}

/// Case folding used for hashtags.
pub fn fold_case(s: &str) -> String {
    s.to_lowercase()
}

/// Undirected hashtag co-occurrence network: every pair of distinct tags in
/// the same tweet gains weight 1.
///
/// Edges below `min_cooccurrence` are removed afterwards, together with the
/// nodes that lost all their edges to that filter. Node labels are the most
/// frequent surface form of each (folded) tag.
pub fn build_hashtag_network<'a>(
    tweets: impl IntoIterator<Item = &'a Tweet>,
    opts: &HashtagNetworkOptions,
) -> Graph {
    let mut graph = Graph::undirected();
    let mut surface: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();

    for t in tweets {
        let mut tags: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
        for raw in &t.hashtags {
            let key = opts.normalize(raw);
            if key.is_empty() || opts.exclude_tags.contains(&key) {
                continue;
            }
            tags.entry(key).or_default().insert(raw.as_str());
        }
        for (key, forms) in &tags {
            graph.add_node(key.clone());
            let counts = surface.entry(key.clone()).or_default();
            for form in forms {
                *counts.entry(form.to_string()).or_default() += 1;
            }
        }
        let keys: Vec<&String> = tags.keys().collect();
        let evidence = opts.track_evidence.then_some(t.id);
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                graph.add_interaction(a, b, evidence);
            }
        }
    }

    for (key, forms) in surface {
        // Most frequent surface form; ties go to the lexicographically smallest.
        let label = forms
            .into_iter()
            .max_by(|(fa, ca), (fb, cb)| ca.cmp(cb).then_with(|| fb.cmp(fa)))
            .map(|(f, _)| f)
            .unwrap_or_else(|| key.clone());
        graph.set_node_attr(&key, ATTR_LABEL, AttrValue::Text(label));
    }
    graph.sort_evidence();

    if opts.min_cooccurrence > 1 {
        let had_edges: BTreeSet<String> = graph
            .node_ids()
            .filter(|id| graph.degree(id, crate::DegreeMode::Total).unwrap_or(0) > 0)
            .cloned()
            .collect();
        let mut filtered = Graph::undirected();
        for (id, attrs) in graph.nodes() {
            *filtered.add_node(id.clone()) = attrs.clone();
        }
        for (s, t, e) in graph.edges() {
            if e.weight >= opts.min_cooccurrence {
                filtered.insert_edge(s, t, e.clone());
            }
        }
        let keep: BTreeSet<String> = filtered
            .node_ids()
            .filter(|id| {
                !had_edges.contains(*id)
                    || filtered.degree(id, crate::DegreeMode::Total).unwrap_or(0) > 0
            })
            .cloned()
            .collect();
        graph = filtered.induced_subgraph(&keep);
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::UserRef;

    fn user(id: u64) -> UserRef {
        UserRef { id, screen_name: format!("user{id}"), followers_count: id * 10, friends_count: id }
    }

    fn tweet(id: u64, author: u64, tags: &[&str]) -> Tweet {
        Tweet {
            id,
            created_at: id as i64,
            text: String::new(),
            lang: Some("en".into()),
            author: user(author),
            hashtags: tags.iter().map(|s| s.to_string()).collect(),
            retweet_of: None,
        }
    }

    fn retweet(id: u64, by: u64, of: u64) -> Tweet {
        let mut t = tweet(id, by, &[]);
        t.retweet_of = Some(Box::new(tweet(id + 1_000_000, of, &[])));
        t
    }

    #[test]
    fn single_retweet() {
        let g = build_retweet_network(&[retweet(1, 1, 2)], &RetweetNetworkOptions::default());
        assert_eq!(g.node_count(), 2);
        let e = g.edge("1", "2").unwrap();
        assert_eq!(e.weight, 1);
        assert!(e.tweet_ids.is_empty());
        assert_eq!(g.node_attr("2", ATTR_LABEL), Some(&AttrValue::Text("user2".into())));
    }

    #[test]
    fn repeated_retweets_aggregate() {
        let opts = RetweetNetworkOptions { track_evidence: true, ..Default::default() };
        let tweets = [retweet(3, 1, 2), retweet(1, 1, 2), retweet(2, 1, 2)];
        let g = build_retweet_network(&tweets, &opts);
        let e = g.edge("1", "2").unwrap();
        assert_eq!(e.weight, 3);
        assert_eq!(e.tweet_ids, vec![1, 2, 3]);
    }

    #[test]
    fn self_retweets_and_originals_skipped() {
        let g = build_retweet_network(&[retweet(1, 5, 5), tweet(2, 1, &[])], &RetweetNetworkOptions::default());
        assert!(g.is_empty());
    }

    #[test]
    fn filters() {
        let mut fr = retweet(1, 1, 2);
        fr.lang = Some("fr".into());
        let late = retweet(500, 3, 4);
        let tweets = [fr, late, retweet(10, 5, 6)];
        let opts = RetweetNetworkOptions {
            language_filter: Some("en".into()),
            time_window: Some((0, 100)),
            ..Default::default()
        };
        let g = build_retweet_network(&tweets, &opts);
        assert_eq!(g.node_ids().collect::<Vec<_>>(), vec!["5", "6"]);
    }

    #[test]
    fn latest_observation_wins() {
        let mut old = retweet(1, 1, 2);
        old.retweet_of.as_mut().unwrap().author.followers_count = 1;
        let mut new = retweet(2, 3, 2);
        new.retweet_of.as_mut().unwrap().author.followers_count = 99;
        for tweets in [[old.clone(), new.clone()], [new, old]] {
            let g = build_retweet_network(&tweets, &RetweetNetworkOptions::default());
            assert_eq!(g.node_attr("2", ATTR_FOLLOWERS), Some(&AttrValue::Int(99)));
        }
    }

    #[test]
    fn hashtag_triangle() {
        let g = build_hashtag_network(&[tweet(1, 1, &["a", "b", "c"])], &HashtagNetworkOptions::default());
        assert_eq!(g.edge_count(), 3);
        for (a, b) in [("a", "b"), ("b", "c"), ("a", "c")] {
            assert_eq!(g.edge(a, b).unwrap().weight, 1);
        }
    }

    #[test]
    fn hashtag_case_fold() {
        let g = build_hashtag_network(&[tweet(1, 1, &["A", "a"])], &HashtagNetworkOptions::default());
        assert_eq!(g.node_ids().collect::<Vec<_>>(), vec!["a"]);
        assert_eq!(g.edge_count(), 0);

        let g = build_hashtag_network(
            &[tweet(1, 1, &["A", "a"])],
            &HashtagNetworkOptions::default().with_case_fold(false),
        );
        assert_eq!(g.edge("A", "a").unwrap().weight, 1);
    }

    #[test]
    fn hashtag_duplicates_do_not_double_weight() {
        let g = build_hashtag_network(&[tweet(1, 1, &["a", "a", "b"])], &HashtagNetworkOptions::default());
        assert_eq!(g.edge("a", "b").unwrap().weight, 1);
    }

    #[test]
    fn hashtag_display_label() {
        let tweets = [tweet(1, 1, &["Brexit", "x"]), tweet(2, 1, &["Brexit"]), tweet(3, 1, &["brexit"])];
        let g = build_hashtag_network(&tweets, &HashtagNetworkOptions::default());
        assert_eq!(g.node_attr("brexit", ATTR_LABEL), Some(&AttrValue::Text("Brexit".into())));
    }

    #[test]
    fn hashtag_exclusion_and_threshold() {
        let opts = HashtagNetworkOptions::default().with_min_cooccurrence(2).with_excluded(["#Brexit"]);
        assert!(opts.excluded().contains("brexit"));
        let tweets = [
            tweet(1, 1, &["brexit", "a", "b"]),
            tweet(2, 1, &["a", "b"]),
            tweet(3, 1, &["a", "c"]),
            tweet(4, 1, &["solo"]),
        ];
        let g = build_hashtag_network(&tweets, &opts);
        assert_eq!(g.node_ids().collect::<Vec<_>>(), vec!["a", "b", "solo"]);
        assert_eq!(g.edge("a", "b").unwrap().weight, 2);
        assert_eq!(g.edge("a", "b").unwrap().tweet_ids, vec![1, 2]);
    }
}

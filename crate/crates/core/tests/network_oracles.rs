mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use twexplore::network::{build_hashtag_network, build_retweet_network, HashtagNetworkOptions, RetweetNetworkOptions};
use twexplore::synth::SyntheticCorpus;
use twexplore::Tweet;

fn corpus(seed: u64) -> Vec<Tweet> {
    SyntheticCorpus { tweets: 500, seed, ..Default::default() }.generate()
}

#[test]
fn retweet_weights_match_pair_tally() {
    for seed in 0..5 {
        let tweets = corpus(seed);
        let g = build_retweet_network(&tweets, &RetweetNetworkOptions { track_evidence: true, ..Default::default() });
        let mut tally: HashMap<(String, String), Vec<u64>> = HashMap::new();
        for t in &tweets {
            if let Some(o) = &t.retweet_of {
                if o.author.id != t.author.id {
                    tally.entry((t.author.id.to_string(), o.author.id.to_string())).or_default().push(t.id);
                }
            }
        }
        assert_eq!(g.edge_count(), tally.len());
        for ((s, t), mut ids) in tally {
            ids.sort_unstable();
            let e = g.edge(&s, &t).unwrap();
            assert_eq!(e.weight, ids.len() as u64);
            assert_eq!(e.tweet_ids, ids);
        }
    }
}

#[test]
fn retweet_weight_sum_counts_non_self_retweets() {
    let tweets = corpus(9);
    let g = build_retweet_network(&tweets, &RetweetNetworkOptions::default());
    let expected = tweets
        .iter()
        .filter(|t| t.retweet_of.as_ref().is_some_and(|o| o.author.id != t.author.id))
        .count();
    assert_eq!(g.total_weight(), expected as u64);

    let en = RetweetNetworkOptions { language_filter: Some("en".into()), ..Default::default() };
    let expected_en = tweets
        .iter()
        .filter(|t| t.lang.as_deref() == Some("en"))
        .filter(|t| t.retweet_of.as_ref().is_some_and(|o| o.author.id != t.author.id))
        .count();
    assert_eq!(build_retweet_network(&tweets, &en).total_weight(), expected_en as u64);
}

#[test]
fn hashtag_weights_match_nested_loop_enumeration() {
    for seed in 0..5 {
        let tweets: Vec<Tweet> = corpus(seed).into_iter().take(300).collect();
        let g = build_hashtag_network(&tweets, &HashtagNetworkOptions::default());
        let mut tally: BTreeMap<(String, String), u64> = BTreeMap::new();
        let mut units = 0;
        for t in &tweets {
            let mut tags: Vec<String> = t.hashtags.iter().map(|h| h.to_lowercase()).collect();
            tags.sort();
            tags.dedup();
            let h = tags.len() as u64;
            units += h * h.saturating_sub(1) / 2;
            for i in 0..tags.len() {
                for j in 0..tags.len() {
                    if i < j {
                        *tally.entry((tags[i].clone(), tags[j].clone())).or_default() += 1;
                    }
                }
            }
        }
        assert_eq!(g.edge_count(), tally.len());
        for ((a, b), w) in &tally {
            assert_eq!(g.edge(a, b).unwrap().weight, *w);
        }
        assert_eq!(g.total_weight(), units);
    }
}

#[test]
fn builders_are_permutation_invariant() {
    let tweets = corpus(3);
    let rt_opts = RetweetNetworkOptions { track_evidence: true, ..Default::default() };
    let ht_opts = HashtagNetworkOptions::default().with_min_cooccurrence(2);
    let rt = build_retweet_network(&tweets, &rt_opts);
    let ht = build_hashtag_network(&tweets, &ht_opts);
    let mut rng = common::rng(5);
    for _ in 0..10 {
        let mut shuffled = tweets.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(build_retweet_network(&shuffled, &rt_opts), rt);
        assert_eq!(build_hashtag_network(&shuffled, &ht_opts), ht);
    }
}

#[test]
fn sharded_weights_merge_to_the_whole() {
    let tweets = corpus(4);
    let whole = build_hashtag_network(&tweets, &HashtagNetworkOptions::default());
    let (left, right) = tweets.split_at(217);
    let parts = [
        build_hashtag_network(left, &HashtagNetworkOptions::default()),
        build_hashtag_network(right, &HashtagNetworkOptions::default()),
    ];
    let mut merged: BTreeMap<(String, String), u64> = BTreeMap::new();
    for g in &parts {
        for (s, t, e) in g.edges() {
            *merged.entry((s.clone(), t.clone())).or_default() += e.weight;
        }
    }
    let whole_map: BTreeMap<(String, String), u64> =
        whole.edges().map(|(s, t, e)| ((s.clone(), t.clone()), e.weight)).collect();
    assert_eq!(merged, whole_map);
    let nodes: BTreeSet<&String> = parts.iter().flat_map(|g| g.node_ids()).collect();
    assert_eq!(nodes, whole.node_ids().collect());
}

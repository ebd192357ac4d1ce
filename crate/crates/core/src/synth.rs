//! Seeded synthetic corpora for fixtures, benchmarks and tests.
//!
//! Users are split into groups; retweets and hashtags mostly stay within a
//! group, so the generated networks have recoverable community structure.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Tweet, UserRef};

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub tweets: usize,
    pub users: usize,
    pub groups: usize,
    /// Probability that a tweet is a retweet.
    pub retweet_probability: f64,
    /// Probability that a retweet or hashtag crosses group boundaries.
    pub mixing: f64,
    pub tags_per_group: usize,
    pub max_tags_per_tweet: usize,
    /// First tweet timestamp (epoch seconds); tweets spread over `span_secs`.
    pub start: i64,
    pub span_secs: i64,
    pub seed: u64,
}

impl Default for SyntheticCorpus {
    fn default() -> Self {
        SyntheticCorpus {
            tweets: 500,
            users: 60,
            groups: 3,
            retweet_probability: 0.6,
            mixing: 0.1,
            tags_per_group: 6,
            max_tags_per_tweet: 4,
            start: 1_611_532_800,
            span_secs: 48 * 3600,
            seed: 42,
        }
    }
}

impl SyntheticCorpus {
    fn user(&self, id: usize, rng: &mut ChaCha8Rng) -> UserRef {
        UserRef {
            id: 1000 + id as u64,
            screen_name: format!("user_{id:03}"),
            followers_count: rng.gen_range(0..5000),
            friends_count: rng.gen_range(0..800),
        }
    }

    fn pick_group(&self, home: usize, rng: &mut ChaCha8Rng) -> usize {
        if rng.gen_bool(self.mixing) {
            rng.gen_range(0..self.groups)
        } else {
            home
        }
    }

    fn member(&self, group: usize, rng: &mut ChaCha8Rng) -> usize {
        let per = self.users.div_ceil(self.groups);
        let lo = group * per;
        let hi = ((group + 1) * per).min(self.users);
        rng.gen_range(lo..hi.max(lo + 1)).min(self.users - 1)
    }

    fn tags(&self, home: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
        let count = rng.gen_range(0..=self.max_tags_per_tweet);
        (0..count)
            .map(|_| {
                let g = self.pick_group(home, rng);
                let k = rng.gen_range(0..self.tags_per_group);
                // Mixed-case surface forms exercise case folding.
                if rng.gen_bool(0.2) {
                    format!("Topic{g}_{k}")
                } else {
                    format!("topic{g}_{k}")
                }
            })
            .collect()
    }

    /// Generate tweets in chronological order with increasing ids.
    pub fn generate(&self) -> Vec<Tweet> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut times: Vec<i64> =
            (0..self.tweets).map(|_| self.start + rng.gen_range(0..self.span_secs.max(1))).collect();
        times.sort_unstable();
        let mut originals: Vec<Vec<Tweet>> = vec![Vec::new(); self.groups];
        let mut out = Vec::with_capacity(self.tweets);
        let langs = ["en", "en", "en", "de", "fr"];

        for (i, &created_at) in times.iter().enumerate() {
            let id = 10_000 + i as u64;
            let home = rng.gen_range(0..self.groups);
            let author = self.member(home, &mut rng);
            let author = self.user(author, &mut rng);
            let lang = Some(langs.choose(&mut rng).unwrap().to_string());
            let source_group = self.pick_group(home, &mut rng);
            let wants_retweet = rng.gen_bool(self.retweet_probability);
            let tweet = match originals[source_group].choose(&mut rng) {
                Some(original) if wants_retweet => Tweet {
                    id,
                    created_at,
                    text: format!("RT @{}: {}", original.author.screen_name, original.text),
                    lang,
                    author,
                    hashtags: original.hashtags.clone(),
                    retweet_of: Some(Box::new(original.clone())),
                },
                _ => {
                    let hashtags = self.tags(home, &mut rng);
                    let text = hashtags.iter().map(|h| format!("#{h}")).collect::<Vec<_>>().join(" ");
                    let t = Tweet {
                        id,
                        created_at,
                        text: format!("status {id} {text}"),
                        lang,
                        author,
                        hashtags,
                        retweet_of: None,
                    };
                    originals[home].push(t.clone());
                    t
                }
            };
            out.push(tweet);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = SyntheticCorpus::default().generate();
        assert_eq!(a.len(), 500);
        assert_eq!(a, SyntheticCorpus::default().generate());
        assert!(a.iter().any(|t| t.is_retweet()));
        assert!(a.windows(2).all(|w| w[0].created_at <= w[1].created_at && w[0].id < w[1].id));
    }
}

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twexplore::Graph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Node ids zero-padded so string order matches numeric order.
pub fn node(i: usize) -> String {
    format!("n{i:03}")
}

/// Erdős–Rényi style graph with integer weights in `1..=max_weight`.
pub fn random_graph(n: usize, p: f64, directed: bool, max_weight: u64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(directed);
    for i in 0..n {
        g.add_node(node(i));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j || (!directed && j < i) {
                continue;
            }
            if rng.gen_bool(p) {
                g.add_edge(&node(i), &node(j), rng.gen_range(1..=max_weight));
            }
        }
    }
    g
}

/// Zachary's karate club, 34 members and 78 friendships (1-based).
pub const KARATE: &[(u32, u32)] = &[
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9), (1, 11), (1, 12), (1, 13), (1, 14),
    (1, 18), (1, 20), (1, 22), (1, 32), (2, 3), (2, 4), (2, 8), (2, 14), (2, 18), (2, 20), (2, 22),
    (2, 31), (3, 4), (3, 8), (3, 9), (3, 10), (3, 14), (3, 28), (3, 29), (3, 33), (4, 8), (4, 13),
    (4, 14), (5, 7), (5, 11), (6, 7), (6, 11), (6, 17), (7, 17), (9, 31), (9, 33), (9, 34), (10, 34),
    (14, 34), (15, 33), (15, 34), (16, 33), (16, 34), (19, 33), (19, 34), (20, 34), (21, 33), (21, 34),
    (23, 33), (23, 34), (24, 26), (24, 28), (24, 30), (24, 33), (24, 34), (25, 26), (25, 28), (25, 32),
    (26, 32), (27, 30), (27, 34), (28, 34), (29, 32), (29, 34), (30, 33), (30, 34), (31, 33), (31, 34),
    (32, 33), (32, 34), (33, 34),
];

pub fn karate() -> Graph {
    let mut g = Graph::undirected();
    for &(a, b) in KARATE {
        g.add_edge(&node(a as usize), &node(b as usize), 1);
    }
    g
}

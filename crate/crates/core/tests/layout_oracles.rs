mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use twexplore::layout::{self, exact_repulsion, AttractionModel, Point, QuadTree};
use twexplore::{Graph, LayoutParams};

use common::{node, rng};

/// Root of a monotone increasing function by bisection.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn pair(weight: u64) -> Graph {
    let mut g = Graph::undirected();
    g.add_edge("a", "b", weight);
    g
}

fn pair_distance(g: &Graph, params: &LayoutParams) -> f64 {
    let r = layout::force_layout(g, params);
    r.positions["a"].distance(r.positions["b"])
}

#[test]
fn two_nodes_settle_at_force_balance() {
    for model in [AttractionModel::Spring, AttractionModel::LinLog] {
        for weight in [1u64, 3] {
            for (kr, ka) in [(1.0, 1.0), (2.0, 0.5)] {
                let m = 1.0 + weight as f64;
                let attraction = |d: f64| match model {
                    AttractionModel::Spring => ka * weight as f64 * d,
                    AttractionModel::LinLog => ka * weight as f64 * (1.0 + d).ln(),
                };
                let expected = bisect(|d| attraction(d) - kr * m * m / d, 1e-9, 1e6);
                let params = LayoutParams {
                    repulsion_strength: kr,
                    attraction_strength: ka,
                    attraction_model: model,
                    iterations: 2000,
                    convergence_tol: 1e-9,
                    ..Default::default()
                };
                let d = pair_distance(&pair(weight), &params);
                assert!(
                    (d - expected).abs() / expected < 0.02,
                    "{model:?} w={weight} kr={kr} ka={ka}: {d} vs {expected}"
                );
            }
        }
    }
    // With unit strengths the spring balance is sqrt(m1 m2 / w) = 2.
    let d = pair_distance(&pair(1), &LayoutParams { iterations: 2000, ..Default::default() });
    assert!((d - 2.0).abs() < 0.04);
}

fn random_bodies(n: usize, seed: u64) -> Vec<(Point<f64>, f64)> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| (Point::new(r.gen_range(-50.0..50.0), r.gen_range(-50.0..50.0)), r.gen_range(1.0..6.0)))
        .collect()
}

/// Direct pairwise sum, written independently of the library.
fn brute_force(bodies: &[(Point<f64>, f64)], i: usize) -> (f64, f64) {
    let (p, m) = bodies[i];
    let (mut fx, mut fy) = (0.0, 0.0);
    for (j, &(q, mj)) in bodies.iter().enumerate() {
        if j == i {
            continue;
        }
        let (dx, dy) = (p.x - q.x, p.y - q.y);
        let d2 = dx * dx + dy * dy;
        // Magnitude m_i m_j / d along the unit vector: (m_i m_j / d^2) * delta.
        fx += m * mj * dx / d2;
        fy += m * mj * dy / d2;
    }
    (fx, fy)
}

fn max_relative_error(n: usize, theta: f64, seed: u64) -> f64 {
    let bodies = random_bodies(n, seed);
    let tree = QuadTree::build(&bodies);
    (0..n)
        .map(|i| {
            let (ex, ey) = brute_force(&bodies, i);
            let f = tree.repulsion_on(i, theta, 1.0).force;
            (f.x - ex).hypot(f.y - ey) / ex.hypot(ey)
        })
        .fold(0.0, f64::max)
}

#[test]
fn barnes_hut_accuracy() {
    for seed in 0..20 {
        assert!(max_relative_error(200, 0.0, seed) < 1e-9);
        let e = max_relative_error(200, 0.7, seed);
        assert!(e < 0.05, "seed {seed}: {e}");
    }
    let e = max_relative_error(1000, 0.5, 7);
    assert!(e < 0.02, "{e}");
}

#[test]
fn exact_repulsion_matches_brute_force() {
    let bodies = random_bodies(50, 3);
    for i in 0..bodies.len() {
        let (ex, ey) = brute_force(&bodies, i);
        let f = exact_repulsion(&bodies, i, 1.0).force;
        assert!((f.x - ex).abs() < 1e-9 * ex.abs().max(1.0));
        assert!((f.y - ey).abs() < 1e-9 * ey.abs().max(1.0));
    }
}

fn ring_with_chords(n: usize) -> Graph {
    let mut g = Graph::undirected();
    for i in 0..n {
        g.add_edge(&node(i), &node((i + 1) % n), 1);
        g.add_edge(&node(i), &node((i + 5) % n), 2);
    }
    g
}

#[test]
fn energy_never_increases() {
    let g = ring_with_chords(40);
    for seed in 0..20 {
        let r = layout::force_layout(&g, &LayoutParams { seed, iterations: 150, ..Default::default() });
        assert_eq!(r.energy_trace.len(), r.iterations_run);
        assert!(r.energy_trace.windows(2).all(|w| w[1] <= w[0]), "seed {seed}");
        assert!(r.positions.values().all(|p| p.is_finite()));
    }
}

#[test]
fn exact_layout_is_translation_invariant() {
    let g = ring_with_chords(20);
    let params = LayoutParams { theta: 0.0, iterations: 60, ..Default::default() };
    let start = layout::initial_positions::<f64>(&g, 9);
    let shift = Point::new(1000.0, -250.0);
    let moved: BTreeMap<_, _> = start.iter().map(|(k, &p)| (k.clone(), p + shift)).collect();
    let a = layout::force_layout_from(&g, &params, &start).unwrap();
    let b = layout::force_layout_from(&g, &params, &moved).unwrap();
    assert_eq!(a.iterations_run, b.iterations_run);
    for (id, p) in &a.positions {
        let q = b.positions[id] - shift;
        assert!(p.distance(q) < 1e-6, "{id}: {p:?} vs {q:?}");
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn planted_blocks_separate() {
    let mut separated = 0;
    for seed in 0..20u64 {
        let mut r = rng(1000 + seed);
        let mut g = Graph::undirected();
        let n = 60;
        for i in 0..n {
            g.add_node(node(i));
            for j in i + 1..n {
                let p = if (i < n / 2) == (j < n / 2) { 0.3 } else { 0.01 };
                if r.gen_bool(p) {
                    g.add_edge(&node(i), &node(j), 1);
                }
            }
        }
        let res = layout::force_layout(&g, &LayoutParams { seed, ..Default::default() });
        let (mut intra, mut inter) = (Vec::new(), Vec::new());
        for i in 0..n {
            for j in i + 1..n {
                let d = res.positions[&node(i)].distance(res.positions[&node(j)]);
                if (i < n / 2) == (j < n / 2) {
                    intra.push(d);
                } else {
                    inter.push(d);
                }
            }
        }
        if mean(&intra) < mean(&inter) {
            separated += 1;
        }
    }
    assert!(separated >= 19, "{separated}/20");
}

#[test]
fn seeded_layout_is_reproducible() {
    let g = ring_with_chords(30);
    let params = LayoutParams { seed: 5, iterations: 50, ..Default::default() };
    assert_eq!(layout::force_layout(&g, &params), layout::force_layout(&g, &params));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_tree_matches_direct_sum(seed in any::<u64>(), n in 2usize..40) {
        let bodies = random_bodies(n, seed);
        let tree = QuadTree::build(&bodies);
        for i in 0..n {
            let (ex, ey) = brute_force(&bodies, i);
            let f = tree.repulsion_on(i, 0.0, 1.0).force;
            prop_assert!((f.x - ex).hypot(f.y - ey) <= 1e-9 * ex.hypot(ey).max(1.0));
        }
    }
}

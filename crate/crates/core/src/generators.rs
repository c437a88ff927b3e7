//! Graph families and seeded random graphs for tests, benches and the CLI.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Deterministic generator shared by every seeded entry point.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

pub fn path(n: usize) -> Graph {
    build(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    build(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    build(n, &edges)
}

/// Center 0 and leaves 1..=leaves.
pub fn star(leaves: usize) -> Graph {
    build(
        leaves + 1,
        &(1..=leaves).map(|i| (0, i)).collect::<Vec<_>>(),
    )
}

/// The d-dimensional hypercube; vertex ids are the bit strings.
pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b))))
        .filter(|&(u, v)| u < v)
        .collect();
    build(n, &edges)
}

/// `paths` internally disjoint s-t paths with `len` internal vertices each; s = 0, t = 1.
pub fn parallel_paths(paths: usize, len: usize) -> Graph {
    let mut g = Graph::new(2 + paths * len);
    for p in 0..paths {
        let first = 2 + p * len;
        let mut prev = 0;
        for i in 0..len {
            g.add_edge(prev, first + i).expect("in range");
            prev = first + i;
        }
        g.add_edge(prev, 1).expect("in range");
    }
    g
}

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, &edges)
}

/// Uniform graph with exactly `m` edges (capped at the number of pairs).
pub fn gnm(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let pairs = n * n.saturating_sub(1) / 2;
    let m = m.min(pairs);
    if pairs <= 4 * m || pairs < 1 << 20 {
        let chosen = sample(rng, pairs, m);
        let mut edges: Vec<_> = chosen.iter().map(|i| pair_at(n, i)).collect();
        edges.sort_unstable();
        return build(n, &edges);
    }
    let mut seen = std::collections::HashSet::with_capacity(m);
    while seen.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            seen.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Vec<_> = seen.into_iter().collect();
    edges.sort_unstable();
    build(n, &edges)
}

/// The i-th pair (u, v), u < v, in row-major order.
fn pair_at(n: usize, mut i: usize) -> (usize, usize) {
    let mut u = 0;
    while i >= n - 1 - u {
        i -= n - 1 - u;
        u += 1;
    }
    (u, u + 1 + i)
}

/// Uniform random labelled tree (random attachment).
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    build(n, &edges)
}

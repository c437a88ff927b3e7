//! Solvers against brute force on small seeded instances.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twr_core::bipartization::{
    bipartite_contraction, exact_stable_bipartization, g_bipartization, g_edge_bipartization, oct,
};
use twr_core::class::GraphClass;
use twr_core::cuts::{
    connected_cut, edge_induced_vertex_cut, g_mincut, multicut_uncut, steiner_tree_bounded,
};
use twr_core::dp::TerminalPair;
use twr_core::generators::{gnp, rng};
use twr_core::graph::{is_bipartite, Graph, VertexSet};
use twr_core::hck::{hck_reduce_bipartite, hck_solve, HomTarget, ListAssignment};
use twr_core::oracle::Oracle;

const CASES: u64 = 60;

fn instance(seed: u64, max_n: usize) -> (ChaCha8Rng, Graph) {
    let mut r = rng(seed);
    let n = r.gen_range(3..=max_n);
    let g = gnp(n, r.gen_range(0.2..0.55), &mut r);
    (r, g)
}

fn pair(g: &Graph, r: &mut ChaCha8Rng) -> Option<(usize, usize)> {
    let s = r.gen_range(0..g.n());
    let t = r.gen_range(0..g.n());
    (s != t && !g.has_edge(s, t)).then_some((s, t))
}

fn len(s: Option<VertexSet>) -> Option<usize> {
    s.map(|s| s.len())
}

#[test]
fn hereditary_cuts() {
    let oracle = Oracle::default();
    for (i, name) in ["edgeless", "clique", "all", "max-deficiency-1", "rank-2"]
        .iter()
        .enumerate()
    {
        let class = GraphClass::builtin(name).unwrap();
        for seed in 0..CASES {
            let (mut r, g) = instance(1000 * i as u64 + seed, 8);
            let Some((s, t)) = pair(&g, &mut r) else {
                continue;
            };
            let k = r.gen_range(0..=3);
            assert_eq!(
                len(g_mincut(&g, s, t, k, &class).unwrap()),
                len(oracle.g_mincut(&g, s, t, k, &class).unwrap()),
                "{name}, seed {seed}"
            );
        }
    }
}

#[test]
fn covered_and_connected_cuts() {
    let oracle = Oracle::default();
    for seed in 0..CASES {
        let (mut r, g) = instance(5000 + seed, 8);
        let Some((s, t)) = pair(&g, &mut r) else {
            continue;
        };
        let k = r.gen_range(0..=2);
        let got = edge_induced_vertex_cut(&g, s, t, k)
            .unwrap()
            .map(|x| x.0.len());
        let want = oracle
            .edge_induced_vertex_cut(&g, s, t, k)
            .unwrap()
            .map(|x| x.0.len());
        assert_eq!(got, want, "eivc seed {seed}");
        let k = r.gen_range(0..=4);
        assert_eq!(
            len(connected_cut(&g, s, t, k).unwrap()),
            len(oracle.connected_cut(&g, s, t, k).unwrap()),
            "connected seed {seed}"
        );
    }
}

#[test]
fn multicuts_with_uncut_pairs() {
    let oracle = Oracle::default();
    for seed in 0..CASES {
        let (mut r, g) = instance(6000 + seed, 7);
        let n = g.n();
        let mut cut = Vec::new();
        let mut uncut = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let x = VertexSet::singleton(r.gen_range(0..n));
            let y = VertexSet::singleton(r.gen_range(0..n));
            if x == y {
                continue;
            }
            if r.gen_bool(0.6) {
                cut.push(TerminalPair::new(x, y));
            } else {
                uncut.push(TerminalPair::new(x, y));
            }
        }
        let k = r.gen_range(0..=3);
        let class = GraphClass::all();
        assert_eq!(
            len(multicut_uncut(&g, &cut, &uncut, k, &class).unwrap()),
            len(oracle.multicut_uncut(&g, &cut, &uncut, k, &class).unwrap()),
            "seed {seed}"
        );
    }
}

#[test]
fn bipartization_family() {
    let oracle = Oracle::default();
    let stable = GraphClass::edgeless();
    for seed in 0..CASES {
        let (mut r, g) = instance(7000 + seed, 8);
        let k = r.gen_range(0..=3);
        assert_eq!(
            len(oct(&g, k)),
            len(oracle.oct(&g, k).unwrap()),
            "oct seed {seed}"
        );
        assert_eq!(
            len(g_bipartization(&g, k, &stable).unwrap()),
            len(oracle.bipartization(&g, k, &stable, false).unwrap()),
            "stable seed {seed}"
        );
        assert_eq!(
            len(exact_stable_bipartization(&g, k).unwrap()),
            len(oracle.bipartization(&g, k, &stable, true).unwrap()),
            "exact seed {seed}"
        );
    }
}

#[test]
fn edge_bipartization_and_contraction() {
    let oracle = Oracle::default();
    for seed in 0..30 {
        let (mut r, g) = instance(8000 + seed, 6);
        let k = r.gen_range(0..=2);
        let class = GraphClass::all();
        let got = g_edge_bipartization(&g, k, &class).unwrap();
        assert_eq!(
            got.as_ref().map(|f| f.len()),
            oracle
                .edge_bipartization(&g, k, &class)
                .unwrap()
                .map(|f| f.len())
        );
        let got = bipartite_contraction(&g, k).unwrap();
        assert_eq!(
            got.map(|f| f.len()),
            oracle.contraction(&g, k).unwrap().map(|f| f.len()),
            "seed {seed}"
        );
    }
}

#[test]
fn steiner_trees() {
    let oracle = Oracle::default();
    for seed in 0..CASES {
        let (mut r, g) = instance(9000 + seed, 9);
        let x: VertexSet = (0..r.gen_range(1..=3))
            .map(|_| r.gen_range(0..g.n()))
            .collect();
        let k = r.gen_range(1..=g.n());
        assert_eq!(
            len(steiner_tree_bounded(&g, &x, k).unwrap()),
            len(oracle.steiner_tree(&g, &x, k).unwrap()),
            "seed {seed}"
        );
    }
}

fn target(r: &mut ChaCha8Rng) -> HomTarget {
    loop {
        let h = r.gen_range(2..=4);
        let mut edges = vec![(0, 1)];
        let mut caps = BTreeMap::new();
        for c in 2..h {
            caps.insert(c, r.gen_range(0..=2));
            edges.push((r.gen_range(0..c), c));
            if r.gen_bool(0.5) {
                edges.push((c, c));
            }
        }
        if let Ok(t) = HomTarget::new(h, &edges, &caps) {
            return t;
        }
    }
}

#[test]
fn homomorphisms_with_caps() {
    let oracle = Oracle::default();
    for seed in 0..CASES {
        let (mut r, g) = instance(10_000 + seed, 8);
        let t = target(&mut r);
        let lists = ListAssignment::full(g.n(), &t);
        let got = hck_solve(&g, &t, &lists).unwrap();
        let want = oracle.hck(&g, &t, &lists).unwrap();
        assert_eq!(got.is_some(), want.is_some(), "seed {seed}");
    }
}

#[test]
fn bipartite_reduction_covers_minimal_exceptional_sets() {
    let oracle = Oracle::default();
    let mut checked = 0;
    for seed in 0..200 {
        let (mut r, g) = instance(11_000 + seed, 8);
        if !is_bipartite(&g) {
            continue;
        }
        let t = target(&mut r);
        let lists: Vec<Vec<usize>> = (0..g.n())
            .map(|_| {
                let l: Vec<usize> = (0..t.vertices()).filter(|_| r.gen_bool(0.7)).collect();
                if l.is_empty() {
                    vec![0]
                } else {
                    l
                }
            })
            .collect();
        let lists = ListAssignment::new(&lists, &t).unwrap();
        let cover = hck_reduce_bipartite(&g, &t, &lists).unwrap();
        for set in oracle.minimal_exceptional_sets(&g, &t, &lists).unwrap() {
            assert!(
                set.is_subset(&cover),
                "seed {seed}: {set:?} not in {cover:?}"
            );
        }
        checked += 1;
    }
    assert!(checked > 20);
}

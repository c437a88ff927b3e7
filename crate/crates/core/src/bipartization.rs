//! Odd cycle transversals and bipartization under side constraints.
//!
//! All functions look at black edges only; red edges are dropped on entry.

use std::borrow::Cow;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::canon::{canonical_from_graph, ROW_BITS};
use crate::class::{black_masks, GraphClass};
use crate::cuts::{excluded_by_class, g_mincut_range};
use crate::error::{Error, Result};
use crate::flow::{min_vertex_cut, min_vertex_cut_avoiding};
use crate::graph::{contract_edges, is_bipartite, two_coloring_where, EdgeColor, Graph, VertexSet};
use crate::par;
use crate::stats::Stats;

fn black_only(g: &Graph) -> Cow<'_, Graph> {
    if g.edges().all(|e| e.2 == EdgeColor::Black) {
        return Cow::Borrowed(g);
    }
    let mut h = Graph::new(g.n());
    for v in 0..g.n() {
        h.set_label(v, g.label(v)).expect("in range");
    }
    for (u, v, c) in g.edges() {
        if c == EdgeColor::Black {
            h.add_edge(u, v).expect("in range");
        }
    }
    Cow::Owned(h)
}

fn independent(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[..i].iter().all(|&v| !g.has_black_edge(u, v)))
}

/// Split of a known transversal S₀ into removed, black and white parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartizationBranch {
    pub r: VertexSet,
    pub b0: VertexSet,
    pub w0: VertexSet,
}

impl BipartizationBranch {
    /// Branch number `code` in base 3, digit `i` placing `s0[i]` into R, B₀ or W₀.
    fn decode(s0: &[usize], mut code: usize) -> Self {
        let (mut r, mut b0, mut w0) = (Vec::new(), Vec::new(), Vec::new());
        for &v in s0 {
            match code % 3 {
                0 => r.push(v),
                1 => b0.push(v),
                _ => w0.push(v),
            }
            code /= 3;
        }
        BipartizationBranch {
            r: r.into(),
            b0: b0.into(),
            w0: w0.into(),
        }
    }

    /// Every split of `s0` with independent B₀ and W₀, in code order.
    pub fn enumerate(g: &Graph, s0: &VertexSet) -> Vec<BipartizationBranch> {
        let total = 3usize.pow(s0.len() as u32);
        (0..total)
            .map(|c| Self::decode(s0.as_slice(), c))
            .filter(|b| independent(g, b.b0.as_slice()) && independent(g, b.w0.as_slice()))
            .collect()
    }
}

/// X = (B∩B′)∪(W∩W′) and Y = (B∩W′)∪(W∩B′) for the proper coloring (B′, W′) of `bip`.
/// A set S separates X from Y iff `bip - S` has a 2-coloring with B∖S black and W∖S white.
pub fn separation_sets(
    bip: &Graph,
    coloring: (&VertexSet, &VertexSet),
    b: &VertexSet,
    w: &VertexSet,
) -> Result<(VertexSet, VertexSet)> {
    let n = bip.n();
    let (bp, wp) = coloring;
    for s in [bp, wp, b, w] {
        s.check(n)?;
    }
    if bp.len() + wp.len() != n || !bp.intersection(wp).is_empty() {
        return Err(Error::Precondition(
            "coloring must partition the vertices".into(),
        ));
    }
    let black = bp.mask(n);
    if bip
        .edges()
        .any(|(u, v, c)| c == EdgeColor::Black && black[u] == black[v])
    {
        return Err(Error::Precondition("coloring is not proper".into()));
    }
    let x = b.intersection(bp).union(&w.intersection(wp));
    let y = b.intersection(wp).union(&w.intersection(bp));
    Ok((x, y))
}

/// Minimum odd cycle transversal if it has at most `k` vertices.
///
/// Iterative compression: vertices are added in id order while a minimum transversal of
/// the prefix is maintained; when the old one stops working, the new vertex is added and
/// the result is compressed by one if possible.
pub fn oct(g: &Graph, k: usize) -> Option<VertexSet> {
    let g = black_only(g);
    let n = g.n();
    let mut alive = vec![false; n];
    let mut sol: Vec<usize> = Vec::new();
    for v in 0..n {
        alive[v] = true;
        let mut rest = alive.clone();
        for &x in &sol {
            rest[x] = false;
        }
        if two_coloring_where(&g, &rest).is_some() {
            continue;
        }
        let mut cand = sol.clone();
        cand.push(v);
        match compress(&g, &alive, &cand) {
            Some(smaller) => sol = smaller,
            None if cand.len() > k => return None,
            None => sol = cand,
        }
    }
    sol.sort_unstable();
    Some(VertexSet::from_sorted(sol))
}

/// A transversal of G[alive] one smaller than `cand`, if there is one.
fn compress(g: &Graph, alive: &[bool], cand: &[usize]) -> Option<Vec<usize>> {
    let p = cand.len();
    let mut rest = alive.to_vec();
    for &x in cand {
        rest[x] = false;
    }
    let side = two_coloring_where(g, &rest).expect("candidate is a transversal");
    let keep: VertexSet = (0..g.n()).filter(|&v| rest[v]).collect();
    let base = g.induced(&keep);
    let mut index = vec![usize::MAX; g.n()];
    for (i, v) in keep.iter().enumerate() {
        index[v] = i;
    }
    // swapping B₀ and W₀ swaps X and Y, so the first non-R vertex may be fixed to B₀
    let codes: Vec<usize> = (0..3usize.pow(p as u32))
        .filter(|&c| {
            let mut c = c;
            for _ in 0..p {
                match c % 3 {
                    0 => c /= 3,
                    d => return d == 1,
                }
            }
            true
        })
        .collect();
    par::find_map_first(&codes, |&code| {
        let br = BipartizationBranch::decode(cand, code);
        if br.r.len() >= p || !independent(g, br.b0.as_slice()) || !independent(g, br.w0.as_slice())
        {
            return None;
        }
        let mut need = vec![0u8; g.n()];
        for (part, bit) in [(&br.w0, 1u8), (&br.b0, 2u8)] {
            for v in part.iter() {
                for &u in g.neighbors(v) {
                    if rest[u] {
                        need[u] |= bit;
                    }
                }
            }
        }
        // bit 1: must be black (side 0 wanted), bit 2: must be white
        let mut x = Vec::new();
        let mut y = Vec::new();
        for v in keep.iter() {
            let (want_black, want_white) = (need[v] & 1 != 0, need[v] & 2 != 0);
            if (want_black && side[v] == 0) || (want_white && side[v] == 1) {
                x.push(index[v]);
            }
            if (want_black && side[v] == 1) || (want_white && side[v] == 0) {
                y.push(index[v]);
            }
        }
        let budget = p - 1 - br.r.len();
        if x.is_empty() || y.is_empty() {
            return Some(br.r.into_vec());
        }
        let mut h = base.clone();
        let s = h.add_vertex(0);
        let t = h.add_vertex(0);
        for &v in &x {
            h.add_edge(s, v).expect("in range");
        }
        for &v in &y {
            h.add_edge(t, v).expect("in range");
        }
        let (_, sep) = min_vertex_cut(&h, s, t, budget).expect("valid terminals")?;
        let mut out = br.r.into_vec();
        out.extend(sep.iter().map(|i| keep.as_slice()[i]));
        out.sort_unstable();
        Some(out)
    })
}

/// Smallest S with |S| <= k, G - S bipartite and G[S] in `class`; ties go to the
/// lexicographically smallest set.
pub fn g_bipartization(g: &Graph, k: usize, class: &GraphClass) -> Result<Option<VertexSet>> {
    g_bipartization_with(g, k, class, &Stats::new())
}

struct Prepared {
    h: Graph,
    ids: Vec<usize>,
    s: usize,
    t: usize,
    lower: usize,
}

pub fn g_bipartization_with(
    g: &Graph,
    k: usize,
    class: &GraphClass,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    let g = black_only(g);
    let g = g.as_ref();
    if class.is_trivial() {
        return Ok(oct(g, k));
    }
    let Some(s0) = oct(g, k) else { return Ok(None) };
    if s0.is_empty() {
        return Ok(class.contains(&Graph::new(0))?.then(VertexSet::new));
    }
    let mut rest = vec![true; g.n()];
    for v in s0.iter() {
        rest[v] = false;
    }
    let side = two_coloring_where(g, &rest).expect("oct result");
    let branches = BipartizationBranch::enumerate(g, &s0);
    let prepared: Vec<Option<Prepared>> =
        par::map(&branches, |br| prepare(g, &rest, &side, br, k, class))
            .into_iter()
            .collect::<Result<_>>()?;
    let prepared: Vec<Prepared> = prepared.into_iter().flatten().collect();
    for b in s0.len()..=k {
        let live: Vec<&Prepared> = prepared.iter().filter(|p| p.lower <= b).collect();
        let found: Vec<Option<VertexSet>> = par::map(&live, |p| {
            Ok(g_mincut_range(&p.h, p.s, p.t, b, b, class, stats)?
                .map(|sol| sol.iter().map(|i| p.ids[i]).collect::<VertexSet>()))
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let best = found.into_iter().flatten().min_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.as_slice().cmp(b.as_slice()))
        });
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

/// G minus B₀ ∪ W₀ plus s adjacent to X ∪ R and t adjacent to Y ∪ R.
fn prepare(
    g: &Graph,
    rest: &[bool],
    side: &[u8],
    br: &BipartizationBranch,
    k: usize,
    class: &GraphClass,
) -> Result<Option<Prepared>> {
    let mut need_black = VertexSet::new();
    let mut need_white = VertexSet::new();
    for v in br.w0.iter() {
        for &u in g.neighbors(v) {
            if rest[u] {
                need_black.insert(u);
            }
        }
    }
    for v in br.b0.iter() {
        for &u in g.neighbors(v) {
            if rest[u] {
                need_white.insert(u);
            }
        }
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for v in need_black.iter() {
        if side[v] == 0 {
            x.push(v)
        } else {
            y.push(v)
        }
    }
    for v in need_white.iter() {
        if side[v] == 1 {
            x.push(v)
        } else {
            y.push(v)
        }
    }
    let (mut h, ids) = g.without(&br.b0.union(&br.w0));
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in ids.iter().enumerate() {
        index[v] = i;
    }
    let s = h.add_vertex(0);
    let t = h.add_vertex(0);
    for v in x.iter().copied().chain(br.r.iter()) {
        h.add_edge(s, index[v])?;
    }
    for v in y.iter().copied().chain(br.r.iter()) {
        h.add_edge(t, index[v])?;
    }
    let excluded = excluded_by_class(&h, class)?;
    let Some((lower, _)) = min_vertex_cut_avoiding(&h, s, t, k, &excluded)? else {
        return Ok(None);
    };
    Ok(Some(Prepared {
        h,
        ids,
        s,
        t,
        lower,
    }))
}

/// A shortest odd cycle, in walk order, given a set whose removal makes `g` bipartite.
/// `None` if `g` is bipartite.
pub fn shortest_odd_cycle(g: &Graph, s_known: &VertexSet) -> Result<Option<Vec<usize>>> {
    let g = black_only(g);
    let n = g.n();
    s_known.check(n)?;
    let mut rest = vec![true; n];
    for v in s_known.iter() {
        rest[v] = false;
    }
    if two_coloring_where(&g, &rest).is_none() {
        return Err(Error::Precondition(
            "removing the given set does not leave a bipartite graph".into(),
        ));
    }
    if is_bipartite(&g) {
        return Ok(None);
    }
    let mut best: Option<Vec<usize>> = None;
    for v in s_known.iter() {
        if let Some(walk) = odd_closed_walk(&g, v) {
            if best.as_ref().is_none_or(|b| walk.len() < b.len()) {
                best = Some(walk);
            }
        }
    }
    Ok(best.map(simple_odd_cycle))
}

/// Shortest odd closed walk through `v`, by BFS in the bipartite double cover.
/// The returned list omits the repeated endpoint.
fn odd_closed_walk(g: &Graph, v: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let node = |u: usize, parity: usize| 2 * u + parity;
    let mut pred = vec![usize::MAX; 2 * n];
    let mut seen = vec![false; 2 * n];
    seen[node(v, 0)] = true;
    let mut queue = VecDeque::from([node(v, 0)]);
    while let Some(x) = queue.pop_front() {
        let (u, parity) = (x / 2, x % 2);
        for w in g.black_neighbors(u) {
            let y = node(w, 1 - parity);
            if !seen[y] {
                seen[y] = true;
                pred[y] = x;
                queue.push_back(y);
            }
        }
    }
    if !seen[node(v, 1)] {
        return None;
    }
    let mut walk = Vec::new();
    let mut x = node(v, 1);
    while x != node(v, 0) {
        walk.push(x / 2);
        x = pred[x];
    }
    walk.reverse();
    Some(walk)
}

/// Splits a closed odd walk at a repeated vertex until it is a cycle.
fn simple_odd_cycle(mut walk: Vec<usize>) -> Vec<usize> {
    loop {
        let mut first = HashMap::new();
        let mut split = None;
        for (i, &u) in walk.iter().enumerate() {
            if let Some(&j) = first.get(&u) {
                split = Some((j, i));
                break;
            }
            first.insert(u, i);
        }
        let Some((j, i)) = split else { return walk };
        let inner: Vec<usize> = walk[j..i].to_vec();
        let mut outer: Vec<usize> = walk[i..].to_vec();
        outer.extend_from_slice(&walk[..j]);
        walk = if inner.len() % 2 == 1 { inner } else { outer };
    }
}

/// An independent set S of exactly `k` vertices such that G - S is bipartite.
pub fn exact_stable_bipartization(g: &Graph, k: usize) -> Result<Option<VertexSet>> {
    exact_stable_bipartization_with(g, k, &Stats::new())
}

pub fn exact_stable_bipartization_with(
    g: &Graph,
    k: usize,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    let g = black_only(g);
    exact_rec(&g, k, &vec![true; g.n()], stats)
}

/// `allowed` is the set D of vertices that may still be chosen.
fn exact_rec(g: &Graph, k: usize, allowed: &[bool], stats: &Stats) -> Result<Option<VertexSet>> {
    let bip = is_bipartite(g);
    if k == 0 {
        return Ok(bip.then(VertexSet::new));
    }
    if bip {
        return Ok(independent_subset(g, allowed, k));
    }
    let outside: Vec<bool> = allowed.iter().map(|a| !a).collect();
    if two_coloring_where(g, &outside).is_none() {
        return Ok(None);
    }
    // any solution is a transversal of size k
    let Some(s) = oct(g, k) else { return Ok(None) };
    let cycle = shortest_odd_cycle(g, &s)?.expect("graph is not bipartite");
    let on_cycle: Vec<usize> = cycle.iter().copied().filter(|&v| allowed[v]).collect();
    if on_cycle.len() > 3 * k + 1 {
        match large_cycle(g, k, allowed, &cycle, stats)? {
            LargeCycle::Found(sol) => return Ok(Some(sol)),
            LargeCycle::Infeasible => return Ok(None),
            LargeCycle::ExtensionFailed => {}
        }
    }
    let mut choices = on_cycle;
    choices.sort_unstable();
    for v in choices {
        let (h, ids) = g.without(&VertexSet::singleton(v));
        let sub_allowed: Vec<bool> = ids
            .iter()
            .map(|&u| allowed[u] && !g.has_black_edge(u, v))
            .collect();
        if let Some(sub) = exact_rec(&h, k - 1, &sub_allowed, stats)? {
            let mut sol: VertexSet = sub.iter().map(|i| ids[i]).collect();
            sol.insert(v);
            return Ok(Some(sol));
        }
    }
    Ok(None)
}

enum LargeCycle {
    Found(VertexSet),
    Infeasible,
    ExtensionFailed,
}

/// Stable bipartization on the graph whose disallowed vertices are split into k + 1
/// independent copies, extended along the chordless cycle to exactly `k` vertices.
fn large_cycle(
    g: &Graph,
    k: usize,
    allowed: &[bool],
    cycle: &[usize],
    stats: &Stats,
) -> Result<LargeCycle> {
    let n = g.n();
    let mut copies: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut origin = Vec::new();
    for v in 0..n {
        let count = if allowed[v] { 1 } else { k + 1 };
        copies.push((origin.len()..origin.len() + count).collect());
        origin.extend(std::iter::repeat_n(v, count));
    }
    let mut split = Graph::new(origin.len());
    for (u, v) in g.edge_list() {
        for &a in &copies[u] {
            for &b in &copies[v] {
                split.add_edge(a, b)?;
            }
        }
    }
    let Some(found) = g_bipartization_with(&split, k, &GraphClass::edgeless(), stats)? else {
        return Ok(LargeCycle::Infeasible);
    };
    let mut sol: VertexSet = found.iter().map(|i| origin[i]).collect();
    if sol.len() != found.len() || sol.iter().any(|v| !allowed[v]) {
        return Ok(LargeCycle::ExtensionFailed);
    }
    for &v in cycle {
        if sol.len() == k {
            break;
        }
        if allowed[v] && !sol.contains(v) && sol.iter().all(|u| !g.has_black_edge(u, v)) {
            sol.insert(v);
        }
    }
    Ok(if sol.len() == k {
        LargeCycle::Found(sol)
    } else {
        LargeCycle::ExtensionFailed
    })
}

/// `k` vertices of a maximum independent set of the bipartite graph G[allowed], or `None`
/// if its independence number is below `k`.
fn independent_subset(g: &Graph, allowed: &[bool], k: usize) -> Option<VertexSet> {
    let side = two_coloring_where(g, allowed).expect("bipartite");
    let n = g.n();
    let left: Vec<usize> = (0..n).filter(|&v| allowed[v] && side[v] == 0).collect();
    let mut mate = vec![usize::MAX; n];
    for &u in &left {
        let mut visited = vec![false; n];
        augment(g, allowed, u, &mut mate, &mut visited);
    }
    // König: alternating reachability from unmatched left vertices
    let mut z = vec![false; n];
    let mut queue: VecDeque<usize> = left
        .iter()
        .copied()
        .filter(|&u| mate[u] == usize::MAX)
        .collect();
    for &u in &queue {
        z[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for w in g.black_neighbors(u) {
            if allowed[w] && !z[w] {
                z[w] = true;
                let m = mate[w];
                if m != usize::MAX && !z[m] {
                    z[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    let cover = |v: usize| if side[v] == 0 { !z[v] } else { z[v] };
    let mis: Vec<usize> = (0..n).filter(|&v| allowed[v] && !cover(v)).collect();
    (mis.len() >= k).then(|| VertexSet::from_sorted(mis[..k].to_vec()))
}

fn augment(
    g: &Graph,
    allowed: &[bool],
    u: usize,
    mate: &mut [usize],
    visited: &mut [bool],
) -> bool {
    for w in g.black_neighbors(u) {
        if !allowed[w] || visited[w] {
            continue;
        }
        visited[w] = true;
        if mate[w] == usize::MAX || augment(g, allowed, mate[w], mate, visited) {
            mate[w] = u;
            mate[u] = w;
            return true;
        }
    }
    false
}

pub const LABEL_COPY_1: u8 = 1;
pub const LABEL_COPY_2: u8 = 2;
pub const LABEL_EDGE: u8 = 3;
pub const LABEL_SHADOW: u8 = 4;

/// The labeled graph G″ built from G, with its prefix G′.
///
/// Vertex `v` of G has copies `2v` (label 1) and `2v + 1` (label 2); edge `j` of
/// [`Graph::edge_list`] has vertices `2n + 2j` and `2n + 2j + 1` (label 3); the shadows of
/// `v` are `2n + 2m + 2v` and `2n + 2m + 2v + 1` (label 4). G′ is induced by the first
/// `prime_vertices` ids.
#[derive(Clone, Debug)]
pub struct EdgeEncoding {
    pub graph: Graph,
    pub prime_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    n: usize,
}

impl EdgeEncoding {
    /// `v¹` for `i = 1`, `v²` for `i = 2`.
    pub fn copy(&self, v: usize, i: usize) -> usize {
        2 * v + (i - 1)
    }

    /// e′ and e″ of edge `j`: e′ is adjacent to u¹ and v², e″ to u² and v¹, for u < v.
    pub fn edge_vertices(&self, j: usize) -> (usize, usize) {
        (2 * self.n + 2 * j, 2 * self.n + 2 * j + 1)
    }

    pub fn shadow(&self, v: usize, i: usize) -> usize {
        2 * self.n + 2 * self.edges.len() + 2 * v + (i - 1)
    }

    pub fn prime(&self) -> Graph {
        self.graph.induced(&(0..self.prime_vertices).collect())
    }
}

/// G′: labels 1 and 2 on the vertex copies, label 3 on the edge vertices.
pub fn prime_graph(g: &Graph) -> Graph {
    encode_edge_instance(g).prime()
}

pub fn encode_edge_instance(g: &Graph) -> EdgeEncoding {
    let g = black_only(g);
    let n = g.n();
    let edges = g.edge_list();
    let m = edges.len();
    let mut h = Graph::new(4 * n + 2 * m);
    for v in 0..n {
        h.set_label(2 * v, LABEL_COPY_1).expect("in range");
        h.set_label(2 * v + 1, LABEL_COPY_2).expect("in range");
        h.add_edge(2 * v, 2 * v + 1).expect("in range");
    }
    for (j, &(u, v)) in edges.iter().enumerate() {
        let (e1, e2) = (2 * n + 2 * j, 2 * n + 2 * j + 1);
        h.set_label(e1, LABEL_EDGE).expect("in range");
        h.set_label(e2, LABEL_EDGE).expect("in range");
        h.add_edge(e1, 2 * u).expect("in range");
        h.add_edge(e1, 2 * v + 1).expect("in range");
        h.add_edge(e2, 2 * u + 1).expect("in range");
        h.add_edge(e2, 2 * v).expect("in range");
    }
    let prime_vertices = 2 * n + 2 * m;
    for v in 0..n {
        let bar = [prime_vertices + 2 * v, prime_vertices + 2 * v + 1];
        for (i, &b) in bar.iter().enumerate() {
            h.set_label(b, LABEL_SHADOW).expect("in range");
            let copy = 2 * v + i;
            let prime_nbrs: Vec<usize> = h
                .neighbors(copy)
                .iter()
                .copied()
                .filter(|&x| x < prime_vertices)
                .collect();
            for x in prime_nbrs {
                h.add_edge(b, x).expect("in range");
            }
            for &u in g.neighbors(v) {
                h.add_edge(b, 2 * u + i).expect("in range");
            }
        }
        h.add_edge(bar[0], bar[1]).expect("in range");
    }
    EdgeEncoding {
        graph: h,
        prime_vertices,
        edges,
        n,
    }
}

/// Pairwise non-isomorphic graphs with 1 to `max_edges` edges and no isolated vertex.
fn graphs_by_edges(max_edges: usize) -> Result<Vec<Graph>> {
    if 2 * max_edges > ROW_BITS {
        return Err(Error::TooManyVertices {
            n: 2 * max_edges,
            max: ROW_BITS,
        });
    }
    let mut out = Vec::new();
    let mut level = vec![Graph::from_edges(2, &[(0, 1)])?];
    for _ in 1..=max_edges {
        out.extend(level.iter().cloned());
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for f in &level {
            let n = f.n();
            let mut grow = |h: Graph| {
                if seen.insert(canonical_from_graph(&h)) {
                    next.push(h);
                }
            };
            for u in 0..n {
                for v in u + 1..n {
                    if !f.has_edge(u, v) {
                        let mut h = f.clone();
                        h.add_edge(u, v).expect("in range");
                        grow(h);
                    }
                }
                let mut h = f.clone();
                let w = h.add_vertex(0);
                h.add_edge(u, w).expect("in range");
                grow(h);
            }
            let mut h = f.clone();
            let a = h.add_vertex(0);
            let b = h.add_vertex(0);
            h.add_edge(a, b).expect("in range");
            grow(h);
        }
        level = next;
    }
    Ok(out)
}

/// Label-respecting induced embedding of `x` into `f` (both as neighbor masks).
fn embeds(x_adj: &[u32], x_labels: &[u32], f_adj: &[u32], f_labels: &[u32]) -> bool {
    fn go(
        i: usize,
        order: &[usize],
        map: &mut Vec<usize>,
        used: u32,
        x: (&[u32], &[u32]),
        f: (&[u32], &[u32]),
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for c in 0..f.0.len() {
            if used >> c & 1 == 1 || f.1[c] != x.1[v] {
                continue;
            }
            let ok = order[..i].iter().all(|&u| {
                let xe = x.0[v] >> u & 1 == 1;
                let fe = f.0[c] >> map[u] & 1 == 1;
                xe == fe
            });
            if ok {
                map[v] = c;
                if go(i + 1, order, map, used | 1 << c, x, f) {
                    return true;
                }
            }
        }
        false
    }
    if x_adj.len() > f_adj.len() {
        return false;
    }
    let mut order: Vec<usize> = (0..x_adj.len()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(x_adj[v].count_ones()));
    let mut map = vec![0; x_adj.len()];
    go(0, &order, &mut map, 0, (x_adj, x_labels), (f_adj, f_labels))
}

/// The class of graphs F′ (and their induced subgraphs, labels respected) for the
/// members F of `base` with 1 to `max_edges` edges and no isolated vertex, together with
/// the largest |V(F′)|.
pub fn edge_class(base: &GraphClass, max_edges: usize) -> Result<(GraphClass, usize)> {
    let mut primes = Vec::new();
    for f in graphs_by_edges(max_edges)? {
        if base.contains(&f)? {
            let p = prime_graph(&f);
            if p.n() > ROW_BITS {
                return Err(Error::TooManyVertices {
                    n: p.n(),
                    max: ROW_BITS,
                });
            }
            let labels: Vec<u32> = p.labels().iter().map(|&l| l as u32).collect();
            primes.push((black_masks(&p), labels));
        }
    }
    let budget = primes.iter().map(|p| p.0.len()).max().unwrap_or(0);
    let name = format!("edge-encoding({}, {max_edges})", base.name());
    let class = GraphClass::new(name, move |x| {
        if x.labels()
            .iter()
            .any(|&l| !(LABEL_COPY_1..=LABEL_EDGE).contains(&l))
        {
            return false;
        }
        if x.n() == 0 {
            return true;
        }
        let adj = black_masks(x);
        let labels: Vec<u32> = x.labels().iter().map(|&l| l as u32).collect();
        primes.iter().any(|(fa, fl)| embeds(&adj, &labels, fa, fl))
    });
    Ok((class, budget))
}

/// Edges H of `g` with |E(H)| <= k, H in `class` (closed under subgraphs) and
/// G - E(H) bipartite.
pub fn g_edge_bipartization(
    g: &Graph,
    k: usize,
    class: &GraphClass,
) -> Result<Option<Vec<(usize, usize)>>> {
    g_edge_bipartization_with(g, k, class, &Stats::new())
}

pub fn g_edge_bipartization_with(
    g: &Graph,
    k: usize,
    class: &GraphClass,
    stats: &Stats,
) -> Result<Option<Vec<(usize, usize)>>> {
    let g = black_only(g);
    if is_bipartite(&g) {
        return Ok(Some(Vec::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    let (gk, budget) = edge_class(class, k)?;
    edge_bipartization_encoded(&g, &gk, budget, stats)
}

/// Edge bipartization through the vertex version on G″ with the encoded class.
fn edge_bipartization_encoded(
    g: &Graph,
    gk: &GraphClass,
    budget: usize,
    stats: &Stats,
) -> Result<Option<Vec<(usize, usize)>>> {
    if is_bipartite(g) {
        return Ok(Some(Vec::new()));
    }
    let enc = encode_edge_instance(g);
    let Some(s) = g_bipartization_with(&enc.graph, budget, gk, stats)? else {
        return Ok(None);
    };
    let mut alive = vec![true; enc.graph.n()];
    for v in s.iter() {
        alive[v] = false;
    }
    let side = two_coloring_where(&enc.graph, &alive).expect("solution leaves a bipartite graph");
    let color: Vec<u8> = (0..g.n()).map(|v| side[enc.shadow(v, 1)]).collect();
    let h: Vec<(usize, usize)> = enc
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| color[u] == color[v])
        .collect();
    Ok(Some(h))
}

/// At most `k` edges whose contraction leaves a bipartite graph, as few as possible.
pub fn bipartite_contraction(g: &Graph, k: usize) -> Result<Option<Vec<(usize, usize)>>> {
    bipartite_contraction_with(g, k, &Stats::new())
}

pub fn bipartite_contraction_with(
    g: &Graph,
    k: usize,
    stats: &Stats,
) -> Result<Option<Vec<(usize, usize)>>> {
    let g = black_only(g);
    if is_bipartite(&g) {
        return Ok(Some(Vec::new()));
    }
    for r in 1..=k {
        let (gk, budget) = rank_edge_class(r)?;
        let Some(h) = edge_bipartization_encoded(&g, &gk, budget, stats)? else {
            continue;
        };
        let f = spanning_forest(&minimalize(&g, h));
        if f.len() > r || !is_bipartite(&contract_edges(&g, &f)?) {
            return Err(Error::Precondition(
                "contraction certificate failed verification".into(),
            ));
        }
        return Ok(Some(f));
    }
    Ok(None)
}

/// Encoded class for rank at most `r`, built once per process so its membership memo is
/// shared between calls.
fn rank_edge_class(r: usize) -> Result<(GraphClass, usize)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, (GraphClass, usize)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&r) {
        return Ok(hit.clone());
    }
    // a graph of rank r without isolated vertices has at most r(r+1)/2 edges
    let built = edge_class(&GraphClass::rank(r), r * (r + 1) / 2)?;
    cache.lock().expect("cache lock").insert(r, built.clone());
    Ok(built)
}

fn without_edges(g: &Graph, h: &[(usize, usize)]) -> Graph {
    let drop: HashSet<(usize, usize)> = h.iter().copied().collect();
    let kept: Vec<(usize, usize)> = g
        .edge_list()
        .into_iter()
        .filter(|e| !drop.contains(e))
        .collect();
    Graph::from_edges(g.n(), &kept).expect("same vertex set")
}

/// Drops edges of `h` one at a time while G - E(H) stays bipartite.
fn minimalize(g: &Graph, mut h: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let mut i = 0;
    while i < h.len() {
        let mut trial = h.clone();
        trial.remove(i);
        if is_bipartite(&without_edges(g, &trial)) {
            h = trial;
        } else {
            i += 1;
        }
    }
    h
}

fn spanning_forest(h: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while let Some(&q) = p.get(&r) {
            if q == r {
                break;
            }
            r = q;
        }
        p.insert(x, r);
        r
    }
    let mut out = Vec::new();
    for &(u, v) in h {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent.insert(a, b);
            parent.entry(b).or_insert(b);
            out.push((u, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        graph(n, &e)
    }

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn oct_examples() {
        assert_eq!(oct(&cycle(5), 1).unwrap().len(), 1);
        assert_eq!(oct(&cycle(5), 0), None);
        assert_eq!(oct(&complete(4), 1), None);
        assert_eq!(oct(&complete(4), 2).unwrap().len(), 2);
        assert_eq!(oct(&cycle(6), 0), Some(VertexSet::new()));
    }

    #[test]
    fn separation_set_examples() {
        let p4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let (bp, wp) = (vs(&[0, 2]), vs(&[1, 3]));
        let (x, y) = separation_sets(&p4, (&bp, &wp), &vs(&[0, 3]), &vs(&[])).unwrap();
        assert_eq!((x, y), (vs(&[0]), vs(&[3])));
        let (x, y) = separation_sets(&p4, (&bp, &wp), &bp, &wp).unwrap();
        assert!(y.is_empty() && x.len() == 4);
        let edge = graph(2, &[(0, 1)]);
        let (x, y) =
            separation_sets(&edge, (&vs(&[0]), &vs(&[1])), &vs(&[0, 1]), &vs(&[])).unwrap();
        assert_eq!((x, y), (vs(&[0]), vs(&[1])));
        assert!(separation_sets(&edge, (&vs(&[0, 1]), &vs(&[])), &vs(&[]), &vs(&[])).is_err());
    }

    #[test]
    fn constrained_bipartization() {
        let stable = GraphClass::edgeless();
        assert_eq!(
            g_bipartization(&cycle(5), 1, &stable)
                .unwrap()
                .unwrap()
                .len(),
            1
        );
        // two triangles sharing edge 0-1: only 0 or 1 hits both
        let bowtie = graph(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]);
        assert_eq!(
            g_bipartization(&bowtie, 1, &stable).unwrap(),
            Some(vs(&[0]))
        );
        assert_eq!(g_bipartization(&complete(4), 2, &stable).unwrap(), None);
        assert_eq!(
            g_bipartization(&complete(4), 2, &GraphClass::clique()).unwrap(),
            Some(vs(&[0, 1]))
        );
    }

    #[test]
    fn odd_cycles() {
        let c5 = cycle(5);
        let c = shortest_odd_cycle(&c5, &vs(&[2])).unwrap().unwrap();
        assert_eq!(c.len(), 5);
        // triangle 0-1-2 with an even tail and a 5-cycle elsewhere
        let mut e = vec![
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 4),
        ];
        e.push((8, 9));
        let g = graph(10, &e);
        let s = oct(&g, 2).unwrap();
        assert_eq!(shortest_odd_cycle(&g, &s).unwrap().unwrap().len(), 3);
        assert_eq!(shortest_odd_cycle(&cycle(4), &vs(&[])).unwrap(), None);
        assert!(shortest_odd_cycle(&c5, &vs(&[])).is_err());
    }

    #[test]
    fn exact_stable() {
        let two = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let s = exact_stable_bipartization(&two, 2).unwrap().unwrap();
        assert_eq!(s.len(), 2);
        assert!(is_bipartite(&two.without(&s).0));
        assert_eq!(
            exact_stable_bipartization(&cycle(5), 2)
                .unwrap()
                .unwrap()
                .len(),
            2
        );
        assert_eq!(exact_stable_bipartization(&complete(3), 3).unwrap(), None);
        assert_eq!(
            exact_stable_bipartization(&complete(3), 1)
                .unwrap()
                .unwrap()
                .len(),
            1
        );
        // long odd cycle takes the large-cycle path
        let c11 = cycle(11);
        let s = exact_stable_bipartization(&c11, 2).unwrap().unwrap();
        assert_eq!(s.len(), 2);
        assert!(independent(&c11, s.as_slice()));
    }

    #[test]
    fn encoding_sizes() {
        let e = encode_edge_instance(&graph(2, &[(0, 1)]));
        assert_eq!(e.prime_vertices, 6);
        assert_eq!(e.graph.n(), 10);
        assert_eq!(prime_graph(&Graph::new(0)).n(), 0);
        assert!(is_bipartite(&encode_edge_instance(&cycle(6)).graph));
        assert!(!is_bipartite(&encode_edge_instance(&cycle(5)).graph));
    }

    #[test]
    fn edge_bipartization_examples() {
        let matchings = GraphClass::new("matching", |g| (0..g.n()).all(|v| g.degree(v) <= 1));
        let h = g_edge_bipartization(&complete(3), 1, &matchings)
            .unwrap()
            .unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(
            g_edge_bipartization(&cycle(5), 1, &GraphClass::all())
                .unwrap()
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            g_edge_bipartization(&cycle(4), 0, &GraphClass::all()).unwrap(),
            Some(vec![])
        );
        assert_eq!(
            g_edge_bipartization(&cycle(5), 0, &GraphClass::all()).unwrap(),
            None
        );
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(
            bipartite_contraction(&complete(3), 1)
                .unwrap()
                .unwrap()
                .len(),
            1
        );
        assert_eq!(bipartite_contraction(&complete(4), 1).unwrap(), None);
        assert_eq!(
            bipartite_contraction(&complete(4), 2)
                .unwrap()
                .unwrap()
                .len(),
            2
        );
        assert_eq!(bipartite_contraction(&cycle(4), 0).unwrap(), Some(vec![]));
    }
}

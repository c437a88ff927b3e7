//! List (H, C, ≤K)-coloring where H minus C is a single edge bw without loops.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::bipartization::{oct, separation_sets};
use crate::error::{Error, Result};
use crate::graph::{bipartite_2coloring, is_bipartite, is_separator, Graph, VertexSet};
use crate::par;
use crate::reduce::cover_set_separators;
use crate::stats::Stats;
use crate::tdecomp::{decompose, make_nice, NiceDecomposition, NiceKind};

/// Largest target graph supported (lists are bitmasks).
pub const MAX_TARGET: usize = 64;

/// Target graph H with loops allowed, the capped vertices C with their caps K, and the
/// two uncapped vertices b and w.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomTarget {
    adj: Vec<u64>,
    caps: Vec<Option<usize>>,
    b: usize,
    w: usize,
}

impl HomTarget {
    /// `edges` may contain loops `(v, v)`; `caps` maps every vertex of C to K(v).
    pub fn new(
        vertices: usize,
        edges: &[(usize, usize)],
        caps: &BTreeMap<usize, usize>,
    ) -> Result<Self> {
        if vertices > MAX_TARGET {
            return Err(Error::TooManyVertices {
                n: vertices,
                max: MAX_TARGET,
            });
        }
        let mut adj = vec![0u64; vertices];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= vertices {
                    return Err(Error::VertexOutOfRange { v: x, n: vertices });
                }
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        let mut cap_vec = vec![None; vertices];
        for (&v, &k) in caps {
            if v >= vertices {
                return Err(Error::VertexOutOfRange { v, n: vertices });
            }
            cap_vec[v] = Some(k);
        }
        let free: Vec<usize> = (0..vertices).filter(|&v| cap_vec[v].is_none()).collect();
        let bad = |msg: &str| Err(Error::Precondition(msg.to_string()));
        if free.len() != 2 {
            return bad("exactly two target vertices must be uncapped");
        }
        let (b, w) = (free[0], free[1]);
        if adj[b] >> w & 1 == 0 {
            return bad("the uncapped target vertices must be adjacent");
        }
        if adj[b] >> b & 1 == 1 || adj[w] >> w & 1 == 1 {
            return bad("the uncapped target vertices must not have loops");
        }
        Ok(HomTarget {
            adj,
            caps: cap_vec,
            b,
            w,
        })
    }

    pub fn vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adj[x] >> y & 1 == 1
    }

    pub fn neighbor_mask(&self, x: usize) -> u64 {
        self.adj[x]
    }

    /// K(v) for v in C, `None` for b and w.
    pub fn cap(&self, v: usize) -> Option<usize> {
        self.caps[v]
    }

    pub fn capped(&self) -> Vec<usize> {
        (0..self.vertices())
            .filter(|&v| self.caps[v].is_some())
            .collect()
    }

    /// k = sum of K over C.
    pub fn k(&self) -> usize {
        self.caps.iter().flatten().sum()
    }

    /// Same H and C with the caps replaced (`caps[i]` for the i-th vertex of C).
    fn with_caps(&self, caps: &[usize]) -> HomTarget {
        let mut t = self.clone();
        for (&v, &k) in self.capped().iter().zip(caps) {
            t.caps[v] = Some(k);
        }
        t
    }

    fn cap_vector(&self) -> Vec<usize> {
        self.caps.iter().flatten().copied().collect()
    }
}

/// Allowed target vertices per vertex of G.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ListAssignment {
    masks: Vec<u64>,
}

impl ListAssignment {
    /// Every vertex may take every target vertex.
    pub fn full(n: usize, target: &HomTarget) -> Self {
        let all = if target.vertices() == 64 {
            u64::MAX
        } else {
            (1u64 << target.vertices()) - 1
        };
        ListAssignment {
            masks: vec![all; n],
        }
    }

    pub fn new(lists: &[Vec<usize>], target: &HomTarget) -> Result<Self> {
        let mut masks = Vec::with_capacity(lists.len());
        for l in lists {
            let mut m = 0u64;
            for &c in l {
                if c >= target.vertices() {
                    return Err(Error::VertexOutOfRange {
                        v: c,
                        n: target.vertices(),
                    });
                }
                m |= 1 << c;
            }
            masks.push(m);
        }
        Ok(ListAssignment { masks })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn allows(&self, v: usize, c: usize) -> bool {
        self.masks[v] >> c & 1 == 1
    }

    pub fn list(&self, v: usize) -> Vec<usize> {
        (0..64).filter(|&c| self.allows(v, c)).collect()
    }

    pub fn mask(&self, v: usize) -> u64 {
        self.masks[v]
    }
}

/// A homomorphism θ together with its exceptional set θ⁻¹(C).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub theta: Vec<usize>,
    pub exceptional: VertexSet,
}

impl Coloring {
    fn from_theta(theta: Vec<usize>, target: &HomTarget) -> Self {
        let exceptional = (0..theta.len())
            .filter(|&v| target.cap(theta[v]).is_some())
            .collect();
        Coloring { theta, exceptional }
    }
}

/// Checks the homomorphism property, lists and caps.
pub fn verify_coloring(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
    coloring: &Coloring,
) -> Result<()> {
    let bad = |msg: String| Err(Error::Precondition(msg));
    if coloring.theta.len() != g.n() || lists.len() != g.n() {
        return bad("coloring or lists do not match the graph".into());
    }
    let mut used = vec![0usize; target.vertices()];
    for (v, &c) in coloring.theta.iter().enumerate() {
        if c >= target.vertices() {
            return bad(format!("vertex {v} is mapped outside the target"));
        }
        if !lists.allows(v, c) {
            return bad(format!("vertex {v} is mapped outside its list"));
        }
        used[c] += 1;
    }
    for (u, v) in g.edge_list() {
        if !target.adjacent(coloring.theta[u], coloring.theta[v]) {
            return bad(format!("edge {u}-{v} is not mapped to an edge"));
        }
    }
    for c in 0..target.vertices() {
        if let Some(k) = target.cap(c) {
            if used[c] > k {
                return bad(format!(
                    "target vertex {c} is used {} times, cap {k}",
                    used[c]
                ));
            }
        }
    }
    let expected: VertexSet = (0..g.n())
        .filter(|&v| target.cap(coloring.theta[v]).is_some())
        .collect();
    if expected != coloring.exceptional {
        return bad("exceptional set does not match the mapping".into());
    }
    Ok(())
}

/// Set C″ containing the exceptional set of every minimal coloring of the bipartite `g`.
pub fn hck_reduce_bipartite(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
) -> Result<VertexSet> {
    if !is_bipartite(g) {
        return Err(Error::Precondition("graph must be bipartite".into()));
    }
    if lists.len() != g.n() {
        return Err(Error::Precondition("one list per vertex required".into()));
    }
    let mut memo = HashMap::new();
    let all: Vec<usize> = (0..g.n()).collect();
    reduce_rec(
        g,
        target,
        &all,
        &lists.masks,
        &target.cap_vector(),
        &mut memo,
    )
}

type MemoKey = (Vec<usize>, Vec<u64>, Vec<usize>);

/// C″ for the component `comp` of `g` (global ids), its lists and caps for C in order.
fn reduce_rec(
    g: &Graph,
    target: &HomTarget,
    comp: &[usize],
    lists: &[u64],
    caps: &[usize],
    memo: &mut HashMap<MemoKey, VertexSet>,
) -> Result<VertexSet> {
    let k: usize = caps.iter().sum();
    if k == 0 || comp.is_empty() {
        return Ok(VertexSet::new());
    }
    let key = (comp.to_vec(), lists.to_vec(), caps.to_vec());
    if let Some(c) = memo.get(&key) {
        return Ok(c.clone());
    }
    let sub = g.induced(&VertexSet::from_sorted(comp.to_vec()));
    let (bp, wp) = bipartite_2coloring(&sub).expect("bipartite");
    let (tb, tw) = (target.b, target.w);
    let b: VertexSet = (0..sub.n()).filter(|&v| lists[v] >> tw & 1 == 0).collect();
    let w: VertexSet = (0..sub.n()).filter(|&v| lists[v] >> tb & 1 == 0).collect();
    let (x, y) = separation_sets(&sub, (&bp, &wp), &b, &w)?;
    let unconnected =
        x.is_empty() || y.is_empty() || is_separator(&sub, &VertexSet::new(), &x, &y)?;
    let result = if unconnected {
        VertexSet::new()
    } else {
        match cover_set_separators(&sub, &x, &y, k) {
            Err(Error::CutTooLarge(_)) => VertexSet::new(),
            Err(e) => return Err(e),
            Ok(c1) => {
                let mut out = c1.clone();
                let mut outside = vec![true; sub.n()];
                for v in c1.iter() {
                    outside[v] = false;
                }
                let capped = target.capped();
                let sub_caps = cap_vectors(caps, k - 1);
                for p in sub.components_where(&outside) {
                    let n_set: VertexSet = sub.neighborhood(&VertexSet::from_sorted(p.clone()));
                    let n_list = n_set.as_slice();
                    let mut seen = HashSet::new();
                    for theta in assignments(&sub, target, &capped, caps, n_list, lists) {
                        let lt: Vec<u64> = p
                            .iter()
                            .map(|&v| {
                                let mut m = lists[v];
                                for (i, &x) in n_list.iter().enumerate() {
                                    if sub.has_edge(v, x) {
                                        m &= target.adj[theta[i]];
                                    }
                                }
                                m
                            })
                            .collect();
                        if lt.contains(&0) || !seen.insert(lt.clone()) {
                            continue;
                        }
                        let p_global: Vec<usize> = p.iter().map(|&v| comp[v]).collect();
                        for kp in &sub_caps {
                            let part = reduce_rec(g, target, &p_global, &lt, kp, memo)?;
                            out = out.union(
                                &part
                                    .iter()
                                    .map(|gv| comp.binary_search(&gv).expect("inside"))
                                    .collect(),
                            );
                        }
                    }
                }
                out
            }
        }
    };
    let global: VertexSet = result.iter().map(|v| comp[v]).collect();
    memo.insert(key, global.clone());
    Ok(global)
}

/// Cap vectors K′ <= `caps` pointwise with sum at most `budget`.
fn cap_vectors(caps: &[usize], budget: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; caps.len()];
    fn go(i: usize, left: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=caps[i].min(left) {
            cur[i] = c;
            go(i + 1, left - c, caps, cur, out);
        }
        cur[i] = 0;
    }
    go(0, budget, caps, &mut cur, &mut out);
    out
}

/// All colorings of G[`verts`] (local ids of `g`) honoring `lists`, edges and caps,
/// as vectors parallel to `verts`, in lexicographic order.
fn assignments(
    g: &Graph,
    target: &HomTarget,
    capped: &[usize],
    caps: &[usize],
    verts: &[usize],
    lists: &[u64],
) -> Vec<Vec<usize>> {
    let mut cap_of = vec![usize::MAX; target.vertices()];
    for (i, &c) in capped.iter().enumerate() {
        cap_of[c] = caps[i];
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(verts.len());
    let mut used = vec![0usize; target.vertices()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        g: &Graph,
        target: &HomTarget,
        cap_of: &[usize],
        verts: &[usize],
        lists: &[u64],
        cur: &mut Vec<usize>,
        used: &mut [usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == verts.len() {
            out.push(cur.clone());
            return;
        }
        let v = verts[i];
        for c in 0..target.vertices() {
            if lists[v] >> c & 1 == 0 || used[c] == cap_of[c] {
                continue;
            }
            if (0..i).any(|j| g.has_edge(v, verts[j]) && !target.adjacent(c, cur[j])) {
                continue;
            }
            cur.push(c);
            used[c] += 1;
            go(i + 1, g, target, cap_of, verts, lists, cur, used, out);
            used[c] -= 1;
            cur.pop();
        }
    }
    go(
        0, g, target, &cap_of, verts, lists, &mut cur, &mut used, &mut out,
    );
    out
}

/// DP over a nice decomposition: state is the color of each bag vertex plus the use count
/// of every capped target vertex among forgotten vertices. Returns the lexicographically
/// least coloring.
pub fn hck_solve_bounded(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
    nice: &NiceDecomposition,
) -> Result<Option<Coloring>> {
    hck_solve_bounded_with(g, target, lists, nice, &Stats::new())
}

type BagKey = (Vec<u8>, Vec<u8>);
type Table = HashMap<BagKey, Vec<(usize, usize)>>;

pub fn hck_solve_bounded_with(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
    nice: &NiceDecomposition,
    stats: &Stats,
) -> Result<Option<Coloring>> {
    nice.check(g)?;
    if lists.len() != g.n() {
        return Err(Error::Precondition("one list per vertex required".into()));
    }
    if target.vertices() > u8::MAX as usize {
        return Err(Error::TooManyVertices {
            n: target.vertices(),
            max: u8::MAX as usize,
        });
    }
    stats.record_width(nice.width());
    let capped = target.capped();
    let mut slot = vec![usize::MAX; target.vertices()];
    for (i, &c) in capped.iter().enumerate() {
        slot[c] = i;
    }
    let caps = target.cap_vector();
    let mut tables: Vec<Option<Table>> = vec![None; nice.nodes.len()];
    let mut states = 0;
    let better = |a: &Vec<(usize, usize)>, b: &Vec<(usize, usize)>| a < b;
    for (id, node) in nice.nodes.iter().enumerate() {
        let mut table: Table = HashMap::new();
        let offer =
            |table: &mut Table, key: BagKey, partial: Vec<(usize, usize)>| match table.get(&key) {
                Some(old) if !better(&partial, old) => {}
                _ => {
                    table.insert(key, partial);
                }
            };
        match node.kind {
            NiceKind::Leaf => {
                offer(&mut table, (Vec::new(), vec![0; caps.len()]), Vec::new());
            }
            NiceKind::Introduce(v) => {
                let child = tables[node.children[0]].take().expect("child table");
                let child_bag = &nice.nodes[node.children[0]].bag;
                let pos = node
                    .bag
                    .binary_search(&v)
                    .expect("introduced vertex in bag");
                for ((colors, counts), partial) in child {
                    for c in 0..target.vertices() {
                        if !lists.allows(v, c) {
                            continue;
                        }
                        let clash = child_bag
                            .iter()
                            .zip(&colors)
                            .any(|(&u, &cu)| g.has_edge(u, v) && !target.adjacent(c, cu as usize));
                        if clash {
                            continue;
                        }
                        let mut nc = colors.clone();
                        nc.insert(pos, c as u8);
                        let mut np = partial.clone();
                        let at = np.partition_point(|&(x, _)| x < v);
                        np.insert(at, (v, c));
                        offer(&mut table, (nc, counts.clone()), np);
                    }
                }
            }
            NiceKind::Forget(v) => {
                let child = tables[node.children[0]].take().expect("child table");
                let child_bag = &nice.nodes[node.children[0]].bag;
                let pos = child_bag
                    .binary_search(&v)
                    .expect("forgotten vertex in child bag");
                for ((mut colors, mut counts), partial) in child {
                    let c = colors.remove(pos) as usize;
                    if slot[c] != usize::MAX {
                        let i = slot[c];
                        if counts[i] as usize + 1 > caps[i] {
                            continue;
                        }
                        counts[i] += 1;
                    }
                    offer(&mut table, (colors, counts), partial);
                }
            }
            NiceKind::Join => {
                let left = tables[node.children[0]].take().expect("child table");
                let right = tables[node.children[1]].take().expect("child table");
                let mut by_colors: HashMap<Vec<u8>, Vec<_>> = HashMap::new();
                for ((colors, counts), partial) in right {
                    by_colors.entry(colors).or_default().push((counts, partial));
                }
                for ((colors, counts), partial) in left {
                    let Some(matches) = by_colors.get(&colors) else {
                        continue;
                    };
                    for (rc, rp) in matches {
                        let sum: Vec<u8> = counts.iter().zip(rc).map(|(a, b)| a + b).collect();
                        if sum.iter().zip(&caps).any(|(&s, &k)| s as usize > k) {
                            continue;
                        }
                        offer(&mut table, (colors.clone(), sum), merge(&partial, rp));
                    }
                }
            }
        }
        states += table.len();
        tables[id] = Some(table);
    }
    stats.add_states(states);
    let root = tables[nice.root()].take().expect("root table");
    let best = root.into_values().min();
    Ok(best.map(|partial| {
        let mut theta = vec![0; g.n()];
        for (v, c) in partial {
            theta[v] = c;
        }
        Coloring::from_theta(theta, target)
    }))
}

fn merge(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// Any (H, C, ≤K)-coloring of `g` honoring `lists`.
pub fn hck_solve(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
) -> Result<Option<Coloring>> {
    hck_solve_with(g, target, lists, &Stats::new())
}

pub fn hck_solve_with(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
    stats: &Stats,
) -> Result<Option<Coloring>> {
    if lists.len() != g.n() {
        return Err(Error::Precondition("one list per vertex required".into()));
    }
    if lists.masks.contains(&0) {
        return Ok(None);
    }
    if is_bipartite(g) {
        let found = solve_bipartite(g, target, &lists.masks, stats)?;
        return finish(g, target, lists, found);
    }
    let Some(s) = oct(g, target.k()) else {
        return Ok(None);
    };
    let capped = target.capped();
    let caps = target.cap_vector();
    let branches = assignments(g, target, &capped, &caps, s.as_slice(), &lists.masks);
    let (rest, ids) = g.without(&s);
    let results: Vec<Result<Option<Vec<usize>>>> = par::map(&branches, |theta| {
        let mut sub_caps = caps.clone();
        for &c in theta {
            if let Some(i) = capped.iter().position(|&x| x == c) {
                sub_caps[i] -= 1;
            }
        }
        let sub_target = target.with_caps(&sub_caps);
        let sub_lists: Vec<u64> = ids
            .iter()
            .map(|&v| {
                let mut m = lists.masks[v];
                for (i, u) in s.iter().enumerate() {
                    if g.has_edge(u, v) {
                        m &= target.adj[theta[i]];
                    }
                }
                m
            })
            .collect();
        if sub_lists.contains(&0) {
            return Ok(None);
        }
        let Some(inner) = solve_bipartite(&rest, &sub_target, &sub_lists, stats)? else {
            return Ok(None);
        };
        let mut full = vec![0; g.n()];
        for (i, &v) in ids.iter().enumerate() {
            full[v] = inner[i];
        }
        for (i, v) in s.iter().enumerate() {
            full[v] = theta[i];
        }
        Ok(Some(full))
    });
    for r in results {
        if let Some(theta) = r? {
            return finish(g, target, lists, Some(theta));
        }
    }
    Ok(None)
}

fn finish(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
    theta: Option<Vec<usize>>,
) -> Result<Option<Coloring>> {
    let Some(theta) = theta else { return Ok(None) };
    let coloring = Coloring::from_theta(theta, target);
    verify_coloring(g, target, lists, &coloring)?;
    Ok(Some(coloring))
}

/// The bipartite case: reduce, compress components outside C″ to edges, run the DP and
/// expand the answer.
fn solve_bipartite(
    g: &Graph,
    target: &HomTarget,
    lists: &[u64],
    stats: &Stats,
) -> Result<Option<Vec<usize>>> {
    let list_assignment = ListAssignment {
        masks: lists.to_vec(),
    };
    let c2 = hck_reduce_bipartite(g, target, &list_assignment)?;
    let (gp, lp, expand) = compress_components(g, target, lists, &c2);
    stats.record_reduced(gp.n());
    let nice = make_nice(&decompose(&gp));
    let lp = ListAssignment { masks: lp };
    let Some(col) = hck_solve_bounded_with(&gp, target, &lp, &nice, stats)? else {
        return Ok(None);
    };
    Ok(Some(expand.iter().map(|&i| col.theta[i]).collect()))
}

/// G′: every component of G - C″ with more than one vertex becomes an edge xᵢyᵢ, with
/// xᵢ adjacent to N(Xᵢ) ∩ C″ and yᵢ to N(Yᵢ) ∩ C″. Returns G′, its lists and the G′
/// vertex standing for each vertex of G.
fn compress_components(
    g: &Graph,
    target: &HomTarget,
    lists: &[u64],
    c2: &VertexSet,
) -> (Graph, Vec<u64>, Vec<usize>) {
    let n = g.n();
    let mut outside = vec![true; n];
    for v in c2.iter() {
        outside[v] = false;
    }
    let bw = (1u64 << target.b) | (1u64 << target.w);
    let mut expand = vec![usize::MAX; n];
    let mut lp = Vec::new();
    let mut gp = Graph::new(0);
    for v in c2.iter() {
        expand[v] = gp.add_vertex(0);
        lp.push(lists[v]);
    }
    let side = crate::graph::two_coloring_where(g, &outside).expect("bipartite");
    for comp in g.components_where(&outside) {
        if comp.len() == 1 {
            expand[comp[0]] = gp.add_vertex(0);
            lp.push(lists[comp[0]]);
            continue;
        }
        let x = gp.add_vertex(0);
        let y = gp.add_vertex(0);
        gp.add_edge(x, y).expect("in range");
        let (mut lx, mut ly) = (bw, bw);
        for &v in &comp {
            if side[v] == side[comp[0]] {
                expand[v] = x;
                lx &= lists[v];
            } else {
                expand[v] = y;
                ly &= lists[v];
            }
        }
        lp.push(lx);
        lp.push(ly);
    }
    for (u, v) in g.edge_list() {
        let (a, b) = (expand[u], expand[v]);
        if a != b {
            gp.add_edge(a, b).expect("in range");
        }
    }
    (gp, lp, expand)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    /// H = 5-cycle a b c d e (ids 0..4), C = {c, d, e}.
    fn c5_target(kc: usize, kd: usize, ke: usize) -> HomTarget {
        let caps = BTreeMap::from([(2, kc), (3, kd), (4, ke)]);
        HomTarget::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], &caps).unwrap()
    }

    fn edge_target() -> HomTarget {
        HomTarget::new(2, &[(0, 1)], &BTreeMap::new()).unwrap()
    }

    #[test]
    fn target_validation() {
        assert!(HomTarget::new(3, &[(0, 1)], &BTreeMap::new()).is_err());
        assert!(HomTarget::new(2, &[], &BTreeMap::new()).is_err());
        assert!(HomTarget::new(2, &[(0, 1), (0, 0)], &BTreeMap::new()).is_err());
        assert_eq!(c5_target(3, 3, 3).k(), 9);
    }

    #[test]
    fn degenerate_edge_target() {
        let t = edge_target();
        let c6 = cycle(6);
        assert!(hck_solve(&c6, &t, &ListAssignment::full(6, &t))
            .unwrap()
            .is_some());
        let c5 = cycle(5);
        assert!(hck_solve(&c5, &t, &ListAssignment::full(5, &t))
            .unwrap()
            .is_none());
        let c = hck_solve(&c6, &t, &ListAssignment::full(6, &t))
            .unwrap()
            .unwrap();
        assert!(c.exceptional.is_empty());
    }

    #[test]
    fn fifteen_cycle() {
        let g = cycle(15);
        let t = c5_target(3, 3, 3);
        let c = hck_solve(&g, &t, &ListAssignment::full(15, &t))
            .unwrap()
            .unwrap();
        assert!(c.exceptional.len() >= 3);
        let t = c5_target(0, 0, 0);
        assert!(hck_solve(&g, &t, &ListAssignment::full(15, &t))
            .unwrap()
            .is_none());
        let t = c5_target(1, 1, 0);
        assert!(hck_solve(&g, &t, &ListAssignment::full(15, &t))
            .unwrap()
            .is_none());
    }

    #[test]
    fn verifier_rejects_bad_colorings() {
        let t = c5_target(1, 1, 1);
        let g = cycle(5);
        let lists = ListAssignment::full(5, &t);
        let good = Coloring::from_theta(vec![0, 1, 2, 3, 4], &t);
        verify_coloring(&g, &t, &lists, &good).unwrap();
        let not_hom = Coloring::from_theta(vec![0, 1, 0, 1, 0], &t);
        assert!(verify_coloring(&g, &t, &lists, &not_hom).is_err());
        let over = Coloring::from_theta(vec![0, 1, 2, 3, 2], &t);
        assert!(verify_coloring(&Graph::new(5), &t, &lists, &over).is_err());
        let mut lied = good.clone();
        lied.exceptional = VertexSet::new();
        assert!(verify_coloring(&g, &t, &lists, &lied).is_err());
        let narrow =
            ListAssignment::new(&[vec![0], vec![1], vec![2], vec![3], vec![0]], &t).unwrap();
        assert!(verify_coloring(&g, &t, &narrow, &good).is_err());
    }

    #[test]
    fn reduce_trivial_cases() {
        let t = edge_target();
        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(hck_reduce_bipartite(&p, &t, &ListAssignment::full(4, &t))
            .unwrap()
            .is_empty());
        let t = c5_target(1, 1, 1);
        assert!(hck_reduce_bipartite(&p, &t, &ListAssignment::full(4, &t))
            .unwrap()
            .is_empty());
        assert!(hck_reduce_bipartite(&cycle(5), &t, &ListAssignment::full(5, &t)).is_err());
    }

    #[test]
    fn bounded_dp_on_cycle() {
        let g = cycle(15);
        let t = c5_target(3, 3, 3);
        let nice = make_nice(&decompose(&g));
        let c = hck_solve_bounded(&g, &t, &ListAssignment::full(15, &t), &nice)
            .unwrap()
            .unwrap();
        verify_coloring(&g, &t, &ListAssignment::full(15, &t), &c).unwrap();
        assert!(c.exceptional.len() >= 3);
        let t = c5_target(0, 0, 0);
        assert!(
            hck_solve_bounded(&g, &t, &ListAssignment::full(15, &t), &nice)
                .unwrap()
                .is_none()
        );
    }
}

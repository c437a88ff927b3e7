//! Covering all small minimal separators by a set whose torso has bounded treewidth.

use std::collections::HashSet;

use serde::Serialize;

use crate::class::GraphClass;
use crate::cuts::multicut_uncut;
use crate::dp::TerminalPair;
use crate::error::{Error, Result};
use crate::flow::{min_vertex_cut, separator_chain};
use crate::graph::{is_separator, EdgeColor, Graph, VertexSet};
use crate::par;
use crate::torso::torso;

/// Where a vertex of a reduced graph comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Origin {
    Vertex(usize),
    #[serde(serialize_with = "subdivision_tag")]
    Subdivision,
}

fn subdivision_tag<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("subdivision")
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// Union of the covers over all terminal pairs, without the terminals.
    pub cover: VertexSet,
    pub reduced: Graph,
    pub origin: Vec<Origin>,
    /// Original ids of the retained vertices; retained vertex `i` of `reduced` is `kept[i]`.
    pub kept: VertexSet,
}

impl ReductionResult {
    pub fn reduced_id(&self, v: usize) -> Option<usize> {
        self.kept.as_slice().binary_search(&v).ok()
    }

    pub fn subdivisions(&self) -> VertexSet {
        (self.kept.len()..self.reduced.n()).collect()
    }

    /// Original ids of a set of reduced vertices, dropping subdivision vertices.
    pub fn lift(&self, s: &VertexSet) -> VertexSet {
        s.iter()
            .filter_map(|v| match self.origin[v] {
                Origin::Vertex(o) => Some(o),
                Origin::Subdivision => None,
            })
            .collect()
    }
}

/// One layer of the chain with a choice of the two contracted sides.
#[derive(Clone, Debug)]
pub struct LayerContext {
    pub index: usize,
    pub layer: VertexSet,
    pub boundary: VertexSet,
    pub graph: Graph,
    /// Original id of every vertex of `graph` except the last two.
    pub ids: Vec<usize>,
    pub a: usize,
    pub b: usize,
}

/// Superset of the union of all inclusion-minimal s-t separators of size at most `k`,
/// disjoint from `{s, t}`. Empty when s and t are already disconnected.
pub fn cover_minimal_separators(g: &Graph, s: usize, t: usize, k: usize) -> Result<VertexSet> {
    if g.has_edge(s, t) {
        return Err(Error::AdjacentTerminals(s, t));
    }
    match min_vertex_cut(g, s, t, k)? {
        None => Err(Error::CutTooLarge(k)),
        Some((0, _)) => Ok(VertexSet::new()),
        Some((l, _)) => cover_rec(g, s, t, k, l),
    }
}

fn cover_rec(g: &Graph, s: usize, t: usize, k: usize, l: usize) -> Result<VertexSet> {
    let chain = separator_chain(g, s, t)?;
    let c0 = chain.union();
    if k == l {
        return Ok(c0);
    }
    let excess = k - l;
    let q = chain.q();
    let mut in_x = vec![false; g.n()];
    let mut layers: Vec<(VertexSet, VertexSet)> = Vec::with_capacity(q + 1);
    let sep = |i: usize| -> VertexSet {
        match i {
            0 => VertexSet::singleton(s),
            i if i == q + 1 => VertexSet::singleton(t),
            i => chain.separators[i - 1].clone(),
        }
    };
    for i in 1..=q {
        let prev = sep(i - 1);
        let layer = chain.diffs[i - 1].difference(&prev);
        for v in chain.diffs[i - 1].iter() {
            in_x[v] = true;
        }
        layers.push((layer, prev.union(&sep(i))));
    }
    let last = sep(q);
    let tail: VertexSet = (0..g.n())
        .filter(|&v| v != t && !in_x[v] && !last.contains(v))
        .collect();
    layers.push((tail, last.union(&sep(q + 1))));

    let mut jobs = Vec::new();
    for (i, (layer, boundary)) in layers.iter().enumerate() {
        if layer.is_empty() {
            continue;
        }
        jobs.extend(layer_jobs(g, i + 1, layer, boundary));
    }
    let parts = par::map(&jobs, |ctx| -> Result<VertexSet> {
        let Some((lab, _)) = min_vertex_cut(&ctx.graph, ctx.a, ctx.b, k)? else {
            return Ok(VertexSet::new());
        };
        if lab == 0 {
            return Ok(VertexSet::new());
        }
        let bound = k.min(lab + excess - 1);
        let inner = cover_rec(&ctx.graph, ctx.a, ctx.b, bound, lab)?;
        Ok(inner.iter().map(|v| ctx.ids[v]).collect())
    });
    let mut out = c0;
    for p in parts {
        out = out.union(&p?);
    }
    Ok(out)
}

/// For every component of the layer, every split of the boundary vertices it touches into
/// disjoint nonempty nonadjacent A and B (up to swapping), with A and B contracted to a
/// and b. A minimal separator of a union of such components is the union of minimal
/// separators of the components, so the components can be handled one at a time.
fn layer_jobs(
    g: &Graph,
    index: usize,
    layer: &VertexSet,
    boundary: &VertexSet,
) -> Vec<LayerContext> {
    let in_layer = layer.mask(g.n());
    let mut jobs = Vec::new();
    let mut seen = HashSet::new();
    for ids in g.components_where(&in_layer) {
        let touched: Vec<usize> = g
            .neighborhood(&VertexSet::from_sorted(ids.clone()))
            .intersection(boundary)
            .into_vec();
        let mut side = vec![0u8; touched.len()];
        let mut splits = Vec::new();
        enumerate_splits(g, &touched, 0, &mut side, &mut splits);
        let local = |v: usize| ids.binary_search(&v).ok();
        for side in splits {
            let (a, b) = (ids.len(), ids.len() + 1);
            let mut h = Graph::new(ids.len() + 2);
            for (i, &v) in ids.iter().enumerate() {
                for &u in g.neighbors(v) {
                    if let Some(j) = local(u) {
                        if i < j {
                            h.add_colored_edge(i, j, g.color(v, u).unwrap_or(EdgeColor::Black))
                                .expect("valid");
                        }
                    } else if let Ok(p) = touched.binary_search(&u) {
                        let end = match side[p] {
                            1 => a,
                            2 => b,
                            _ => continue,
                        };
                        if !h.has_edge(i, end) {
                            h.add_edge(i, end).expect("valid");
                        }
                    }
                }
            }
            // different splits often give the same graph
            if !seen.insert((ids.clone(), h.edge_list(), h.red_edges())) {
                continue;
            }
            jobs.push(LayerContext {
                index,
                layer: layer.clone(),
                boundary: boundary.clone(),
                graph: h,
                ids: ids.clone(),
                a,
                b,
            });
        }
    }
    jobs
}

/// Assignments of `touched` to none (0), A (1) or B (2) with both sides nonempty, no edge
/// between A and B, and the first assigned vertex in A.
fn enumerate_splits(
    g: &Graph,
    touched: &[usize],
    p: usize,
    side: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if p == touched.len() {
        if side.contains(&1) && side.contains(&2) {
            out.push(side.clone());
        }
        return;
    }
    let any_assigned = side[..p].iter().any(|&x| x != 0);
    for choice in 0..3u8 {
        if choice == 2 && !any_assigned {
            continue;
        }
        let other = 3 - choice;
        if choice != 0 && (0..p).any(|q| side[q] == other && g.has_edge(touched[p], touched[q])) {
            continue;
        }
        side[p] = choice;
        enumerate_splits(g, touched, p + 1, side, out);
    }
    side[p] = 0;
}

/// Torso of the covers over all separable terminal pairs, with every red edge replaced by
/// `k + 1` parallel paths of length two through fresh subdivision vertices.
pub fn reduce_terminals(g: &Graph, t_set: &VertexSet, k: usize) -> Result<ReductionResult> {
    t_set.check(g.n())?;
    if t_set.len() < 2 {
        return Err(Error::Precondition(
            "at least two terminals are required".into(),
        ));
    }
    let terms = t_set.as_slice();
    let pairs: Vec<(usize, usize)> = (0..terms.len())
        .flat_map(|i| (i + 1..terms.len()).map(move |j| (terms[i], terms[j])))
        .collect();
    let covers = par::map(&pairs, |&(s, t)| -> Result<VertexSet> {
        if g.has_edge(s, t) {
            return Ok(VertexSet::new());
        }
        match min_vertex_cut(g, s, t, k)? {
            None | Some((0, _)) => Ok(VertexSet::new()),
            Some((l, _)) => cover_rec(g, s, t, k, l),
        }
    });
    let mut cover = VertexSet::new();
    for c in covers {
        cover = cover.union(&c?);
    }
    let cover = cover.difference(t_set);
    let kept = cover.union(t_set);
    let tor = torso(g, &kept)?;
    let mut reduced = Graph::new(kept.len());
    let mut origin: Vec<Origin> = kept.iter().map(Origin::Vertex).collect();
    for (i, v) in kept.iter().enumerate() {
        reduced.set_label(i, g.label(v))?;
    }
    for (u, v, c) in tor.edges() {
        match c {
            EdgeColor::Black => reduced.add_edge(u, v)?,
            EdgeColor::Red if g.has_edge(kept.as_slice()[u], kept.as_slice()[v]) => {
                // a red edge already present in the input stays as it is
                reduced.add_colored_edge(u, v, EdgeColor::Red)?
            }
            EdgeColor::Red => {
                for _ in 0..=k {
                    let w = reduced.add_vertex(0);
                    origin.push(Origin::Subdivision);
                    reduced.add_edge(u, w)?;
                    reduced.add_edge(v, w)?;
                }
            }
        }
    }
    Ok(ReductionResult {
        cover,
        reduced,
        origin,
        kept,
    })
}

/// Cover of all minimal sets of size at most `k` separating `x` from `y`.
pub fn cover_set_separators(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    k: usize,
) -> Result<VertexSet> {
    x.check(g.n())?;
    y.check(g.n())?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::Precondition("terminal sets must be nonempty".into()));
    }
    let n = g.n();
    let mut h = g.clone();
    let s = h.add_vertex(0);
    let t = h.add_vertex(0);
    for v in x.iter() {
        h.add_edge(s, v)?;
    }
    for v in y.iter() {
        h.add_edge(t, v)?;
    }
    let c = cover_minimal_separators(&h, s, t, k)?;
    Ok(c.iter().filter(|&v| v < n).collect())
}

/// Projection of `x` and `y` onto the separating set `c`: the vertices of `c` reachable
/// from the set through paths that meet `c` only at their end.
pub fn project_terminals(
    g: &Graph,
    c: &VertexSet,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<(VertexSet, VertexSet)> {
    if !is_separator(g, c, x, y)? {
        return Err(Error::Precondition(
            "set does not separate the terminal sets".into(),
        ));
    }
    Ok((project(g, c, x), project(g, c, y)))
}

pub(crate) fn project(g: &Graph, c: &VertexSet, x: &VertexSet) -> VertexSet {
    let blocked = c.mask(g.n());
    let seen = g.reach(x.iter(), &blocked);
    c.iter()
        .filter(|&v| x.contains(v) || g.neighbors(v).iter().any(|&u| seen[u]))
        .collect()
}

/// Exactly the vertices lying on some inclusion-minimal s-t separator of size at most `k`.
pub fn separator_membership(g: &Graph, s: usize, t: usize, k: usize) -> Result<VertexSet> {
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    VertexSet::from(vec![s, t]).check(g.n())?;
    if k == 0 || g.has_edge(s, t) {
        return Ok(VertexSet::new());
    }
    match min_vertex_cut(g, s, t, k)? {
        None | Some((0, _)) => return Ok(VertexSet::new()),
        Some(_) => {}
    }
    let candidates: Vec<usize> = (0..g.n()).filter(|&v| v != s && v != t).collect();
    let all = GraphClass::all();
    let hits = par::map(&candidates, |&v| -> Result<bool> {
        let (h, ids) = g.without(&VertexSet::singleton(v));
        let local = |u: usize| ids.binary_search(&u).expect("kept vertex");
        let (hs, ht) = (local(s), local(t));
        let nbrs: Vec<usize> = g.neighbors(v).iter().map(|&u| local(u)).collect();
        let cut = vec![TerminalPair::new(
            VertexSet::singleton(hs),
            VertexSet::singleton(ht),
        )];
        for &v1 in &nbrs {
            for &v2 in &nbrs {
                if v1 == v2 || v1 == ht || v2 == hs {
                    continue;
                }
                let uncut = vec![
                    TerminalPair::new(VertexSet::singleton(hs), VertexSet::singleton(v1)),
                    TerminalPair::new(VertexSet::singleton(ht), VertexSet::singleton(v2)),
                ];
                if multicut_uncut(&h, &cut, &uncut, k - 1, &all)?.is_some() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    });
    let mut out = Vec::new();
    for (&v, hit) in candidates.iter().zip(hits) {
        if hit? {
            out.push(v);
        }
    }
    Ok(VertexSet::from_sorted(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn double_path() -> Graph {
        graph(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 7),
                (0, 4),
                (4, 5),
                (5, 6),
                (6, 7),
            ],
        )
    }

    #[test]
    fn path_cover() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(cover_minimal_separators(&g, 0, 2, 1).unwrap(), vs(&[1]));
        assert!(cover_minimal_separators(&g, 0, 1, 1).is_err());
        assert!(matches!(
            cover_minimal_separators(&g, 0, 2, 0),
            Err(Error::CutTooLarge(0))
        ));
    }

    #[test]
    fn double_path_cover() {
        let g = double_path();
        let all = vs(&[1, 2, 3, 4, 5, 6]);
        assert!(all.is_subset(&cover_minimal_separators(&g, 0, 7, 2).unwrap()));
        let c3 = cover_minimal_separators(&g, 0, 7, 3).unwrap();
        assert!(all.is_subset(&c3));
        assert!(!c3.contains(0) && !c3.contains(7));
    }

    #[test]
    fn disconnected_cover_is_empty() {
        let g = graph(3, &[(0, 1)]);
        assert!(cover_minimal_separators(&g, 0, 2, 1).unwrap().is_empty());
    }

    #[test]
    fn star_reduction() {
        // center 0, leaves s=1, t=2, and 3..7
        let g = graph(8, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7)]);
        let r = reduce_terminals(&g, &vs(&[1, 2]), 1).unwrap();
        assert_eq!(r.cover, vs(&[0]));
        assert_eq!(r.reduced.n(), 3);
        assert_eq!(r.reduced.m(), 2);
        assert!(r.subdivisions().is_empty());
    }

    #[test]
    fn red_edges_are_subdivided() {
        // s=0 - 1, two routes 1 - 4 - 2 and 1 - 5 - 2, then 2 - t=3
        let g = graph(6, &[(0, 1), (1, 4), (4, 2), (1, 5), (5, 2), (2, 3)]);
        let r = reduce_terminals(&g, &vs(&[0, 3]), 1).unwrap();
        assert_eq!(r.cover, vs(&[1, 2]));
        assert_eq!(r.reduced.n(), 6);
        assert_eq!(r.subdivisions(), vs(&[4, 5]));
        assert_eq!(r.origin[4], Origin::Subdivision);
        assert!(!r.reduced.has_edge(1, 2));
        for w in [4, 5] {
            assert_eq!(r.reduced.neighbors(w), &[1, 2]);
        }
    }

    #[test]
    fn set_cover() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        // the terminal sets themselves may be deleted
        assert_eq!(
            cover_set_separators(&g, &vs(&[0]), &vs(&[2]), 1).unwrap(),
            vs(&[0, 1, 2])
        );
        // overlapping sets: the shared vertex must be removed
        assert!(cover_set_separators(&g, &vs(&[0, 1]), &vs(&[1, 2]), 1)
            .unwrap()
            .contains(1));
        assert!(cover_set_separators(&g, &vs(&[0]), &vs(&[]), 1).is_err());
    }

    #[test]
    fn projections() {
        // x0 - p - c0 - q - y0
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let (xs, ys) = project_terminals(&g, &vs(&[2]), &vs(&[0]), &vs(&[4])).unwrap();
        assert_eq!((xs, ys), (vs(&[2]), vs(&[2])));
        let all = g.all_vertices();
        let (xs, ys) = project_terminals(&g, &all, &vs(&[0]), &vs(&[4])).unwrap();
        assert_eq!((xs, ys), (vs(&[0]), vs(&[4])));
        assert!(project_terminals(&g, &vs(&[]), &vs(&[0]), &vs(&[4])).is_err());
    }

    #[test]
    fn membership() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(separator_membership(&g, 0, 2, 1).unwrap(), vs(&[1]));
        assert!(separator_membership(&g, 0, 2, 0).unwrap().is_empty());
        assert_eq!(
            separator_membership(&double_path(), 0, 7, 2).unwrap(),
            vs(&[1, 2, 3, 4, 5, 6])
        );
    }
}

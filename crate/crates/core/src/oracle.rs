//! Exhaustive reference solvers for small instances. Slow on purpose: every answer comes
//! straight from the problem definition.

use std::collections::BTreeSet;

use crate::class::GraphClass;
use crate::cuts::CoveredCut;
use crate::dp::{ConstraintSpec, SeparationDemand, TerminalPair};
use crate::error::{Error, Result};
use crate::graph::{contract_edges, is_bipartite, is_separator, Graph, VertexSet};
use crate::hck::{Coloring, HomTarget, ListAssignment};
use crate::par;

/// Default cap on the number of vertices an oracle accepts.
pub const DEFAULT_MAX_VERTICES: usize = 16;

/// Brute-force solvers sharing a size cap.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub max_vertices: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

/// All `size`-subsets of `pool` in lexicographic order.
fn combinations(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn go(
        pool: &[usize],
        start: usize,
        size: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < size - cur.len() {
                break;
            }
            cur.push(pool[i]);
            go(pool, i + 1, size, cur, out);
            cur.pop();
        }
    }
    go(pool, 0, size, &mut cur, &mut out);
    out
}

/// Smallest, then lexicographically least, subset of `pool` of size in `sizes` that
/// satisfies `pred`.
fn first_subset<F>(
    pool: &[usize],
    sizes: impl IntoIterator<Item = usize>,
    pred: F,
) -> Result<Option<Vec<usize>>>
where
    F: Fn(&[usize]) -> Result<bool> + Sync,
{
    for b in sizes {
        if b > pool.len() {
            break;
        }
        let hit = par::find_map_first(&combinations(pool, b), |c| match pred(c) {
            Ok(true) => Some(Ok(c.clone())),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        });
        if let Some(r) = hit {
            return r.map(Some);
        }
    }
    Ok(None)
}

fn set(v: &[usize]) -> VertexSet {
    VertexSet::from_sorted(v.to_vec())
}

impl Oracle {
    pub fn new(max_vertices: usize) -> Self {
        Oracle { max_vertices }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if g.n() > self.max_vertices {
            return Err(Error::TooManyVertices {
                n: g.n(),
                max: self.max_vertices,
            });
        }
        Ok(())
    }

    /// Smallest S (ties: lexicographically least) with |S| <= k, S disjoint from
    /// `forbidden`, meeting `demand` and accepted by `constraint`.
    pub fn constrained_cut(
        &self,
        g: &Graph,
        demand: &SeparationDemand,
        k: usize,
        constraint: &ConstraintSpec,
        forbidden: &VertexSet,
    ) -> Result<Option<VertexSet>> {
        self.check(g)?;
        forbidden.check(g.n())?;
        let pool: Vec<usize> = (0..g.n()).filter(|&v| !forbidden.contains(v)).collect();
        let found = first_subset(&pool, 0..=k, |c| {
            let s = set(c);
            Ok(demand.is_met_by(g, &s)? && constraint.accepts(g, &s)?)
        })?;
        Ok(found.map(VertexSet::from_sorted))
    }

    fn st_cut(
        &self,
        g: &Graph,
        s: usize,
        t: usize,
        k: usize,
        constraint: &ConstraintSpec,
    ) -> Result<Option<VertexSet>> {
        let demand = SeparationDemand::cut(VertexSet::singleton(s), VertexSet::singleton(t));
        self.constrained_cut(g, &demand, k, constraint, &VertexSet::from(vec![s, t]))
    }

    /// Size of a minimum s-t separator, `None` if s and t are adjacent.
    pub fn min_cut_size(&self, g: &Graph, s: usize, t: usize) -> Result<Option<usize>> {
        Ok(self
            .st_cut(g, s, t, g.n(), &ConstraintSpec::Any)?
            .map(|c| c.len()))
    }

    /// Every minimum s-t separator.
    pub fn minimum_separators(&self, g: &Graph, s: usize, t: usize) -> Result<Vec<VertexSet>> {
        let Some(l) = self.min_cut_size(g, s, t)? else {
            return Ok(Vec::new());
        };
        let pool: Vec<usize> = (0..g.n()).filter(|&v| v != s && v != t).collect();
        let (a, b) = (VertexSet::singleton(s), VertexSet::singleton(t));
        let mut out = Vec::new();
        for c in combinations(&pool, l) {
            let c = set(&c);
            if is_separator(g, &c, &a, &b)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Inclusion-minimal s-t separators of size at most `k`.
    pub fn minimal_separators(
        &self,
        g: &Graph,
        s: usize,
        t: usize,
        k: usize,
    ) -> Result<Vec<VertexSet>> {
        self.check(g)?;
        let pool: Vec<usize> = (0..g.n()).filter(|&v| v != s && v != t).collect();
        let (a, b) = (VertexSet::singleton(s), VertexSet::singleton(t));
        let mut out = Vec::new();
        for size in 0..=k.min(pool.len()) {
            for c in combinations(&pool, size) {
                let c = set(&c);
                if !is_separator(g, &c, &a, &b)? {
                    continue;
                }
                let mut minimal = true;
                for v in c.iter() {
                    let smaller = c.difference(&VertexSet::singleton(v));
                    if is_separator(g, &smaller, &a, &b)? {
                        minimal = false;
                        break;
                    }
                }
                if minimal {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    /// Union of all inclusion-minimal s-t separators of size at most `k`.
    pub fn minimal_separator_union(
        &self,
        g: &Graph,
        s: usize,
        t: usize,
        k: usize,
    ) -> Result<VertexSet> {
        let mut u = VertexSet::new();
        for c in self.minimal_separators(g, s, t, k)? {
            u = u.union(&c);
        }
        Ok(u)
    }

    /// Smallest s-t separator of size at most `k` inducing a member of `class`.
    pub fn g_mincut(
        &self,
        g: &Graph,
        s: usize,
        t: usize,
        k: usize,
        class: &GraphClass,
    ) -> Result<Option<VertexSet>> {
        self.st_cut(g, s, t, k, &ConstraintSpec::Hereditary(class.clone()))
    }

    pub fn stable_cut(&self, g: &Graph, s: usize, t: usize, k: usize) -> Result<Option<VertexSet>> {
        self.g_mincut(g, s, t, k, &GraphClass::edgeless())
    }

    pub fn connected_cut(
        &self,
        g: &Graph,
        s: usize,
        t: usize,
        k: usize,
    ) -> Result<Option<VertexSet>> {
        self.st_cut(g, s, t, k, &ConstraintSpec::ConnectedBlack)
    }

    pub fn multicut_uncut(
        &self,
        g: &Graph,
        cut_pairs: &[TerminalPair],
        uncut_pairs: &[TerminalPair],
        k: usize,
        class: &GraphClass,
    ) -> Result<Option<VertexSet>> {
        let demand = SeparationDemand {
            cut_pairs: cut_pairs.to_vec(),
            uncut_pairs: uncut_pairs.to_vec(),
        };
        self.constrained_cut(
            g,
            &demand,
            k,
            &ConstraintSpec::Hereditary(class.clone()),
            &VertexSet::new(),
        )
    }

    /// Smallest s-t separator S (ties: lexicographically least) contained in the endpoint
    /// set of at most `k` edges, with a smallest such edge set. The edges may end in s or t;
    /// only S is deleted.
    pub fn edge_induced_vertex_cut(
        &self,
        g: &Graph,
        s: usize,
        t: usize,
        k: usize,
    ) -> Result<Option<CoveredCut>> {
        self.check(g)?;
        let usable = g.edge_list();
        let cover = |sep: &[usize]| -> Option<Vec<(usize, usize)>> {
            let touching: Vec<(usize, usize)> = usable
                .iter()
                .copied()
                .filter(|&(u, v)| sep.contains(&u) || sep.contains(&v))
                .collect();
            let idx: Vec<usize> = (0..touching.len()).collect();
            (0..=k.min(touching.len())).find_map(|size| {
                combinations(&idx, size).into_iter().find_map(|c| {
                    let f: Vec<(usize, usize)> = c.iter().map(|&i| touching[i]).collect();
                    sep.iter()
                        .all(|&x| f.iter().any(|&(u, v)| u == x || v == x))
                        .then_some(f)
                })
            })
        };
        let pool: Vec<usize> = (0..g.n()).filter(|&v| v != s && v != t).collect();
        let (a, b) = (VertexSet::singleton(s), VertexSet::singleton(t));
        let found = first_subset(&pool, 0..=2 * k, |c| {
            Ok(is_separator(g, &set(c), &a, &b)? && cover(c).is_some())
        })?;
        Ok(found.map(|c| {
            let f = cover(&c).expect("checked");
            (VertexSet::from_sorted(c), f)
        }))
    }

    /// Smallest vertex set of a connected subgraph containing `x` with at most `k`
    /// vertices (ties: lexicographically least).
    pub fn steiner_tree(&self, g: &Graph, x: &VertexSet, k: usize) -> Result<Option<VertexSet>> {
        self.check(g)?;
        x.check(g.n())?;
        let pool: Vec<usize> = (0..g.n()).filter(|&v| !x.contains(v)).collect();
        let extra = first_subset(&pool, 0..=k.saturating_sub(x.len()), |c| {
            if x.len() + c.len() > k {
                return Ok(false);
            }
            let all = x.union(&set(c));
            Ok(connected(g, &all))
        })?;
        if x.len() > k {
            return Ok(None);
        }
        Ok(extra.map(|c| x.union(&set(&c))))
    }

    /// Smallest S (ties: lexicographically least), |S| <= k, with G - S bipartite and
    /// G[S] in `class`. With `exact`, only sets of exactly k vertices count.
    pub fn bipartization(
        &self,
        g: &Graph,
        k: usize,
        class: &GraphClass,
        exact: bool,
    ) -> Result<Option<VertexSet>> {
        self.check(g)?;
        let pool: Vec<usize> = (0..g.n()).collect();
        let sizes = if exact { k..=k } else { 0..=k };
        let found = first_subset(&pool, sizes, |c| {
            let s = set(c);
            Ok(is_bipartite(&g.without(&s).0) && class.contains(&g.induced(&s))?)
        })?;
        Ok(found.map(VertexSet::from_sorted))
    }

    pub fn oct(&self, g: &Graph, k: usize) -> Result<Option<VertexSet>> {
        self.bipartization(g, k, &GraphClass::all(), false)
    }

    /// Smallest edge set F (ties: lexicographically least), |F| <= k, whose graph
    /// (endpoints and F) is in `class` and with G - F bipartite.
    pub fn edge_bipartization(
        &self,
        g: &Graph,
        k: usize,
        class: &GraphClass,
    ) -> Result<Option<Vec<(usize, usize)>>> {
        self.check(g)?;
        let edges = g.edge_list();
        let idx: Vec<usize> = (0..edges.len()).collect();
        let found = first_subset(&idx, 0..=k, |c| {
            let f: Vec<(usize, usize)> = c.iter().map(|&i| edges[i]).collect();
            let kept: Vec<(usize, usize)> =
                edges.iter().copied().filter(|e| !f.contains(e)).collect();
            if !is_bipartite(&Graph::from_edges(g.n(), &kept)?) {
                return Ok(false);
            }
            class.contains(&edge_graph(&f))
        })?;
        Ok(found.map(|c| c.iter().map(|&i| edges[i]).collect()))
    }

    /// Smallest edge set (ties: lexicographically least), |F| <= k, whose contraction
    /// leaves a bipartite graph.
    pub fn contraction(&self, g: &Graph, k: usize) -> Result<Option<Vec<(usize, usize)>>> {
        self.check(g)?;
        let edges = g.edge_list();
        let idx: Vec<usize> = (0..edges.len()).collect();
        let found = first_subset(&idx, 0..=k, |c| {
            let f: Vec<(usize, usize)> = c.iter().map(|&i| edges[i]).collect();
            Ok(is_bipartite(&contract_edges(g, &f)?))
        })?;
        Ok(found.map(|c| c.iter().map(|&i| edges[i]).collect()))
    }

    /// Lexicographically least coloring honoring lists, edges and caps.
    pub fn hck(
        &self,
        g: &Graph,
        target: &HomTarget,
        lists: &ListAssignment,
    ) -> Result<Option<Coloring>> {
        self.check(g)?;
        let mut first = None;
        search_colorings(g, target, lists, &mut |theta| {
            first = Some(theta.to_vec());
            false
        });
        Ok(first.map(|theta| to_coloring(theta, target)))
    }

    /// Exceptional sets of the minimal colorings: those whose exceptional set contains no
    /// other coloring's exceptional set as a proper subset.
    pub fn minimal_exceptional_sets(
        &self,
        g: &Graph,
        target: &HomTarget,
        lists: &ListAssignment,
    ) -> Result<Vec<VertexSet>> {
        self.check(g)?;
        if g.n() > 64 {
            return Err(Error::TooManyVertices { n: g.n(), max: 64 });
        }
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        search_colorings(g, target, lists, &mut |theta| {
            let mask = (0..theta.len())
                .filter(|&v| target.cap(theta[v]).is_some())
                .fold(0u64, |m, v| m | 1 << v);
            seen.insert(mask);
            true
        });
        let all: Vec<u64> = seen.into_iter().collect();
        Ok(all
            .iter()
            .filter(|&&m| !all.iter().any(|&o| o != m && o & m == o))
            .map(|&m| (0..g.n()).filter(|&v| m >> v & 1 == 1).collect())
            .collect())
    }
}

fn to_coloring(theta: Vec<usize>, target: &HomTarget) -> Coloring {
    let exceptional = (0..theta.len())
        .filter(|&v| target.cap(theta[v]).is_some())
        .collect();
    Coloring { theta, exceptional }
}

/// Visits colorings in lexicographic order until `visit` returns false.
fn search_colorings(
    g: &Graph,
    target: &HomTarget,
    lists: &ListAssignment,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    fn go(
        v: usize,
        g: &Graph,
        target: &HomTarget,
        lists: &ListAssignment,
        theta: &mut Vec<usize>,
        used: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if v == g.n() {
            return visit(theta);
        }
        for c in 0..target.vertices() {
            if !lists.allows(v, c) || target.cap(c).is_some_and(|k| used[c] >= k) {
                continue;
            }
            if g.neighbors(v)
                .iter()
                .any(|&u| u < v && !target.adjacent(c, theta[u]))
            {
                continue;
            }
            theta.push(c);
            used[c] += 1;
            let more = go(v + 1, g, target, lists, theta, used, visit);
            used[c] -= 1;
            theta.pop();
            if !more {
                return false;
            }
        }
        true
    }
    if lists.len() != g.n() {
        return;
    }
    let mut used = vec![0; target.vertices()];
    go(0, g, target, lists, &mut Vec::new(), &mut used, visit);
}

/// The graph formed by the edges `f` and their endpoints, relabelled in vertex order.
fn edge_graph(f: &[(usize, usize)]) -> Graph {
    let verts: Vec<usize> = f
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let id = |x: usize| verts.binary_search(&x).expect("endpoint");
    let local: Vec<(usize, usize)> = f.iter().map(|&(u, v)| (id(u), id(v))).collect();
    Graph::from_edges(verts.len(), &local).expect("valid edges")
}

fn connected(g: &Graph, s: &VertexSet) -> bool {
    let Some(first) = s.iter().next() else {
        return true;
    };
    let blocked: Vec<bool> = (0..g.n()).map(|v| !s.contains(v)).collect();
    let seen = g.reach([first], &blocked);
    s.iter().all(|v| seen[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    /// s=0, t=1, paths 0-2-3-4-1 and 0-5-6-7-1.
    fn double_path() -> Graph {
        Graph::from_edges(
            8,
            &[
                (0, 2),
                (2, 3),
                (3, 4),
                (4, 1),
                (0, 5),
                (5, 6),
                (6, 7),
                (7, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_cuts() {
        let o = Oracle::default();
        let p = path(3);
        let demand = SeparationDemand::cut(VertexSet::singleton(0), VertexSet::singleton(2));
        let forb = VertexSet::from(vec![0, 2]);
        let got = o
            .constrained_cut(&p, &demand, 1, &ConstraintSpec::Any, &forb)
            .unwrap();
        assert_eq!(got, Some(VertexSet::singleton(1)));
        assert_eq!(
            o.constrained_cut(&p, &demand, 0, &ConstraintSpec::Any, &forb)
                .unwrap(),
            None
        );
        assert_eq!(o.min_cut_size(&p, 0, 2).unwrap(), Some(1));
        assert_eq!(o.min_cut_size(&p, 0, 1).unwrap(), None);
    }

    #[test]
    fn separator_unions() {
        let o = Oracle::default();
        assert_eq!(
            o.minimal_separator_union(&path(3), 0, 2, 1).unwrap(),
            VertexSet::singleton(1)
        );
        let g = double_path();
        assert_eq!(
            o.minimal_separator_union(&g, 0, 1, 2).unwrap(),
            VertexSet::from(vec![2, 3, 4, 5, 6, 7])
        );
        assert!(o.minimal_separator_union(&g, 0, 1, 1).unwrap().is_empty());
        assert_eq!(o.minimum_separators(&g, 0, 1).unwrap().len(), 9);
    }

    #[test]
    fn size_cap() {
        let o = Oracle::new(4);
        assert!(matches!(
            o.oct(&path(5), 1),
            Err(Error::TooManyVertices { .. })
        ));
    }

    #[test]
    fn bipartization_and_edges() {
        let o = Oracle::default();
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(o.oct(&k3, 1).unwrap(), Some(VertexSet::singleton(0)));
        assert_eq!(
            o.bipartization(&k3, 2, &GraphClass::edgeless(), true)
                .unwrap(),
            None
        );
        assert_eq!(
            o.edge_bipartization(&k3, 1, &GraphClass::all()).unwrap(),
            Some(vec![(0, 1)])
        );
        assert_eq!(o.contraction(&k3, 1).unwrap(), Some(vec![(0, 1)]));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(o.contraction(&k4, 1).unwrap(), None);
        assert_eq!(o.contraction(&k4, 2).unwrap().map(|f| f.len()), Some(2));
    }

    #[test]
    fn eivc_and_steiner() {
        let o = Oracle::default();
        let g = double_path();
        let (sep, edges) = o.edge_induced_vertex_cut(&g, 0, 1, 2).unwrap().unwrap();
        assert_eq!(sep, VertexSet::from(vec![2, 5]));
        assert_eq!(edges, vec![(0, 2), (0, 5)]);
        assert_eq!(o.edge_induced_vertex_cut(&g, 0, 1, 1).unwrap(), None);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let x = VertexSet::from(vec![1, 2]);
        assert_eq!(
            o.steiner_tree(&star, &x, 3).unwrap(),
            Some(VertexSet::from(vec![0, 1, 2]))
        );
        assert_eq!(o.steiner_tree(&star, &x, 2).unwrap(), None);
    }

    #[test]
    fn coloring_search() {
        let o = Oracle::default();
        let t = HomTarget::new(2, &[(0, 1)], &BTreeMap::new()).unwrap();
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = o
            .hck(&c4, &t, &ListAssignment::full(4, &t))
            .unwrap()
            .unwrap();
        assert_eq!(c.theta, vec![0, 1, 0, 1]);
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(o
            .hck(&k3, &t, &ListAssignment::full(3, &t))
            .unwrap()
            .is_none());
        // a triangle on b, w and one capped vertex c with K(c) = 1
        let t = HomTarget::new(3, &[(0, 1), (1, 2), (0, 2)], &BTreeMap::from([(2, 1)])).unwrap();
        let sets = o
            .minimal_exceptional_sets(&k3, &t, &ListAssignment::full(3, &t))
            .unwrap();
        assert_eq!(
            sets,
            vec![
                VertexSet::singleton(0),
                VertexSet::singleton(1),
                VertexSet::singleton(2)
            ]
        );
    }
}

//! Hereditary graph classes given by a membership oracle.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::canon::{canonical_form, canonical_from_graph, CanonicalGraph, ROW_BITS};
use crate::error::{Error, Result};
use crate::graph::{EdgeColor, Graph};

pub type Oracle = dyn Fn(&Graph) -> bool + Send + Sync;

/// A graph class decided by an oracle on the black edges.
///
/// Membership answers are memoized by canonical form. Whenever a graph is found to be a
/// member, its one-vertex-deleted subgraphs are checked too, so a class that is not
/// closed under induced subgraphs is reported as soon as the violation is touched.
#[derive(Clone)]
pub struct GraphClass {
    name: String,
    oracle: Arc<Oracle>,
    memo: Arc<RwLock<HashMap<CanonicalGraph, bool>>>,
    trivial: bool,
}

impl fmt::Debug for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphClass")
            .field("name", &self.name)
            .finish()
    }
}

impl GraphClass {
    pub fn new(
        name: impl Into<String>,
        oracle: impl Fn(&Graph) -> bool + Send + Sync + 'static,
    ) -> Self {
        GraphClass {
            name: name.into(),
            oracle: Arc::new(oracle),
            memo: Arc::new(RwLock::new(HashMap::new())),
            trivial: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True for the class of all graphs.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn all() -> Self {
        let mut c = GraphClass::new("all", |_| true);
        c.trivial = true;
        c
    }

    pub fn edgeless() -> Self {
        GraphClass::new("edgeless", |g| g.edges().all(|e| e.2 != EdgeColor::Black))
    }

    pub fn clique() -> Self {
        GraphClass::new("clique", |g| {
            (0..g.n()).all(|v| (v + 1..g.n()).all(|u| g.has_black_edge(u, v)))
        })
    }

    /// |V| minus maximum matching size at most `j`.
    pub fn max_deficiency(j: usize) -> Self {
        GraphClass::new(format!("max-deficiency-{j}"), move |g| {
            g.n() - max_matching_size(&black_masks(g)) <= j
        })
    }

    /// Rank (|V| minus number of components) at most `j`.
    pub fn rank(j: usize) -> Self {
        GraphClass::new(format!("rank-{j}"), move |g| black_rank(g) <= j)
    }

    /// `edgeless`, `clique`, `all`, `max-deficiency-<j>`, `rank-<j>`.
    pub fn builtin(name: &str) -> Result<Self> {
        let number = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
        match name {
            "edgeless" => Ok(Self::edgeless()),
            "clique" => Ok(Self::clique()),
            "all" => Ok(Self::all()),
            _ => {
                if let Some(j) = number("max-deficiency-") {
                    Ok(Self::max_deficiency(j))
                } else if let Some(j) = number("rank-") {
                    Ok(Self::rank(j))
                } else {
                    Err(Error::UnknownClass(name.to_string()))
                }
            }
        }
    }

    /// Class given by an explicit list of members; the empty graph is always included.
    /// Every one-vertex deletion of a member must be listed as well.
    pub fn from_members(name: impl Into<String>, members: &[Graph]) -> Result<Self> {
        let name = name.into();
        let mut set: HashSet<CanonicalGraph> = HashSet::new();
        for g in members {
            if g.n() > ROW_BITS {
                return Err(Error::TooManyVertices {
                    n: g.n(),
                    max: ROW_BITS,
                });
            }
            set.insert(canonical_from_graph(g));
        }
        set.insert(canonical_from_graph(&Graph::new(0)));
        for c in &set {
            let g = c.to_graph();
            for v in 0..g.n() {
                let (h, _) = g.without(&crate::graph::VertexSet::singleton(v));
                if !set.contains(&canonical_from_graph(&h)) {
                    return Err(Error::NotHereditary {
                        class: name.clone(),
                        detail: format!(
                            "member {} loses membership after deleting a vertex",
                            describe(&g)
                        ),
                    });
                }
            }
        }
        let set = Arc::new(set);
        Ok(GraphClass::new(name, move |g| {
            set.contains(&canonical_from_graph(g))
        }))
    }

    /// Parses a member list: one graph per line, `<n> [u-v ...]` with 0-based ids;
    /// `#` starts a comment.
    pub fn parse_members(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut members = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let mut it = line.split_whitespace();
            let n: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("expected vertex count"))?;
            let mut g = Graph::new(n);
            for tok in it {
                let (a, b) = tok.split_once('-').ok_or_else(|| err("expected u-v"))?;
                let a: usize = a.parse().map_err(|_| err("bad vertex"))?;
                let b: usize = b.parse().map_err(|_| err("bad vertex"))?;
                g.add_edge(a, b).map_err(|e| err(&e.to_string()))?;
            }
            members.push(g);
        }
        Self::from_members(name, &members)
    }

    /// Membership of the black-edge graph `g`.
    pub fn contains(&self, g: &Graph) -> Result<bool> {
        if self.trivial {
            return Ok(true);
        }
        if g.n() > ROW_BITS {
            return Err(Error::TooManyVertices {
                n: g.n(),
                max: ROW_BITS,
            });
        }
        self.contains_canonical(&canonical_from_graph(g))
    }

    /// Membership of the graph with neighbor bitmasks `adj` and vertex labels `labels`.
    pub(crate) fn contains_masks(&self, adj: &[u32], labels: &[u32]) -> Result<bool> {
        if self.trivial {
            return Ok(true);
        }
        self.contains_canonical(&canonical_form(adj, labels))
    }

    pub fn contains_canonical(&self, c: &CanonicalGraph) -> Result<bool> {
        if self.trivial {
            return Ok(true);
        }
        if let Some(&known) = self.memo.read().expect("memo lock").get(c) {
            return Ok(known);
        }
        let g = c.to_graph();
        let member = (self.oracle)(&g);
        if member {
            for v in 0..g.n() {
                let (h, _) = g.without(&crate::graph::VertexSet::singleton(v));
                if !self.contains_canonical(&canonical_from_graph(&h))? {
                    return Err(Error::NotHereditary {
                        class: self.name.clone(),
                        detail: format!(
                            "{} is a member but one of its induced subgraphs is not",
                            describe(&g)
                        ),
                    });
                }
            }
        }
        self.memo
            .write()
            .expect("memo lock")
            .insert(c.clone(), member);
        Ok(member)
    }
}

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edge_list()
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect();
    format!("[{} {}]", g.n(), edges.join(" "))
}

pub(crate) fn black_masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= ROW_BITS);
    let mut adj = vec![0u32; g.n()];
    for (u, v, c) in g.edges() {
        if c == EdgeColor::Black {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    adj
}

fn black_rank(g: &Graph) -> usize {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut rank = 0;
    for (u, v, c) in g.edges() {
        if c != EdgeColor::Black {
            continue;
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            rank += 1;
        }
    }
    rank
}

fn matching_on(adj: &[u32], alive: u32, memo: &mut HashMap<u32, usize>) -> usize {
    if alive == 0 {
        return 0;
    }
    if let Some(&r) = memo.get(&alive) {
        return r;
    }
    let v = alive.trailing_zeros() as usize;
    let rest = alive & !(1 << v);
    let mut best = matching_on(adj, rest, memo);
    let mut nb = adj[v] & rest;
    while nb != 0 {
        let u = nb.trailing_zeros() as usize;
        nb &= nb - 1;
        best = best.max(1 + matching_on(adj, rest & !(1 << u), memo));
    }
    memo.insert(alive, best);
    best
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Maximum matching size of a small general graph, by recursion on the lowest vertex.
pub(crate) fn max_matching_size(adj: &[u32]) -> usize {
    matching_on(adj, full_mask(adj.len()), &mut HashMap::new())
}

/// One maximum matching as index pairs.
pub(crate) fn max_matching(adj: &[u32]) -> Vec<(usize, usize)> {
    let mut memo = HashMap::new();
    let mut alive = full_mask(adj.len());
    let mut need = matching_on(adj, alive, &mut memo);
    let mut out = Vec::new();
    while need > 0 {
        let v = alive.trailing_zeros() as usize;
        let rest = alive & !(1 << v);
        alive = rest;
        let mut nb = adj[v] & rest;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            let r = rest & !(1 << u);
            if 1 + matching_on(adj, r, &mut memo) == need {
                out.push((v, u));
                alive = r;
                need -= 1;
                break;
            }
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

    #[test]
    fn builtins() {
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        assert!(GraphClass::clique().contains(&tri).unwrap());
        assert!(!GraphClass::clique().contains(&p3).unwrap());
        assert!(!GraphClass::edgeless().contains(&p3).unwrap());
        assert!(GraphClass::edgeless().contains(&Graph::new(4)).unwrap());
        assert!(GraphClass::max_deficiency(2).contains(&p3).unwrap());
        assert!(!GraphClass::max_deficiency(1).contains(&p3).unwrap());
        assert!(GraphClass::rank(2).contains(&p3).unwrap());
        assert!(!GraphClass::rank(1).contains(&p3).unwrap());
        assert!(GraphClass::builtin("rank-3").is_ok());
        assert!(GraphClass::builtin("max-deficiency-2").is_ok());
        assert!(GraphClass::builtin("bogus").is_err());
    }

    #[test]
    fn non_hereditary_is_detected() {
        // "exactly one edge or no vertices" is not closed under deleting a vertex
        let c = GraphClass::new("odd", |g| g.n() == 0 || g.m() == 1 && g.n() == 2);
        assert!(matches!(
            c.contains(&graph(2, &[(0, 1)])),
            Err(Error::NotHereditary { .. })
        ));
    }

    #[test]
    fn member_file() {
        let c = GraphClass::parse_members("short", "1\n2\n2 0-1 # an edge\n").unwrap();
        assert!(c.contains(&graph(2, &[(0, 1)])).unwrap());
        assert!(!c.contains(&graph(3, &[])).unwrap());
        assert!(GraphClass::parse_members("bad", "2 0-1\n").is_err());
    }

    #[test]
    fn matching() {
        let p4 = black_masks(&graph(4, &[(0, 1), (1, 2), (2, 3)]));
        assert_eq!(max_matching_size(&p4), 2);
        let m = max_matching(&p4);
        assert_eq!(m, vec![(0, 1), (2, 3)]);
        let star = black_masks(&graph(4, &[(0, 1), (0, 2), (0, 3)]));
        assert_eq!(max_matching(&star).len(), 1);
    }
}

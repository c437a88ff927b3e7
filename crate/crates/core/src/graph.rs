//! Simple undirected graphs with vertex labels and black/red edge colors.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeColor {
    Black,
    Red,
}

/// Sorted, duplicate-free list of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Caller guarantees the input is sorted and duplicate free.
    pub fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { v, n }),
            _ => Ok(()),
        }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            m[v] = true;
        }
        m
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    // color of each adjacency entry, parallel to `adj`
    colors: Vec<Vec<EdgeColor>>,
    labels: Vec<u8>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            colors: vec![Vec::new(); n],
            labels: vec![0; n],
            m: 0,
        }
    }

    /// Black edges; duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn add_vertex(&mut self, label: u8) -> usize {
        self.adj.push(Vec::new());
        self.colors.push(Vec::new());
        self.labels.push(label);
        self.adj.len() - 1
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { v, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_colored_edge(u, v, EdgeColor::Black)
    }

    /// Adding an edge that already exists keeps the old color unless the new one is black.
    pub fn add_colored_edge(&mut self, u: usize, v: usize, color: EdgeColor) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(i) => {
                if color == EdgeColor::Black {
                    self.colors[u][i] = EdgeColor::Black;
                    let j = self.adj[v].binary_search(&u).expect("symmetric adjacency");
                    self.colors[v][j] = EdgeColor::Black;
                }
            }
            Err(i) => {
                self.adj[u].insert(i, v);
                self.colors[u].insert(i, color);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                self.colors[v].insert(j, color);
                self.m += 1;
            }
        }
        Ok(())
    }

    pub fn set_label(&mut self, v: usize, label: u8) -> Result<()> {
        self.check_vertex(v)?;
        self.labels[v] = label;
        Ok(())
    }

    pub fn label(&self, v: usize) -> u8 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn black_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .zip(&self.colors[v])
            .filter(|(_, &c)| c == EdgeColor::Black)
            .map(|(&u, _)| u)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn color(&self, u: usize, v: usize) -> Option<EdgeColor> {
        if u >= self.n() {
            return None;
        }
        self.adj[u]
            .binary_search(&v)
            .ok()
            .map(|i| self.colors[u][i])
    }

    pub fn has_black_edge(&self, u: usize, v: usize) -> bool {
        self.color(u, v) == Some(EdgeColor::Black)
    }

    /// All edges as (u, v, color) with u < v, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeColor)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(u, list)| {
            list.iter()
                .zip(&self.colors[u])
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &c)| (u, v, c))
        })
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().map(|(u, v, _)| (u, v)).collect()
    }

    pub fn red_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .filter(|e| e.2 == EdgeColor::Red)
            .map(|(u, v, _)| (u, v))
            .collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet((0..self.n()).collect())
    }

    /// Induced subgraph on `keep`; vertex `keep[i]` becomes `i`.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(keep.len());
        for (i, v) in keep.iter().enumerate() {
            g.labels[i] = self.labels[v];
            for (&u, &c) in self.adj[v].iter().zip(&self.colors[v]) {
                let j = index[u];
                if j != usize::MAX {
                    g.adj[i].push(j);
                    g.colors[i].push(c);
                }
            }
        }
        g.m = g.adj.iter().map(Vec::len).sum::<usize>() / 2;
        g
    }

    /// Graph minus `remove`, with the map from new ids to old ids.
    pub fn without(&self, remove: &VertexSet) -> (Graph, Vec<usize>) {
        let keep: VertexSet = (0..self.n()).filter(|&v| !remove.contains(v)).collect();
        let g = self.induced(&keep);
        (g, keep.into_vec())
    }

    /// Connected components of the graph restricted to vertices with `alive[v]`,
    /// each sorted, ordered by smallest vertex.
    pub fn components_where(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for r in 0..self.n() {
            if !alive[r] || seen[r] {
                continue;
            }
            seen[r] = true;
            let mut comp = vec![r];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &u in &self.adj[v] {
                    if alive[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_where(&vec![true; self.n()])
    }

    /// Vertices reachable from `sources` avoiding `blocked` (sources themselves must be unblocked).
    pub fn reach(&self, sources: impl IntoIterator<Item = usize>, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            if !blocked[s] && !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !blocked[u] && !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Open neighborhood of a vertex set.
    pub fn neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mask = x.mask(self.n());
        x.iter()
            .flat_map(|v| self.adj[v].iter().copied())
            .filter(|&u| !mask[u])
            .collect()
    }
}

/// True iff no component of `g - s` meets both `a - s` and `b - s`.
pub fn is_separator(g: &Graph, s: &VertexSet, a: &VertexSet, b: &VertexSet) -> Result<bool> {
    s.check(g.n())?;
    a.check(g.n())?;
    b.check(g.n())?;
    let blocked = s.mask(g.n());
    let seen = g.reach(a.iter(), &blocked);
    Ok(!b.iter().any(|v| !blocked[v] && seen[v]))
}

/// Side (0 or 1) of every alive vertex, using black edges among alive vertices only.
/// BFS from the lowest unvisited vertex, root on side 0.
pub(crate) fn two_coloring_where(g: &Graph, alive: &[bool]) -> Option<Vec<u8>> {
    const NONE: u8 = u8::MAX;
    let mut side = vec![NONE; g.n()];
    let mut queue = VecDeque::new();
    for r in 0..g.n() {
        if !alive[r] || side[r] != NONE {
            continue;
        }
        side[r] = 0;
        queue.push_back(r);
        while let Some(v) = queue.pop_front() {
            for u in g.black_neighbors(v) {
                if !alive[u] {
                    continue;
                }
                if side[u] == NONE {
                    side[u] = 1 - side[v];
                    queue.push_back(u);
                } else if side[u] == side[v] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

pub(crate) fn two_coloring(g: &Graph) -> Option<Vec<u8>> {
    two_coloring_where(g, &vec![true; g.n()])
}

pub fn is_bipartite(g: &Graph) -> bool {
    two_coloring(g).is_some()
}

/// Proper 2-coloring (B', W') of the black edges, or `None` if there is an odd cycle.
pub fn bipartite_2coloring(g: &Graph) -> Option<(VertexSet, VertexSet)> {
    let side = two_coloring(g)?;
    let b = (0..g.n()).filter(|&v| side[v] == 0).collect();
    let w = (0..g.n()).filter(|&v| side[v] == 1).collect();
    Some((b, w))
}

/// G/F together with the class index of every original vertex.
pub fn contract_edges_with_map(g: &Graph, f: &[(usize, usize)]) -> Result<(Graph, Vec<usize>)> {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in f {
        if !g.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            // keep the smaller id as representative
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut class = vec![usize::MAX; g.n()];
    let mut next = 0;
    for v in 0..g.n() {
        let r = find(&mut parent, v);
        if r == v {
            class[v] = next;
            next += 1;
        }
    }
    for v in 0..g.n() {
        let r = find(&mut parent, v);
        class[v] = class[r];
    }
    let mut h = Graph::new(next);
    for v in 0..g.n() {
        if find(&mut parent, v) == v {
            h.labels[class[v]] = g.labels[v];
        }
    }
    for (u, v, c) in g.edges() {
        if class[u] != class[v] {
            h.add_colored_edge(class[u], class[v], c)?;
        }
    }
    Ok((h, class))
}

/// G/F: endpoints of each edge identified, loops and parallel edges dropped.
/// Merged classes are numbered by their smallest original id.
pub fn contract_edges(g: &Graph, f: &[(usize, usize)]) -> Result<Graph> {
    contract_edges_with_map(g, f).map(|r| r.0)
}

/// Parses the `p n m` / `e u v` / `l v label` text format (1-based ids).
/// Lines starting with `c` and blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    let mut expected_m = 0;
    let mut edges = 0;
    let err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut it = raw.split_whitespace();
        let Some(tag) = it.next() else { continue };
        let nums: Vec<&str> = it.collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(line, &format!("bad number {s:?}")))
        };
        match tag {
            "c" => {}
            "p" => {
                if g.is_some() {
                    return Err(err(line, "duplicate header"));
                }
                // accept both `p n m` and `p <word> n m`
                let fields: Vec<&str> = nums
                    .iter()
                    .copied()
                    .filter(|s| s.parse::<usize>().is_ok())
                    .collect();
                if fields.len() != 2 {
                    return Err(err(line, "header must be `p <n> <m>`"));
                }
                g = Some(Graph::new(num(fields[0])?));
                expected_m = num(fields[1])?;
            }
            "e" | "l" => {
                let graph = g.as_mut().ok_or_else(|| err(line, "missing header"))?;
                if nums.len() != 2 {
                    return Err(err(line, "expected two numbers"));
                }
                let (a, b) = (num(nums[0])?, num(nums[1])?);
                if a == 0 || a > graph.n() {
                    return Err(err(line, &format!("vertex {a} out of range")));
                }
                if tag == "e" {
                    if b == 0 || b > graph.n() {
                        return Err(err(line, &format!("vertex {b} out of range")));
                    }
                    graph
                        .add_edge(a - 1, b - 1)
                        .map_err(|e| err(line, &e.to_string()))?;
                    edges += 1;
                } else {
                    let label = u8::try_from(b).map_err(|_| err(line, "label too large"))?;
                    graph.set_label(a - 1, label)?;
                }
            }
            other => return Err(err(line, &format!("unknown line type {other:?}"))),
        }
    }
    let g = g.ok_or_else(|| err(0, "missing header"))?;
    if edges != expected_m {
        return Err(err(
            0,
            &format!("header announces {expected_m} edges, found {edges}"),
        ));
    }
    Ok(g)
}

/// Writes the text format with sorted edges; nonzero labels get `l` lines.
/// Edge colors are not part of the format.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p {} {}", g.n(), g.m());
    for (u, v, _) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    for v in 0..g.n() {
        if g.label(v) != 0 {
            let _ = writeln!(out, "l {} {}", v + 1, g.label(v));
        }
    }
    out
}

/// Degree histogram, handy for quick sanity output.
pub fn degree_histogram(g: &Graph) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in 0..g.n() {
        *h.entry(g.degree(v)).or_insert(0) += 1;
    }
    h
}

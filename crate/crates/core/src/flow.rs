//! Minimum vertex separators via unit-capacity flow on the split network.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Capacity {
    Unit,
    Unbounded,
}

#[derive(Clone, Debug)]
struct Arc {
    from: u32,
    to: u32,
    flow: u32,
    cap: Capacity,
}

/// A move is (neighbor node, arc id << 1 | forward); 32-bit ids keep the network small.
type Move = (u32, u32);

fn decode(&(to, code): &Move) -> (usize, usize, bool) {
    (to as usize, (code >> 1) as usize, code & 1 == 1)
}

/// Directed network with nodes `2v` (entry) and `2v + 1` (exit) for every vertex `v`.
/// Entry to exit is a unit arc (unbounded for undeletable vertices), exit to entry and
/// all edge arcs are unbounded.
pub struct SplitNetwork {
    arcs: Vec<Arc>,
    // moves per node sorted by neighbor node; node x owns moves[start[x]..start[x + 1]]
    moves: Vec<Move>,
    start: Vec<usize>,
}

pub(crate) fn node_in(v: usize) -> usize {
    2 * v
}

pub(crate) fn node_out(v: usize) -> usize {
    2 * v + 1
}

impl SplitNetwork {
    pub fn new(g: &Graph) -> Self {
        Self::with_undeletable(g, &[])
    }

    /// `undeletable[v]` (when present) gives vertex `v` unbounded capacity.
    pub fn with_undeletable(g: &Graph, undeletable: &[bool]) -> Self {
        let n = g.n();
        assert!(
            4 * (n + g.m()) < u32::MAX as usize,
            "graph too large for 32-bit arc ids"
        );
        let arc = |from: usize, to: usize, cap| Arc {
            from: from as u32,
            to: to as u32,
            flow: 0,
            cap,
        };
        let mut arcs = Vec::with_capacity(2 * n + 2 * g.m());
        for v in 0..n {
            let cap = if undeletable.get(v).copied().unwrap_or(false) {
                Capacity::Unbounded
            } else {
                Capacity::Unit
            };
            arcs.push(arc(node_in(v), node_out(v), cap));
            arcs.push(arc(node_out(v), node_in(v), Capacity::Unbounded));
        }
        for (x, y, _) in g.edges() {
            arcs.push(arc(node_out(x), node_in(y), Capacity::Unbounded));
            arcs.push(arc(node_out(y), node_in(x), Capacity::Unbounded));
        }
        let mut start = vec![0; 2 * n + 1];
        for a in &arcs {
            start[a.from as usize + 1] += 1;
            start[a.to as usize + 1] += 1;
        }
        for x in 0..2 * n {
            start[x + 1] += start[x];
        }
        let mut fill = start.clone();
        let mut moves: Vec<Move> = vec![(0, 0); start[2 * n]];
        for (id, a) in arcs.iter().enumerate() {
            let (from, to, id) = (a.from as usize, a.to as usize, id as u32);
            moves[fill[from]] = (a.to, id << 1 | 1);
            fill[from] += 1;
            moves[fill[to]] = (a.from, id << 1);
            fill[to] += 1;
        }
        for x in 0..2 * n {
            moves[start[x]..start[x + 1]].sort_unstable();
        }
        SplitNetwork { arcs, moves, start }
    }

    fn nodes(&self) -> usize {
        self.start.len() - 1
    }

    fn moves_of(&self, node: usize) -> &[Move] {
        &self.moves[self.start[node]..self.start[node + 1]]
    }

    fn residual(&self, arc: usize, forward: bool) -> bool {
        let a = &self.arcs[arc];
        if forward {
            a.cap == Capacity::Unbounded || a.flow == 0
        } else {
            a.flow > 0
        }
    }

    /// Residual successors of `node`, in increasing node id.
    fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.moves_of(node)
            .iter()
            .map(decode)
            .filter(|&(_, arc, fwd)| self.residual(arc, fwd))
            .map(|(to, _, _)| to)
    }

    /// One BFS augmentation; false if the sink is unreachable.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; self.nodes()];
        let mut seen = vec![false; self.nodes()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        'bfs: while let Some(x) = queue.pop_front() {
            for (y, arc, fwd) in self.moves_of(x).iter().map(decode) {
                if seen[y] || !self.residual(arc, fwd) {
                    continue;
                }
                seen[y] = true;
                pred[y] = Some((arc, fwd));
                if y == sink {
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
        if !seen[sink] {
            return false;
        }
        let mut y = sink;
        while y != source {
            let (arc, fwd) = pred[y].expect("path");
            let a = &mut self.arcs[arc];
            if fwd {
                a.flow += 1;
                y = a.from as usize;
            } else {
                a.flow -= 1;
                y = a.to as usize;
            }
        }
        true
    }

    /// Augments until no path remains or `limit` paths were found; returns the count.
    pub fn max_flow(&mut self, source: usize, sink: usize, limit: usize) -> usize {
        let mut f = 0;
        while f < limit && self.augment(source, sink) {
            f += 1;
        }
        f
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for y in self.successors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Strongly connected components of the residual graph; component ids are a
    /// topological order (every residual arc goes from a smaller or equal id to a larger
    /// or equal one).
    fn residual_scc(&self) -> (Vec<usize>, usize) {
        let n = self.nodes();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![UNSEEN; n];
        let mut emitted = 0;
        let mut counter = 0;
        // explicit call stack of (node, next move position)
        let mut calls: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            calls.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (x, ref mut pos)) = calls.last_mut() {
                if *pos < self.start[x + 1] - self.start[x] {
                    let (y, arc, fwd) = decode(&self.moves[self.start[x] + *pos]);
                    *pos += 1;
                    if !self.residual(arc, fwd) {
                        continue;
                    }
                    if index[y] == UNSEEN {
                        index[y] = counter;
                        low[y] = counter;
                        counter += 1;
                        stack.push(y);
                        on_stack[y] = true;
                        calls.push((y, 0));
                    } else if on_stack[y] {
                        low[x] = low[x].min(index[y]);
                    }
                } else {
                    calls.pop();
                    if let Some(&(parent, _)) = calls.last() {
                        low[parent] = low[parent].min(low[x]);
                    }
                    if low[x] == index[x] {
                        loop {
                            let y = stack.pop().expect("tarjan stack");
                            on_stack[y] = false;
                            comp[y] = emitted;
                            if y == x {
                                break;
                            }
                        }
                        emitted += 1;
                    }
                }
            }
        }
        // Tarjan emits sinks first; reverse for a topological order
        for c in &mut comp {
            *c = emitted - 1 - *c;
        }
        (comp, emitted)
    }
}

fn check_terminals(g: &Graph, s: usize, t: usize) -> Result<()> {
    for v in [s, t] {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { v, n: g.n() });
        }
    }
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    Ok(())
}

/// Minimum s-t vertex separator if it has size at most `k`.
/// `None` when s and t are adjacent or every separator is larger than `k`.
pub fn min_vertex_cut(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
) -> Result<Option<(usize, VertexSet)>> {
    min_vertex_cut_avoiding(g, s, t, k, &[])
}

/// As [`min_vertex_cut`], but the separator may not use vertices marked in `undeletable`.
pub fn min_vertex_cut_avoiding(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    undeletable: &[bool],
) -> Result<Option<(usize, VertexSet)>> {
    check_terminals(g, s, t)?;
    if g.has_edge(s, t) {
        return Ok(None);
    }
    let mut net = SplitNetwork::with_undeletable(g, undeletable);
    let flow = net.max_flow(node_out(s), node_in(t), k + 1);
    if flow > k {
        return Ok(None);
    }
    let reach = net.reachable(node_out(s));
    let sep: VertexSet = (0..g.n())
        .filter(|&v| reach[node_in(v)] && !reach[node_out(v)])
        .collect();
    debug_assert_eq!(sep.len(), flow);
    Ok(Some((flow, sep)))
}

/// Nested sets X_1 ⊂ ... ⊂ X_q of all minimum separators, stored as successive
/// differences, and S_i = N(X_i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatorChain {
    pub size: usize,
    pub diffs: Vec<VertexSet>,
    pub separators: Vec<VertexSet>,
}

impl SeparatorChain {
    pub fn q(&self) -> usize {
        self.diffs.len()
    }

    /// X_1..X_q materialized.
    pub fn sets(&self) -> Vec<VertexSet> {
        let mut acc = VertexSet::new();
        self.diffs
            .iter()
            .map(|d| {
                acc = acc.union(d);
                acc.clone()
            })
            .collect()
    }

    /// Union of all S_i: every vertex lying on some minimum separator.
    pub fn union(&self) -> VertexSet {
        self.separators.iter().flat_map(|s| s.iter()).collect()
    }
}

/// The chain of minimum s-t separators read off the residual graph of a maximum flow.
pub fn separator_chain(g: &Graph, s: usize, t: usize) -> Result<SeparatorChain> {
    check_terminals(g, s, t)?;
    if g.has_edge(s, t) {
        return Err(Error::AdjacentTerminals(s, t));
    }
    let mut net = SplitNetwork::new(g);
    let size = net.max_flow(node_out(s), node_in(t), usize::MAX);
    if size == 0 {
        return Err(Error::Precondition(format!(
            "vertices {s} and {t} are not connected"
        )));
    }
    let (comp, count) = net.residual_scc();
    let x = comp[node_in(t)];
    let y = comp[node_out(s)];
    assert!(x < y, "sink component must precede source component");
    // members of each component, then sweep i = y down to x+1 adding component i to Y_i
    let mut members = vec![Vec::new(); count];
    for (node, &c) in comp.iter().enumerate() {
        members[c].push(node);
    }
    let mut halves = vec![0u8; g.n()];
    let mut in_y = vec![false; 2 * g.n()];
    // vertices whose entry node is in Y but exit node is not: the arcs leaving Y
    let mut crossing = BTreeSet::new();
    fn add(
        node: usize,
        in_y: &mut [bool],
        halves: &mut [u8],
        crossing: &mut BTreeSet<usize>,
    ) -> bool {
        in_y[node] = true;
        let v = node / 2;
        halves[v] += 1;
        if node == node_in(v) {
            if !in_y[node_out(v)] {
                crossing.insert(v);
            }
        } else {
            crossing.remove(&v);
        }
        halves[v] == 2
    }
    for c in y + 1..count {
        for &node in &members[c] {
            add(node, &mut in_y, &mut halves, &mut crossing);
        }
    }
    let mut diffs = Vec::new();
    let mut separators = Vec::new();
    let mut current = VertexSet::new();
    for i in (x + 1..=y).rev() {
        let mut diff = Vec::new();
        for &node in &members[i] {
            if add(node, &mut in_y, &mut halves, &mut crossing) {
                diff.push(node / 2);
            }
        }
        if diff.is_empty() {
            continue;
        }
        let diff = VertexSet::from(diff);
        let sep = VertexSet::from_sorted(crossing.iter().copied().collect());
        assert_eq!(sep.len(), size, "every chain separator must be minimum");
        if cfg!(debug_assertions) {
            current = current.union(&diff);
            debug_assert_eq!(g.neighborhood(&current), sep);
        }
        diffs.push(diff);
        separators.push(sep);
    }
    assert!(
        !diffs.is_empty(),
        "chain cannot be empty for a positive flow"
    );
    Ok(SeparatorChain {
        size,
        diffs,
        separators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_separator;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    // s=0, a1..a3 = 1..3, b1..b3 = 4..6, t=7
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

    fn hypercube(d: usize) -> Graph {
        let n = 1 << d;
        let mut e = Vec::new();
        for v in 0..n {
            for b in 0..d {
                let u = v ^ (1 << b);
                if v < u {
                    e.push((v, u));
                }
            }
        }
        graph(n, &e)
    }

    #[test]
    fn path_cut() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(min_vertex_cut(&g, 0, 2, 1).unwrap(), Some((1, vs(&[1]))));
        assert_eq!(min_vertex_cut(&g, 0, 2, 0).unwrap(), None);
        assert_eq!(min_vertex_cut(&g, 0, 1, 5).unwrap(), None);
        assert!(min_vertex_cut(&g, 1, 1, 1).is_err());
    }

    #[test]
    fn disconnected_is_zero() {
        let g = graph(3, &[(0, 1)]);
        assert_eq!(min_vertex_cut(&g, 0, 2, 0).unwrap(), Some((0, vs(&[]))));
    }

    #[test]
    fn hypercube_corner_cut() {
        let g = hypercube(3);
        let (l, sep) = min_vertex_cut(&g, 0, 7, 3).unwrap().unwrap();
        assert_eq!(l, 3);
        assert!(is_separator(&g, &sep, &vs(&[0]), &vs(&[7])).unwrap());
    }

    #[test]
    fn double_path_cut() {
        let (l, sep) = min_vertex_cut(&double_path(), 0, 7, 2).unwrap().unwrap();
        assert_eq!(l, 2);
        // the separator closest to s
        assert_eq!(sep, vs(&[1, 4]));
    }

    #[test]
    fn chain_of_path() {
        let c = separator_chain(&graph(3, &[(0, 1), (1, 2)]), 0, 2).unwrap();
        assert_eq!(c.size, 1);
        assert_eq!(c.diffs, vec![vs(&[0])]);
        assert_eq!(c.separators, vec![vs(&[1])]);
    }

    #[test]
    fn chain_of_double_path() {
        let g = double_path();
        let c = separator_chain(&g, 0, 7).unwrap();
        assert_eq!(c.size, 2);
        assert_eq!(c.union(), vs(&[1, 2, 3, 4, 5, 6]));
        let sets = c.sets();
        assert!(sets
            .windows(2)
            .all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]));
        assert!(sets[0].contains(0));
        for (x, s) in sets.iter().zip(&c.separators) {
            assert_eq!(&g.neighborhood(x), s);
            assert!(is_separator(&g, s, &vs(&[0]), &vs(&[7])).unwrap());
        }
    }

    #[test]
    fn unique_separator_gives_single_link() {
        // s - {a, b} - t with both middle vertices forced
        let g = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let c = separator_chain(&g, 0, 3).unwrap();
        assert_eq!(c.q(), 1);
        assert_eq!(c.separators[0], vs(&[1, 2]));
    }

    #[test]
    fn chain_errors() {
        assert!(separator_chain(&graph(2, &[(0, 1)]), 0, 1).is_err());
        assert!(separator_chain(&graph(2, &[]), 0, 1).is_err());
        assert!(separator_chain(&graph(2, &[]), 0, 0).is_err());
    }
}

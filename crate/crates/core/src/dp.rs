//! Dynamic programming over a nice tree decomposition for constrained separators:
//! find a smallest S (ties: lexicographically smallest) of at most k allowed vertices that
//! separates every cut pair, leaves every uncut pair connected, and whose black-edge
//! induced subgraph satisfies a constraint.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::canon::{canonical_form, CanonicalGraph, ROW_BITS};
use crate::class::GraphClass;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::stats::Stats;
use crate::tdecomp::{NiceDecomposition, NiceKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalPair {
    pub x: VertexSet,
    pub y: VertexSet,
}

impl TerminalPair {
    pub fn new(x: VertexSet, y: VertexSet) -> Self {
        TerminalPair { x, y }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeparationDemand {
    pub cut_pairs: Vec<TerminalPair>,
    pub uncut_pairs: Vec<TerminalPair>,
}

impl SeparationDemand {
    pub fn cut(x: VertexSet, y: VertexSet) -> Self {
        SeparationDemand {
            cut_pairs: vec![TerminalPair::new(x, y)],
            uncut_pairs: Vec::new(),
        }
    }

    /// True iff `s` meets the demand in `g` (ignoring any constraint on S itself).
    pub fn is_met_by(&self, g: &Graph, s: &VertexSet) -> Result<bool> {
        for p in &self.cut_pairs {
            if !crate::graph::is_separator(g, s, &p.x, &p.y)? {
                return Ok(false);
            }
        }
        for p in &self.uncut_pairs {
            if crate::graph::is_separator(g, s, &p.x, &p.y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub enum ConstraintSpec {
    Any,
    /// Black edges on S connect S (the empty set counts as connected).
    ConnectedBlack,
    Hereditary(GraphClass),
}

impl ConstraintSpec {
    /// `Any` for the trivial class, otherwise `Hereditary`.
    pub fn from_class(class: &GraphClass) -> Self {
        if class.is_trivial() {
            ConstraintSpec::Any
        } else {
            ConstraintSpec::Hereditary(class.clone())
        }
    }

    /// True iff the black graph induced by `s` satisfies the constraint.
    pub fn accepts(&self, g: &Graph, s: &VertexSet) -> Result<bool> {
        match self {
            ConstraintSpec::Any => Ok(true),
            ConstraintSpec::ConnectedBlack => Ok(black_connected(g, s)),
            ConstraintSpec::Hereditary(c) => c.contains(&g.induced(s)),
        }
    }
}

pub(crate) fn black_connected(g: &Graph, s: &VertexSet) -> bool {
    let Some(first) = s.iter().next() else {
        return true;
    };
    let mut seen = vec![first];
    let mut i = 0;
    while i < seen.len() {
        let v = seen[i];
        i += 1;
        for u in g.black_neighbors(v) {
            if s.contains(u) && !seen.contains(&u) {
                seen.push(u);
            }
        }
    }
    seen.len() == s.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Slot {
    Free(u32),
    Chosen(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    slots: Vec<Slot>,
    masks: Vec<u64>,
    satisfied: u64,
    closed: bool,
    shape: Option<CanonicalGraph>,
}

type Table = HashMap<Key, Vec<usize>>;

fn better(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

fn offer(table: &mut Table, key: Key, partial: Vec<usize>) {
    match table.get_mut(&key) {
        Some(cur) => {
            if better(&partial, cur) {
                *cur = partial;
            }
        }
        None => {
            table.insert(key, partial);
        }
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn union(p: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra != rb {
        p[ra.max(rb)] = ra.min(rb);
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Adjacency masks and labels of a partial solution.
type MaskKey = (Vec<u32>, Vec<u32>);

struct Ctx<'a> {
    g: &'a Graph,
    k: usize,
    constraint: &'a ConstraintSpec,
    forbidden: Vec<bool>,
    term: Vec<u64>,
    // bit 2i set for every cut pair i, and for every uncut pair
    cut_bits: u64,
    uncut_bits: u64,
    // the same partial solutions and shapes recur across many states
    admitted: RefCell<HashMap<MaskKey, bool>>,
    shapes: RefCell<HashMap<MaskKey, CanonicalGraph>>,
}

/// Raw transition output before block and component renumbering.
struct Raw {
    slots: Vec<Slot>,
    block_parent: Vec<usize>,
    masks: Vec<u64>,
    comp_parent: Vec<usize>,
    satisfied: u64,
    closed: bool,
}

impl Ctx<'_> {
    /// Merges blocks and components, drops dead states, renumbers by first occurrence.
    fn finish(&self, mut raw: Raw, partial: &[usize], bag: &[usize]) -> Result<Option<Key>> {
        let mut merged = vec![0u64; raw.masks.len()];
        for id in 0..raw.masks.len() {
            let r = find(&mut raw.block_parent, id);
            merged[r] |= raw.masks[id];
        }
        let mut satisfied = raw.satisfied;
        for (id, &m) in merged.iter().enumerate() {
            if raw.block_parent[id] != id {
                continue;
            }
            let both = m & (m >> 1);
            if both & self.cut_bits != 0 {
                return Ok(None);
            }
            satisfied |= both & self.uncut_bits;
        }
        let mut block_new = vec![u32::MAX; raw.masks.len()];
        let mut comp_new = vec![u32::MAX; raw.comp_parent.len()];
        let mut masks = Vec::new();
        let mut comps = 0;
        let mut slots = Vec::with_capacity(raw.slots.len());
        for s in &raw.slots {
            slots.push(match *s {
                Slot::Free(b) => {
                    let r = find(&mut raw.block_parent, b as usize);
                    if block_new[r] == u32::MAX {
                        block_new[r] = masks.len() as u32;
                        masks.push(merged[r]);
                    }
                    Slot::Free(block_new[r])
                }
                Slot::Chosen(c) => {
                    let r = find(&mut raw.comp_parent, c as usize);
                    if comp_new[r] == u32::MAX {
                        comp_new[r] = comps;
                        comps += 1;
                    }
                    Slot::Chosen(comp_new[r])
                }
            });
        }
        let shape = match self.constraint {
            ConstraintSpec::Hereditary(_) => Some(self.shape(partial, bag)),
            _ => None,
        };
        Ok(Some(Key {
            slots,
            masks,
            satisfied,
            closed: raw.closed,
            shape,
        }))
    }

    /// Black adjacency masks and class labels of S.
    fn masks(&self, partial: &[usize]) -> (Vec<u32>, Vec<u32>) {
        let mut adj = vec![0u32; partial.len()];
        for i in 0..partial.len() {
            for j in 0..i {
                if self.g.has_black_edge(partial[i], partial[j]) {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        let labels: Vec<u32> = partial.iter().map(|&v| self.g.label(v) as u32).collect();
        (adj, labels)
    }

    /// Canonical form of S with bag positions added to the labels.
    fn shape(&self, partial: &[usize], bag: &[usize]) -> CanonicalGraph {
        let (adj, labels) = self.masks(partial);
        let boundary: Vec<u32> = partial
            .iter()
            .zip(&labels)
            .map(|(&v, &l)| match bag.binary_search(&v) {
                Ok(p) => ((p as u32 + 1) << 8) | l,
                Err(_) => l,
            })
            .collect();
        let key = (adj, boundary);
        if let Some(c) = self.shapes.borrow().get(&key) {
            return c.clone();
        }
        let c = canonical_form(&key.0, &key.1);
        self.shapes.borrow_mut().insert(key, c.clone());
        c
    }

    fn admits(&self, partial: &[usize]) -> Result<bool> {
        match self.constraint {
            ConstraintSpec::Hereditary(class) => {
                let key = self.masks(partial);
                if let Some(&known) = self.admitted.borrow().get(&key) {
                    return Ok(known);
                }
                let ok = class.contains_masks(&key.0, &key.1)?;
                self.admitted.borrow_mut().insert(key, ok);
                Ok(ok)
            }
            _ => Ok(true),
        }
    }

    fn leaf(&self) -> Result<Table> {
        let raw = Raw {
            slots: Vec::new(),
            block_parent: Vec::new(),
            masks: Vec::new(),
            comp_parent: Vec::new(),
            satisfied: 0,
            closed: false,
        };
        let mut t = Table::new();
        if let Some(key) = self.finish(raw, &[], &[])? {
            t.insert(key, Vec::new());
        }
        Ok(t)
    }

    fn raw_from(key: &Key) -> Raw {
        let comps = key
            .slots
            .iter()
            .filter_map(|s| {
                if let Slot::Chosen(c) = s {
                    Some(*c as usize + 1)
                } else {
                    None
                }
            })
            .max()
            .unwrap_or(0);
        Raw {
            slots: key.slots.clone(),
            block_parent: (0..key.masks.len()).collect(),
            masks: key.masks.clone(),
            comp_parent: (0..comps).collect(),
            satisfied: key.satisfied,
            closed: key.closed,
        }
    }

    fn introduce(&self, child: &Table, v: usize, bag: &[usize]) -> Result<Table> {
        let pos = bag.binary_search(&v).expect("introduced vertex in bag");
        let mut out = Table::new();
        let connected = matches!(self.constraint, ConstraintSpec::ConnectedBlack);
        for (key, partial) in child {
            // v stays in the graph
            let mut raw = Self::raw_from(key);
            let nb = raw.masks.len();
            raw.masks.push(self.term[v]);
            raw.block_parent.push(nb);
            raw.slots.insert(pos, Slot::Free(nb as u32));
            for (p, &u) in bag.iter().enumerate() {
                if p != pos && self.g.has_edge(u, v) {
                    if let Slot::Free(b) = raw.slots[p] {
                        union(&mut raw.block_parent, nb, b as usize);
                    }
                }
            }
            if let Some(k2) = self.finish(raw, partial, bag)? {
                offer(&mut out, k2, partial.clone());
            }
            // v joins S
            if self.forbidden[v] || partial.len() >= self.k || (connected && key.closed) {
                continue;
            }
            let next = merge_sorted(partial, &[v]);
            if !self.admits(&next)? {
                continue;
            }
            let mut raw = Self::raw_from(key);
            let nc = raw.comp_parent.len();
            raw.comp_parent.push(nc);
            raw.slots.insert(pos, Slot::Chosen(nc as u32));
            if connected {
                for (p, &u) in bag.iter().enumerate() {
                    if p != pos && self.g.has_black_edge(u, v) {
                        if let Slot::Chosen(c) = raw.slots[p] {
                            union(&mut raw.comp_parent, nc, c as usize);
                        }
                    }
                }
            }
            if let Some(k2) = self.finish(raw, &next, bag)? {
                offer(&mut out, k2, next);
            }
        }
        Ok(out)
    }

    fn forget(&self, child: &Table, v: usize, child_bag: &[usize], bag: &[usize]) -> Result<Table> {
        let pos = child_bag
            .binary_search(&v)
            .expect("forgotten vertex in child bag");
        let mut out = Table::new();
        let connected = matches!(self.constraint, ConstraintSpec::ConnectedBlack);
        for (key, partial) in child {
            let mut raw = Self::raw_from(key);
            let slot = raw.slots.remove(pos);
            if let (true, Slot::Chosen(c)) = (connected, slot) {
                let last_of_comp = !raw.slots.contains(&Slot::Chosen(c));
                if last_of_comp {
                    let others = raw.slots.iter().any(|s| matches!(s, Slot::Chosen(_)));
                    if others || raw.closed {
                        continue;
                    }
                    raw.closed = true;
                }
            }
            if let Some(k2) = self.finish(raw, partial, bag)? {
                offer(&mut out, k2, partial.clone());
            }
        }
        Ok(out)
    }

    fn join(&self, left: &Table, right: &Table, bag: &[usize]) -> Result<Table> {
        let chosen_of = |k: &Key| -> Vec<bool> {
            k.slots
                .iter()
                .map(|s| matches!(s, Slot::Chosen(_)))
                .collect()
        };
        let mut groups: HashMap<Vec<bool>, Vec<(&Key, &Vec<usize>)>> = HashMap::new();
        for (k, p) in right {
            groups.entry(chosen_of(k)).or_default().push((k, p));
        }
        let mut out = Table::new();
        for (lk, lp) in left {
            let Some(partners) = groups.get(&chosen_of(lk)) else {
                continue;
            };
            for &(rk, rp) in partners {
                if (lk.closed && !rp.is_empty()) || (rk.closed && !lp.is_empty()) {
                    continue;
                }
                let partial = merge_sorted(lp, rp);
                if partial.len() > self.k {
                    continue;
                }
                if partial.len() > lp.len().max(rp.len()) && !self.admits(&partial)? {
                    continue;
                }
                let mut raw = Self::raw_from(lk);
                let r = Self::raw_from(rk);
                let (lb, lc) = (raw.masks.len(), raw.comp_parent.len());
                raw.masks.extend_from_slice(&r.masks);
                raw.block_parent.extend((0..r.masks.len()).map(|i| lb + i));
                raw.comp_parent
                    .extend((0..r.comp_parent.len()).map(|i| lc + i));
                for p in 0..raw.slots.len() {
                    match (raw.slots[p], r.slots[p]) {
                        (Slot::Free(a), Slot::Free(b)) => {
                            union(&mut raw.block_parent, a as usize, lb + b as usize)
                        }
                        (Slot::Chosen(a), Slot::Chosen(b)) => {
                            union(&mut raw.comp_parent, a as usize, lc + b as usize)
                        }
                        _ => unreachable!("grouped by chosen positions"),
                    }
                }
                raw.satisfied |= r.satisfied;
                raw.closed |= r.closed;
                if let Some(k2) = self.finish(raw, &partial, bag)? {
                    offer(&mut out, k2, partial);
                }
            }
        }
        Ok(out)
    }
}

/// Smallest feasible S, ties broken lexicographically, or `None`.
pub fn solve(
    g: &Graph,
    nice: &NiceDecomposition,
    demand: &SeparationDemand,
    k: usize,
    constraint: &ConstraintSpec,
    forbidden: &VertexSet,
) -> Result<Option<VertexSet>> {
    solve_with(g, nice, demand, k, constraint, forbidden, &Stats::new())
}

pub fn solve_with(
    g: &Graph,
    nice: &NiceDecomposition,
    demand: &SeparationDemand,
    k: usize,
    constraint: &ConstraintSpec,
    forbidden: &VertexSet,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    nice.check(g)?;
    forbidden.check(g.n())?;
    let pairs = demand.cut_pairs.len() + demand.uncut_pairs.len();
    if pairs > 32 {
        return Err(Error::Precondition(format!(
            "at most 32 terminal pairs are supported, got {pairs}"
        )));
    }
    if matches!(constraint, ConstraintSpec::Hereditary(_)) && k.min(g.n()) > ROW_BITS {
        return Err(Error::TooManyVertices {
            n: k,
            max: ROW_BITS,
        });
    }
    let mut term = vec![0u64; g.n()];
    let mut cut_bits = 0u64;
    let mut uncut_bits = 0u64;
    for (i, p) in demand
        .cut_pairs
        .iter()
        .chain(&demand.uncut_pairs)
        .enumerate()
    {
        p.x.check(g.n())?;
        p.y.check(g.n())?;
        for v in p.x.iter() {
            term[v] |= 1 << (2 * i);
        }
        for v in p.y.iter() {
            term[v] |= 1 << (2 * i + 1);
        }
        if i < demand.cut_pairs.len() {
            cut_bits |= 1 << (2 * i);
        } else {
            uncut_bits |= 1 << (2 * i);
        }
    }
    let ctx = Ctx {
        g,
        k,
        constraint,
        forbidden: forbidden.mask(g.n()),
        term,
        cut_bits,
        uncut_bits,
        admitted: RefCell::default(),
        shapes: RefCell::default(),
    };
    let mut tables: Vec<Option<Table>> = vec![None; nice.nodes.len()];
    let mut states = 0;
    for (i, node) in nice.nodes.iter().enumerate() {
        let table = match node.kind {
            NiceKind::Leaf => ctx.leaf()?,
            NiceKind::Introduce(v) => {
                let child = tables[node.children[0]].take().expect("child table");
                ctx.introduce(&child, v, &node.bag)?
            }
            NiceKind::Forget(v) => {
                let c = node.children[0];
                let child = tables[c].take().expect("child table");
                ctx.forget(&child, v, &nice.nodes[c].bag, &node.bag)?
            }
            NiceKind::Join => {
                let l = tables[node.children[0]].take().expect("child table");
                let r = tables[node.children[1]].take().expect("child table");
                ctx.join(&l, &r, &node.bag)?
            }
        };
        states += table.len();
        tables[i] = Some(table);
    }
    stats.add_states(states);
    stats.record_width(nice.width());
    let root = tables[nice.root()].take().expect("root table");
    let best = root
        .into_iter()
        .filter(|(key, _)| key.satisfied & uncut_bits == uncut_bits)
        .map(|(_, p)| p)
        .min_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(best.map(VertexSet::from_sorted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tdecomp::{decompose, make_nice};

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn run(
        g: &Graph,
        demand: &SeparationDemand,
        k: usize,
        constraint: &ConstraintSpec,
        forbidden: &[usize],
    ) -> Option<VertexSet> {
        let nice = make_nice(&decompose(g));
        solve(g, &nice, demand, k, constraint, &vs(forbidden)).unwrap()
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
    fn stable_double_path() {
        let d = SeparationDemand::cut(vs(&[0]), vs(&[7]));
        let constraint = ConstraintSpec::Hereditary(GraphClass::edgeless());
        assert_eq!(
            run(&double_path(), &d, 2, &constraint, &[0, 7]),
            Some(vs(&[1, 4]))
        );
    }

    #[test]
    fn only_separator_is_an_edge() {
        let g = graph(4, &[(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]);
        let d = SeparationDemand::cut(vs(&[0]), vs(&[3]));
        let constraint = ConstraintSpec::Hereditary(GraphClass::edgeless());
        assert_eq!(run(&g, &d, 2, &constraint, &[0, 3]), None);
        assert_eq!(
            run(&g, &d, 2, &ConstraintSpec::Any, &[0, 3]),
            Some(vs(&[1, 2]))
        );
        assert_eq!(
            run(&g, &d, 2, &ConstraintSpec::ConnectedBlack, &[0, 3]),
            Some(vs(&[1, 2]))
        );
    }

    #[test]
    fn same_vertex_on_both_sides() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let d = SeparationDemand::cut(vs(&[1]), vs(&[1]));
        assert_eq!(run(&g, &d, 2, &ConstraintSpec::Any, &[1]), None);
        assert_eq!(run(&g, &d, 2, &ConstraintSpec::Any, &[]), Some(vs(&[1])));
    }

    #[test]
    fn connected_rejects_split_solution() {
        let d = SeparationDemand::cut(vs(&[0]), vs(&[7]));
        assert_eq!(
            run(
                &double_path(),
                &d,
                4,
                &ConstraintSpec::ConnectedBlack,
                &[0, 7]
            ),
            None
        );
        let mut g = double_path();
        g.add_edge(1, 4).unwrap();
        assert_eq!(
            run(&g, &d, 2, &ConstraintSpec::ConnectedBlack, &[0, 7]),
            Some(vs(&[1, 4]))
        );
    }

    #[test]
    fn uncut_pairs() {
        let g = double_path();
        let d = SeparationDemand {
            cut_pairs: vec![TerminalPair::new(vs(&[0]), vs(&[7]))],
            uncut_pairs: vec![TerminalPair::new(vs(&[0]), vs(&[2]))],
        };
        assert_eq!(
            run(&g, &d, 2, &ConstraintSpec::Any, &[0, 7]),
            Some(vs(&[3, 4]))
        );
        let unsat = SeparationDemand {
            cut_pairs: vec![],
            uncut_pairs: vec![TerminalPair::new(vs(&[0]), vs(&[]))],
        };
        assert_eq!(run(&g, &unsat, 2, &ConstraintSpec::Any, &[]), None);
    }

    #[test]
    fn red_edges_connect_but_do_not_count() {
        let mut g = graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        g.add_colored_edge(1, 2, crate::graph::EdgeColor::Red)
            .unwrap();
        let d = SeparationDemand::cut(vs(&[0]), vs(&[3]));
        let constraint = ConstraintSpec::Hereditary(GraphClass::edgeless());
        assert_eq!(run(&g, &d, 2, &constraint, &[0, 3]), Some(vs(&[1, 2])));
        assert_eq!(
            run(&g, &d, 2, &ConstraintSpec::ConnectedBlack, &[0, 3]),
            None
        );
    }
}

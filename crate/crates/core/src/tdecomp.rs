//! Tree decompositions: min-fill construction, validation, nice form, PACE text format.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }
}

/// Decomposition from a min-fill elimination ordering (ties to the lowest id).
pub fn decompose(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: Vec::new(),
        };
    }
    let mut nb: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let fill = |nb: &[BTreeSet<usize>], v: usize| -> usize {
        let list: Vec<usize> = nb[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if !nb[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut score: Vec<usize> = (0..n).map(|v| fill(&nb, v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (score[v], v)).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0; n];
    let mut later: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut step = 0;
    while let Some((_, v)) = queue.pop_first() {
        eliminated[v] = true;
        position[v] = step;
        step += 1;
        let list: Vec<usize> = nb[v].iter().copied().collect();
        later[v] = list.clone();
        for &u in &list {
            nb[u].remove(&v);
        }
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if nb[a].insert(b) {
                    nb[b].insert(a);
                }
            }
        }
        // fill counts can change only around the new clique
        let mut touched: BTreeSet<usize> = list.iter().copied().collect();
        for &u in &list {
            touched.extend(nb[u].iter().copied());
        }
        for u in touched {
            if eliminated[u] {
                continue;
            }
            let s = fill(&nb, u);
            if s != score[u] {
                queue.remove(&(score[u], u));
                score[u] = s;
                queue.insert((s, u));
            }
        }
    }
    let bags: Vec<VertexSet> = (0..n)
        .map(|v| later[v].iter().copied().chain(std::iter::once(v)).collect())
        .collect();
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for v in 0..n {
        match later[v].iter().min_by_key(|&&u| position[u]) {
            Some(&p) => edges.push((v, p)),
            None => roots.push(v),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition { bags, edges }
}

fn tree_adjacency(nodes: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        if a >= nodes || b >= nodes {
            return Err(Error::Decomposition(format!(
                "tree edge {a}-{b} refers to a missing node"
            )));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if nodes == 0 || edges.len() != nodes - 1 {
        return Err(Error::Decomposition("the bag graph is not a tree".into()));
    }
    let mut seen = vec![false; nodes];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    if count != nodes {
        return Err(Error::Decomposition("the bag graph is not a tree".into()));
    }
    Ok(adj)
}

/// Checks the three decomposition conditions; the error names the first violation.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    let adj = tree_adjacency(td.bags.len(), &td.edges)?;
    for b in &td.bags {
        b.check(g.n())?;
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, b) in td.bags.iter().enumerate() {
        for v in b.iter() {
            holders[v].push(i);
        }
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            return Err(Error::Decomposition(format!("vertex {v} is in no bag")));
        }
    }
    for (u, v, _) in g.edges() {
        if !holders[u].iter().any(|&i| td.bags[i].contains(v)) {
            return Err(Error::Decomposition(format!("edge {u}-{v} is in no bag")));
        }
    }
    for (v, h) in holders.iter().enumerate() {
        let inside: HashSet<usize> = h.iter().copied().collect();
        let mut seen = HashSet::from([h[0]]);
        let mut queue = VecDeque::from([h[0]]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if inside.contains(&y) && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        if seen.len() != inside.len() {
            return Err(Error::Decomposition(format!(
                "bags containing vertex {v} are not connected"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first; the last node is the root and has an empty bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Structural checks plus the decomposition conditions for `g`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let bad = |msg: String| Err(Error::Decomposition(msg));
        if self.nodes.is_empty() {
            return bad("no nodes".into());
        }
        let mut parent = vec![usize::MAX; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= i || parent[c] != usize::MAX {
                    return bad(format!("node {i} has an invalid child {c}"));
                }
                parent[c] = i;
            }
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("bag of node {i} is not sorted"));
            }
            let child = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NiceKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NiceKind::Introduce(v) => {
                    node.children.len() == 1 && {
                        let c = child(0);
                        node.bag.len() == c.len() + 1
                            && node.bag.binary_search(&v).is_ok()
                            && c.binary_search(&v).is_err()
                            && c.iter().all(|x| node.bag.binary_search(x).is_ok())
                    }
                }
                NiceKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let c = child(0);
                        c.len() == node.bag.len() + 1
                            && c.binary_search(&v).is_ok()
                            && node.bag.binary_search(&v).is_err()
                            && node.bag.iter().all(|x| c.binary_search(x).is_ok())
                    }
                }
                NiceKind::Join => {
                    node.children.len() == 2 && *child(0) == node.bag && *child(1) == node.bag
                }
            };
            if !ok {
                return bad(format!("node {i} violates the {:?} shape", node.kind));
            }
        }
        let root = self.root();
        if (0..root).any(|i| parent[i] == usize::MAX) {
            return bad("some node has no parent".into());
        }
        if !self.nodes[root].bag.is_empty() {
            return bad("root bag is not empty".into());
        }
        let mut forgotten = vec![0usize; g.n()];
        for node in &self.nodes {
            for &v in &node.bag {
                if v >= g.n() {
                    return Err(Error::VertexOutOfRange { v, n: g.n() });
                }
            }
            if let NiceKind::Forget(v) = node.kind {
                forgotten[v] += 1;
            }
        }
        if let Some(v) = (0..g.n()).find(|&v| forgotten[v] != 1) {
            return bad(format!(
                "bags containing vertex {v} are not connected or it is in no bag"
            ));
        }
        // with single forgets, an edge is covered iff one endpoint is introduced while the other is present
        let mut covered: HashSet<(usize, usize)> = HashSet::new();
        for node in &self.nodes {
            if let NiceKind::Introduce(v) = node.kind {
                for &u in &node.bag {
                    if u != v && g.has_edge(u, v) {
                        covered.insert((u.min(v), u.max(v)));
                    }
                }
            }
        }
        for (u, v, _) in g.edges() {
            if !covered.contains(&(u, v)) {
                return bad(format!("edge {u}-{v} is in no bag"));
            }
        }
        Ok(())
    }
}

/// Nice form of `td` rooted at node 0; width is unchanged.
pub fn make_nice(td: &TreeDecomposition) -> NiceDecomposition {
    let count = td.bags.len();
    let mut adj = vec![Vec::new(); count];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    // iterative DFS order from node 0
    let mut order = Vec::with_capacity(count);
    let mut parent = vec![usize::MAX; count];
    let mut seen = vec![false; count];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in adj[x].iter().rev() {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut nodes: Vec<NiceNode> = Vec::new();
    let mut top = vec![usize::MAX; count];
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &x in order.iter().skip(1) {
        kids[parent[x]].push(x);
    }
    let push = |nodes: &mut Vec<NiceNode>, kind, bag: Vec<usize>, children: Vec<usize>| {
        nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        nodes.len() - 1
    };
    // move from a nice node with bag `from` to `to` by forgets then introduces
    let transition = |nodes: &mut Vec<NiceNode>, mut cur: usize, to: &[usize]| -> usize {
        let from = nodes[cur].bag.clone();
        let mut bag = from.clone();
        for &v in &from {
            if to.binary_search(&v).is_err() {
                bag.retain(|&x| x != v);
                cur = push(nodes, NiceKind::Forget(v), bag.clone(), vec![cur]);
            }
        }
        for &v in to {
            if from.binary_search(&v).is_err() {
                let pos = bag.binary_search(&v).unwrap_err();
                bag.insert(pos, v);
                cur = push(nodes, NiceKind::Introduce(v), bag.clone(), vec![cur]);
            }
        }
        cur
    };
    for &x in order.iter().rev() {
        let bag = td.bags[x].as_slice().to_vec();
        let mut branches = Vec::new();
        if kids[x].is_empty() {
            let leaf = push(&mut nodes, NiceKind::Leaf, Vec::new(), Vec::new());
            branches.push(transition(&mut nodes, leaf, &bag));
        }
        for &c in &kids[x] {
            branches.push(transition(&mut nodes, top[c], &bag));
        }
        let mut cur = branches[0];
        for &other in &branches[1..] {
            cur = push(&mut nodes, NiceKind::Join, bag.clone(), vec![cur, other]);
        }
        top[x] = cur;
    }
    let root = transition(&mut nodes, top[0], &[]);
    debug_assert_eq!(root, nodes.len() - 1);
    NiceDecomposition { nodes }
}

/// PACE `.td` text, 1-based bag and vertex ids.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.bags.len(), td.width() + 1, n);
    for (i, b) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in b.iter() {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" {
            continue;
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(&format!("bad number {s:?}")))
        };
        match toks[0] {
            "s" => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(err("header must be `s td <bags> <width+1> <n>`"));
                }
                let count = num(toks[2])?;
                header = Some((count, num(toks[4])?));
                bags = vec![None; count];
            }
            "b" => {
                let (count, n) = header.ok_or_else(|| err("missing header"))?;
                let id = num(toks.get(1).ok_or_else(|| err("missing bag id"))?)?;
                if id == 0 || id > count {
                    return Err(err("bag id out of range"));
                }
                let mut vs = Vec::new();
                for t in &toks[2..] {
                    let v = num(t)?;
                    if v == 0 || v > n {
                        return Err(err("vertex out of range"));
                    }
                    vs.push(v - 1);
                }
                bags[id - 1] = Some(vs.into());
            }
            _ => {
                let (count, _) = header.ok_or_else(|| err("missing header"))?;
                if toks.len() != 2 {
                    return Err(err("tree edge needs two bag ids"));
                }
                let (a, b) = (num(toks[0])?, num(toks[1])?);
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(err("bag id out of range"));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, n) = header.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("bag {} missing", i + 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((TreeDecomposition { bags, edges }, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &e)
    }

    fn complete(n: usize) -> Graph {
        let e: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        graph(n, &e)
    }

    #[test]
    fn widths() {
        let tree = graph(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]);
        assert_eq!(decompose(&tree).width(), 1);
        assert_eq!(decompose(&complete(5)).width(), 4);
        let c6 = cycle(6);
        let td = decompose(&c6);
        assert_eq!(td.width(), 2);
        validate(&c6, &td).unwrap();
    }

    #[test]
    fn forests_and_empty() {
        let g = graph(5, &[(0, 1), (3, 4)]);
        let td = decompose(&g);
        validate(&g, &td).unwrap();
        let e = Graph::new(0);
        let td = decompose(&e);
        validate(&e, &td).unwrap();
        make_nice(&td).check(&e).unwrap();
    }

    #[test]
    fn validation_names_violation() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1].into(), vec![2].into()],
            edges: vec![(0, 1)],
        };
        let msg = validate(&g, &td).unwrap_err().to_string();
        assert!(msg.contains("edge 1-2"), "{msg}");
        let td = TreeDecomposition {
            bags: vec![vec![0, 1].into(), vec![2].into(), vec![1, 2].into()],
            edges: vec![(0, 1), (1, 2)],
        };
        assert!(validate(&g, &td)
            .unwrap_err()
            .to_string()
            .contains("vertex 1"));
        let td = TreeDecomposition {
            bags: vec![vec![0, 1].into()],
            edges: vec![],
        };
        assert!(validate(&g, &td)
            .unwrap_err()
            .to_string()
            .contains("vertex 2"));
    }

    #[test]
    fn nice_preserves_width() {
        for g in [
            cycle(7),
            complete(4),
            graph(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 5)]),
        ] {
            let td = decompose(&g);
            let nice = make_nice(&td);
            nice.check(&g).unwrap();
            assert_eq!(nice.width(), td.width());
        }
    }

    #[test]
    fn pace_round_trip() {
        let g = cycle(5);
        let td = decompose(&g);
        let text = write_td(&td, g.n());
        assert!(text.starts_with("s td 5 3 5\n"));
        let (back, n) = parse_td(&text).unwrap();
        assert_eq!(n, 5);
        assert_eq!(back, td);
        assert!(parse_td("b 1 1").is_err());
    }
}

//! Canonical forms of small labeled graphs.

use crate::error::{Error, Result};
use crate::graph::{EdgeColor, Graph};

/// Largest graph accepted by [`canonicalize`].
pub const K_MAX: usize = 16;

/// Hard ceiling of the bit-matrix representation.
pub(crate) const ROW_BITS: usize = 32;

/// Vertex labels in canonical position order plus the lower-triangular adjacency rows:
/// bit `j` of `rows[i]` is set iff positions `i` and `j < i` are adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGraph {
    labels: Vec<u32>,
    rows: Vec<u32>,
}

impl CanonicalGraph {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        hi != lo && self.rows[hi] >> lo & 1 == 1
    }

    /// Black graph with the stored labels truncated to `u8`.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for i in 0..self.n() {
            g.set_label(i, self.labels[i] as u8).expect("in range");
            for j in 0..i {
                if self.has_edge(i, j) {
                    g.add_edge(j, i).expect("in range");
                }
            }
        }
        g
    }
}

/// Canonical form of the black edges of `g`, respecting vertex labels.
pub fn canonicalize(g: &Graph) -> Result<CanonicalGraph> {
    if g.n() > K_MAX {
        return Err(Error::TooManyVertices {
            n: g.n(),
            max: K_MAX,
        });
    }
    Ok(canonical_from_graph(g))
}

pub(crate) fn canonical_from_graph(g: &Graph) -> CanonicalGraph {
    let n = g.n();
    assert!(n <= ROW_BITS, "graph too large to canonicalize");
    let mut adj = vec![0u32; n];
    for (u, v, c) in g.edges() {
        if c == EdgeColor::Black {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    let labels: Vec<u32> = g.labels().iter().map(|&l| l as u32).collect();
    canonical_form(&adj, &labels)
}

/// `adj[v]` is the neighbor bitmask of `v`.
pub(crate) fn canonical_form(adj: &[u32], labels: &[u32]) -> CanonicalGraph {
    let n = adj.len();
    assert!(n <= ROW_BITS && labels.len() == n);
    if n == 0 {
        return CanonicalGraph {
            labels: Vec::new(),
            rows: Vec::new(),
        };
    }
    let color = refine(adj, labels);
    // position i may only hold vertices of color cell_color[i]
    let mut cell_color = color.clone();
    cell_color.sort_unstable();
    let mut search = Search {
        adj,
        color: &color,
        cell_color: &cell_color,
        placed: Vec::with_capacity(n),
        rows: Vec::with_capacity(n),
        best: None,
        best_order: Vec::new(),
    };
    search.run(0);
    let order = search.best_order;
    CanonicalGraph {
        labels: order.iter().map(|&v| labels[v]).collect(),
        rows: search.best.expect("at least one ordering"),
    }
}

/// 1-dimensional color refinement. Colors depend only on the isomorphism type: they are
/// ranks of signature hashes, and the hash is a fixed function of the old color and the
/// multiset of neighbor colors. A collision can only make the partition coarser, which
/// the search below tolerates.
fn refine(adj: &[u32], labels: &[u32]) -> Vec<u32> {
    let n = adj.len();
    let mut color = rank(labels.iter().map(|&l| l as u64).collect());
    let mut classes = count_distinct(&color);
    loop {
        let sigs: Vec<u64> = (0..n)
            .map(|v| {
                // order-free combination of neighbor colors
                let mut acc = 0u64;
                let mut m = adj[v];
                while m != 0 {
                    let u = m.trailing_zeros() as usize;
                    m &= m - 1;
                    acc = acc.wrapping_add(mix(color[u] as u64 + 1));
                }
                mix(acc ^ mix(color[v] as u64).rotate_left(17))
            })
            .collect();
        let next = rank(sigs);
        let c = count_distinct(&next);
        color = next;
        if c == classes {
            return color;
        }
        classes = c;
    }
}

fn mix(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51afd7ed558ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ceb9fe1a85ec53);
    x ^ (x >> 33)
}

fn rank(sigs: Vec<u64>) -> Vec<u32> {
    let mut sorted = sigs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).unwrap() as u32)
        .collect()
}

fn count_distinct(c: &[u32]) -> usize {
    let mut seen = 0u64;
    for &x in c {
        seen |= 1 << x;
    }
    seen.count_ones() as usize
}

struct Search<'a> {
    adj: &'a [u32],
    color: &'a [u32],
    cell_color: &'a [u32],
    placed: Vec<usize>,
    rows: Vec<u32>,
    best: Option<Vec<u32>>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, used: u32) {
        let depth = self.placed.len();
        let n = self.adj.len();
        if depth == n {
            if self.best.as_ref().is_none_or(|b| self.rows < *b) {
                self.best = Some(self.rows.clone());
                self.best_order = self.placed.clone();
            }
            return;
        }
        let want = self.cell_color[depth];
        let mut tried: Vec<usize> = Vec::new();
        for u in 0..n {
            if used >> u & 1 == 1 || self.color[u] != want {
                continue;
            }
            // interchangeable twins lead to identical rows
            if tried
                .iter()
                .any(|&w| self.adj[u] & !(1 << w) == self.adj[w] & !(1 << u))
            {
                continue;
            }
            tried.push(u);
            let mut row = 0u32;
            for (j, &p) in self.placed.iter().enumerate() {
                if self.adj[u] >> p & 1 == 1 {
                    row |= 1 << j;
                }
            }
            self.rows.push(row);
            let keep = match &self.best {
                None => true,
                Some(b) => self.rows.as_slice() <= &b[..=depth],
            };
            if keep {
                self.placed.push(u);
                self.run(used | 1 << u);
                self.placed.pop();
            }
            self.rows.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    #[test]
    fn relabeled_paths_agree() {
        let a = canonicalize(&graph(3, &[(0, 1), (1, 2)])).unwrap();
        let b = canonicalize(&graph(3, &[(1, 0), (0, 2)])).unwrap();
        assert_eq!(a, b);
        let k3 = canonicalize(&graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_ne!(a, k3);
        assert_eq!(k3.to_graph().m(), 3);
    }

    #[test]
    fn labels_distinguish() {
        let mut a = graph(2, &[(0, 1)]);
        let b = a.clone();
        a.set_label(0, 1).unwrap();
        let mut c = b.clone();
        c.set_label(1, 1).unwrap();
        assert_ne!(canonicalize(&a).unwrap(), canonicalize(&b).unwrap());
        assert_eq!(canonicalize(&a).unwrap(), canonicalize(&c).unwrap());
    }

    #[test]
    fn red_edges_are_ignored() {
        let mut a = graph(3, &[(0, 1)]);
        a.add_colored_edge(1, 2, EdgeColor::Red).unwrap();
        assert_eq!(
            canonicalize(&a).unwrap(),
            canonicalize(&graph(3, &[(0, 1)])).unwrap()
        );
    }

    #[test]
    fn too_large() {
        assert!(canonicalize(&Graph::new(K_MAX + 1)).is_err());
        assert!(canonicalize(&Graph::new(K_MAX)).is_ok());
    }

    #[test]
    fn regular_graphs_with_equal_refinement() {
        // C6 and two triangles are both 2-regular: refinement alone cannot tell them apart
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let tt = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(canonicalize(&c6).unwrap(), canonicalize(&tt).unwrap());
        let c6b = graph(6, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]);
        assert_eq!(canonicalize(&c6).unwrap(), canonicalize(&c6b).unwrap());
    }
}

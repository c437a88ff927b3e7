//! The torso of a vertex set: keep C, and make the neighborhood of every outside
//! component a clique.

use crate::error::Result;
use crate::graph::{EdgeColor, Graph, VertexSet};

/// Graph on `c` (vertex `c[i]` becomes `i`). Edges of `g` inside `c` keep their color;
/// pairs joined only through outside components get red edges.
pub fn torso(g: &Graph, c: &VertexSet) -> Result<Graph> {
    c.check(g.n())?;
    let mut h = g.induced(c);
    let mut index = vec![usize::MAX; g.n()];
    for (i, v) in c.iter().enumerate() {
        index[v] = i;
    }
    let outside: Vec<bool> = (0..g.n()).map(|v| index[v] == usize::MAX).collect();
    let mut stamp = vec![usize::MAX; g.n()];
    for (ci, comp) in g.components_where(&outside).into_iter().enumerate() {
        let mut boundary = Vec::new();
        for &v in &comp {
            for &u in g.neighbors(v) {
                if !outside[u] && stamp[u] != ci {
                    stamp[u] = ci;
                    boundary.push(index[u]);
                }
            }
        }
        boundary.sort_unstable();
        for (i, &a) in boundary.iter().enumerate() {
            for &b in &boundary[i + 1..] {
                if !h.has_edge(a, b) {
                    h.add_colored_edge(a, b, EdgeColor::Red)?;
                }
            }
        }
    }
    Ok(h)
}

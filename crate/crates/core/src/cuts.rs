//! Constrained s-t cut problems: reduction to a small-treewidth graph, then the DP.

use crate::class::{max_matching, GraphClass};
use crate::dp::{solve_with, ConstraintSpec, SeparationDemand, TerminalPair};
use crate::error::{Error, Result};
use crate::flow::{min_vertex_cut, min_vertex_cut_avoiding};
use crate::graph::{Graph, VertexSet};
use crate::reduce::{
    cover_minimal_separators, cover_set_separators, project, reduce_terminals, Origin,
};
use crate::stats::Stats;
use crate::tdecomp::{decompose, make_nice};
use crate::torso::torso;

fn check_pair(g: &Graph, s: usize, t: usize) -> Result<()> {
    VertexSet::from(vec![s, t]).check(g.n())?;
    if s == t {
        return Err(Error::SameTerminals(s));
    }
    Ok(())
}

/// Smallest s-t separator S with |S| <= k and G[S] in `class`; ties go to the
/// lexicographically smallest set.
pub fn g_mincut(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    class: &GraphClass,
) -> Result<Option<VertexSet>> {
    g_mincut_with(g, s, t, k, class, &Stats::new())
}

pub fn g_mincut_with(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    class: &GraphClass,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    check_pair(g, s, t)?;
    let Some((l, _)) = min_vertex_cut(g, s, t, k)? else {
        return Ok(None);
    };
    g_mincut_range(g, s, t, l, k, class, stats)
}

/// Vertices that can never be in a solution because their one-vertex graph is not a
/// member of `class`.
pub(crate) fn excluded_by_class(g: &Graph, class: &GraphClass) -> Result<Vec<bool>> {
    let mut verdict: [Option<bool>; 256] = [None; 256];
    let mut out = vec![false; g.n()];
    for v in 0..g.n() {
        let l = g.label(v) as usize;
        if verdict[l].is_none() {
            let mut one = Graph::new(1);
            one.set_label(0, g.label(v))?;
            verdict[l] = Some(!class.contains(&one)?);
        }
        out[v] = verdict[l].expect("just set");
    }
    Ok(out)
}

/// Tries budgets `lo..=hi` in turn, so the first hit is a minimum.
pub(crate) fn g_mincut_range(
    g: &Graph,
    s: usize,
    t: usize,
    lo: usize,
    hi: usize,
    class: &GraphClass,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    if g.has_edge(s, t) {
        return Ok(None);
    }
    let excluded = excluded_by_class(g, class)?;
    let Some((l, _)) = min_vertex_cut_avoiding(g, s, t, hi, &excluded)? else {
        return Ok(None);
    };
    let constraint = ConstraintSpec::from_class(class);
    for b in lo.max(l)..=hi {
        let red = reduce_terminals(g, &VertexSet::from(vec![s, t]), b)?;
        stats.record_reduced(red.reduced.n());
        let rs = red.reduced_id(s).expect("terminal kept");
        let rt = red.reduced_id(t).expect("terminal kept");
        let nice = make_nice(&decompose(&red.reduced));
        let mut forbidden = red.subdivisions().union(&VertexSet::from(vec![rs, rt]));
        for (i, o) in red.origin.iter().enumerate() {
            if let Origin::Vertex(v) = o {
                if excluded[*v] {
                    forbidden.insert(i);
                }
            }
        }
        let demand = SeparationDemand::cut(VertexSet::singleton(rs), VertexSet::singleton(rt));
        if let Some(sol) = solve_with(
            &red.reduced,
            &nice,
            &demand,
            b,
            &constraint,
            &forbidden,
            stats,
        )? {
            return Ok(Some(red.lift(&sol)));
        }
    }
    Ok(None)
}

/// Smallest independent s-t separator of size at most `k`.
pub fn stable_cut(g: &Graph, s: usize, t: usize, k: usize) -> Result<Option<VertexSet>> {
    g_mincut(g, s, t, k, &GraphClass::edgeless())
}

pub fn stable_cut_with(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    g_mincut_with(g, s, t, k, &GraphClass::edgeless(), stats)
}

/// A separator with the edges whose endpoints cover it.
pub type CoveredCut = (VertexSet, Vec<(usize, usize)>);

/// An s-t separator covered by the endpoints of at most `k` edges, with such edges.
pub fn edge_induced_vertex_cut(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
) -> Result<Option<CoveredCut>> {
    edge_induced_vertex_cut_with(g, s, t, k, &Stats::new())
}

pub fn edge_induced_vertex_cut_with(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    stats: &Stats,
) -> Result<Option<CoveredCut>> {
    let Some(sep) = g_mincut_with(g, s, t, 2 * k, &GraphClass::max_deficiency(k), stats)? else {
        return Ok(None);
    };
    let cover = edge_cover(g, &sep)?;
    debug_assert!(cover.len() <= k);
    Ok(Some((sep, cover)))
}

/// Maximum matching of G[S] plus one incident edge for each unmatched vertex.
fn edge_cover(g: &Graph, sep: &VertexSet) -> Result<Vec<(usize, usize)>> {
    let ids = sep.as_slice();
    let mut adj = vec![0u32; ids.len()];
    for i in 0..ids.len() {
        for j in 0..i {
            if g.has_edge(ids[i], ids[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let mut matched = vec![false; ids.len()];
    let mut cover = Vec::new();
    for (a, b) in max_matching(&adj) {
        matched[a] = true;
        matched[b] = true;
        cover.push((ids[a].min(ids[b]), ids[a].max(ids[b])));
    }
    for (i, &v) in ids.iter().enumerate() {
        if !matched[i] {
            let &u = g
                .neighbors(v)
                .first()
                .ok_or_else(|| Error::Precondition(format!("separator vertex {v} is isolated")))?;
            cover.push((v.min(u), v.max(u)));
        }
    }
    cover.sort_unstable();
    Ok(cover)
}

/// Dreyfus-Wagner table for the full terminal set, counting vertices, capped at `cap + 1`.
fn steiner_value(g: &Graph, terminals: &[usize], allowed: &[bool], cap: usize) -> usize {
    let m = terminals.len();
    if m == 0 {
        return 0;
    }
    if terminals.iter().any(|&t| !allowed[t]) {
        return cap + 1;
    }
    let n = g.n();
    let inf = cap + 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![vec![inf; n]; full + 1];
    let relax = |row: &mut Vec<usize>| {
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); inf + 1];
        for v in 0..n {
            if row[v] < inf {
                buckets[row[v]].push(v);
            }
        }
        for d in 0..inf {
            let mut i = 0;
            while i < buckets[d].len() {
                let v = buckets[d][i];
                i += 1;
                if row[v] != d {
                    continue;
                }
                for &u in g.neighbors(v) {
                    if allowed[u] && d + 1 < row[u] {
                        row[u] = d + 1;
                        if d + 1 < inf {
                            buckets[d + 1].push(u);
                        }
                    }
                }
            }
        }
    };
    for (i, &t) in terminals.iter().enumerate() {
        let row = &mut dp[1 << i];
        row[t] = 1;
        relax(row);
    }
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        let mut row = vec![inf; n];
        for v in 0..n {
            if !allowed[v] {
                continue;
            }
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                if sub & low != 0 {
                    let val = dp[sub][v] + dp[mask ^ sub][v] - 1;
                    if val < row[v] {
                        row[v] = val;
                    }
                }
                sub = (sub - 1) & mask;
            }
            row[v] = row[v].min(inf);
        }
        relax(&mut row);
        dp[mask] = row;
    }
    dp[full][terminals[0]].min(inf)
}

/// Vertex set of a smallest tree spanning `x` with at most `k` vertices; ties go to the
/// lexicographically smallest vertex set.
pub fn steiner_tree_bounded(g: &Graph, x: &VertexSet, k: usize) -> Result<Option<VertexSet>> {
    steiner_within(g, x, k, &vec![true; g.n()])
}

fn steiner_within(
    g: &Graph,
    x: &VertexSet,
    k: usize,
    allowed: &[bool],
) -> Result<Option<VertexSet>> {
    x.check(g.n())?;
    if x.len() > k {
        return Ok(None);
    }
    if x.is_empty() {
        return Ok(Some(VertexSet::new()));
    }
    let best = steiner_value(g, x.as_slice(), allowed, k);
    if best > k {
        return Ok(None);
    }
    // only vertices close to every terminal can be on a tree of `best` vertices
    let blocked: Vec<bool> = allowed.iter().map(|a| !a).collect();
    let near = distance_within(g, x.iter().next().expect("nonempty"), &blocked, best - 1);
    let mut required: Vec<usize> = x.as_slice().to_vec();
    let mut usable = allowed.to_vec();
    for v in 0..g.n() {
        if required.len() == best {
            break;
        }
        if !usable[v] || x.contains(v) || !near[v] {
            continue;
        }
        let mut trial = required.clone();
        trial.push(v);
        if steiner_value(g, &trial, &usable, best) == best {
            required = trial;
        } else {
            usable[v] = false;
        }
    }
    Ok(Some(required.into_iter().collect()))
}

fn distance_within(g: &Graph, src: usize, blocked: &[bool], radius: usize) -> Vec<bool> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[src] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &u in g.neighbors(v) {
            if !blocked[u] && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist.iter().map(|&d| d != usize::MAX).collect()
}

/// Smallest s-t separator of size at most `k` whose black edges connect it.
pub fn connected_cut(g: &Graph, s: usize, t: usize, k: usize) -> Result<Option<VertexSet>> {
    connected_cut_with(g, s, t, k, &Stats::new())
}

pub fn connected_cut_with(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    check_pair(g, s, t)?;
    if g.has_edge(s, t) {
        return Ok(None);
    }
    let Some((l, _)) = min_vertex_cut(g, s, t, k)? else {
        return Ok(None);
    };
    if l == 0 {
        return Ok(Some(VertexSet::new()));
    }
    for b in l..=k {
        let cover = cover_minimal_separators(g, s, t, b)?;
        let extended = extend_with_trees(g, s, t, &cover, b)?;
        let kept = extended.union(&VertexSet::from(vec![s, t]));
        let tor = torso(g, &kept)?;
        stats.record_reduced(tor.n());
        let local = |v: usize| kept.as_slice().binary_search(&v).expect("kept");
        let nice = make_nice(&decompose(&tor));
        let demand = SeparationDemand::cut(
            VertexSet::singleton(local(s)),
            VertexSet::singleton(local(t)),
        );
        let forbidden = VertexSet::from(vec![local(s), local(t)]);
        if let Some(sol) = solve_with(
            &tor,
            &nice,
            &demand,
            b,
            &ConstraintSpec::ConnectedBlack,
            &forbidden,
            stats,
        )? {
            return Ok(Some(sol.iter().map(|i| kept.as_slice()[i]).collect()));
        }
    }
    Ok(None)
}

/// C' plus a smallest connecting tree inside every component (with its neighborhood) for
/// every nonempty neighborhood subset of size at most `k`.
fn extend_with_trees(
    g: &Graph,
    s: usize,
    t: usize,
    cover: &VertexSet,
    k: usize,
) -> Result<VertexSet> {
    let outside: Vec<bool> = (0..g.n()).map(|v| !cover.contains(v)).collect();
    let mut extra: Vec<usize> = Vec::new();
    for comp in g.components_where(&outside) {
        let comp_set = VertexSet::from_sorted(comp);
        let nbhd = g.neighborhood(&comp_set);
        if nbhd.is_empty() {
            continue;
        }
        let mut allowed = vec![false; g.n()];
        for v in comp_set.iter().chain(nbhd.iter()) {
            allowed[v] = true;
        }
        allowed[s] = false;
        allowed[t] = false;
        let ids = nbhd.as_slice();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        while let Some((next, chosen)) = stack.pop() {
            if !chosen.is_empty() {
                let x = VertexSet::from_sorted(chosen.clone());
                if let Some(tree) = steiner_within(g, &x, k, &allowed)? {
                    extra.extend(tree.iter());
                }
            }
            if chosen.len() < k {
                for i in next..ids.len() {
                    let mut c = chosen.clone();
                    c.push(ids[i]);
                    stack.push((i + 1, c));
                }
            }
        }
    }
    Ok(cover.union(&extra.into_iter().collect()))
}

/// Smallest S, |S| <= k, G[S] in `class`, separating every cut pair and no uncut pair.
pub fn multicut_uncut(
    g: &Graph,
    cut_pairs: &[TerminalPair],
    uncut_pairs: &[TerminalPair],
    k: usize,
    class: &GraphClass,
) -> Result<Option<VertexSet>> {
    multicut_uncut_with(g, cut_pairs, uncut_pairs, k, class, &Stats::new())
}

pub fn multicut_uncut_with(
    g: &Graph,
    cut_pairs: &[TerminalPair],
    uncut_pairs: &[TerminalPair],
    k: usize,
    class: &GraphClass,
    stats: &Stats,
) -> Result<Option<VertexSet>> {
    for p in cut_pairs.iter().chain(uncut_pairs) {
        p.x.check(g.n())?;
        p.y.check(g.n())?;
    }
    let mut c = VertexSet::new();
    for p in cut_pairs {
        if p.x.is_empty() || p.y.is_empty() {
            continue;
        }
        match cover_set_separators(g, &p.x, &p.y, k) {
            Ok(cover) => c = c.union(&cover),
            Err(Error::CutTooLarge(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    // pairs that C does not separate can never be separated by a subset of C
    let mut kept_uncut = Vec::new();
    for p in uncut_pairs {
        if crate::graph::is_separator(g, &c, &p.x, &p.y)? {
            kept_uncut.push(p);
        }
    }
    let local = |set: &VertexSet| -> VertexSet {
        set.iter()
            .map(|v| c.as_slice().binary_search(&v).expect("projection inside C"))
            .collect()
    };
    let proj = |p: &TerminalPair| {
        TerminalPair::new(local(&project(g, &c, &p.x)), local(&project(g, &c, &p.y)))
    };
    let demand = SeparationDemand {
        cut_pairs: cut_pairs.iter().map(proj).collect(),
        uncut_pairs: kept_uncut.into_iter().map(proj).collect(),
    };
    let tor = torso(g, &c)?;
    stats.record_reduced(tor.n());
    let nice = make_nice(&decompose(&tor));
    let constraint = ConstraintSpec::from_class(class);
    let sol = solve_with(
        &tor,
        &nice,
        &demand,
        k,
        &constraint,
        &VertexSet::new(),
        stats,
    )?;
    Ok(sol.map(|s| s.iter().map(|i| c.as_slice()[i]).collect()))
}

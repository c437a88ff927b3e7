//! One solver run per problem, plus the brute-force cross-check.

use rand::Rng;
use serde_json::{json, Value};
use twr_core::bipartization::{
    bipartite_contraction_with, exact_stable_bipartization_with, g_bipartization_with,
    g_edge_bipartization_with,
};
use twr_core::class::GraphClass;
use twr_core::cuts::{
    connected_cut_with, edge_induced_vertex_cut_with, g_mincut_with, multicut_uncut_with,
};
use twr_core::flow::{min_vertex_cut, separator_chain};
use twr_core::generators;
use twr_core::graph::{bipartite_2coloring, contract_edges, write_graph, Graph, VertexSet};
use twr_core::hck::{hck_solve_with, verify_coloring};
use twr_core::oracle::Oracle;
use twr_core::reduce::{reduce_terminals, Origin};
use twr_core::stats::Stats;
use twr_core::tdecomp::{decompose, write_td};
use twr_core::torso::torso;

use crate::args::{Problem, Terminals};
use crate::input::{id_list, parse_pairs, parse_target, read_graph, read_text, vertex};
use crate::CliError;

/// Solver answer with 0-based ids; converted to 1-based on output.
pub struct Outcome {
    pub feasible: bool,
    pub solution: VertexSet,
    pub size: Option<usize>,
    pub certificate: Value,
}

/// What the oracle said and whether it agrees with the solver.
pub struct Check {
    pub agrees: bool,
    pub detail: Value,
}

fn ids(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn edge_ids(f: &[(usize, usize)]) -> Vec<[usize; 2]> {
    f.iter().map(|&(u, v)| [u + 1, v + 1]).collect()
}

fn endpoints(f: &[(usize, usize)]) -> VertexSet {
    f.iter().flat_map(|&(u, v)| [u, v]).collect()
}

fn opt_ids(s: &Option<VertexSet>) -> Value {
    s.as_ref().map_or(Value::Null, |s| json!(ids(s)))
}

/// 2-coloring of `h` as a bipartiteness witness; `back` maps ids of `h` to ids of G.
fn coloring_witness(h: &Graph, back: &[usize]) -> Value {
    match bipartite_2coloring(h) {
        Some((b, w)) => {
            let lift = |s: &VertexSet| -> Vec<usize> {
                let mut v: Vec<usize> = s.iter().map(|x| back[x] + 1).collect();
                v.sort_unstable();
                v
            };
            json!({"black": lift(&b), "white": lift(&w)})
        }
        None => Value::Null,
    }
}

fn load_class(name: &str) -> Result<GraphClass, CliError> {
    if std::path::Path::new(name).is_file() {
        return GraphClass::parse_members(name, &read_text(name)?).map_err(CliError::from);
    }
    GraphClass::builtin(name).map_err(CliError::from)
}

fn need_k(k: Option<usize>) -> Result<usize, CliError> {
    k.ok_or_else(|| CliError::Precondition("--k is required".into()))
}

/// Resolves --s/--t, or draws a distinct non-adjacent pair from the seed.
pub fn pick_terminals(
    g: &Graph,
    term: &Terminals,
    seed: Option<u64>,
) -> Result<(usize, usize), CliError> {
    match (term.s, term.t) {
        (Some(s), Some(t)) => return Ok((vertex(s, g.n())?, vertex(t, g.n())?)),
        (None, None) => {}
        _ => {
            return Err(CliError::Precondition(
                "give both --s and --t or neither".into(),
            ))
        }
    }
    let n = g.n();
    let mut rng = generators::rng(seed.unwrap_or(0));
    for _ in 0..256 {
        if n < 2 {
            break;
        }
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s != t && !g.has_edge(s, t) {
            return Ok((s.min(t), s.max(t)));
        }
    }
    for s in 0..n {
        for t in s + 1..n {
            if !g.has_edge(s, t) {
                return Ok((s, t));
            }
        }
    }
    Err(CliError::Precondition(
        "graph has no pair of distinct non-adjacent vertices".into(),
    ))
}

/// Compares feasibility and optimal size.
fn same_size(solver: &Outcome, oracle_size: Option<usize>, extra: Value) -> Check {
    let agrees = solver.feasible == oracle_size.is_some()
        && (!solver.feasible || solver.size == oracle_size);
    Check {
        agrees,
        detail: json!({"feasible": oracle_size.is_some(), "size": oracle_size, "witness": extra}),
    }
}

fn set_outcome(found: Option<VertexSet>, certificate: Value) -> Outcome {
    match found {
        Some(s) => Outcome {
            feasible: true,
            size: Some(s.len()),
            solution: s,
            certificate,
        },
        None => Outcome {
            feasible: false,
            solution: VertexSet::new(),
            size: None,
            certificate: Value::Null,
        },
    }
}

fn edge_outcome(
    g: &Graph,
    found: Option<Vec<(usize, usize)>>,
    contract: bool,
) -> Result<Outcome, CliError> {
    let Some(f) = found else {
        return Ok(Outcome {
            feasible: false,
            solution: VertexSet::new(),
            size: None,
            certificate: Value::Null,
        });
    };
    let witness = if contract {
        let h = contract_edges(g, &f)?;
        let back: Vec<usize> = (0..h.n()).collect();
        json!({"edges": edge_ids(&f), "contracted_vertices": h.n(), "contracted_coloring": coloring_witness(&h, &back)})
    } else {
        let kept: Vec<(usize, usize)> = g
            .edge_list()
            .into_iter()
            .filter(|e| !f.contains(e))
            .collect();
        let h = Graph::from_edges(g.n(), &kept)?;
        let back: Vec<usize> = (0..g.n()).collect();
        json!({"edges": edge_ids(&f), "coloring": coloring_witness(&h, &back)})
    };
    Ok(Outcome {
        feasible: true,
        solution: endpoints(&f),
        size: Some(f.len()),
        certificate: witness,
    })
}

fn bip_outcome(g: &Graph, found: Option<VertexSet>) -> Outcome {
    let cert = found.as_ref().map(|s| {
        let (h, back) = g.without(s);
        json!({"coloring": coloring_witness(&h, &back)})
    });
    set_outcome(found, cert.unwrap_or(Value::Null))
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OracleUse {
    Off,
    /// Cross-check only when the graph is within the oracle's size limit.
    IfSmall,
    Required,
}

/// Runs the solver, and the oracle as `use_oracle` asks. A `None` check means the
/// oracle did not run.
pub fn run(
    problem: &Problem,
    stats: &Stats,
    use_oracle: OracleUse,
) -> Result<(Outcome, Option<Check>), CliError> {
    let common = problem.common();
    let g = read_graph(&common.graph)?;
    let oracle = Oracle::default();
    let small = g.n() <= oracle.max_vertices;
    if use_oracle == OracleUse::Required && !small {
        return Err(CliError::Precondition(format!(
            "graph has {} vertices, the oracle handles at most {}",
            g.n(),
            oracle.max_vertices
        )));
    }
    let check = use_oracle != OracleUse::Off && small;
    let seed = common.seed;
    match problem {
        Problem::Mincut { term, k, .. } => {
            let (s, t) = pick_terminals(&g, term, seed)?;
            let bound = k.unwrap_or(g.n());
            let found = min_vertex_cut(&g, s, t, bound)?.map(|(_, sep)| sep);
            let out = set_outcome(found, json!({"s": s + 1, "t": t + 1}));
            let chk = if check {
                let l = oracle.min_cut_size(&g, s, t)?.filter(|&l| l <= bound);
                Some(same_size(&out, l, Value::Null))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::Chain { term, .. } => {
            let (s, t) = pick_terminals(&g, term, seed)?;
            let chain = separator_chain(&g, s, t)?;
            let union = chain.union();
            let sets: Vec<Vec<usize>> = chain.sets().iter().map(ids).collect();
            let seps: Vec<Vec<usize>> = chain.separators.iter().map(ids).collect();
            let out = Outcome {
                feasible: true,
                size: Some(chain.size),
                solution: union.clone(),
                certificate: json!({"s": s + 1, "t": t + 1, "q": chain.q(), "separators": seps, "sets": sets}),
            };
            let chk = if check {
                let all = oracle.minimum_separators(&g, s, t)?;
                let brute: VertexSet = all.iter().flat_map(|x| x.iter()).collect();
                let size = all.first().map(|x| x.len());
                let agrees = brute == union && size == Some(chain.size);
                Some(Check {
                    agrees,
                    detail: json!({"size": size, "union": ids(&brute), "count": all.len()}),
                })
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::Torso { c, emit_td, .. } => {
            let c = id_list(c, g.n())?;
            let h = torso(&g, &c)?;
            let td = decompose(&h);
            stats.record_width(td.width());
            if let Some(path) = emit_td {
                write_file(path, &write_td(&td, h.n()))?;
            }
            let local: Vec<usize> = c.iter().collect();
            let lift = |f: Vec<(usize, usize)>| -> Vec<[usize; 2]> {
                f.iter()
                    .map(|&(u, v)| [local[u] + 1, local[v] + 1])
                    .collect()
            };
            let edges = lift(h.edge_list());
            let out = Outcome {
                feasible: true,
                size: Some(h.m()),
                solution: c.clone(),
                certificate: json!({"edges": edges, "red_edges": lift(h.red_edges()), "graph": write_graph(&h)}),
            };
            let chk = if check {
                let brute = brute_torso(&g, &c);
                let agrees = brute == edges;
                Some(Check {
                    agrees,
                    detail: json!({"edges": brute}),
                })
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::Reduce {
            terminals,
            term,
            k,
            emit_td,
            out: out_path,
            ..
        } => {
            let k = need_k(*k)?;
            let t_set = match terminals {
                Some(list) => id_list(list, g.n())?,
                None => {
                    let (s, t) = pick_terminals(&g, term, seed)?;
                    VertexSet::from(vec![s, t])
                }
            };
            let red = reduce_terminals(&g, &t_set, k)?;
            stats.record_reduced(red.reduced.n());
            let td = decompose(&red.reduced);
            stats.record_width(td.width());
            if let Some(path) = emit_td {
                write_file(path, &write_td(&td, red.reduced.n()))?;
            }
            let text = write_graph(&red.reduced);
            if let Some(path) = out_path {
                write_file(path, &text)?;
            }
            let origin: Vec<Value> = red
                .origin
                .iter()
                .map(|o| match o {
                    Origin::Vertex(v) => json!(v + 1),
                    Origin::Subdivision => json!("subdivision"),
                })
                .collect();
            let out = Outcome {
                feasible: true,
                size: Some(red.cover.len()),
                solution: red.cover.clone(),
                certificate: json!({
                    "terminals": ids(&t_set),
                    "kept": ids(&red.kept),
                    "origin_map": origin,
                    "graph": text,
                }),
            };
            let chk = if check {
                let mut brute = VertexSet::new();
                let pairs: Vec<(usize, usize)> = t_set
                    .iter()
                    .flat_map(|s| t_set.iter().filter(move |&t| s < t).map(move |t| (s, t)))
                    .filter(|&(s, t)| !g.has_edge(s, t))
                    .collect();
                for (s, t) in pairs {
                    brute = brute.union(&oracle.minimal_separator_union(&g, s, t, k)?);
                }
                // terminals are kept in the reduced graph but are not part of the cover
                let agrees = brute.is_subset(&red.kept);
                Some(Check {
                    agrees,
                    detail: json!({"minimal_separator_union": ids(&brute)}),
                })
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::StableCut { term, k, .. }
        | Problem::HereditaryCut { term, k, .. }
        | Problem::ConnectedCut { term, k, .. } => {
            let k = need_k(*k)?;
            let (s, t) = pick_terminals(&g, term, seed)?;
            let (found, brute) = match problem {
                Problem::ConnectedCut { .. } => (
                    connected_cut_with(&g, s, t, k, stats)?,
                    if check {
                        Some(oracle.connected_cut(&g, s, t, k)?)
                    } else {
                        None
                    },
                ),
                _ => {
                    let class = match problem {
                        Problem::HereditaryCut { class, .. } => load_class(class)?,
                        _ => GraphClass::edgeless(),
                    };
                    (
                        g_mincut_with(&g, s, t, k, &class, stats)?,
                        if check {
                            Some(oracle.g_mincut(&g, s, t, k, &class)?)
                        } else {
                            None
                        },
                    )
                }
            };
            let out = set_outcome(found, json!({"s": s + 1, "t": t + 1}));
            let chk = brute.map(|b| same_size(&out, b.as_ref().map(|x| x.len()), opt_ids(&b)));
            Ok((out, chk))
        }
        Problem::Eivc { term, k, .. } => {
            let k = need_k(*k)?;
            let (s, t) = pick_terminals(&g, term, seed)?;
            let found = edge_induced_vertex_cut_with(&g, s, t, k, stats)?;
            let out = match found {
                Some((sep, f)) => Outcome {
                    feasible: true,
                    size: Some(sep.len()),
                    solution: sep,
                    certificate: json!({"s": s + 1, "t": t + 1, "edges": edge_ids(&f)}),
                },
                None => set_outcome(None, Value::Null),
            };
            let chk = if check {
                let b = oracle.edge_induced_vertex_cut(&g, s, t, k)?;
                let size = b.as_ref().map(|(sep, _)| sep.len());
                Some(same_size(
                    &out,
                    size,
                    b.map_or(
                        Value::Null,
                        |(sep, f)| json!({"separator": ids(&sep), "edges": edge_ids(&f)}),
                    ),
                ))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::Multicut {
            pairs, k, class, ..
        } => {
            let k = need_k(*k)?;
            let (cut, uncut) = parse_pairs(&read_text(pairs)?, g.n())?;
            let class = load_class(class)?;
            let found = multicut_uncut_with(&g, &cut, &uncut, k, &class, stats)?;
            let out = set_outcome(
                found,
                json!({"cut_pairs": cut.len(), "uncut_pairs": uncut.len()}),
            );
            let chk = if check {
                let b = oracle.multicut_uncut(&g, &cut, &uncut, k, &class)?;
                Some(same_size(&out, b.as_ref().map(|x| x.len()), opt_ids(&b)))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::Bipartize { k, class, .. } | Problem::StableBipartize { k, class, .. } => {
            let k = need_k(*k)?;
            let class = match class {
                Some(c) => load_class(c)?,
                None if matches!(problem, Problem::StableBipartize { .. }) => {
                    GraphClass::edgeless()
                }
                None => GraphClass::all(),
            };
            let found = g_bipartization_with(&g, k, &class, stats)?;
            let out = bip_outcome(&g, found);
            let chk = if check {
                let b = oracle.bipartization(&g, k, &class, false)?;
                Some(same_size(&out, b.as_ref().map(|x| x.len()), opt_ids(&b)))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::ExactStableBipartize { k, .. } => {
            let k = need_k(*k)?;
            let found = exact_stable_bipartization_with(&g, k, stats)?;
            let out = bip_outcome(&g, found);
            let chk = if check {
                let b = oracle.bipartization(&g, k, &GraphClass::edgeless(), true)?;
                Some(same_size(&out, b.as_ref().map(|x| x.len()), opt_ids(&b)))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::EdgeBipartize { k, class, .. } => {
            let k = need_k(*k)?;
            let class = load_class(class.as_deref().unwrap_or("all"))?;
            let found = g_edge_bipartization_with(&g, k, &class, stats)?;
            let out = edge_outcome(&g, found, false)?;
            let chk = if check {
                let b = oracle.edge_bipartization(&g, k, &class)?;
                let witness = b.as_ref().map_or(Value::Null, |f| json!(edge_ids(f)));
                Some(same_size(&out, b.map(|f| f.len()), witness))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::ContractBipartite { k, .. } => {
            let k = need_k(*k)?;
            let found = bipartite_contraction_with(&g, k, stats)?;
            let out = edge_outcome(&g, found, true)?;
            let chk = if check {
                let b = oracle.contraction(&g, k)?;
                let witness = b.as_ref().map_or(Value::Null, |f| json!(edge_ids(f)));
                Some(same_size(&out, b.map(|f| f.len()), witness))
            } else {
                None
            };
            Ok((out, chk))
        }
        Problem::Hck { target, .. } => {
            let (h, lists) = parse_target(&read_text(target)?, g.n())?;
            let found = hck_solve_with(&g, &h, &lists, stats)?;
            let out = match found {
                Some(col) => {
                    verify_coloring(&g, &h, &lists, &col)?;
                    let theta: Vec<usize> = col.theta.iter().map(|c| c + 1).collect();
                    Outcome {
                        feasible: true,
                        size: Some(col.exceptional.len()),
                        certificate: json!({"theta": theta}),
                        solution: col.exceptional,
                    }
                }
                None => set_outcome(None, Value::Null),
            };
            let chk = if check {
                let b = oracle.hck(&g, &h, &lists)?;
                let agrees = b.is_some() == out.feasible;
                let witness = b.map_or(Value::Null, |c| {
                    json!(c.theta.iter().map(|x| x + 1).collect::<Vec<_>>())
                });
                Some(Check {
                    agrees,
                    detail: json!({"feasible": !witness.is_null(), "theta": witness}),
                })
            } else {
                None
            };
            Ok((out, chk))
        }
    }
}

/// Torso edges by definition: u, v ∈ C joined by a path whose interior avoids C.
fn brute_torso(g: &Graph, c: &VertexSet) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for u in c.iter() {
        let mut blocked = c.mask(g.n());
        blocked[u] = false;
        let reach = g.reach([u], &blocked);
        for v in c.iter().filter(|&v| v > u) {
            let direct = g.has_edge(u, v);
            let through = g.neighbors(v).iter().any(|&x| !c.contains(x) && reach[x]);
            if direct || through {
                out.push([u + 1, v + 1]);
            }
        }
    }
    out
}

fn write_file(path: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

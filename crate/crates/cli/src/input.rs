//! Reading graphs, terminal-pair files and homomorphism targets. Every id in a file or
//! on the command line is 1-based.

use std::collections::BTreeMap;
use std::fs;

use serde::Deserialize;
use twr_core::dp::TerminalPair;
use twr_core::graph::{parse_graph, Graph, VertexSet};
use twr_core::hck::{HomTarget, ListAssignment};

use crate::CliError;

pub fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::Parse(e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

pub fn read_graph(path: &str) -> Result<Graph, CliError> {
    parse_graph(&read_text(path)?).map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

/// Converts a 1-based id to 0-based, checking the range.
pub fn vertex(id: usize, n: usize) -> Result<usize, CliError> {
    if id == 0 || id > n {
        return Err(CliError::Precondition(format!(
            "vertex {id} out of range 1..={n}"
        )));
    }
    Ok(id - 1)
}

/// Comma- or space-separated 1-based ids.
pub fn id_list(text: &str, n: usize) -> Result<VertexSet, CliError> {
    let mut out = VertexSet::new();
    for tok in text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let id: usize = tok
            .parse()
            .map_err(|_| CliError::Parse(format!("bad vertex id {tok:?}")))?;
        out.insert(vertex(id, n)?);
    }
    Ok(out)
}

/// Lines `cut <X ids> | <Y ids>` and `uncut <X ids> | <Y ids>`; `#` starts a comment.
pub fn parse_pairs(
    text: &str,
    n: usize,
) -> Result<(Vec<TerminalPair>, Vec<TerminalPair>), CliError> {
    let mut cut = Vec::new();
    let mut uncut = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| CliError::Parse(format!("pairs line {}: {msg}", i + 1));
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err("expected `cut X | Y`"))?;
        let (x, y) = rest.split_once('|').ok_or_else(|| err("missing `|`"))?;
        let pair = TerminalPair::new(id_list(x, n)?, id_list(y, n)?);
        match kind {
            "cut" => cut.push(pair),
            "uncut" => uncut.push(pair),
            other => return Err(err(&format!("unknown pair kind {other:?}"))),
        }
    }
    Ok((cut, uncut))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetGraph {
    vertices: usize,
    #[serde(default)]
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    loops: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetDoc {
    #[serde(rename = "H")]
    h: TargetGraph,
    #[serde(rename = "C")]
    c: Vec<usize>,
    #[serde(rename = "K")]
    k: BTreeMap<String, usize>,
    #[serde(default)]
    lists: Option<Vec<Vec<usize>>>,
}

/// `{"H": {"vertices", "edges", "loops"}, "C": [..], "K": {"id": cap}, "lists": [[..]]}`;
/// `lists` is optional and defaults to every target vertex for every graph vertex.
pub fn parse_target(text: &str, n: usize) -> Result<(HomTarget, ListAssignment), CliError> {
    let doc: TargetDoc =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("target: {e}")))?;
    let hv = doc.h.vertices;
    let mut edges = Vec::new();
    for [a, b] in doc.h.edges {
        edges.push((vertex(a, hv)?, vertex(b, hv)?));
    }
    for l in doc.h.loops {
        let v = vertex(l, hv)?;
        edges.push((v, v));
    }
    let mut caps = BTreeMap::new();
    for (key, &cap) in &doc.k {
        let id: usize = key
            .parse()
            .map_err(|_| CliError::Parse(format!("target: bad K key {key:?}")))?;
        let v = vertex(id, hv)?;
        if !doc.c.contains(&id) {
            return Err(CliError::Precondition(format!(
                "K names {id}, which is not in C"
            )));
        }
        caps.insert(v, cap);
    }
    for &c in &doc.c {
        if !doc.k.contains_key(&c.to_string()) {
            return Err(CliError::Precondition(format!(
                "C vertex {c} has no cap in K"
            )));
        }
    }
    let target = HomTarget::new(hv, &edges, &caps).map_err(CliError::from)?;
    let lists = match doc.lists {
        None => ListAssignment::full(n, &target),
        Some(lists) => {
            if lists.len() != n {
                return Err(CliError::Precondition(format!(
                    "{} lists for {n} vertices",
                    lists.len()
                )));
            }
            let zero: Result<Vec<Vec<usize>>, CliError> = lists
                .iter()
                .map(|l| l.iter().map(|&c| vertex(c, hv)).collect())
                .collect();
            ListAssignment::new(&zero?, &target).map_err(CliError::from)?
        }
    };
    Ok((target, lists))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_file() {
        let (cut, uncut) = parse_pairs("# demo\ncut 1 2 | 3\nuncut 4 | 5,6\n", 6).unwrap();
        assert_eq!(cut.len(), 1);
        assert_eq!(cut[0].x, VertexSet::from(vec![0, 1]));
        assert_eq!(uncut[0].y, VertexSet::from(vec![4, 5]));
        assert!(matches!(
            parse_pairs("cut 1 2 3", 6),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(
            parse_pairs("cut 1 | 9", 6),
            Err(CliError::Precondition(_))
        ));
    }

    #[test]
    fn target_document() {
        let doc = r#"{"H": {"vertices": 3, "edges": [[1, 2], [2, 3], [1, 3]], "loops": [3]},
                      "C": [3], "K": {"3": 2}}"#;
        let (t, lists) = parse_target(doc, 4).unwrap();
        assert_eq!(t.k(), 2);
        assert!(t.adjacent(2, 2));
        assert_eq!(lists.len(), 4);
        let missing = r#"{"H": {"vertices": 3, "edges": [[1, 2]]}, "C": [3], "K": {}}"#;
        assert!(matches!(
            parse_target(missing, 1),
            Err(CliError::Precondition(_))
        ));
        assert!(matches!(parse_target("{", 1), Err(CliError::Parse(_))));
    }
}

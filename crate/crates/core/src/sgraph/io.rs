//! Plain-text edge-list format.
//!
//! ```text
//! # optional comment lines
//! n m
//! i j s      (m lines, s in {-1, +1, -, +})
//! ```
//!
//! Node ids that all fall in `0..n` are kept as-is. Otherwise ids are
//! compacted to `0..n` in order of first appearance, which lets 1-based or
//! sparse-id files load unchanged. The writer always emits `-1`/`+1`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use super::{Edge, Sign, SignedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed {what}: {text:?}")]
    Malformed { line: usize, what: &'static str, text: String },
    #[error("line {line}: invalid sign {token:?} (expected -1, +1, - or +)")]
    BadSign { line: usize, token: String },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} edge lines were read")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("line {line}: edge introduces node {node} beyond the declared {n} nodes")]
    TooManyNodes { line: usize, node: u64, n: usize },
}

fn parse_sign(token: &str, line: usize) -> Result<Sign, ParseError> {
    match token {
        "+1" | "1" | "+" => Ok(Sign::Positive),
        "-1" | "-" => Ok(Sign::Negative),
        _ => Err(ParseError::BadSign { line, token: token.to_string() }),
    }
}

fn parse_id(token: &str, line: usize, text: &str) -> Result<u64, ParseError> {
    token
        .parse::<u64>()
        .map_err(|_| ParseError::Malformed { line, what: "node id", text: text.to_string() })
}

/// Parses the edge-list format into a validated [`SignedGraph`].
pub fn parse_edge_list(text: &str) -> Result<SignedGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    // (line, raw u, raw v, sign)
    let mut raw: Vec<(usize, u64, u64, Sign)> = Vec::new();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();

    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let body = full.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 2 {
                    return Err(ParseError::Malformed { line, what: "header", text: body.to_string() });
                }
                let parse = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| ParseError::Malformed { line, what: "header", text: body.to_string() })
                };
                header = Some((parse(tokens[0])?, parse(tokens[1])?));
            }
            Some(_) => {
                if tokens.len() != 3 {
                    return Err(ParseError::Malformed { line, what: "edge", text: body.to_string() });
                }
                let u = parse_id(tokens[0], line, body)?;
                let v = parse_id(tokens[1], line, body)?;
                let sign = parse_sign(tokens[2], line)?;
                if u == v {
                    return Err(ParseError::SelfLoop { line, node: u });
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(ParseError::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
                }
                raw.push((line, u, v, sign));
            }
        }
    }

    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if raw.len() != m {
        return Err(ParseError::EdgeCountMismatch { declared: m, found: raw.len() });
    }

    let in_range = raw.iter().all(|&(_, u, v, _)| u < n as u64 && v < n as u64);
    let mut edges = Vec::with_capacity(m);
    if in_range {
        for &(_, u, v, sign) in &raw {
            edges.push((u as usize, v as usize, sign));
        }
    } else {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        for &(line, u, v, sign) in &raw {
            let mut local = [0usize; 2];
            for (slot, id) in local.iter_mut().zip([u, v]) {
                let next = ids.len();
                let k = *ids.entry(id).or_insert(next);
                if k >= n {
                    return Err(ParseError::TooManyNodes { line, node: id, n });
                }
                *slot = k;
            }
            edges.push((local[0], local[1], sign));
        }
    }

    // Loops, duplicates and ranges were checked above with line numbers.
    Ok(SignedGraph::new(n, edges).expect("edge list validated during parsing"))
}

/// Writes `g` in the edge-list format.
pub fn serialise(g: &SignedGraph) -> String {
    serialise_with_header(g, &[])
}

/// Writes `g` preceded by one `# ` comment line per entry of `comments`.
pub fn serialise_with_header(g: &SignedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{} {}", g.node_count(), g.edge_count());
    for &Edge { u, v, sign } in g.edges() {
        let _ = writeln!(out, "{u} {v} {sign}");
    }
    out
}

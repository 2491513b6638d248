use std::fmt::Write as _;

use crate::sgraph::{Colouring, SignedGraph};

/// Graphviz rendering: negative edges dashed, positive solid, frustrated
/// edges red and bold, black nodes filled black.
pub fn export_dot(g: &SignedGraph, colouring: Option<&Colouring>) -> String {
    let mut out = String::from("graph signed {\n  node [shape=circle, style=filled, fillcolor=white, fontcolor=black];\n");
    if let Some(x) = colouring {
        for i in x.black_nodes() {
            let _ = writeln!(out, "  {i} [fillcolor=black, fontcolor=white];");
        }
    }
    for i in (0..g.node_count()).filter(|&i| g.degree(i) == 0) {
        let _ = writeln!(out, "  {i};");
    }
    for e in g.edges() {
        let style = if e.sign.is_negative() { "dashed" } else { "solid" };
        let frustrated = colouring.is_some_and(|x| e.is_frustrated(x.is_black(e.u), x.is_black(e.v)));
        if frustrated {
            let _ = writeln!(out, "  {} -- {} [style={style}, color=red, penwidth=2];", e.u, e.v);
        } else {
            let _ = writeln!(out, "  {} -- {} [style={style}];", e.u, e.v);
        }
    }
    out.push_str("}\n");
    out
}

/// Number of edges drawn in the frustrated style.
pub fn count_frustrated_in_dot(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("--") && l.contains("color=red")).count()
}

#![allow(dead_code)]

use proptest::prelude::*;

use frustration::{Colouring, Sign, SignedGraph};

/// Random simple signed graph on `min_n..=max_n` nodes: every pair is an
/// edge with probability about one half, with a random sign.
pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        (Just(n), proptest::collection::vec(0u8..4, pairs)).prop_map(|(n, codes)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    match codes[k] {
                        0 => edges.push((u, v, Sign::Negative)),
                        1 => edges.push((u, v, Sign::Positive)),
                        _ => {}
                    }
                    k += 1;
                }
            }
            SignedGraph::new(n, edges).expect("simple graph")
        })
    })
}

pub fn arb_graph_and_colouring(min_n: usize, max_n: usize) -> impl Strategy<Value = (SignedGraph, Colouring)> {
    arb_graph(min_n, max_n).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), proptest::collection::vec(any::<bool>(), n).prop_map(Colouring::from_bools))
    })
}

/// Frustrated edges counted straight from the definition.
pub fn count_by_definition(g: &SignedGraph, x: &Colouring) -> usize {
    g.edges()
        .iter()
        .filter(|e| {
            let same = x.is_black(e.u) == x.is_black(e.v);
            if e.sign == Sign::Positive {
                !same
            } else {
                same
            }
        })
        .count()
}

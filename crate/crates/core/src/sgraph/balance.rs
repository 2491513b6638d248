//! Linear-time balance detection by spanning-forest sign propagation.

use std::collections::VecDeque;

use super::{Colouring, SignedGraph};

/// Evidence for either outcome of a balance test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceCertificate {
    /// A colouring with no frustrated edge.
    Balanced(Colouring),
    /// Node sequence `v0, v1, ..., vk` of a simple cycle (closing edge
    /// `vk–v0` implied) whose edge-sign product is −1.
    NegativeCycle(Vec<usize>),
}

impl BalanceCertificate {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceCertificate::Balanced(_))
    }
}

struct Forest {
    colour: Vec<bool>,
    parent: Vec<usize>,
    depth: Vec<usize>,
}

/// BFS forest rooted at the smallest id of each component; roots are white
/// and every tree edge is unfrustrated.
fn propagate(g: &SignedGraph) -> Forest {
    let n = g.node_count();
    let mut colour = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for nb in g.neighbours(x) {
                if !seen[nb.node] {
                    seen[nb.node] = true;
                    // same colour across a positive edge, opposite across a negative one
                    colour[nb.node] = colour[x] ^ nb.sign.is_negative();
                    parent[nb.node] = x;
                    depth[nb.node] = depth[x] + 1;
                    queue.push_back(nb.node);
                }
            }
        }
    }
    Forest { colour, parent, depth }
}

/// Colouring produced by sign propagation along a BFS forest. Only non-tree
/// edges can be frustrated, so its frustration count is at most the circuit
/// rank.
pub fn spanning_forest_colouring(g: &SignedGraph) -> Colouring {
    Colouring::from_bools(propagate(g).colour)
}

/// Tests balance in `O(n + m)`, returning a certificate either way.
pub fn is_balanced(g: &SignedGraph) -> BalanceCertificate {
    let forest = propagate(g);
    let bad = g
        .edges()
        .iter()
        .find(|e| e.is_frustrated(forest.colour[e.u], forest.colour[e.v]));
    let Some(e) = bad else {
        return BalanceCertificate::Balanced(Colouring::from_bools(forest.colour));
    };

    // Walk both endpoints up to their lowest common ancestor.
    let (mut a, mut b) = (e.u, e.v);
    let mut left = vec![a];
    let mut right = vec![b];
    while forest.depth[a] > forest.depth[b] {
        a = forest.parent[a];
        left.push(a);
    }
    while forest.depth[b] > forest.depth[a] {
        b = forest.parent[b];
        right.push(b);
    }
    while a != b {
        a = forest.parent[a];
        left.push(a);
        b = forest.parent[b];
        right.push(b);
    }
    // left: u .. lca, right: v .. lca. Cycle: u .. lca .. v, closed by v–u.
    right.pop();
    right.reverse();
    left.extend(right);
    BalanceCertificate::NegativeCycle(left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgraph::Sign;

    fn cycle_sign(g: &SignedGraph, cycle: &[usize]) -> i64 {
        (0..cycle.len())
            .map(|k| g.sign_between(cycle[k], cycle[(k + 1) % cycle.len()]))
            .product()
    }

    #[test]
    fn all_positive_graph_is_balanced_with_uniform_colouring() {
        let g = SignedGraph::new(4, [(0, 1, Sign::Positive), (1, 2, Sign::Positive), (2, 3, Sign::Positive)])
            .unwrap();
        assert_eq!(is_balanced(&g), BalanceCertificate::Balanced(Colouring::all_white(4)));
    }

    #[test]
    fn four_cycle_with_one_negative_edge() {
        let g = SignedGraph::new(
            4,
            [(0, 1, Sign::Positive), (1, 2, Sign::Positive), (2, 3, Sign::Positive), (0, 3, Sign::Negative)],
        )
        .unwrap();
        match is_balanced(&g) {
            BalanceCertificate::NegativeCycle(c) => {
                assert_eq!(c.len(), 4);
                assert_eq!(cycle_sign(&g, &c), -1);
            }
            other => panic!("expected a negative cycle, got {other:?}"),
        }
    }

    #[test]
    fn empty_graph_is_balanced() {
        assert!(is_balanced(&SignedGraph::empty(0)).is_balanced());
        assert!(is_balanced(&SignedGraph::empty(3)).is_balanced());
    }

    #[test]
    fn forest_colouring_bounded_by_circuit_rank() {
        let g = SignedGraph::new(
            4,
            [
                (0, 1, Sign::Negative),
                (0, 2, Sign::Negative),
                (0, 3, Sign::Negative),
                (1, 2, Sign::Negative),
                (1, 3, Sign::Negative),
                (2, 3, Sign::Negative),
            ],
        )
        .unwrap();
        let x = spanning_forest_colouring(&g);
        assert!(g.frustration_count(&x).unwrap() <= g.circuit_rank());
    }
}

//! Exhaustive ground truth for small graphs.
//!
//! Every colouring with node 0 held fixed is visited in Gray-code order, so
//! consecutive colourings differ in exactly one node and the frustration
//! count is updated in `O(degree)`. No pruning of any kind is done.

use std::time::Instant;

use thiserror::Error;

use crate::sgraph::{Colouring, SignedGraph};
use crate::solver::{FrustrationResult, SolveStatus, SolverStats};

/// Largest graph the oracle accepts: `2^(n-1)` colourings are visited.
pub const MAX_ORACLE_NODES: usize = 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {0} nodes; the oracle is limited to {MAX_ORACLE_NODES}")]
    TooLarge(usize),
}

/// Change in frustration count if node `v` is flipped.
fn flip_delta(g: &SignedGraph, colour: &[bool], v: usize) -> isize {
    let mut delta = 0isize;
    for nb in g.neighbours(v) {
        let frustrated = match nb.sign {
            crate::sgraph::Sign::Positive => colour[v] != colour[nb.node],
            crate::sgraph::Sign::Negative => colour[v] == colour[nb.node],
        };
        delta += if frustrated { -1 } else { 1 };
    }
    delta
}

/// Visits all `2^(n-1)` colourings with node 0 coloured `node0_black`,
/// calling `visit(step, colouring, count)` for each.
pub(crate) fn enumerate<F>(g: &SignedGraph, node0_black: bool, mut visit: F)
where
    F: FnMut(u64, &[bool], usize),
{
    let n = g.node_count();
    let mut colour = vec![false; n];
    if n == 0 {
        visit(0, &colour, 0);
        return;
    }
    colour[0] = node0_black;
    let mut count = g.frustration_count(&Colouring::from_bools(colour.clone())).unwrap_or(0) as isize;
    visit(0, &colour, count as usize);
    let total: u64 = 1u64 << (n - 1);
    for step in 1..total {
        let v = 1 + step.trailing_zeros() as usize;
        count += flip_delta(g, &colour, v);
        colour[v] = !colour[v];
        visit(step, &colour, count as usize);
    }
}

fn run(g: &SignedGraph, node0_black: bool) -> Result<FrustrationResult, OracleError> {
    let n = g.node_count();
    if n > MAX_ORACLE_NODES {
        return Err(OracleError::TooLarge(n));
    }
    let start = Instant::now();
    let mut best = usize::MAX;
    let mut best_colour = vec![false; n];
    let mut visited = 0u64;
    enumerate(g, node0_black, |_, colour, count| {
        visited += 1;
        if count < best {
            best = count;
            best_colour.copy_from_slice(colour);
        }
    });
    let colouring = Colouring::from_bools(best_colour);
    let deletion_set = g.frustrated_edges(&colouring).expect("length matches");
    Ok(FrustrationResult {
        value: best,
        colouring,
        deletion_set,
        status: SolveStatus::Optimal,
        lower_bound: best,
        upper_bound: best,
        stats: SolverStats {
            nodes_explored: visited,
            root_lower_bound: 0,
            wall_time: start.elapsed(),
            ..SolverStats::default()
        },
    })
}

/// Exact `L(G)` by full enumeration with node 0 white. Returns the first
/// minimiser in Gray-code order.
pub fn brute_force(g: &SignedGraph) -> Result<FrustrationResult, OracleError> {
    run(g, false)
}

/// As [`brute_force`] but with node 0 fixed black.
pub fn brute_force_node0_black(g: &SignedGraph) -> Result<FrustrationResult, OracleError> {
    run(g, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgraph::Sign;

    fn complete(n: usize, sign: Sign) -> SignedGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j, sign));
            }
        }
        SignedGraph::new(n, e).unwrap()
    }

    #[test]
    fn all_positive_is_zero() {
        assert_eq!(brute_force(&complete(6, Sign::Positive)).unwrap().value, 0);
    }

    #[test]
    fn all_negative_k5() {
        assert_eq!(brute_force(&complete(5, Sign::Negative)).unwrap().value, 4);
    }

    #[test]
    fn k3_one_negative_enumeration() {
        let g = SignedGraph::new(3, [(0, 1, Sign::Positive), (0, 2, Sign::Positive), (1, 2, Sign::Negative)])
            .unwrap();
        // All four colourings with node 0 white.
        let mut counts = Vec::new();
        enumerate(&g, false, |_, _, c| counts.push(c));
        counts.sort();
        assert_eq!(counts, vec![1, 1, 1, 3]);
        assert_eq!(brute_force(&g).unwrap().value, 1);
    }

    #[test]
    fn trivial_sizes() {
        assert_eq!(brute_force(&SignedGraph::empty(0)).unwrap().value, 0);
        assert_eq!(brute_force(&SignedGraph::empty(1)).unwrap().value, 0);
    }

    #[test]
    fn guards_large_graphs() {
        assert_eq!(brute_force(&SignedGraph::empty(29)).unwrap_err(), OracleError::TooLarge(29));
    }

    #[test]
    fn incremental_counts_match_recount() {
        let g = crate::gen::erdos_renyi(14, 40, 17, 5).unwrap();
        let mut checked = 0;
        enumerate(&g, false, |step, colour, count| {
            if step % 1024 == 0 || step < 64 {
                let direct = g.frustration_count(&Colouring::from_bools(colour.to_vec())).unwrap();
                assert_eq!(count, direct, "step {step}");
                checked += 1;
            }
        });
        assert!(checked > 8);
    }

    #[test]
    fn complement_symmetry() {
        for seed in 0..10 {
            let g = crate::gen::erdos_renyi(10, 25, 12, seed).unwrap();
            let white = brute_force(&g).unwrap();
            let black = brute_force_node0_black(&g).unwrap();
            assert_eq!(white.value, black.value);
            assert!(!white.colouring.is_black(0));
            assert!(black.colouring.is_black(0));
        }
    }
}

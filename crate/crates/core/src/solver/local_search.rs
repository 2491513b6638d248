use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::sgraph::{Colouring, GraphError, SignedGraph};

/// First-improvement single-node flipping from `start`.
///
/// Nodes are scanned in a seeded random order; any node with more
/// frustrated than unfrustrated incident edges is flipped. Stops at a local
/// optimum where no single flip lowers the count.
pub fn local_search(g: &SignedGraph, start: &Colouring, seed: u64) -> Result<(Colouring, usize), GraphError> {
    let mut count = g.frustration_count(start)?;
    let n = g.node_count();
    let mut colour = start.as_slice().to_vec();
    let mut frustrated = vec![0usize; n];
    for e in g.edges() {
        if e.is_frustrated(colour[e.u], colour[e.v]) {
            frustrated[e.u] += 1;
            frustrated[e.v] += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        order.shuffle(&mut rng);
        let mut improved = false;
        for &v in &order {
            let deg = g.degree(v);
            if 2 * frustrated[v] <= deg {
                continue;
            }
            for nb in g.neighbours(v) {
                let was = match nb.sign {
                    crate::sgraph::Sign::Positive => colour[v] != colour[nb.node],
                    crate::sgraph::Sign::Negative => colour[v] == colour[nb.node],
                };
                if was {
                    frustrated[nb.node] -= 1;
                } else {
                    frustrated[nb.node] += 1;
                }
            }
            count = count + deg - 2 * frustrated[v];
            frustrated[v] = deg - frustrated[v];
            colour[v] = !colour[v];
            improved = true;
        }
        if !improved {
            break;
        }
    }
    Ok((Colouring::from_bools(colour), count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::sgraph::{is_balanced, BalanceCertificate, Sign};
    use crate::solver::{solve_exact, upper_bound_trivial, SolverOptions};

    #[test]
    fn balanced_start_is_kept() {
        let g = gen::balanced_random(40, 100, 2).unwrap();
        let BalanceCertificate::Balanced(x) = is_balanced(&g) else { panic!() };
        let (y, c) = local_search(&g, &x, 0).unwrap();
        assert_eq!((y, c), (x, 0));
    }

    #[test]
    fn single_negative_edge_needs_one_flip() {
        let g = SignedGraph::new(2, [(0, 1, Sign::Negative)]).unwrap();
        let (y, c) = local_search(&g, &Colouring::all_white(2), 3).unwrap();
        assert_eq!(c, 0);
        assert_ne!(y.is_black(0), y.is_black(1));
    }

    #[test]
    fn result_is_a_local_optimum_and_sandwiched() {
        let g = gen::erdos_renyi(15, 50, 25, 11).unwrap();
        let exact = solve_exact(&g, &SolverOptions::default()).unwrap().value;
        for seed in 0..10 {
            let (y, c) = local_search(&g, &Colouring::all_white(15), seed).unwrap();
            assert_eq!(g.frustration_count(&y).unwrap(), c);
            assert!(c >= exact);
            assert!(c <= g.negative_count().min(g.edge_count() / 2));
            assert!(upper_bound_trivial(&g) >= exact);
            for v in 0..15 {
                let mut z = y.clone();
                z.flip(v);
                assert!(g.frustration_count(&z).unwrap() >= c);
            }
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let g = SignedGraph::empty(3);
        assert!(local_search(&g, &Colouring::all_white(2), 0).is_err());
    }
}

//! Exact computation of the frustration index.
//!
//! [`solve_exact`] splits the graph into connected components, settles
//! balanced components with their certificate, and runs a combinatorial
//! branch-and-bound over node colourings on the rest. Incumbents come from
//! [`local_search`] and the trivial upper bounds; lower bounds come from
//! [`lower_bound_root`] and the search itself.

mod bnb;
mod bounds;
mod local_search;

pub use bounds::{lower_bound_root, upper_bound_trivial};
pub use local_search::local_search;

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sgraph::{is_balanced, spanning_forest_colouring, BalanceCertificate, Colouring, Edge, SignedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("time limit must be positive")]
    ZeroTimeLimit,
    #[error("thread count must be at least 1")]
    ZeroThreads,
    #[error("failed to start worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOptions {
    /// Prune subtrees containing a completely decided node whose flip
    /// would strictly lower the count.
    pub use_net_degree_pruning: bool,
    /// Fix the first branching node (largest unsigned degree) to black.
    pub use_fixing: bool,
    /// Random starts for the local-search incumbent.
    pub heuristic_restarts: usize,
    pub time_limit: Duration,
    pub threads: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            use_net_degree_pruning: true,
            use_fixing: true,
            heuristic_restarts: 5,
            time_limit: Duration::from_secs(3600),
            threads: 1,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.time_limit.is_zero() {
            return Err(SolverError::ZeroTimeLimit);
        }
        if self.threads == 0 {
            return Err(SolverError::ZeroThreads);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// The time limit was hit; `value` is only an upper bound.
    TimedOut,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub nodes_explored: u64,
    pub root_lower_bound: usize,
    pub heuristic_upper_bound: usize,
    pub components: usize,
    pub wall_time: Duration,
}

/// Outcome of a frustration computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrustrationResult {
    /// `L(G)` when optimal, otherwise the best count found.
    pub value: usize,
    /// Colouring whose frustration count is `value`.
    pub colouring: Colouring,
    /// Edges frustrated under `colouring`.
    pub deletion_set: Vec<Edge>,
    pub status: SolveStatus,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub stats: SolverStats,
}

impl FrustrationResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

pub(crate) struct ComponentOutcome {
    pub value: usize,
    pub colouring: Vec<bool>,
    pub lower: usize,
    pub proven: bool,
    pub nodes: u64,
    pub root_lower: usize,
    pub heuristic: usize,
}

/// Best local optimum over the trivial colourings and seeded random starts.
fn heuristic_incumbent(g: &SignedGraph, restarts: usize, seed: u64) -> (Colouring, usize) {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![Colouring::all_white(n), spanning_forest_colouring(g)];
    for _ in 0..restarts {
        let bits: Vec<bool> = (0..n).map(|_| rng.next_u32() & 1 == 1).collect();
        starts.push(Colouring::from_bools(bits));
    }
    let mut best: Option<(Colouring, usize)> = None;
    for (k, start) in starts.into_iter().enumerate() {
        let (c, v) = local_search(g, &start, seed.wrapping_add(k as u64)).expect("length matches");
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((c, v));
        }
    }
    best.expect("at least one start")
}

fn solve_component(g: &SignedGraph, opts: &SolverOptions, deadline: Instant) -> ComponentOutcome {
    if let BalanceCertificate::Balanced(x) = is_balanced(g) {
        return ComponentOutcome {
            value: 0,
            colouring: x.as_slice().to_vec(),
            lower: 0,
            proven: true,
            nodes: 0,
            root_lower: 0,
            heuristic: 0,
        };
    }
    let root_lower = lower_bound_root(g);
    let (colouring, heuristic) = heuristic_incumbent(g, opts.heuristic_restarts, opts.seed);
    debug_assert!(heuristic <= upper_bound_trivial(g));
    if heuristic == root_lower {
        return ComponentOutcome {
            value: heuristic,
            colouring: colouring.as_slice().to_vec(),
            lower: root_lower,
            proven: true,
            nodes: 0,
            root_lower,
            heuristic,
        };
    }
    let out = bnb::search(g, opts, deadline, colouring.as_slice().to_vec(), heuristic, root_lower);
    ComponentOutcome { root_lower, heuristic, ..out }
}

fn solve_all(g: &SignedGraph, opts: &SolverOptions, start: Instant) -> FrustrationResult {
    let deadline = start + opts.time_limit;
    let n = g.node_count();
    let (labels, count) = g.components();
    let mut members = vec![Vec::new(); count];
    for v in 0..n {
        members[labels[v]].push(v);
    }

    // Isolated nodes stay white.
    let mut colour = vec![false; n];
    let mut stats = SolverStats { components: count, ..SolverStats::default() };
    let (mut value, mut lower, mut proven) = (0usize, 0usize, true);
    for nodes in members.iter().filter(|c| c.len() > 1) {
        let sub = g.induced_subgraph(nodes);
        let out = solve_component(&sub, opts, deadline);
        for (k, &v) in nodes.iter().enumerate() {
            colour[v] = out.colouring[k];
        }
        value += out.value;
        lower += out.lower;
        proven &= out.proven;
        stats.nodes_explored += out.nodes;
        stats.root_lower_bound += out.root_lower;
        stats.heuristic_upper_bound += out.heuristic;
    }

    let colouring = Colouring::from_bools(colour);
    let deletion_set = g.frustrated_edges(&colouring).expect("length matches");
    assert_eq!(deletion_set.len(), value, "certificate recount disagrees with solver value");
    stats.wall_time = start.elapsed();
    FrustrationResult {
        value,
        colouring,
        deletion_set,
        status: if proven { SolveStatus::Optimal } else { SolveStatus::TimedOut },
        lower_bound: if proven { value } else { lower },
        upper_bound: value,
        stats,
    }
}

/// Computes `L(G)` exactly, or a flagged `[lower, upper]` pair when the
/// time limit is reached first.
pub fn solve_exact(g: &SignedGraph, opts: &SolverOptions) -> Result<FrustrationResult, SolverError> {
    opts.validate()?;
    let start = Instant::now();
    if opts.threads == 1 {
        return Ok(solve_all(g, opts, start));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| SolverError::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| solve_all(g, opts, start)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle::brute_force;
    use crate::sgraph::Sign;

    #[test]
    fn empty_graph() {
        let r = solve_exact(&SignedGraph::empty(0), &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.colouring.is_empty());
        assert!(r.is_optimal());
    }

    #[test]
    fn balanced_graph_short_circuits() {
        let g = gen::balanced_random(50, 120, 3).unwrap();
        let r = solve_exact(&g, &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.stats.nodes_explored, 0);
        assert!(r.deletion_set.is_empty());
    }

    #[test]
    fn antibalanced_k6() {
        let r = solve_exact(&gen::antibalanced_complete(6), &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 6);
        assert!(r.is_optimal());
    }

    #[test]
    fn options_are_validated() {
        let g = SignedGraph::empty(2);
        let bad = SolverOptions { time_limit: Duration::ZERO, ..SolverOptions::default() };
        assert_eq!(solve_exact(&g, &bad), Err(SolverError::ZeroTimeLimit));
        let bad = SolverOptions { threads: 0, ..SolverOptions::default() };
        assert_eq!(solve_exact(&g, &bad), Err(SolverError::ZeroThreads));
    }

    #[test]
    fn matches_oracle_on_small_graphs_for_all_option_combinations() {
        for seed in 0..40u64 {
            let n = 5 + (seed as usize % 8);
            let m = (n * (n - 1) / 2).min(2 * n + seed as usize % 7);
            let g = gen::erdos_renyi(n, m, (seed as usize * 7) % (m + 1), seed).unwrap();
            let want = brute_force(&g).unwrap().value;
            for (nd, fix) in [(false, false), (true, false), (false, true), (true, true)] {
                let opts = SolverOptions { use_net_degree_pruning: nd, use_fixing: fix, ..Default::default() };
                let r = solve_exact(&g, &opts).unwrap();
                assert_eq!(r.value, want, "seed {seed} nd {nd} fix {fix}");
                assert_eq!(g.frustration_count(&r.colouring).unwrap(), want);
            }
        }
    }

    #[test]
    fn disconnected_graph_is_additive() {
        let k5 = gen::antibalanced_complete(5);
        let mut edges: Vec<(usize, usize, Sign)> = k5.edges().iter().map(|e| (e.u, e.v, e.sign)).collect();
        edges.extend(k5.edges().iter().map(|e| (e.u + 6, e.v + 6, e.sign)));
        let g = SignedGraph::new(11, edges).unwrap();
        let r = solve_exact(&g, &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.stats.components, 3);
        assert!(!r.colouring.is_black(5));
    }

    #[test]
    fn timeout_returns_flagged_bounds() {
        let g = gen::erdos_renyi(60, 600, 300, 1).unwrap();
        let opts = SolverOptions { time_limit: Duration::from_millis(50), ..Default::default() };
        let r = solve_exact(&g, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::TimedOut);
        assert!(r.lower_bound <= r.upper_bound);
        assert_eq!(r.value, r.upper_bound);
        assert_eq!(g.frustration_count(&r.colouring).unwrap(), r.value);
    }

    #[test]
    fn thread_count_does_not_change_value() {
        for seed in 0..6u64 {
            let g = gen::erdos_renyi(22, 70, 35, seed).unwrap();
            let one = solve_exact(&g, &SolverOptions::default()).unwrap();
            let four = solve_exact(&g, &SolverOptions { threads: 4, ..Default::default() }).unwrap();
            assert_eq!(one.value, four.value, "seed {seed}");
            assert_eq!(g.frustration_count(&four.colouring).unwrap(), four.value);
        }
    }
}

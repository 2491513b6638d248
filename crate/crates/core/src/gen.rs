//! Seeded random signed-graph generators and sign reshuffling.
//!
//! Every generator first builds the unsigned skeleton and then draws a full
//! random permutation of the (canonically sorted) edge list; the first
//! `m_minus` edges of that permutation become negative. Because the RNG
//! consumption does not depend on `m_minus`, calls that differ only in
//! `m_minus` share the same skeleton and produce nested negative sets.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sgraph::{Edge, Sign, SignedGraph};

const REGULAR_MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("{m} edges requested but only {max} node pairs exist for n = {n}")]
    TooManyEdges { n: usize, m: usize, max: usize },
    #[error("{m_minus} negative edges requested for a graph with {m} edges")]
    TooManyNegative { m: usize, m_minus: usize },
    #[error("attachment parameter k = {k} is infeasible for n = {n}")]
    InfeasibleAttachment { n: usize, k: usize },
    #[error("no Barabási–Albert attachment count reaches m = {m} with n = {n}")]
    InfeasibleEdgeTarget { n: usize, m: usize },
    #[error("n·d must be even and d < n (n = {n}, d = {d})")]
    InfeasibleRegular { n: usize, d: usize },
    #[error("pairing model found no simple {d}-regular graph on {n} nodes")]
    RegularRejected { n: usize, d: usize },
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Decodes a pair index `0..n(n-1)/2` into `(i, j)` with `i < j`, row-major.
fn pair_from_index(n: usize, mut k: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

/// Builds the graph from an unsigned skeleton, making `m_minus` uniformly
/// chosen edges negative.
fn sign_skeleton<R: Rng>(n: usize, mut pairs: Vec<(usize, usize)>, m_minus: usize, rng: &mut R) -> SignedGraph {
    pairs.sort_unstable();
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(rng);
    let mut signs = vec![Sign::Positive; pairs.len()];
    for &k in &order[..m_minus] {
        signs[k] = Sign::Negative;
    }
    let edges = pairs
        .into_iter()
        .zip(signs)
        .map(|((u, v), sign)| Edge { u, v, sign })
        .collect();
    SignedGraph::from_sorted(n, edges)
}

fn check_negative(m: usize, m_minus: usize) -> Result<(), GenError> {
    if m_minus > m {
        return Err(GenError::TooManyNegative { m, m_minus });
    }
    Ok(())
}

fn sample_pairs<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<Vec<(usize, usize)>, GenError> {
    let max = max_pairs(n);
    if m > max {
        return Err(GenError::TooManyEdges { n, m, max });
    }
    Ok(index::sample(rng, max, m).into_iter().map(|k| pair_from_index(n, k)).collect())
}

/// Uniform `G(n, m)` skeleton with exactly `m_minus` negative edges.
pub fn erdos_renyi(n: usize, m: usize, m_minus: usize, seed: u64) -> Result<SignedGraph, GenError> {
    check_negative(m, m_minus)?;
    let mut r = rng(seed);
    let pairs = sample_pairs(n, m, &mut r)?;
    Ok(sign_skeleton(n, pairs, m_minus, &mut r))
}

/// Edge count of a Barabási–Albert graph grown from a `(k+1)`-clique.
pub fn barabasi_albert_edge_count(n: usize, k: usize) -> usize {
    k * (k + 1) / 2 + n.saturating_sub(k + 1) * k
}

fn ba_skeleton<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<Vec<(usize, usize)>, GenError> {
    if k == 0 || k + 1 > n {
        return Err(GenError::InfeasibleAttachment { n, k });
    }
    let mut pairs = Vec::with_capacity(barabasi_albert_edge_count(n, k));
    // every edge contributes both endpoints, so uniform picks are degree-proportional
    let mut ends = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            pairs.push((i, j));
            ends.push(i);
            ends.push(j);
        }
    }
    let mut targets = Vec::with_capacity(k);
    for v in k + 1..n {
        targets.clear();
        while targets.len() < k {
            let t = ends[rng.gen_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            pairs.push((t, v));
            ends.push(t);
            ends.push(v);
        }
    }
    Ok(pairs)
}

/// Preferential attachment: a `(k+1)`-clique seed, then each new node links
/// to `k` distinct existing nodes chosen with probability proportional to
/// degree.
pub fn barabasi_albert(n: usize, k: usize, m_minus: usize, seed: u64) -> Result<SignedGraph, GenError> {
    check_negative(barabasi_albert_edge_count(n, k), m_minus)?;
    let mut r = rng(seed);
    let pairs = ba_skeleton(n, k, &mut r)?;
    Ok(sign_skeleton(n, pairs, m_minus, &mut r))
}

/// How a Barabási–Albert graph was fitted to an exact edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaFit {
    pub k: usize,
    /// Uniformly random extra edges added after growth.
    pub added: usize,
}

/// Barabási–Albert graph with exactly `m` edges: the largest `k` whose
/// growth yields at most `m` edges is used, and any shortfall is made up
/// with uniformly random extra edges.
pub fn barabasi_albert_exact_m(
    n: usize,
    m: usize,
    m_minus: usize,
    seed: u64,
) -> Result<(SignedGraph, BaFit), GenError> {
    check_negative(m, m_minus)?;
    let max = max_pairs(n);
    if m > max {
        return Err(GenError::TooManyEdges { n, m, max });
    }
    let k = (1..n)
        .take_while(|&k| barabasi_albert_edge_count(n, k) <= m)
        .last()
        .ok_or(GenError::InfeasibleEdgeTarget { n, m })?;
    let mut r = rng(seed);
    let mut pairs = ba_skeleton(n, k, &mut r)?;
    let added = m - pairs.len();
    if added > 0 {
        let mut present: HashSet<(usize, usize)> = pairs.iter().copied().collect();
        while pairs.len() < m {
            let (i, j) = pair_from_index(n, r.gen_range(0..max));
            if present.insert((i, j)) {
                pairs.push((i, j));
            }
        }
    }
    Ok((sign_skeleton(n, pairs, m_minus, &mut r), BaFit { k, added }))
}

/// Uniform-ish random `d`-regular graph via the pairing model, rejecting
/// pairings that create loops or parallel edges.
pub fn random_regular(n: usize, d: usize, m_minus: usize, seed: u64) -> Result<SignedGraph, GenError> {
    if (n * d) % 2 == 1 || (d >= n && d > 0) {
        return Err(GenError::InfeasibleRegular { n, d });
    }
    check_negative(n * d / 2, m_minus)?;
    let mut r = rng(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut seen = HashSet::new();
    'attempt: for _ in 0..REGULAR_MAX_ATTEMPTS {
        points.shuffle(&mut r);
        seen.clear();
        let mut pairs = Vec::with_capacity(points.len() / 2);
        for ch in points.chunks_exact(2) {
            let (a, b) = (ch[0].min(ch[1]), ch[0].max(ch[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            pairs.push((a, b));
        }
        return Ok(sign_skeleton(n, pairs, m_minus, &mut r));
    }
    Err(GenError::RegularRejected { n, d })
}

/// New signs on the same skeleton: `m⁻` negative signs spread uniformly
/// over the edges by a seeded Fisher–Yates shuffle.
pub fn reshuffle(g: &SignedGraph, seed: u64) -> SignedGraph {
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(&mut r);
    let mut signs = vec![Sign::Positive; g.edge_count()];
    for &k in &order[..g.negative_count()] {
        signs[k] = Sign::Negative;
    }
    g.with_signs(&signs)
}

/// Balanced by construction: a hidden random bipartition, `G(n, m)` edges,
/// positive inside parts and negative across.
pub fn balanced_random(n: usize, m: usize, seed: u64) -> Result<SignedGraph, GenError> {
    let mut r = rng(seed);
    let side: Vec<bool> = (0..n).map(|_| r.gen()).collect();
    let mut pairs = sample_pairs(n, m, &mut r)?;
    pairs.sort_unstable();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge { u, v, sign: if side[u] == side[v] { Sign::Positive } else { Sign::Negative } })
        .collect();
    Ok(SignedGraph::from_sorted(n, edges))
}

/// All-negative complete graph `K_n`.
pub fn antibalanced_complete(n: usize) -> SignedGraph {
    let mut edges = Vec::with_capacity(max_pairs(n));
    for u in 0..n {
        for v in u + 1..n {
            edges.push(Edge { u, v, sign: Sign::Negative });
        }
    }
    SignedGraph::from_sorted(n, edges)
}

/// Generator family with its size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    ErdosRenyi { n: usize, m: usize },
    /// `k` attachments per node, or an exact edge count `m`.
    BarabasiAlbert { n: usize, k: Option<usize>, m: Option<usize> },
    RandomRegular { n: usize, d: usize },
    Balanced { n: usize, m: usize },
    AntibalancedComplete { n: usize },
}

/// A fully specified generator call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    #[serde(flatten)]
    pub family: Family,
    pub m_minus: usize,
    pub seed: u64,
}

/// Generated graph plus notes about how it was produced.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: SignedGraph,
    pub notes: Vec<String>,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Generated, GenError> {
        let mut notes = Vec::new();
        let graph = match self.family {
            Family::ErdosRenyi { n, m } => erdos_renyi(n, m, self.m_minus, self.seed)?,
            Family::BarabasiAlbert { n, k: Some(k), .. } => barabasi_albert(n, k, self.m_minus, self.seed)?,
            Family::BarabasiAlbert { n, k: None, m: Some(m) } => {
                let (g, fit) = barabasi_albert_exact_m(n, m, self.m_minus, self.seed)?;
                notes.push(format!("ba_attachment k={}", fit.k));
                if fit.added > 0 {
                    notes.push(format!("ba_edges_added {} (random extra edges to reach m={m})", fit.added));
                }
                g
            }
            Family::BarabasiAlbert { n, k: None, m: None } => {
                return Err(GenError::InfeasibleAttachment { n, k: 0 });
            }
            Family::RandomRegular { n, d } => random_regular(n, d, self.m_minus, self.seed)?,
            Family::Balanced { n, m } => {
                if self.m_minus != 0 {
                    notes.push("negative count is determined by the hidden partition".into());
                }
                balanced_random(n, m, self.seed)?
            }
            Family::AntibalancedComplete { n } => antibalanced_complete(n),
        };
        Ok(Generated { graph, notes })
    }

    /// One-line description used in file headers.
    pub fn describe(&self) -> String {
        let fam = match self.family {
            Family::ErdosRenyi { n, m } => format!("erdos_renyi n={n} m={m}"),
            Family::BarabasiAlbert { n, k, m } => match (k, m) {
                (Some(k), _) => format!("barabasi_albert n={n} k={k}"),
                (None, Some(m)) => format!("barabasi_albert n={n} m={m}"),
                _ => format!("barabasi_albert n={n}"),
            },
            Family::RandomRegular { n, d } => format!("random_regular n={n} d={d}"),
            Family::Balanced { n, m } => format!("balanced n={n} m={m}"),
            Family::AntibalancedComplete { n } => format!("antibalanced_complete n={n}"),
        };
        format!("{fam} neg={} seed={}", self.m_minus, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgraph::is_balanced;

    #[test]
    fn pair_index_decoding_covers_all_pairs() {
        let n = 7;
        let all: Vec<_> = (0..max_pairs(n)).map(|k| pair_from_index(n, k)).collect();
        let mut expected = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                expected.push((i, j));
            }
        }
        assert_eq!(all, expected);
    }

    #[test]
    fn erdos_renyi_counts_and_errors() {
        let g = erdos_renyi(15, 50, 0, 1).unwrap();
        assert_eq!((g.edge_count(), g.negative_count()), (50, 0));
        let g = erdos_renyi(15, 50, 50, 1).unwrap();
        assert_eq!(g.negative_count(), 50);
        assert!(matches!(erdos_renyi(5, 11, 0, 0), Err(GenError::TooManyEdges { .. })));
        assert!(matches!(erdos_renyi(5, 5, 6, 0), Err(GenError::TooManyNegative { .. })));
    }

    #[test]
    fn negative_sets_are_nested_across_m_minus() {
        let a = erdos_renyi(12, 30, 10, 9).unwrap();
        let b = erdos_renyi(12, 30, 20, 9).unwrap();
        for (x, y) in a.edges().iter().zip(b.edges()) {
            assert_eq!((x.u, x.v), (y.u, y.v));
            if x.sign == Sign::Negative {
                assert_eq!(y.sign, Sign::Negative);
            }
        }
    }

    #[test]
    fn seeds_change_the_edge_set() {
        let mut differing = 0;
        for s in 0..20u64 {
            let a = erdos_renyi(15, 50, 0, 2 * s).unwrap();
            let b = erdos_renyi(15, 50, 0, 2 * s + 1).unwrap();
            if a != b {
                differing += 1;
            }
        }
        assert_eq!(differing, 20);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(erdos_renyi(20, 40, 7, 3).unwrap(), erdos_renyi(20, 40, 7, 3).unwrap());
        assert_eq!(barabasi_albert(20, 3, 7, 3).unwrap(), barabasi_albert(20, 3, 7, 3).unwrap());
        assert_eq!(random_regular(20, 4, 7, 3).unwrap(), random_regular(20, 4, 7, 3).unwrap());
        assert_eq!(balanced_random(20, 40, 3).unwrap(), balanced_random(20, 40, 3).unwrap());
    }

    #[test]
    fn barabasi_albert_n15_k4_has_50_edges() {
        assert_eq!(barabasi_albert_edge_count(15, 4), 50);
        let g = barabasi_albert(15, 4, 20, 8).unwrap();
        assert_eq!((g.edge_count(), g.negative_count()), (50, 20));
        let (g, fit) = barabasi_albert_exact_m(15, 50, 20, 8).unwrap();
        assert_eq!(fit, BaFit { k: 4, added: 0 });
        assert_eq!(g.edge_count(), 50);
        let (g, fit) = barabasi_albert_exact_m(15, 53, 0, 8).unwrap();
        assert_eq!(fit, BaFit { k: 4, added: 3 });
        assert_eq!(g.edge_count(), 53);
        assert!(barabasi_albert(3, 3, 0, 0).is_err());
        assert!(barabasi_albert(5, 0, 0, 0).is_err());
    }

    #[test]
    fn barabasi_albert_early_nodes_have_higher_mean_degree() {
        let n = 30;
        let mut total = vec![0usize; n];
        for seed in 0..200 {
            let g = barabasi_albert(n, 2, 0, seed).unwrap();
            for (v, t) in total.iter_mut().enumerate() {
                *t += g.degree(v);
            }
        }
        let early: usize = total[..5].iter().sum();
        let late: usize = total[n - 5..].iter().sum();
        assert!(early > 2 * late, "early {early} late {late}");
    }

    #[test]
    fn random_regular_degrees() {
        let g = random_regular(10, 4, 5, 1).unwrap();
        assert_eq!((g.edge_count(), g.negative_count()), (20, 5));
        for seed in 0..100 {
            let g = random_regular(16, 4, 8, seed).unwrap();
            assert!((0..16).all(|v| g.degree(v) == 4), "seed {seed}");
        }
        assert!(matches!(random_regular(5, 3, 0, 0), Err(GenError::InfeasibleRegular { .. })));
        assert!(matches!(random_regular(4, 4, 0, 0), Err(GenError::InfeasibleRegular { .. })));
    }

    #[test]
    fn reshuffle_preserves_skeleton_and_negative_count() {
        let g = erdos_renyi(16, 58, 29, 4).unwrap();
        let r = reshuffle(&g, 77);
        assert_eq!(r.negative_count(), 29);
        for (a, b) in g.edges().iter().zip(r.edges()) {
            assert_eq!((a.u, a.v), (b.u, b.v));
        }
        assert_ne!(r, g);
    }

    #[test]
    fn balanced_and_antibalanced() {
        assert!(is_balanced(&balanced_random(100, 300, 5).unwrap()).is_balanced());
        let k = antibalanced_complete(5);
        assert_eq!((k.edge_count(), k.negative_count()), (10, 10));
    }
}

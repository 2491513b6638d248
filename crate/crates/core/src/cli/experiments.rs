//! Generator sweeps and reshuffling Z scores.
//!
//! Runs are independent and solved in parallel; results are collected in
//! job order so a report depends only on its inputs and seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::report::{aggregate, z_score, ExperimentReport, RunRecord};
use crate::gen::{reshuffle, Family, GenError, GenSpec};
use crate::sgraph::SignedGraph;
use crate::solver::{solve_exact, SolverError, SolverOptions};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("at least one repetition is required")]
    ZeroReps,
    #[error("at least one run per setting is required")]
    ZeroRuns,
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

pub fn family_name(f: &Family) -> &'static str {
    match f {
        Family::ErdosRenyi { .. } => "erdos_renyi",
        Family::BarabasiAlbert { .. } => "barabasi_albert",
        Family::RandomRegular { .. } => "random_regular",
        Family::Balanced { .. } => "balanced",
        Family::AntibalancedComplete { .. } => "antibalanced_complete",
    }
}

fn solve_record(
    g: &SignedGraph,
    setting: &str,
    family: &str,
    seed: u64,
    opts: &SolverOptions,
) -> Result<RunRecord, SolverError> {
    let r = solve_exact(g, opts)?;
    Ok(RunRecord {
        setting: setting.to_string(),
        family: family.to_string(),
        n: g.node_count(),
        m: g.edge_count(),
        m_minus: g.negative_count(),
        seed,
        value: r.value,
        lower_bound: r.lower_bound,
        upper_bound: r.upper_bound,
        optimal: r.is_optimal(),
        nodes_explored: r.stats.nodes_explored,
        wall_ms: r.stats.wall_time.as_secs_f64() * 1e3,
    })
}

/// Solves `runs` graphs per setting. Run `r` of every setting uses seed
/// `seed + r`, so for a fixed skeleton the negative edge sets are nested
/// across settings that differ only in `m⁻`.
pub fn run_sweep(
    settings: &[GenSpec],
    runs: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<ExperimentReport, ExperimentError> {
    if runs == 0 {
        return Err(ExperimentError::ZeroRuns);
    }
    let jobs: Vec<(usize, GenSpec)> = settings
        .iter()
        .enumerate()
        .flat_map(|(k, s)| (0..runs as u64).map(move |r| (k, GenSpec { seed: seed.wrapping_add(r), ..*s })))
        .collect();
    let records = jobs
        .par_iter()
        .map(|(k, spec)| -> Result<RunRecord, ExperimentError> {
            let g = spec.generate()?.graph;
            let label = format!("{k}:{}", settings[*k].describe_without_seed());
            Ok(solve_record(&g, &label, family_name(&spec.family), spec.seed, opts)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let aggregates = aggregate(&records);
    Ok(ExperimentReport { kind: "sweep".into(), records, aggregates, original: None, z: None })
}

/// Solves `g` and `reps` sign reshuffles of it, and reports
/// `Z = (L(G) − mean) / SD` over the reshuffles.
pub fn run_zscore(
    g: &SignedGraph,
    reps: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<ExperimentReport, ExperimentError> {
    if reps == 0 {
        return Err(ExperimentError::ZeroReps);
    }
    let original = solve_record(g, "original", "input", seed, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..reps).map(|_| rng.next_u64()).collect();
    let records = seeds
        .par_iter()
        .map(|&s| solve_record(&reshuffle(g, s), "reshuffled", "reshuffle", s, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let aggregates = aggregate(&records);
    let z = z_score(original.value, aggregates[0].mean, aggregates[0].sd);
    Ok(ExperimentReport { kind: "zscore".into(), records, aggregates, original: Some(original), z })
}

trait DescribeSetting {
    fn describe_without_seed(&self) -> String;
}

impl DescribeSetting for GenSpec {
    fn describe_without_seed(&self) -> String {
        let full = self.describe();
        full.rsplit_once(" seed=").map_or(full.clone(), |(head, _)| head.to_string())
    }
}

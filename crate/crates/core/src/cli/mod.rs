//! Command-line front end.
//!
//! Exit codes: 0 success (proven optimum), 1 usage, input or I/O error,
//! 2 time limit reached with bounds only, 3 a verified colouring disagrees
//! with the claimed value.

mod dot;
mod experiments;
mod report;

pub use dot::{count_frustrated_in_dot, export_dot};
pub use experiments::{family_name, run_sweep, run_zscore, ExperimentError};
pub use report::{aggregate, mean_sd, z_score, Aggregate, ExperimentReport, ReportError, RunRecord};

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::gen::{Family, GenSpec};
use crate::models::{build_ilp, build_ubqp, export_lp, export_qubo, IlpOptions};
use crate::sgraph::{parse_edge_list, serialise_with_header, Colouring, SignedGraph};
use crate::solver::{solve_exact, FrustrationResult, SolverOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "frustration", version, about = "Exact frustration index of signed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute L(G), an optimal colouring and a minimum deletion set.
    Solve(SolveArgs),
    /// Recount the frustrated edges of a colouring.
    Verify(VerifyArgs),
    /// Write a random signed graph.
    Gen(GenArgs),
    /// Solve many generated graphs and tabulate mean and SD of L.
    Sweep(SweepArgs),
    /// Compare L(G) with sign-reshuffled copies of G.
    Zscore(ZscoreArgs),
    /// Write the 0/1 linear model, the QUBO or a Graphviz drawing.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
struct SearchFlags {
    /// Use net-degree dominance (prune colourings with an improving flip).
    #[arg(long)]
    net_degree: bool,
    /// Add triangle inequalities (affects model export only).
    #[arg(long)]
    triangles: bool,
    /// Fix the largest-degree node to black.
    #[arg(long)]
    fix_max_degree: bool,
    /// Time limit in seconds per solve.
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl SearchFlags {
    fn solver_options(&self, threads: usize) -> Result<SolverOptions, String> {
        if !(self.time_limit.is_finite() && self.time_limit > 0.0) {
            return Err(format!("--time-limit must be a positive number of seconds, got {}", self.time_limit));
        }
        Ok(SolverOptions {
            use_net_degree_pruning: self.net_degree,
            use_fixing: self.fix_max_degree,
            time_limit: Duration::from_secs_f64(self.time_limit),
            threads,
            ..SolverOptions::default()
        })
    }

    fn ilp_options(&self) -> IlpOptions {
        IlpOptions { net_degree: self.net_degree, triangles: self.triangles, fix_max_degree: self.fix_max_degree }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    flags: SearchFlags,
    #[arg(long)]
    json: bool,
    /// Also write the colouring to this file.
    #[arg(long)]
    colouring_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    colouring: PathBuf,
    /// Claimed value; overrides a `# frustration` line in the colouring file.
    #[arg(long)]
    value: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    Er,
    Ba,
    Regular,
    Balanced,
    Antibalanced,
}

#[derive(Args, Debug)]
struct GenArgs {
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    /// Edge count (er, balanced, and ba when --k is absent).
    #[arg(long)]
    m: Option<usize>,
    /// Degree (regular).
    #[arg(long)]
    d: Option<usize>,
    /// Attachments per new node (ba).
    #[arg(long)]
    k: Option<usize>,
    /// Number of negative edges.
    #[arg(long, default_value_t = 0)]
    neg: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    family: FamilyArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Negative edge count when no grid is given.
    #[arg(long, default_value_t = 0)]
    neg: usize,
    /// Negative edge counts, `a:b:step` or `a,b,c`.
    #[arg(long)]
    neg_grid: Option<String>,
    /// Node counts, `a:b:step` or `a,b,c`; needs --neg-fraction.
    #[arg(long)]
    n_grid: Option<String>,
    /// Share of negative edges for --n-grid settings.
    #[arg(long)]
    neg_fraction: Option<f64>,
    /// Edge density for er settings on an --n-grid.
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 50)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write PREFIX.csv, PREFIX_summary.csv, PREFIX.dat and PREFIX.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    flags: SearchFlags,
}

#[derive(Args, Debug)]
struct ZscoreArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write PREFIX.csv and PREFIX.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    flags: SearchFlags,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExportFormat {
    Lp,
    Qubo,
    Dot,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: ExportFormat,
    #[command(flatten)]
    flags: SearchFlags,
    /// Colouring used to mark frustrated edges in a drawing.
    #[arg(long)]
    colouring: Option<PathBuf>,
    /// Draw without solving when no colouring is given.
    #[arg(long)]
    no_solve: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Machine-readable result of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub m: usize,
    pub m_minus: usize,
    pub value: usize,
    pub optimal: bool,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub colouring: Vec<u8>,
    pub deletion_set: Vec<(usize, usize, i64)>,
    pub nodes_explored: u64,
    pub wall_ms: f64,
}

impl SolveReport {
    fn new(g: &SignedGraph, r: &FrustrationResult) -> Self {
        SolveReport {
            n: g.node_count(),
            m: g.edge_count(),
            m_minus: g.negative_count(),
            value: r.value,
            optimal: r.is_optimal(),
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            colouring: r.colouring.to_bits(),
            deletion_set: r.deletion_set.iter().map(|e| (e.u, e.v, e.sign.value())).collect(),
            nodes_explored: r.stats.nodes_explored,
            wall_ms: r.stats.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// Error carrying its exit code.
struct Failure(i32, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_ERROR, e.to_string())
    }
}

fn read_graph(path: &Path) -> Result<SignedGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// Colouring file: `0`/`1` tokens in node order (1 = black), with `#`
/// comments. A `# frustration K` comment records the claimed value.
pub fn format_colouring(x: &Colouring, value: Option<usize>) -> String {
    let mut out = String::new();
    if let Some(v) = value {
        out.push_str(&format!("# frustration {v}\n"));
    }
    out.push_str("# one entry per node, 1 = black\n");
    let bits: Vec<String> = x.to_bits().iter().map(u8::to_string).collect();
    for chunk in bits.chunks(40) {
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
    out
}

/// Inverse of [`format_colouring`]: the colouring and any claimed value.
pub fn parse_colouring(text: &str) -> Result<(Colouring, Option<usize>), String> {
    let mut bits = Vec::new();
    let mut claimed = None;
    for (idx, line) in text.lines().enumerate() {
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("frustration ") {
                claimed = Some(v.trim().parse().map_err(|_| format!("line {}: bad claimed value", idx + 1))?);
            }
            continue;
        }
        for tok in line.split_whitespace() {
            match tok {
                "0" => bits.push(false),
                "1" => bits.push(true),
                _ => return Err(format!("line {}: expected 0 or 1, found {tok:?}", idx + 1)),
            }
        }
    }
    Ok((Colouring::from_bools(bits), claimed))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn solve_checked(g: &SignedGraph, opts: &SolverOptions) -> Result<FrustrationResult, Failure> {
    let r = solve_exact(g, opts)?;
    let recount = g.frustration_count(&r.colouring)?;
    if recount != r.value {
        return Err(Failure(EXIT_ERROR, format!("internal error: solver value {} but recount {recount}", r.value)));
    }
    Ok(r)
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_graph(&a.input)?;
    let opts = a.flags.solver_options(a.flags.threads)?;
    let r = solve_checked(&g, &opts)?;
    if let Some(p) = &a.colouring_out {
        fs::write(p, format_colouring(&r.colouring, Some(r.value))).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    let report = SolveReport::new(&g, &r);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        if r.is_optimal() {
            writeln!(out, "L = {} (optimal)", r.value)?;
        } else {
            writeln!(out, "L in [{}, {}] (time limit reached)", r.lower_bound, r.upper_bound)?;
        }
        writeln!(out, "nodes {} edges {} negative {}", report.n, report.m, report.m_minus)?;
        let bits: Vec<String> = report.colouring.iter().map(u8::to_string).collect();
        writeln!(out, "colouring {}", bits.join(" "))?;
        writeln!(out, "deletion set ({} edges):", r.deletion_set.len())?;
        for e in &r.deletion_set {
            writeln!(out, "  {} {} {}", e.u, e.v, e.sign)?;
        }
        writeln!(out, "search nodes {} time {:.3} ms", report.nodes_explored, report.wall_ms)?;
    }
    Ok(if r.is_optimal() { EXIT_OK } else { EXIT_TIMEOUT })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_graph(&a.input)?;
    let text = fs::read_to_string(&a.colouring).map_err(|e| format!("{}: {e}", a.colouring.display()))?;
    let (x, in_file) = parse_colouring(&text)?;
    let count = g.frustration_count(&x)?;
    writeln!(out, "frustrated edges {count}")?;
    match a.value.or(in_file) {
        Some(claimed) if claimed == count => {
            writeln!(out, "confirmed: claimed value {claimed} matches")?;
            Ok(EXIT_OK)
        }
        Some(claimed) => {
            writeln!(out, "mismatch: claimed {claimed}, recounted {count}")?;
            Ok(EXIT_MISMATCH)
        }
        None => Ok(EXIT_OK),
    }
}

fn gen_spec(
    family: FamilyArg,
    n: usize,
    m: Option<usize>,
    d: Option<usize>,
    k: Option<usize>,
    neg: usize,
    seed: u64,
) -> Result<GenSpec, String> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("{flag} is required for this family"));
    let family = match family {
        FamilyArg::Er => Family::ErdosRenyi { n, m: need(m, "--m")? },
        FamilyArg::Ba => {
            if k.is_none() && m.is_none() {
                return Err("ba needs --k or --m".into());
            }
            Family::BarabasiAlbert { n, k, m }
        }
        FamilyArg::Regular => Family::RandomRegular { n, d: need(d, "--d")? },
        FamilyArg::Balanced => Family::Balanced { n, m: need(m, "--m")? },
        FamilyArg::Antibalanced => Family::AntibalancedComplete { n },
    };
    Ok(GenSpec { family, m_minus: neg, seed })
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spec = gen_spec(a.family, a.n, a.m, a.d, a.k, a.neg, a.seed)?;
    let generated = spec.generate()?;
    let g = &generated.graph;
    let mut header = vec![format!("generated {}", spec.describe())];
    header.extend(generated.notes.iter().cloned());
    header.push(format!("nodes {} edges {} negative {}", g.node_count(), g.edge_count(), g.negative_count()));
    write_output(a.out.as_deref(), &serialise_with_header(g, &header), out)?;
    Ok(EXIT_OK)
}

/// `a:b:step` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("bad grid {text:?}; use a:b:step or a,b,c");
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<usize> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        if v[2] == 0 || v[0] > v[1] {
            return Err(bad());
        }
        return Ok((v[0]..=v[1]).step_by(v[2]).collect());
    }
    text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn sweep_settings(a: &SweepArgs) -> Result<Vec<GenSpec>, String> {
    match (&a.neg_grid, &a.n_grid) {
        (Some(_), Some(_)) => Err("use either --neg-grid or --n-grid".into()),
        (_, Some(grid)) => {
            let frac = a.neg_fraction.ok_or("--n-grid needs --neg-fraction")?;
            if !(0.0..=1.0).contains(&frac) {
                return Err("--neg-fraction must lie in [0, 1]".into());
            }
            parse_grid(grid)?
                .into_iter()
                .map(|n| {
                    let m = match a.family {
                        FamilyArg::Regular => n * a.d.ok_or("--d is required for regular")? / 2,
                        FamilyArg::Ba => crate::gen::barabasi_albert_edge_count(n, a.k.ok_or("--n-grid with ba needs --k")?),
                        FamilyArg::Er | FamilyArg::Balanced => {
                            let density = a.density.ok_or("--n-grid with er needs --density")?;
                            (density * (n * n.saturating_sub(1) / 2) as f64).round() as usize
                        }
                        FamilyArg::Antibalanced => n * n.saturating_sub(1) / 2,
                    };
                    let neg = (frac * m as f64).round() as usize;
                    let m_arg = if a.family == FamilyArg::Ba { None } else { Some(m) };
                    gen_spec(a.family, n, m_arg, a.d, a.k, neg, 0)
                })
                .collect()
        }
        (grid, None) => {
            let n = a.n.ok_or("--n is required without --n-grid")?;
            let negs = match grid {
                Some(g) => parse_grid(g)?,
                None => vec![a.neg],
            };
            negs.into_iter().map(|neg| gen_spec(a.family, n, a.m, a.d, a.k, neg, 0)).collect()
        }
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}

fn print_aggregates(report: &ExperimentReport, out: &mut dyn Write) -> Result<(), Failure> {
    writeln!(out, "{:<40} {:>5} {:>5} {:>5} {:>5} {:>9} {:>8} {:>4} {:>4}", "setting", "n", "m", "neg", "runs", "mean", "sd", "min", "max")?;
    for a in &report.aggregates {
        writeln!(
            out,
            "{:<40} {:>5} {:>5} {:>5} {:>5} {:>9.3} {:>8.3} {:>4} {:>4}{}",
            a.setting,
            a.n,
            a.m,
            a.m_minus,
            a.runs,
            a.mean,
            a.sd,
            a.min,
            a.max,
            if a.all_optimal { "" } else { "  (some runs hit the time limit)" }
        )?;
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let settings = sweep_settings(a)?;
    let opts = a.flags.solver_options(1)?;
    let report = in_pool(a.flags.threads, || run_sweep(&settings, a.runs, a.seed, &opts))??;
    if let Some(prefix) = &a.out {
        let by_n = a.n_grid.is_some();
        let dat = report.gnuplot_data(if by_n { "n" } else { "neg" }, |g| {
            if by_n {
                g.n as f64
            } else {
                g.m_minus as f64
            }
        });
        fs::write(with_suffix(prefix, ".csv"), report.records_csv()?)?;
        fs::write(with_suffix(prefix, "_summary.csv"), report.aggregates_csv()?)?;
        fs::write(with_suffix(prefix, ".dat"), dat)?;
        fs::write(with_suffix(prefix, ".json"), report.to_json()?)?;
    }
    print_aggregates(&report, out)?;
    let complete = report.records.iter().all(|r| r.optimal);
    Ok(if complete { EXIT_OK } else { EXIT_TIMEOUT })
}

fn cmd_zscore(a: &ZscoreArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_graph(&a.input)?;
    let opts = a.flags.solver_options(1)?;
    let report = in_pool(a.flags.threads, || run_zscore(&g, a.reps, a.seed, &opts))??;
    if let Some(prefix) = &a.out {
        fs::write(with_suffix(prefix, ".csv"), report.records_csv()?)?;
        fs::write(with_suffix(prefix, ".json"), report.to_json()?)?;
    }
    let original = report.original.as_ref().expect("z-score report has the original run");
    let agg = &report.aggregates[0];
    writeln!(out, "L(G) = {}", original.value)?;
    writeln!(out, "reshuffled: reps {} mean {:.4} sd {:.4}", agg.runs, agg.mean, agg.sd)?;
    match report.z {
        Some(z) => writeln!(out, "Z = {z:.4}")?,
        None => writeln!(out, "Z undefined (zero spread)")?,
    }
    let complete = original.optimal && report.records.iter().all(|r| r.optimal);
    Ok(if complete { EXIT_OK } else { EXIT_TIMEOUT })
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_graph(&a.input)?;
    let text = match a.format {
        ExportFormat::Lp => export_lp(&build_ilp(&g, a.flags.ilp_options()))?,
        ExportFormat::Qubo => export_qubo(&build_ubqp(&g))?,
        ExportFormat::Dot => {
            let colouring = match (&a.colouring, a.no_solve) {
                (Some(p), _) => {
                    let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                    let (x, _) = parse_colouring(&text)?;
                    g.frustration_count(&x)?;
                    Some(x)
                }
                (None, true) => None,
                (None, false) => Some(solve_checked(&g, &a.flags.solver_options(a.flags.threads)?)?.colouring),
            };
            export_dot(&g, colouring.as_ref())
        }
    };
    write_output(a.out.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}

/// Runs the command line with explicit output streams; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Zscore(a) => cmd_zscore(a, out),
        Command::Export(a) => cmd_export(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let code = run(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    code
}

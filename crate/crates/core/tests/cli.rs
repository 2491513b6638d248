use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use frustration::cli::{count_frustrated_in_dot, parse_colouring, ExperimentReport, SolveReport};
use frustration::gen;
use frustration::oracle::brute_force;
use frustration::sgraph::{parse_edge_list, serialise};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frustration"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gen_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, colouring) = (path(dir.path(), "g.txt"), path(dir.path(), "x.txt"));
    let o = run(&["gen", "er", "--n", "14", "--m", "40", "--neg", "18", "--seed", "3", "--out", &graph]);
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(&graph).unwrap();
    assert!(text.starts_with("# generated erdos_renyi n=14 m=40 neg=18 seed=3"));
    let g = parse_edge_list(&text).unwrap();
    assert_eq!((g.node_count(), g.edge_count(), g.negative_count()), (14, 40, 18));
    assert_eq!(g, gen::erdos_renyi(14, 40, 18, 3).unwrap());

    let o = run(&["solve", "--input", &graph, "--net-degree", "--fix-max-degree", "--json", "--colouring-out", &colouring]);
    assert_eq!(o.status.code(), Some(0));
    let report: SolveReport = serde_json::from_str(&stdout(&o)).unwrap();
    let want = brute_force(&g).unwrap().value;
    assert_eq!(report.value, want);
    assert!(report.optimal);
    assert_eq!(report.deletion_set.len(), want);

    let o = run(&["verify", "--input", &graph, "--colouring", &colouring]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(&format!("confirmed: claimed value {want} matches")));

    // flip one node of the certified colouring
    let (mut x, _) = parse_colouring(&fs::read_to_string(&colouring).unwrap()).unwrap();
    let v = (0..14).find(|&v| g.degree(v) > 0).unwrap();
    x.flip(v);
    let corrupted = path(dir.path(), "bad.txt");
    fs::write(&corrupted, frustration::cli::format_colouring(&x, Some(want))).unwrap();
    let changed = g.frustration_count(&x).unwrap();
    let o = run(&["verify", "--input", &graph, "--colouring", &corrupted]);
    if changed == want {
        assert_eq!(o.status.code(), Some(0));
    } else {
        assert_eq!(o.status.code(), Some(3));
        assert!(stdout(&o).contains("mismatch"));
    }
    let o = run(&["verify", "--input", &graph, "--colouring", &colouring, "--value", &(want + 1).to_string()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn balanced_input_solves_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "b.txt");
    fs::write(&graph, serialise(&gen::balanced_random(200, 800, 5).unwrap())).unwrap();
    let o = run(&["solve", "--input", &graph]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("L = 0 (optimal)"), "{out}");
    assert!(out.contains("deletion set (0 edges):"));
}

#[test]
fn time_limit_reports_bounds_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "hard.txt");
    fs::write(&graph, serialise(&gen::erdos_renyi(80, 900, 450, 1).unwrap())).unwrap();
    let o = run(&["solve", "--input", &graph, "--time-limit", "0.05", "--json"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let report: SolveReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!report.optimal);
    assert!(report.lower_bound <= report.upper_bound);
    let g = parse_edge_list(&fs::read_to_string(&graph).unwrap()).unwrap();
    let x = frustration::Colouring::from_bits(&report.colouring);
    assert_eq!(g.frustration_count(&x).unwrap(), report.value);
}

#[test]
fn usage_and_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.txt");
    fs::write(&graph, serialise(&gen::antibalanced_complete(4))).unwrap();
    assert_eq!(run(&["export", "--input", &graph, "--format", "svg"]).status.code(), Some(1));
    assert_eq!(run(&["solve"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--input", &path(dir.path(), "missing.txt")]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--input", &graph, "--time-limit", "0"]).status.code(), Some(1));
    assert_eq!(run(&["zscore", "--input", &graph, "--reps", "0"]).status.code(), Some(1));
    let broken = path(dir.path(), "broken.txt");
    fs::write(&broken, "2 1\n0 1 7\n").unwrap();
    let o = run(&["solve", "--input", &broken]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn exports() {
    let dir = tempfile::tempdir().unwrap();
    let golden = format!("{}/tests/golden", env!("CARGO_MANIFEST_DIR"));
    let o = run(&["export", "--input", &format!("{golden}/k3.txt"), "--format", "lp"]);
    assert_eq!(stdout(&o), fs::read_to_string(format!("{golden}/k3.lp")).unwrap());

    let o = run(&["export", "--input", &format!("{golden}/k3.txt"), "--format", "qubo"]);
    assert!(stdout(&o).contains("constant 1\n"));

    let graph = path(dir.path(), "g.txt");
    let g = gen::erdos_renyi(12, 30, 15, 2).unwrap();
    fs::write(&graph, serialise(&g)).unwrap();
    let dot = path(dir.path(), "g.dot");
    let o = run(&["export", "--input", &graph, "--format", "dot", "--out", &dot]);
    assert!(o.status.success());
    let text = fs::read_to_string(&dot).unwrap();
    assert_eq!(count_frustrated_in_dot(&text), brute_force(&g).unwrap().value);
    assert_eq!(text.matches("style=dashed").count(), 15);

    let o = run(&["export", "--input", &graph, "--format", "lp", "--net-degree", "--triangles", "--fix-max-degree"]);
    assert!(stdout(&o).contains("\\ options net_degree=true triangles=true fix_max_degree=true"));
}

#[test]
fn zscore_is_reproducible_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.txt");
    fs::write(&graph, serialise(&gen::erdos_renyi(14, 35, 10, 9).unwrap())).unwrap();
    let mut reports = Vec::new();
    for run_id in ["a", "b"] {
        let prefix = path(dir.path(), run_id);
        let o = run(&["zscore", "--input", &graph, "--reps", "30", "--seed", "5", "--out", &prefix, "--threads", "2"]);
        assert_eq!(o.status.code(), Some(0));
        let report = ExperimentReport::from_json(&fs::read_to_string(format!("{prefix}.json")).unwrap()).unwrap();
        let csv = ExperimentReport::parse_records_csv(&fs::read_to_string(format!("{prefix}.csv")).unwrap()).unwrap();
        assert_eq!(csv, report.records);
        assert_eq!(report.records.len(), 30);
        reports.push(report.without_timings());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn sweep_writes_tables_and_matches_solve() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = path(dir.path(), "sweep");
    let o = run(&["sweep", "er", "--n", "15", "--m", "50", "--neg-grid", "0:10:5", "--runs", "4", "--seed", "11", "--out", &prefix]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = ExperimentReport::from_json(&fs::read_to_string(format!("{prefix}.json")).unwrap()).unwrap();
    assert_eq!(report.records.len(), 12);
    assert_eq!(report.aggregates.len(), 3);
    let summary = ExperimentReport::parse_aggregates_csv(&fs::read_to_string(format!("{prefix}_summary.csv")).unwrap()).unwrap();
    assert_eq!(summary, report.aggregates);
    let dat = fs::read_to_string(format!("{prefix}.dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 3);

    // the graph behind one record, solved directly through the CLI
    let rec = &report.records[7];
    let graph = path(dir.path(), "one.txt");
    let o = run(&["gen", "er", "--n", "15", "--m", "50", "--neg", &rec.m_minus.to_string(), "--seed", &rec.seed.to_string(), "--out", &graph]);
    assert!(o.status.success());
    let o = run(&["solve", "--input", &graph, "--json"]);
    let direct: SolveReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(direct.value, rec.value);

    let o = run(&["sweep", "regular", "--n-grid", "10,20", "--d", "4", "--neg-fraction", "0.5", "--runs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("random_regular n=20 d=4 neg=20"));
}

#[test]
fn ba_generation_reports_fit() {
    let o = run(&["gen", "ba", "--n", "15", "--m", "50", "--neg", "10", "--seed", "1"]);
    let out = stdout(&o);
    assert!(out.contains("# ba_attachment k=4"), "{out}");
    let g = parse_edge_list(&out).unwrap();
    assert_eq!((g.edge_count(), g.negative_count()), (50, 10));
}

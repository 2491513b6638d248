//! Experiment reports: per-run records, per-setting aggregates and Z scores,
//! with CSV and JSON round trips.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

/// One solver run inside an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Setting label shared by the runs that are aggregated together.
    pub setting: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub m_minus: usize,
    pub seed: u64,
    pub value: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
    pub wall_ms: f64,
}

/// Mean and standard deviation of `L` over the runs of one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub setting: String,
    pub n: usize,
    pub m: usize,
    pub m_minus: usize,
    pub runs: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
    pub min: usize,
    pub max: usize,
    pub all_optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: String,
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
    /// `L(G)` of the original graph in a reshuffling analysis.
    pub original: Option<RunRecord>,
    /// `(L(G) − mean) / SD`; absent when SD is zero.
    pub z: Option<f64>,
}

/// Mean and population SD.
pub fn mean_sd(values: &[usize]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Groups records by setting, keeping first-appearance order.
pub fn aggregate(records: &[RunRecord]) -> Vec<Aggregate> {
    let mut out: Vec<Aggregate> = Vec::new();
    let mut groups: Vec<Vec<&RunRecord>> = Vec::new();
    for r in records {
        match out.iter().position(|a| a.setting == r.setting) {
            Some(k) => groups[k].push(r),
            None => {
                out.push(Aggregate {
                    setting: r.setting.clone(),
                    n: r.n,
                    m: r.m,
                    m_minus: r.m_minus,
                    runs: 0,
                    mean: 0.0,
                    sd: 0.0,
                    min: 0,
                    max: 0,
                    all_optimal: true,
                });
                groups.push(vec![r]);
            }
        }
    }
    for (a, g) in out.iter_mut().zip(&groups) {
        let values: Vec<usize> = g.iter().map(|r| r.value).collect();
        let (mean, sd) = mean_sd(&values);
        a.runs = g.len();
        a.mean = mean;
        a.sd = sd;
        a.min = *values.iter().min().expect("non-empty group");
        a.max = *values.iter().max().expect("non-empty group");
        a.all_optimal = g.iter().all(|r| r.optimal);
    }
    out
}

/// `None` when the spread is zero, since Z is then undefined.
pub fn z_score(value: usize, mean: f64, sd: f64) -> Option<f64> {
    (sd > 0.0).then(|| (value as f64 - mean) / sd)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

impl ExperimentReport {
    pub fn records_csv(&self) -> Result<String, ReportError> {
        to_csv(&self.records)
    }

    pub fn aggregates_csv(&self) -> Result<String, ReportError> {
        to_csv(&self.aggregates)
    }

    pub fn parse_records_csv(text: &str) -> Result<Vec<RunRecord>, ReportError> {
        from_csv(text)
    }

    pub fn parse_aggregates_csv(text: &str) -> Result<Vec<Aggregate>, ReportError> {
        from_csv(text)
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Whitespace-separated columns for gnuplot: x, mean, sd, min, max.
    pub fn gnuplot_data(&self, x_label: &str, x: impl Fn(&Aggregate) -> f64) -> String {
        let mut out = format!("# {x_label} mean sd min max runs\n");
        for a in &self.aggregates {
            out.push_str(&format!("{} {} {} {} {} {}\n", x(a), a.mean, a.sd, a.min, a.max, a.runs));
        }
        out
    }

    /// The same report with wall times zeroed, for determinism checks.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for rec in r.records.iter_mut().chain(r.original.iter_mut()) {
            rec.wall_ms = 0.0;
        }
        r
    }
}

//! Sparse QUBO text for the unconstrained binary model.
//!
//! ```text
//! # comments
//! qubo <n>
//! constant <c>
//! linear <i> <c_i>
//! quadratic <i> <j> <q_ij>
//! ```
//!
//! The value of `x ∈ {0,1}ⁿ` is `c + Σ c_i x_i + Σ q_ij x_i x_j`, and its
//! minimum is the frustration index.

use std::fmt::Write as _;

use super::{ModelError, ModelInstance, ModelKind};

/// Renders a UBQP instance.
pub fn export_qubo(model: &ModelInstance) -> Result<String, ModelError> {
    if model.kind != ModelKind::Ubqp {
        return Err(ModelError::NotQubo(model.kind));
    }
    let info = &model.graph;
    let mut out = String::new();
    let _ = writeln!(out, "# frustration index, unconstrained binary quadratic model (minimise)");
    let _ = writeln!(out, "# graph {} n={} m={} m_minus={}", info.hash, info.n, info.m, info.m_minus);
    let _ = writeln!(out, "# x_i = 1 puts node i in the black set");
    let _ = writeln!(out, "qubo {}", model.variables.len());
    let _ = writeln!(out, "constant {}", model.objective.constant);
    for &(i, c) in &model.objective.linear {
        let _ = writeln!(out, "linear {i} {c}");
    }
    for &(i, j, q) in &model.objective.quadratic {
        let _ = writeln!(out, "quadratic {i} {j} {q}");
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qubo {
    pub n: usize,
    pub constant: i64,
    pub linear: Vec<(usize, i64)>,
    pub quadratic: Vec<(usize, usize, i64)>,
}

impl Qubo {
    pub fn evaluate(&self, x: &[bool]) -> i64 {
        let b = |i: usize| i64::from(x[i]);
        self.constant
            + self.linear.iter().map(|&(i, c)| c * b(i)).sum::<i64>()
            + self.quadratic.iter().map(|&(i, j, q)| q * b(i) * b(j)).sum::<i64>()
    }
}

pub fn parse_qubo(text: &str) -> Result<Qubo, ModelError> {
    let mut q = Qubo::default();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: &str| ModelError::Syntax { line, msg: msg.to_string() };
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let int = |k: usize| -> Result<i64, ModelError> {
            tokens.get(k).and_then(|t| t.parse().ok()).ok_or_else(|| err("expected an integer"))
        };
        let node = |k: usize| -> Result<usize, ModelError> {
            let v = tokens.get(k).and_then(|t| t.parse::<usize>().ok()).ok_or_else(|| err("expected a variable index"))?;
            if v >= q.n {
                return Err(err("variable index out of range"));
            }
            Ok(v)
        };
        match tokens[0] {
            "qubo" => {
                q.n = int(1)?.try_into().map_err(|_| err("negative size"))?;
                seen_header = true;
            }
            _ if !seen_header => return Err(err("missing qubo header")),
            "constant" => q.constant = int(1)?,
            "linear" => {
                let i = node(1)?;
                q.linear.push((i, int(2)?));
            }
            "quadratic" => {
                let (i, j) = (node(1)?, node(2)?);
                q.quadratic.push((i, j, int(3)?));
            }
            _ => return Err(err("unknown record")),
        }
    }
    if !seen_header {
        return Err(ModelError::Syntax { line: 0, msg: "missing qubo header".into() });
    }
    Ok(q)
}

//! CPLEX LP text for the 0/1 linear model, and a reader for the subset we
//! write.
//!
//! LP files cannot carry an objective constant, so `m⁻` is stated in the
//! header and must be added back: `L(G) = optimum + m⁻`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Expr, ModelError, ModelInstance, ModelKind, Sense};

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, expr: &Expr, names: &[&str], fallback: &str) {
    if expr.linear.is_empty() {
        let _ = write!(out, " 0 {fallback}");
        return;
    }
    for (k, &(v, c)) in expr.linear.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0 { "-" } else if k == 0 { "" } else { "+" };
        if sign.is_empty() {
            let _ = write!(out, " {} {}", c.abs(), names[v]);
        } else {
            let _ = write!(out, " {sign} {} {}", c.abs(), names[v]);
        }
    }
}

/// Renders an ILP instance. Quadratic kinds are rejected.
pub fn export_lp(model: &ModelInstance) -> Result<String, ModelError> {
    if model.kind != ModelKind::Ilp {
        return Err(ModelError::NotLinear(model.kind));
    }
    let names: Vec<&str> = model.variables.iter().map(|v| v.name.as_str()).collect();
    let fallback = names.first().copied().unwrap_or("x_0");
    let info = &model.graph;
    let o = model.options;
    let mut out = String::new();
    let _ = writeln!(out, "\\ frustration index, 0/1 linear model");
    let _ = writeln!(out, "\\ graph {} n={} m={} m_minus={}", info.hash, info.n, info.m, info.m_minus);
    let _ = writeln!(
        out,
        "\\ options net_degree={} triangles={} fix_max_degree={}",
        o.net_degree, o.triangles, o.fix_max_degree
    );
    let _ = writeln!(out, "\\ objective constant {} (L = optimum + {})", model.objective.constant, model.objective.constant);
    out.push_str("Minimize\n obj:");
    write_terms(&mut out, &model.objective, &names, fallback);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, &c.lhs, &names, fallback);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs - c.lhs.constant);
    }
    out.push_str("Bounds\n");
    for name in &names {
        let _ = writeln!(out, " 0 <= {name} <= 1");
    }
    out.push_str("Binaries\n");
    for chunk in names.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<(String, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A parsed LP file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpModel {
    /// From the `objective constant` header comment, 0 if absent.
    pub constant: i64,
    pub objective: Vec<(String, i64)>,
    pub constraints: Vec<LpConstraint>,
    pub binaries: Vec<String>,
}

impl LpModel {
    fn value(values: &BTreeMap<String, i64>, name: &str) -> Result<i64, ModelError> {
        values.get(name).copied().ok_or_else(|| ModelError::Incomplete(name.to_string()))
    }

    fn sum(terms: &[(String, i64)], values: &BTreeMap<String, i64>) -> Result<i64, ModelError> {
        terms.iter().map(|(n, c)| Ok(c * Self::value(values, n)?)).sum()
    }

    /// Objective plus the header constant.
    pub fn evaluate(&self, values: &BTreeMap<String, i64>) -> Result<i64, ModelError> {
        Ok(self.constant + Self::sum(&self.objective, values)?)
    }

    pub fn feasible(&self, values: &BTreeMap<String, i64>) -> Result<bool, ModelError> {
        for c in &self.constraints {
            if !c.sense.holds(Self::sum(&c.terms, values)?, c.rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

fn syntax(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, msg: msg.into() }
}

/// Linear terms like `2 x_0 - 1 x_1 + x_2`.
fn parse_terms(tokens: &[&str], line: usize) -> Result<Vec<(String, i64)>, ModelError> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            _ => {
                if let Ok(c) = tok.parse::<i64>() {
                    coef = Some(c);
                } else {
                    terms.push((tok.to_string(), sign * coef.unwrap_or(1)));
                    sign = 1;
                    coef = None;
                }
            }
        }
    }
    if coef.is_some() {
        return Err(syntax(line, "dangling coefficient"));
    }
    Ok(terms)
}

/// Reads the LP subset written by [`export_lp`]: one objective, named
/// linear constraints (possibly continued on indented lines), bounds and a
/// binaries list.
pub fn parse_lp(text: &str) -> Result<LpModel, ModelError> {
    let mut model = LpModel::default();
    let mut section = Section::Preamble;
    // (start line, accumulated tokens) of the statement being read
    let mut pending: Option<(usize, String)> = None;

    let flush = |section: &Section, pending: &mut Option<(usize, String)>, model: &mut LpModel| -> Result<(), ModelError> {
        let Some((line, text)) = pending.take() else { return Ok(()) };
        let (name, body) = text.split_once(':').ok_or_else(|| syntax(line, "missing label"))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match section {
            Section::Objective => {
                model.objective = parse_terms(&tokens, line)?;
            }
            Section::Constraints => {
                let at = tokens
                    .iter()
                    .position(|t| matches!(*t, "<=" | ">=" | "="))
                    .ok_or_else(|| syntax(line, "missing comparison"))?;
                let sense = match tokens[at] {
                    "<=" => Sense::Le,
                    ">=" => Sense::Ge,
                    _ => Sense::Eq,
                };
                let rhs = tokens
                    .get(at + 1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax(line, "bad right-hand side"))?;
                model.constraints.push(LpConstraint {
                    name: name.trim().to_string(),
                    terms: parse_terms(&tokens[..at], line)?,
                    sense,
                    rhs,
                });
            }
            _ => {}
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if let Some(comment) = raw.trim_start().strip_prefix('\\') {
            if let Some(rest) = comment.trim().strip_prefix("objective constant ") {
                let tok = rest.split_whitespace().next().unwrap_or("");
                model.constant = tok.parse().map_err(|_| syntax(line, "bad objective constant"))?;
            }
            continue;
        }
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let next = match trimmed.to_ascii_lowercase().as_str() {
            "minimize" | "minimise" | "min" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" => Some(Section::Binaries),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(next) = next {
            flush(&section, &mut pending, &mut model)?;
            section = next;
            continue;
        }
        match section {
            Section::Objective | Section::Constraints => {
                let continuation = raw.starts_with("   ") || !trimmed.contains(':');
                match (&mut pending, continuation) {
                    (Some((_, acc)), true) => {
                        acc.push(' ');
                        acc.push_str(trimmed);
                    }
                    _ => {
                        flush(&section, &mut pending, &mut model)?;
                        pending = Some((line, trimmed.to_string()));
                    }
                }
            }
            Section::Bounds => {}
            Section::Binaries => model.binaries.extend(trimmed.split_whitespace().map(str::to_string)),
            Section::Preamble => return Err(syntax(line, "content before Minimize")),
            Section::Done => return Err(syntax(line, "content after End")),
        }
    }
    if section != Section::Done {
        return Err(syntax(text.lines().count(), "missing End"));
    }
    Ok(model)
}

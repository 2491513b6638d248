//! Depth-first exact minimisation of small binary models.
//!
//! This works on the model as written (variables, constraints, objective)
//! and knows nothing about graphs, so it gives an independent route to the
//! optimum of each formulation. Linear constraints are propagated by
//! activity bounds; the objective bound is the fixed part plus the most
//! negative completion of every term.

use super::{Direction, Domain, ModelError, ModelInstance, Sense};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySolution {
    pub value: i64,
    pub values: Vec<i64>,
    pub nodes: u64,
}

const FREE: i8 = -1;

struct Row {
    terms: Vec<(usize, i64)>,
    sense: Sense,
    rhs: i64,
    min: i64,
    max: i64,
}

struct Search<'a> {
    model: &'a ModelInstance,
    rows: Vec<Row>,
    /// variable -> (row, coefficient)
    occurs: Vec<Vec<(usize, i64)>>,
    value: Vec<i8>,
    trail: Vec<usize>,
    best: Option<(i64, Vec<i64>)>,
    nodes: u64,
}

impl Search<'_> {
    fn row_ok(r: &Row) -> bool {
        match r.sense {
            Sense::Le => r.min <= r.rhs,
            Sense::Ge => r.max >= r.rhs,
            Sense::Eq => r.min <= r.rhs && r.max >= r.rhs,
        }
    }

    fn assign(&mut self, v: usize, val: i8) -> bool {
        self.value[v] = val;
        self.trail.push(v);
        let mut ok = true;
        for &(r, c) in &self.occurs[v] {
            let row = &mut self.rows[r];
            // free contribution was [min(0,c), max(0,c)]; now exactly c·val
            row.min += c * i64::from(val) - c.min(0);
            row.max += c * i64::from(val) - c.max(0);
            ok &= Self::row_ok(row);
        }
        ok
    }

    fn unassign_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("non-empty trail");
            let val = i64::from(self.value[v]);
            for &(r, c) in &self.occurs[v] {
                let row = &mut self.rows[r];
                row.min -= c * val - c.min(0);
                row.max -= c * val - c.max(0);
            }
            self.value[v] = FREE;
        }
    }

    /// Forces free variables whose other value would break a row.
    fn propagate(&mut self) -> bool {
        loop {
            let mut forced = None;
            'rows: for row in &self.rows {
                for &(v, c) in &row.terms {
                    if self.value[v] != FREE || c == 0 {
                        continue;
                    }
                    // activity range if v took 1 or 0
                    let (min1, max1) = (row.min + c - c.min(0), row.max + c - c.max(0));
                    let (min0, max0) = (row.min - c.min(0), row.max - c.max(0));
                    let fits = |lo: i64, hi: i64| match row.sense {
                        Sense::Le => lo <= row.rhs,
                        Sense::Ge => hi >= row.rhs,
                        Sense::Eq => lo <= row.rhs && hi >= row.rhs,
                    };
                    match (fits(min0, max0), fits(min1, max1)) {
                        (true, true) => {}
                        (true, false) => {
                            forced = Some((v, 0));
                            break 'rows;
                        }
                        (false, true) => {
                            forced = Some((v, 1));
                            break 'rows;
                        }
                        (false, false) => return false,
                    }
                }
            }
            match forced {
                None => return true,
                Some((v, val)) => {
                    if !self.assign(v, val) {
                        return false;
                    }
                }
            }
        }
    }

    fn objective_bound(&self) -> i64 {
        let obj = &self.model.objective;
        let val = |v: usize| self.value[v];
        let mut bound = obj.constant;
        for &(v, c) in &obj.linear {
            bound += match val(v) {
                FREE => c.min(0),
                x => c * i64::from(x),
            };
        }
        for &(a, b, q) in &obj.quadratic {
            bound += match (val(a), val(b)) {
                (0, _) | (_, 0) => 0,
                (1, 1) => q,
                _ => q.min(0),
            };
        }
        bound
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        let bound = self.objective_bound();
        if self.best.as_ref().is_some_and(|(b, _)| bound >= *b) {
            return;
        }
        let Some(v) = self.value.iter().position(|&x| x == FREE) else {
            let values: Vec<i64> = self.value.iter().map(|&x| i64::from(x)).collect();
            self.best = Some((bound, values));
            return;
        };
        // try the value the objective prefers first
        let c: i64 = self.model.objective.linear.iter().filter(|t| t.0 == v).map(|t| t.1).sum();
        let first = i8::from(c < 0);
        for val in [first, 1 - first] {
            let mark = self.trail.len();
            if self.assign(v, val) && self.propagate() {
                self.dfs();
            }
            self.unassign_to(mark);
        }
    }
}

/// Exact optimum of a binary minimisation model (ILP or UBQP kinds).
///
/// Exponential in the worst case; meant for instances with a few dozen
/// variables. Returns `None` inside `Ok` when the model is infeasible.
pub fn minimise_binary(model: &ModelInstance) -> Result<Option<BinarySolution>, ModelError> {
    if model.direction != Direction::Minimise || model.variables.iter().any(|v| v.domain != Domain::Binary) {
        return Err(ModelError::NotBinary(model.kind));
    }
    if model.constraints.iter().any(|c| !c.lhs.quadratic.is_empty()) {
        return Err(ModelError::NotBinary(model.kind));
    }
    let nv = model.variables.len();
    let mut occurs = vec![Vec::new(); nv];
    let rows: Vec<Row> = model
        .constraints
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let mut terms: Vec<(usize, i64)> = Vec::new();
            for &(v, coef) in &c.lhs.linear {
                match terms.iter_mut().find(|t| t.0 == v) {
                    Some(t) => t.1 += coef,
                    None => terms.push((v, coef)),
                }
            }
            for &(v, coef) in &terms {
                occurs[v].push((r, coef));
            }
            let min = terms.iter().map(|t| t.1.min(0)).sum();
            let max = terms.iter().map(|t| t.1.max(0)).sum();
            Row { terms, sense: c.sense, rhs: c.rhs - c.lhs.constant, min, max }
        })
        .collect();
    let mut s = Search { model, rows, occurs, value: vec![FREE; nv], trail: Vec::new(), best: None, nodes: 0 };
    if s.rows.iter().all(Search::row_ok) && s.propagate() {
        s.dfs();
    }
    Ok(s.best.map(|(value, values)| BinarySolution { value, values, nodes: s.nodes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::models::{build_ilp, build_qcqp, build_ubqp, IlpOptions};
    use crate::oracle::brute_force;

    #[test]
    fn ilp_and_ubqp_optima_match_the_oracle() {
        for seed in 0..12u64 {
            let n = 5 + seed as usize % 4;
            let m = (n * (n - 1) / 2).min(n + 4);
            let g = gen::erdos_renyi(n, m, (seed as usize * 3) % (m + 1), seed).unwrap();
            let want = brute_force(&g).unwrap().value as i64;
            assert_eq!(minimise_binary(&build_ubqp(&g)).unwrap().unwrap().value, want);
            for opts in IlpOptions::combinations() {
                let model = build_ilp(&g, opts);
                let sol = minimise_binary(&model).unwrap().unwrap();
                assert_eq!(sol.value, want, "seed {seed} {opts:?}");
                let x = model.colouring_from_values(&sol.values);
                assert_eq!(g.frustration_count(&x).unwrap() as i64, want);
            }
        }
    }

    #[test]
    fn spin_models_are_rejected() {
        let g = gen::antibalanced_complete(3);
        assert!(minimise_binary(&build_qcqp(&g)).is_err());
    }
}

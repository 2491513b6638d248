//! The quadratic and 0/1 linear formulations of the frustration index as
//! explicit model instances.
//!
//! * QCQP: maximise `Z₁ = Σ_i Σ_j a_ij y_i y_j` subject to `y_i² = 1`; the
//!   optimum gives `L(G) = (2m − Z₁*) / 4`.
//! * UBQP: minimise `Z₂ = Σ_i Σ_j (a_ij x_i − a_ij x_i x_j) + m⁻` over
//!   binary `x`; `Z₂* = L(G)`.
//! * ILP: `Z₂` linearised with one binary `x_ij` per edge, plus optional
//!   net-degree, triangle and fixing inequalities.
//!
//! All coefficients are integers and evaluation is exact.

mod binary;
mod lp;
mod qubo;

pub use binary::{minimise_binary, BinarySolution};
pub use lp::{export_lp, parse_lp, LpModel};
pub use qubo::{export_qubo, parse_qubo, Qubo};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::sgraph::{serialise, Colouring, SignedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("assignment has no value for variable {0}")]
    Incomplete(String),
    #[error("value {value} outside the domain of variable {name}")]
    Domain { name: String, value: i64 },
    #[error("{0:?} models have a quadratic objective and cannot be written as LP")]
    NotLinear(ModelKind),
    #[error("{0:?} models cannot be written as QUBO; build the UBQP model instead")]
    NotQubo(ModelKind),
    #[error("exact binary minimisation needs a binary minimisation model, got {0:?}")]
    NotBinary(ModelKind),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Qcqp,
    Ubqp,
    Ilp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// Continuous variable restricted to `{-1, +1}` by a `y² = 1` constraint.
    Spin,
    Binary,
}

impl Domain {
    fn contains(self, v: i64) -> bool {
        match self {
            Domain::Spin => v == -1 || v == 1,
            Domain::Binary => v == 0 || v == 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub domain: Domain,
}

/// `constant + Σ c·v + Σ q·v·w` over variable indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expr {
    pub constant: i64,
    pub linear: Vec<(usize, i64)>,
    pub quadratic: Vec<(usize, usize, i64)>,
}

impl Expr {
    pub fn eval(&self, values: &[i64]) -> i64 {
        self.constant
            + self.linear.iter().map(|&(v, c)| c * values[v]).sum::<i64>()
            + self.quadratic.iter().map(|&(a, b, q)| q * values[a] * values[b]).sum::<i64>()
    }

    fn linear(terms: Vec<(usize, i64)>) -> Self {
        Expr { constant: 0, linear: terms, quadratic: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Where a constraint comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintGroup {
    Core,
    NetDegree,
    Triangle,
    Fixing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub lhs: Expr,
    pub sense: Sense,
    pub rhs: i64,
    pub group: ConstraintGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Maximise,
    Minimise,
}

/// Optional inequality groups of the 0/1 linear model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IlpOptions {
    pub net_degree: bool,
    pub triangles: bool,
    pub fix_max_degree: bool,
}

impl IlpOptions {
    pub const ALL: IlpOptions = IlpOptions { net_degree: true, triangles: true, fix_max_degree: true };

    /// All eight on/off combinations.
    pub fn combinations() -> impl Iterator<Item = IlpOptions> {
        (0..8u8).map(|b| IlpOptions { net_degree: b & 1 != 0, triangles: b & 2 != 0, fix_max_degree: b & 4 != 0 })
    }
}

/// Facts about the source graph, carried into exported headers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInfo {
    pub n: usize,
    pub m: usize,
    pub m_minus: usize,
    pub hash: String,
}

impl GraphInfo {
    fn of(g: &SignedGraph) -> Self {
        GraphInfo { n: g.node_count(), m: g.edge_count(), m_minus: g.negative_count(), hash: graph_hash(g) }
    }
}

/// First 16 hex digits of the SHA-256 of the canonical edge list.
pub fn graph_hash(g: &SignedGraph) -> String {
    let digest = Sha256::digest(serialise(g).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelInstance {
    pub kind: ModelKind,
    pub variables: Vec<Variable>,
    pub objective: Expr,
    pub direction: Direction,
    pub constraints: Vec<Constraint>,
    pub graph: GraphInfo,
    /// Only meaningful for [`ModelKind::Ilp`].
    pub options: IlpOptions,
    /// Variable index of the colour of node `i` (`y_i` or `x_i`).
    pub node_vars: Vec<usize>,
    /// Variable index of `x_ij` for edge `k` (ILP only).
    pub edge_vars: Vec<usize>,
}

impl ModelInstance {
    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn count_in_group(&self, group: ConstraintGroup) -> usize {
        self.constraints.iter().filter(|c| c.group == group).count()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Value vector in variable order, checking completeness and domains.
    pub fn resolve(&self, a: &Assignment) -> Result<Vec<i64>, ModelError> {
        self.variables
            .iter()
            .map(|var| {
                let value = *a.values.get(&var.name).ok_or_else(|| ModelError::Incomplete(var.name.clone()))?;
                if !var.domain.contains(value) {
                    return Err(ModelError::Domain { name: var.name.clone(), value });
                }
                Ok(value)
            })
            .collect()
    }

    /// Objective value including its constant term.
    pub fn evaluate(&self, a: &Assignment) -> Result<i64, ModelError> {
        Ok(self.objective.eval(&self.resolve(a)?))
    }

    /// Whether every constraint holds.
    pub fn feasible(&self, a: &Assignment) -> Result<bool, ModelError> {
        let values = self.resolve(a)?;
        Ok(self.constraints.iter().all(|c| c.sense.holds(c.lhs.eval(&values), c.rhs)))
    }

    /// Names of the violated constraints.
    pub fn violated(&self, a: &Assignment) -> Result<Vec<String>, ModelError> {
        let values = self.resolve(a)?;
        Ok(self
            .constraints
            .iter()
            .filter(|c| !c.sense.holds(c.lhs.eval(&values), c.rhs))
            .map(|c| c.name.clone())
            .collect())
    }

    /// Colouring read back from the node variables of a value vector.
    pub fn colouring_from_values(&self, values: &[i64]) -> Colouring {
        Colouring::from_bools(self.node_vars.iter().map(|&v| values[v] == 1).collect())
    }
}

/// Variable name to value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub values: BTreeMap<String, i64>,
}

impl Assignment {
    pub fn set(&mut self, name: impl Into<String>, value: i64) {
        self.values.insert(name.into(), value);
    }

    /// The assignment induced by a colouring: `y_i = 2x_i − 1` for the
    /// QCQP, `x_i` for the binary models and `x_ij = x_i·x_j` for edges.
    pub fn from_colouring(model: &ModelInstance, x: &Colouring) -> Self {
        let mut a = Assignment::default();
        for (i, &var) in model.node_vars.iter().enumerate() {
            let bit = i64::from(x.is_black(i));
            let value = match model.variables[var].domain {
                Domain::Spin => 2 * bit - 1,
                Domain::Binary => bit,
            };
            a.set(model.variables[var].name.clone(), value);
        }
        if !model.edge_vars.is_empty() {
            for (k, &var) in model.edge_vars.iter().enumerate() {
                let name = &model.variables[var].name;
                let (i, j) = edge_endpoints(name).unwrap_or_else(|| panic!("edge variable {name} ({k})"));
                a.set(name.clone(), i64::from(x.is_black(i) && x.is_black(j)));
            }
        }
        a
    }

    /// Binary-model assignment from a value vector in variable order.
    pub fn from_values(model: &ModelInstance, values: &[i64]) -> Self {
        let mut a = Assignment::default();
        for (var, &v) in model.variables.iter().zip(values) {
            a.set(var.name.clone(), v);
        }
        a
    }
}

fn node_name(i: usize, spin: bool) -> String {
    if spin {
        format!("y_{i}")
    } else {
        format!("x_{i}")
    }
}

fn edge_name(i: usize, j: usize) -> String {
    format!("x_{i}_{j}")
}

fn edge_endpoints(name: &str) -> Option<(usize, usize)> {
    let mut it = name.strip_prefix("x_")?.split('_');
    let i = it.next()?.parse().ok()?;
    let j = it.next()?.parse().ok()?;
    Some((i, j))
}

fn node_variables(n: usize, domain: Domain) -> Vec<Variable> {
    (0..n).map(|i| Variable { name: node_name(i, domain == Domain::Spin), domain }).collect()
}

/// Quadratically constrained model over spins `y_i ∈ {−1, +1}`.
pub fn build_qcqp(g: &SignedGraph) -> ModelInstance {
    let n = g.node_count();
    // Σ_i Σ_j a_ij y_i y_j counts every edge in both orders.
    let quadratic = g.edges().iter().map(|e| (e.u, e.v, 2 * e.sign.value())).collect();
    let constraints = (0..n)
        .map(|i| Constraint {
            name: format!("spin_{i}"),
            lhs: Expr { constant: 0, linear: Vec::new(), quadratic: vec![(i, i, 1)] },
            sense: Sense::Eq,
            rhs: 1,
            group: ConstraintGroup::Core,
        })
        .collect();
    ModelInstance {
        kind: ModelKind::Qcqp,
        variables: node_variables(n, Domain::Spin),
        objective: Expr { constant: 0, linear: Vec::new(), quadratic },
        direction: Direction::Maximise,
        constraints,
        graph: GraphInfo::of(g),
        options: IlpOptions::default(),
        node_vars: (0..n).collect(),
        edge_vars: Vec::new(),
    }
}

fn net_degree_terms(g: &SignedGraph) -> Vec<(usize, i64)> {
    (0..g.node_count())
        .map(|i| (i, g.net_degree(i).expect("node in range")))
        .filter(|&(_, d)| d != 0)
        .collect()
}

/// Unconstrained binary quadratic model.
pub fn build_ubqp(g: &SignedGraph) -> ModelInstance {
    let n = g.node_count();
    // Σ_i Σ_j a_ij x_i = Σ_i d_i x_i and the symmetric double sum of
    // a_ij x_i x_j folds into 2 a_ij per edge.
    let quadratic = g.edges().iter().map(|e| (e.u, e.v, -2 * e.sign.value())).collect();
    ModelInstance {
        kind: ModelKind::Ubqp,
        variables: node_variables(n, Domain::Binary),
        objective: Expr { constant: g.negative_count() as i64, linear: net_degree_terms(g), quadratic },
        direction: Direction::Minimise,
        constraints: Vec::new(),
        graph: GraphInfo::of(g),
        options: IlpOptions::default(),
        node_vars: (0..n).collect(),
        edge_vars: Vec::new(),
    }
}

/// Node triples `(i, j, k)`, `i < j < k`, spanning a triangle, in
/// lexicographic order.
pub fn enumerate_triangles(g: &SignedGraph) -> Vec<(usize, usize, usize)> {
    let n = g.node_count();
    let mut higher: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        higher[e.u].push(e.v);
    }
    for h in &mut higher {
        h.sort_unstable();
    }
    let mut out = Vec::new();
    for i in 0..n {
        for (a, &j) in higher[i].iter().enumerate() {
            // common higher neighbours of i and j beyond j
            let (xs, ys) = (&higher[i][a + 1..], &higher[j]);
            let (mut p, mut q) = (0, 0);
            while p < xs.len() && q < ys.len() {
                match xs[p].cmp(&ys[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        out.push((i, j, xs[p]));
                        p += 1;
                        q += 1;
                    }
                }
            }
        }
    }
    out
}

/// The 0/1 linear model with the requested inequality groups.
pub fn build_ilp(g: &SignedGraph, opts: IlpOptions) -> ModelInstance {
    let n = g.node_count();
    let mut variables = node_variables(n, Domain::Binary);
    let mut edge_vars = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        edge_vars.push(variables.len());
        variables.push(Variable { name: edge_name(e.u, e.v), domain: Domain::Binary });
    }
    let edge_var = |i: usize, j: usize| -> usize {
        let k = g
            .edges()
            .binary_search_by_key(&(i, j), |e| (e.u, e.v))
            .unwrap_or_else(|_| panic!("edge ({i}, {j}) not in graph"));
        edge_vars[k]
    };

    let mut linear = net_degree_terms(g);
    linear.extend(g.edges().iter().zip(&edge_vars).map(|(e, &v)| (v, -2 * e.sign.value())));
    let objective = Expr { constant: g.negative_count() as i64, linear, quadratic: Vec::new() };

    let mut constraints = Vec::new();
    for (e, &xe) in g.edges().iter().zip(&edge_vars) {
        let c = if e.sign.is_negative() {
            // x_ij >= x_i + x_j - 1
            Constraint {
                name: format!("core_{}_{}", e.u, e.v),
                lhs: Expr::linear(vec![(xe, 1), (e.u, -1), (e.v, -1)]),
                sense: Sense::Ge,
                rhs: -1,
                group: ConstraintGroup::Core,
            }
        } else {
            // 2 x_ij <= x_i + x_j
            Constraint {
                name: format!("core_{}_{}", e.u, e.v),
                lhs: Expr::linear(vec![(xe, 2), (e.u, -1), (e.v, -1)]),
                sense: Sense::Le,
                rhs: 0,
                group: ConstraintGroup::Core,
            }
        };
        constraints.push(c);
    }

    if opts.net_degree {
        // Σ_j a_ij (1 − 2x_i − 2x_j + 4x_ij) >= 0
        for i in 0..n {
            let d = g.net_degree(i).expect("node in range");
            let mut terms = vec![(i, -2 * d)];
            for nb in g.neighbours(i) {
                let a = nb.sign.value();
                terms.push((nb.node, -2 * a));
                terms.push((edge_vars[nb.edge], 4 * a));
            }
            constraints.push(Constraint {
                name: format!("netdeg_{i}"),
                lhs: Expr::linear(terms),
                sense: Sense::Ge,
                rhs: -d,
                group: ConstraintGroup::NetDegree,
            });
        }
    }

    if opts.triangles {
        for (i, j, k) in enumerate_triangles(g) {
            let (xij, xik, xjk) = (edge_var(i, j), edge_var(i, k), edge_var(j, k));
            let rows: [(Vec<(usize, i64)>, i64); 4] = [
                (vec![(i, 1), (xjk, 1), (xij, -1), (xik, -1)], 0),
                (vec![(j, 1), (xik, 1), (xij, -1), (xjk, -1)], 0),
                (vec![(k, 1), (xij, 1), (xik, -1), (xjk, -1)], 0),
                (vec![(xij, 1), (xik, 1), (xjk, 1), (i, -1), (j, -1), (k, -1)], -1),
            ];
            for (t, (terms, rhs)) in rows.into_iter().enumerate() {
                constraints.push(Constraint {
                    name: format!("tri_{i}_{j}_{k}_{}", ["a", "b", "c", "d"][t]),
                    lhs: Expr::linear(terms),
                    sense: Sense::Ge,
                    rhs,
                    group: ConstraintGroup::Triangle,
                });
            }
        }
    }

    if opts.fix_max_degree {
        if let Some(k) = g.max_degree_node() {
            constraints.push(Constraint {
                name: format!("fix_{k}"),
                lhs: Expr::linear(vec![(k, 1)]),
                sense: Sense::Eq,
                rhs: 1,
                group: ConstraintGroup::Fixing,
            });
        }
    }

    ModelInstance {
        kind: ModelKind::Ilp,
        variables,
        objective,
        direction: Direction::Minimise,
        constraints,
        graph: GraphInfo::of(g),
        options: opts,
        node_vars: (0..n).collect(),
        edge_vars,
    }
}

/// Frustration count implied by a QCQP objective value: `(2m − Z₁) / 4`.
pub fn frustration_from_qcqp(m: usize, z1: i64) -> i64 {
    (2 * m as i64 - z1) / 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::sgraph::Sign;

    fn k3_one_negative() -> SignedGraph {
        SignedGraph::new(3, [(0, 1, Sign::Positive), (0, 2, Sign::Positive), (1, 2, Sign::Negative)]).unwrap()
    }

    fn spins(model: &ModelInstance, y: &[i64]) -> Assignment {
        Assignment::from_values(model, y)
    }

    #[test]
    fn qcqp_single_edge_values() {
        let pos = SignedGraph::new(2, [(0, 1, Sign::Positive)]).unwrap();
        let q = build_qcqp(&pos);
        assert_eq!(q.evaluate(&spins(&q, &[1, 1])).unwrap(), 2);
        let neg = SignedGraph::new(2, [(0, 1, Sign::Negative)]).unwrap();
        let q = build_qcqp(&neg);
        assert_eq!(q.evaluate(&spins(&q, &[1, -1])).unwrap(), 2);
        assert!(q.feasible(&spins(&q, &[1, -1])).unwrap());
        assert!(matches!(q.evaluate(&spins(&q, &[1, 0])), Err(ModelError::Domain { .. })));
    }

    #[test]
    fn ubqp_single_edge_values() {
        let pos = gen::erdos_renyi(5, 6, 0, 1).unwrap();
        let u = build_ubqp(&pos);
        assert_eq!(u.evaluate(&Assignment::from_colouring(&u, &Colouring::all_white(5))).unwrap(), 0);
        let neg = SignedGraph::new(2, [(0, 1, Sign::Negative)]).unwrap();
        let u = build_ubqp(&neg);
        assert_eq!(u.evaluate(&Assignment::from_values(&u, &[1, 0])).unwrap(), 0);
        assert_eq!(u.evaluate(&Assignment::from_values(&u, &[0, 0])).unwrap(), 1);
    }

    #[test]
    fn table_shapes() {
        let g = gen::erdos_renyi(9, 20, 8, 2).unwrap();
        let q = build_qcqp(&g);
        assert_eq!((q.variable_count(), q.constraint_count()), (9, 9));
        let u = build_ubqp(&g);
        assert_eq!((u.variable_count(), u.constraint_count()), (9, 0));
        let l = build_ilp(&g, IlpOptions::default());
        assert_eq!((l.variable_count(), l.constraint_count()), (29, 20));
    }

    #[test]
    fn ilp_k3_counts() {
        let g = k3_one_negative();
        let core = build_ilp(&g, IlpOptions::default());
        assert_eq!((core.variable_count(), core.constraint_count()), (6, 3));
        let all = build_ilp(&g, IlpOptions::ALL);
        assert_eq!(all.constraint_count() - 3, 8);
        assert_eq!(all.count_in_group(ConstraintGroup::NetDegree), 3);
        assert_eq!(all.count_in_group(ConstraintGroup::Triangle), 4);
        assert_eq!(all.count_in_group(ConstraintGroup::Fixing), 1);
    }

    #[test]
    fn extra_constraint_count_formula() {
        for seed in 0..5 {
            let g = gen::erdos_renyi(12, 30, 10, seed).unwrap();
            let t = enumerate_triangles(&g).len();
            let all = build_ilp(&g, IlpOptions::ALL);
            assert_eq!(all.constraint_count() - g.edge_count(), 12 + 4 * t + 1);
        }
    }

    #[test]
    fn triangles_of_k4_and_tree() {
        let k4 = gen::antibalanced_complete(4);
        assert_eq!(enumerate_triangles(&k4), vec![(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]);
        let tree = SignedGraph::new(4, [(0, 1, Sign::Positive), (0, 2, Sign::Negative), (2, 3, Sign::Positive)])
            .unwrap();
        assert!(enumerate_triangles(&tree).is_empty());
    }

    #[test]
    fn fixing_targets_max_degree_smallest_id() {
        let g = SignedGraph::new(5, [(1, 2, Sign::Positive), (1, 3, Sign::Positive), (3, 4, Sign::Negative), (3, 0, Sign::Positive)])
            .unwrap();
        let m = build_ilp(&g, IlpOptions { fix_max_degree: true, ..Default::default() });
        let fix = m.constraints.iter().find(|c| c.group == ConstraintGroup::Fixing).unwrap();
        assert_eq!(fix.name, "fix_3");
        // a 4-cycle: every node ties at degree 2
        let tie = SignedGraph::new(4, [(1, 0, Sign::Positive), (1, 3, Sign::Negative), (2, 0, Sign::Positive), (2, 3, Sign::Positive)])
            .unwrap();
        let m = build_ilp(&tie, IlpOptions { fix_max_degree: true, ..Default::default() });
        assert_eq!(m.constraints.last().unwrap().name, "fix_0");
    }

    #[test]
    fn ilp_colouring_assignment_is_feasible_and_counts() {
        for seed in 0..20 {
            let g = gen::erdos_renyi(10, 22, (seed as usize * 3) % 23, seed).unwrap();
            let model = build_ilp(&g, IlpOptions { triangles: true, ..Default::default() });
            let x = Colouring::from_bits(&[(seed % 2) as u8, 1, 0, 0, 1, 1, 0, 1, 0, 1]);
            let a = Assignment::from_colouring(&model, &x);
            assert!(model.feasible(&a).unwrap());
            assert_eq!(model.evaluate(&a).unwrap(), g.frustration_count(&x).unwrap() as i64);
        }
    }

    #[test]
    fn incomplete_assignment_is_an_error() {
        let model = build_ilp(&k3_one_negative(), IlpOptions::default());
        let mut a = Assignment::from_colouring(&model, &Colouring::all_white(3));
        a.values.remove("x_1_2");
        assert_eq!(model.evaluate(&a), Err(ModelError::Incomplete("x_1_2".into())));
    }

    #[test]
    fn hash_is_stable_and_distinguishes_graphs() {
        let g = k3_one_negative();
        assert_eq!(graph_hash(&g), graph_hash(&g.clone()));
        assert_eq!(graph_hash(&g).len(), 16);
        assert_ne!(graph_hash(&g), graph_hash(&gen::antibalanced_complete(3)));
    }
}

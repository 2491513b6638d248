//! Signed graphs, node colourings and the frustration count.

mod balance;
mod io;

pub use balance::{is_balanced, spanning_forest_colouring, BalanceCertificate};
pub use io::{parse_edge_list, serialise, serialise_with_header, ParseError};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("colouring covers {got} nodes but graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Sign of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+1",
            Sign::Negative => "-1",
        })
    }
}

/// An undirected signed edge stored canonically with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

impl Edge {
    /// Whether this edge is frustrated when its endpoints are coloured
    /// `cu` and `cv` (true = black).
    #[inline]
    pub fn is_frustrated(&self, cu: bool, cv: bool) -> bool {
        match self.sign {
            Sign::Positive => cu != cv,
            Sign::Negative => cu == cv,
        }
    }
}

/// One entry of a node's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbour {
    pub node: usize,
    pub sign: Sign,
    /// Index into [`SignedGraph::edges`].
    pub edge: usize,
}

/// Immutable simple undirected graph with `±1` edge signs.
///
/// Nodes are `0..n`. Edges are kept sorted lexicographically with `u < v`,
/// so equal graphs always have identical edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Neighbour>>,
    negative: usize,
}

impl SignedGraph {
    /// Builds a graph from `(i, j, sign)` triples in any orientation.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut list = Vec::new();
        for (i, j, sign) in edges {
            if i >= n || j >= n {
                return Err(GraphError::NodeOutOfRange { node: i.max(j), n });
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            let (u, v) = if i < j { (i, j) } else { (j, i) };
            list.push(Edge { u, v, sign });
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0].u == w[1].u && w[0].v == w[1].v {
                return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
            }
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Builds a graph from a list already known to be canonical and simple.
    pub(crate) fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| (w[0].u, w[0].v) < (w[1].u, w[1].v)));
        let mut adjacency = vec![Vec::new(); n];
        let mut negative = 0;
        for (idx, e) in edges.iter().enumerate() {
            adjacency[e.u].push(Neighbour { node: e.v, sign: e.sign, edge: idx });
            adjacency[e.v].push(Neighbour { node: e.u, sign: e.sign, edge: idx });
            if e.sign.is_negative() {
                negative += 1;
            }
        }
        SignedGraph { n, edges, adjacency, negative }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn negative_count(&self) -> usize {
        self.negative
    }

    pub fn positive_count(&self) -> usize {
        self.edges.len() - self.negative
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbours(&self, i: usize) -> &[Neighbour] {
        &self.adjacency[i]
    }

    /// `2m / (n(n-1))`; zero for graphs with fewer than two nodes.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / (self.n as f64 * (self.n as f64 - 1.0))
    }

    /// Adjacency matrix entry `a_ij`: the edge sign, or 0 off edges.
    pub fn sign_between(&self, i: usize, j: usize) -> i64 {
        let (u, v) = if i < j { (i, j) } else { (j, i) };
        if u == v || v >= self.n {
            return 0;
        }
        self.adjacency[u]
            .iter()
            .find(|nb| nb.node == v)
            .map_or(0, |nb| nb.sign.value())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn positive_degree(&self, i: usize) -> usize {
        self.adjacency[i].iter().filter(|nb| nb.sign == Sign::Positive).count()
    }

    pub fn negative_degree(&self, i: usize) -> usize {
        self.adjacency[i].iter().filter(|nb| nb.sign == Sign::Negative).count()
    }

    /// `d⁺(i) − d⁻(i)`, i.e. the row sum of the adjacency matrix.
    pub fn net_degree(&self, i: usize) -> Result<i64, GraphError> {
        if i >= self.n {
            return Err(GraphError::NodeOutOfRange { node: i, n: self.n });
        }
        Ok(self.adjacency[i].iter().map(|nb| nb.sign.value()).sum())
    }

    /// Node with the largest unsigned degree, smallest id on ties.
    pub fn max_degree_node(&self) -> Option<usize> {
        (0..self.n).max_by_key(|&i| (self.degree(i), std::cmp::Reverse(i)))
    }

    /// Connected component label of every node plus the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..self.n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            stack.push(root);
            while let Some(x) = stack.pop() {
                for nb in &self.adjacency[x] {
                    if label[nb.node] == usize::MAX {
                        label[nb.node] = count;
                        stack.push(nb.node);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Cyclomatic number `m − n + c`.
    pub fn circuit_rank(&self) -> usize {
        let (_, c) = self.components();
        self.edges.len() + c - self.n
    }

    /// Subgraph induced by `nodes`; node `k` of the result is `nodes[k]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> SignedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| local[e.u] != usize::MAX && local[e.v] != usize::MAX)
            .map(|e| {
                let (a, b) = (local[e.u], local[e.v]);
                let (u, v) = if a < b { (a, b) } else { (b, a) };
                Edge { u, v, sign: e.sign }
            })
            .collect();
        edges.sort_unstable();
        SignedGraph::from_sorted(nodes.len(), edges)
    }

    /// Same unsigned skeleton with new signs, one per edge in edge order.
    pub fn with_signs(&self, signs: &[Sign]) -> SignedGraph {
        assert_eq!(signs.len(), self.edges.len());
        let edges = self
            .edges
            .iter()
            .zip(signs)
            .map(|(e, &sign)| Edge { sign, ..*e })
            .collect();
        SignedGraph::from_sorted(self.n, edges)
    }

    fn check_len(&self, x: &Colouring) -> Result<(), GraphError> {
        if x.len() != self.n {
            return Err(GraphError::LengthMismatch { expected: self.n, got: x.len() });
        }
        Ok(())
    }

    /// Number of edges frustrated under `x`.
    pub fn frustration_count(&self, x: &Colouring) -> Result<usize, GraphError> {
        self.check_len(x)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.is_frustrated(x.is_black(e.u), x.is_black(e.v)))
            .count())
    }

    /// The edges frustrated under `x`, in edge order.
    pub fn frustrated_edges(&self, x: &Colouring) -> Result<Vec<Edge>, GraphError> {
        self.check_len(x)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.is_frustrated(x.is_black(e.u), x.is_black(e.v)))
            .copied()
            .collect())
    }

    /// Switching by the node set `s`: an edge changes sign iff exactly one
    /// endpoint lies in `s`.
    pub fn switch(&self, s: &Colouring) -> Result<SignedGraph, GraphError> {
        self.check_len(s)?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let sign = if s.is_black(e.u) != s.is_black(e.v) { e.sign.flipped() } else { e.sign };
                Edge { sign, ..*e }
            })
            .collect();
        Ok(SignedGraph::from_sorted(self.n, edges))
    }
}

/// A two-colouring of the nodes; black nodes form the set `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colouring(Vec<bool>);

impl Colouring {
    pub fn all_white(n: usize) -> Self {
        Colouring(vec![false; n])
    }

    pub fn all_black(n: usize) -> Self {
        Colouring(vec![true; n])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Colouring(bits)
    }

    /// Colouring from 0/1 values; any nonzero value is black.
    pub fn from_bits(bits: &[u8]) -> Self {
        Colouring(bits.iter().map(|&b| b != 0).collect())
    }

    /// Colouring whose black nodes are exactly `nodes`.
    pub fn from_black_nodes(n: usize, nodes: &[usize]) -> Self {
        let mut c = vec![false; n];
        for &v in nodes {
            c[v] = true;
        }
        Colouring(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn is_black(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, black: bool) {
        self.0[i] = black;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn complement(&self) -> Colouring {
        Colouring(self.0.iter().map(|b| !b).collect())
    }

    pub fn black_nodes(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i]).collect()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| u8::from(b)).collect()
    }
}

/// Free-function form of [`SignedGraph::frustration_count`].
pub fn frustration_count(g: &SignedGraph, x: &Colouring) -> Result<usize, GraphError> {
    g.frustration_count(x)
}

pub fn frustrated_edges(g: &SignedGraph, x: &Colouring) -> Result<Vec<Edge>, GraphError> {
    g.frustrated_edges(x)
}

pub fn switch(g: &SignedGraph, s: &Colouring) -> Result<SignedGraph, GraphError> {
    g.switch(s)
}

use std::collections::VecDeque;

use crate::sgraph::{is_balanced, Edge, SignedGraph};

/// `min(m⁻, ⌊m/2⌋, circuit rank)`.
pub fn upper_bound_trivial(g: &SignedGraph) -> usize {
    g.negative_count().min(g.edge_count() / 2).min(g.circuit_rank())
}

struct CycleFinder<'a> {
    g: &'a SignedGraph,
    removed: Vec<bool>,
    // per (node, parity) state: BFS stamp, distance, predecessor state and edge
    stamp: Vec<u32>,
    dist: Vec<u32>,
    pred: Vec<(usize, usize)>,
    round: u32,
    queue: VecDeque<usize>,
}

impl<'a> CycleFinder<'a> {
    fn new(g: &'a SignedGraph) -> Self {
        let states = 2 * g.node_count();
        CycleFinder {
            g,
            removed: vec![false; g.edge_count()],
            stamp: vec![0; states],
            dist: vec![0; states],
            pred: vec![(usize::MAX, usize::MAX); states],
            round: 0,
            queue: VecDeque::new(),
        }
    }

    /// Shortest path from `e.v` to `e.u` avoiding `e` and removed edges whose
    /// sign product closes a negative cycle with `e`, using at most
    /// `max_len` edges. Returns the path's edge indices.
    fn negative_cycle_through(&mut self, idx: usize, max_len: usize) -> Option<Vec<usize>> {
        let Edge { u, v, sign } = self.g.edges()[idx];
        let want_parity = usize::from(!sign.is_negative());
        self.round += 1;
        self.queue.clear();
        let start = 2 * v;
        self.stamp[start] = self.round;
        self.dist[start] = 0;
        self.queue.push_back(start);
        let target = 2 * u + want_parity;
        while let Some(s) = self.queue.pop_front() {
            if s == target {
                break;
            }
            if self.dist[s] as usize >= max_len {
                continue;
            }
            let (x, p) = (s / 2, s % 2);
            for nb in self.g.neighbours(x) {
                if nb.edge == idx || self.removed[nb.edge] {
                    continue;
                }
                let t = 2 * nb.node + (p ^ usize::from(nb.sign.is_negative()));
                if self.stamp[t] != self.round {
                    self.stamp[t] = self.round;
                    self.dist[t] = self.dist[s] + 1;
                    self.pred[t] = (s, nb.edge);
                    self.queue.push_back(t);
                }
            }
        }
        if self.stamp[target] != self.round {
            return None;
        }
        let mut path = Vec::new();
        let mut nodes = vec![u];
        let mut s = target;
        while s != start {
            let (p, e) = self.pred[s];
            path.push(e);
            nodes.push(p / 2);
            s = p;
        }
        // walks that revisit a node are not simple cycles; skip them
        nodes.sort_unstable();
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(path)
    }

    fn remaining_is_balanced(&self) -> bool {
        let rest = self
            .g
            .edges()
            .iter()
            .enumerate()
            .filter(|(k, _)| !self.removed[*k])
            .map(|(_, e)| (e.u, e.v, e.sign));
        let h = SignedGraph::new(self.g.node_count(), rest).expect("subgraph of a simple graph");
        is_balanced(&h).is_balanced()
    }
}

/// Size of a greedy packing of edge-disjoint negative cycles, shortest
/// first. Each such cycle needs at least one deletion, so the result never
/// exceeds `L(G)`.
pub fn lower_bound_root(g: &SignedGraph) -> usize {
    if g.edge_count() < 3 || is_balanced(g).is_balanced() {
        return 0;
    }
    let mut finder = CycleFinder::new(g);
    let mut packed = 0;
    // After finishing the pass with cap `len`, no negative cycle of length
    // `<= len` remains, so every cycle taken in the next pass is shortest.
    for len in 3..=g.node_count() {
        for idx in 0..g.edge_count() {
            if finder.removed[idx] {
                continue;
            }
            if let Some(path) = finder.negative_cycle_through(idx, len - 1) {
                finder.removed[idx] = true;
                for e in path {
                    finder.removed[e] = true;
                }
                packed += 1;
            }
        }
        if finder.remaining_is_balanced() {
            break;
        }
    }
    packed
}

//! Branch-and-bound over node colourings.
//!
//! Nodes are coloured in a fixed order: the largest-degree node first, then
//! repeatedly the node with most already-ordered neighbours (ties by degree,
//! then id). Because that rule only looks at which nodes are decided, the
//! dynamic "most decided neighbours" choice is the same at every search
//! node and can be computed once.
//!
//! With a static order the undecided nodes at depth `j` are always the
//! suffix `order[j..]`. The frustration index of the subgraph induced by
//! every suffix is solved first, from the shortest suffix up, and reused as
//! a bound: at depth `j`
//!
//! ```text
//! lower = frustrated(decided edges)
//!       + Σ_undecided min(cost_if_black, cost_if_white)   (edges to decided nodes)
//!       + L(G[order[j..]])                                 (edges among undecided nodes)
//! ```
//!
//! The three terms count disjoint edge sets, so their sum is admissible.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::{ComponentOutcome, SolverOptions};
use crate::sgraph::SignedGraph;

const CHECK_EVERY: u64 = 1024;

struct Order {
    order: Vec<usize>,
    pos: Vec<usize>,
    /// Neighbours later in the order: (node, negative edge).
    later: Vec<Vec<(usize, bool)>>,
    /// Neighbours earlier in the order, latest first.
    earlier: Vec<Vec<(usize, bool)>>,
    /// `complete_at[j]`: nodes whose whole neighbourhood is decided once
    /// `order[j]` is.
    complete_at: Vec<Vec<usize>>,
}

fn branching_order(g: &SignedGraph) -> Order {
    let n = g.node_count();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut decided_nbrs = vec![0usize; n];
    if let Some(first) = g.max_degree_node() {
        order.push(first);
        placed[first] = true;
        for nb in g.neighbours(first) {
            decided_nbrs[nb.node] += 1;
        }
    }
    while order.len() < n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (decided_nbrs[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("unplaced node exists");
        order.push(v);
        placed[v] = true;
        for nb in g.neighbours(v) {
            decided_nbrs[nb.node] += 1;
        }
    }
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut later = vec![Vec::new(); n];
    let mut earlier = vec![Vec::new(); n];
    let mut complete_at = vec![Vec::new(); n];
    for v in 0..n {
        let mut last = pos[v];
        for nb in g.neighbours(v) {
            let entry = (nb.node, nb.sign.is_negative());
            if pos[nb.node] > pos[v] {
                later[v].push(entry);
            } else {
                earlier[v].push(entry);
            }
            last = last.max(pos[nb.node]);
        }
        earlier[v].sort_unstable_by_key(|&(w, _)| std::cmp::Reverse(pos[w]));
        complete_at[last].push(v);
    }
    Order { order, pos, later, earlier, complete_at }
}

struct Shared {
    best: AtomicUsize,
    colour: Mutex<Vec<bool>>,
    abort: AtomicBool,
    nodes: AtomicU64,
}

impl Shared {
    fn offer(&self, value: usize, colour: &[bool]) {
        let mut guard = self.colour.lock().expect("incumbent lock");
        if value < self.best.load(Ordering::SeqCst) {
            guard.copy_from_slice(colour);
            self.best.store(value, Ordering::SeqCst);
        }
    }
}

/// Search over the subgraph induced by `order[k..]`.
struct Level<'a> {
    ord: &'a Order,
    /// `suffix_l[j]` = L(G[order[j..]]) for every `j > k`.
    suffix_l: &'a [usize],
    /// Degree of each node inside the suffix subgraph.
    suffix_deg: Vec<usize>,
    k: usize,
    fix_first: bool,
    net_degree: bool,
    split_until: usize,
    deadline: Instant,
    shared: Shared,
}

#[derive(Clone)]
struct State {
    colour: Vec<bool>,
    /// For undecided nodes: frustrated edges to decided nodes per colour
    /// (index 0 = white, 1 = black).
    cost: Vec<[usize; 2]>,
    /// For decided nodes: frustrated incident edges to decided nodes.
    frustrated: Vec<usize>,
    decided_frustration: usize,
    sum_min: usize,
    nodes: u64,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            colour: vec![false; n],
            cost: vec![[0, 0]; n],
            frustrated: vec![0; n],
            decided_frustration: 0,
            sum_min: 0,
            nodes: 0,
        }
    }
}

#[inline]
fn min2(c: [usize; 2]) -> usize {
    c[0].min(c[1])
}

impl Level<'_> {
    fn apply(&self, st: &mut State, u: usize, black: bool) {
        let c = usize::from(black);
        st.colour[u] = black;
        st.decided_frustration += st.cost[u][c];
        st.sum_min -= min2(st.cost[u]);
        st.frustrated[u] = st.cost[u][c];
        for &(w, neg) in &self.ord.earlier[u] {
            if self.ord.pos[w] < self.k {
                break;
            }
            if (st.colour[w] == black) == neg {
                st.frustrated[w] += 1;
            }
        }
        for &(w, neg) in &self.ord.later[u] {
            let old = min2(st.cost[w]);
            // a negative edge is frustrated when w takes u's colour
            let bad = if neg { c } else { 1 - c };
            st.cost[w][bad] += 1;
            st.sum_min = st.sum_min + min2(st.cost[w]) - old;
        }
    }

    fn undo(&self, st: &mut State, u: usize, black: bool) {
        let c = usize::from(black);
        for &(w, neg) in &self.ord.later[u] {
            let old = min2(st.cost[w]);
            let bad = if neg { c } else { 1 - c };
            st.cost[w][bad] -= 1;
            st.sum_min = st.sum_min + min2(st.cost[w]) - old;
        }
        for &(w, neg) in &self.ord.earlier[u] {
            if self.ord.pos[w] < self.k {
                break;
            }
            if (st.colour[w] == black) == neg {
                st.frustrated[w] -= 1;
            }
        }
        st.frustrated[u] = 0;
        st.sum_min += min2(st.cost[u]);
        st.decided_frustration -= st.cost[u][c];
    }

    /// A decided node with all neighbours decided whose flip strictly
    /// lowers the count rules out optimality of this subtree.
    fn net_degree_violated(&self, st: &State, j: usize) -> bool {
        self.ord.complete_at[j]
            .iter()
            .any(|&v| self.ord.pos[v] >= self.k && 2 * st.frustrated[v] > self.suffix_deg[v])
    }

    fn tick(&self, st: &mut State) -> bool {
        st.nodes += 1;
        if st.nodes.is_multiple_of(CHECK_EVERY) {
            self.shared.nodes.fetch_add(CHECK_EVERY, Ordering::Relaxed);
            if Instant::now() >= self.deadline {
                self.shared.abort.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.abort.load(Ordering::Relaxed)
    }

    fn try_colour(&self, st: &mut State, j: usize, black: bool) {
        if !self.tick(st) {
            return;
        }
        let u = self.ord.order[j];
        self.apply(st, u, black);
        let n = self.ord.order.len();
        let lower = st.decided_frustration + st.sum_min + self.suffix_l[j + 1];
        if lower < self.shared.best.load(Ordering::Relaxed)
            && !(self.net_degree && self.net_degree_violated(st, j))
        {
            if j + 1 == n {
                self.shared.offer(st.decided_frustration, &st.colour);
            } else {
                self.branch(st, j + 1);
            }
        }
        self.undo(st, u, black);
    }

    fn branch(&self, st: &mut State, j: usize) {
        let u = self.ord.order[j];
        if j == self.k && self.fix_first {
            self.try_colour(st, j, true);
            return;
        }
        let first = st.cost[u][1] < st.cost[u][0];
        if j < self.split_until {
            let mut other = st.clone();
            other.nodes = 0;
            rayon::join(
                || self.try_colour(st, j, first),
                || {
                    self.try_colour(&mut other, j, !first);
                    self.shared.nodes.fetch_add(other.nodes % CHECK_EVERY, Ordering::Relaxed);
                },
            );
        } else {
            self.try_colour(st, j, first);
            self.try_colour(st, j, !first);
        }
    }
}

/// Colour for `u` minimising frustration against the decided nodes of
/// `colour` inside the suffix starting at `k`, and the resulting cost.
fn best_extension(ord: &Order, colour: &[bool], u: usize, k: usize) -> (bool, usize) {
    let mut cost = [0usize; 2];
    for &(w, neg) in &ord.later[u] {
        debug_assert!(ord.pos[w] > k);
        let bad = if neg { usize::from(colour[w]) } else { 1 - usize::from(colour[w]) };
        cost[bad] += 1;
    }
    if cost[1] < cost[0] {
        (true, cost[1])
    } else {
        (false, cost[0])
    }
}

/// Exact search on a connected, unbalanced component.
pub(crate) fn search(
    g: &SignedGraph,
    opts: &SolverOptions,
    deadline: Instant,
    heuristic_colour: Vec<bool>,
    heuristic_value: usize,
    root_lower: usize,
) -> ComponentOutcome {
    let n = g.node_count();
    let ord = branching_order(g);
    let split_depth = if opts.threads > 1 {
        (usize::BITS - opts.threads.leading_zeros()) as usize + 3
    } else {
        0
    };

    let mut suffix_l = vec![0usize; n + 1];
    let mut suffix_colour = vec![false; n];
    let mut nodes = 0u64;
    for k in (0..n.saturating_sub(1)).rev() {
        let u = ord.order[k];
        let (black, extra) = best_extension(&ord, &suffix_colour, u, k);
        let mut incumbent = suffix_colour.clone();
        incumbent[u] = black;
        let mut best = suffix_l[k + 1] + extra;
        if k == 0 && heuristic_value < best {
            best = heuristic_value;
            incumbent = heuristic_colour.clone();
        }
        // L of a supergraph is at least L of the subgraph.
        let floor = if k == 0 { suffix_l[1].max(root_lower) } else { suffix_l[k + 1] };
        if best > floor {
            let mut suffix_deg = vec![0usize; n];
            for &v in &ord.order[k..] {
                suffix_deg[v] = ord.later[v].len()
                    + ord.earlier[v].iter().take_while(|&&(w, _)| ord.pos[w] >= k).count();
            }
            let level = Level {
                ord: &ord,
                suffix_l: &suffix_l,
                suffix_deg,
                k,
                fix_first: opts.use_fixing,
                net_degree: opts.use_net_degree_pruning,
                split_until: k + split_depth,
                deadline,
                shared: Shared {
                    best: AtomicUsize::new(best),
                    colour: Mutex::new(incumbent),
                    abort: AtomicBool::new(false),
                    nodes: AtomicU64::new(0),
                },
            };
            let mut st = State::new(n);
            level.branch(&mut st, k);
            nodes += level.shared.nodes.load(Ordering::Relaxed) + st.nodes % CHECK_EVERY;
            if level.shared.abort.load(Ordering::Relaxed) {
                let upper_colour =
                    if k == 0 { level.shared.colour.into_inner().expect("lock") } else { heuristic_colour };
                let upper = if k == 0 { level.shared.best.load(Ordering::SeqCst) } else { heuristic_value };
                return ComponentOutcome {
                    value: upper,
                    colouring: upper_colour,
                    lower: floor.max(root_lower).min(upper),
                    proven: false,
                    nodes,
                    root_lower,
                    heuristic: heuristic_value,
                };
            }
            best = level.shared.best.load(Ordering::SeqCst);
            incumbent = level.shared.colour.into_inner().expect("lock");
        }
        suffix_l[k] = best;
        suffix_colour = incumbent;
    }

    ComponentOutcome {
        value: suffix_l[0],
        colouring: suffix_colour,
        lower: suffix_l[0],
        proven: true,
        nodes,
        root_lower,
        heuristic: heuristic_value,
    }
}

//! Primal network simplex specialised to the complete bipartite
//! transportation graph with uniform marginals.
//!
//! Source `i` supplies `n_y` units and sink `j` demands `n_x` units, so all
//! flows are integers and the marginals hold exactly; only costs are
//! floating point. The spanning tree is kept strongly feasible (every
//! zero-flow tree arc points away from the root), which rules out cycling,
//! and the leaving arc is the last blocking arc met when walking the pivot
//! cycle from its apex.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Pivots after which pricing switches from block search to Bland's rule,
/// per node of the bipartite graph.
pub const BLAND_PIVOTS_PER_NODE: usize = 50;
/// Relative tolerance on reduced costs used for pricing.
pub const PRICING_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pricing {
    Block,
    Bland,
}

#[derive(Debug)]
pub(crate) struct Outcome {
    /// Integer flow on each real arc `i * n_y + j`.
    pub flow: Vec<i64>,
    pub pivots: usize,
    pub degenerate_pivots: usize,
    pub switched_to_bland: bool,
    /// Most negative reduced cost over all arcs at termination, clamped at 0.
    pub dual_violation: f64,
}

pub(crate) struct NetworkSimplex<'a> {
    cost: &'a Matrix,
    nx: usize,
    ny: usize,
    real_arcs: usize,
    art_cost: f64,
    flow: Vec<i64>,
    basic: Vec<bool>,
    tree_arcs: Vec<usize>,
    tree_slot: Vec<usize>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    depth: Vec<usize>,
    pi: Vec<f64>,
    // scratch for tree rebuilds
    adj_start: Vec<usize>,
    adj: Vec<(usize, usize)>,
    queue: Vec<usize>,
    next_arc: usize,
    block: usize,
    tol: f64,
}

const NONE: usize = usize::MAX;

impl<'a> NetworkSimplex<'a> {
    pub fn new(cost: &'a Matrix) -> Self {
        let (nx, ny) = cost.shape();
        let n = nx + ny;
        let real_arcs = nx * ny;
        let arc_count = real_arcs + n;
        let scale = cost.max_abs();
        // Any unit routed through the root costs 2·art_cost, more than the
        // direct arc it could use instead, so artificial flow vanishes at the
        // optimum of a balanced problem.
        let art_cost = scale + 1.0;

        let mut flow = vec![0i64; arc_count];
        let mut basic = vec![false; arc_count];
        let mut tree_arcs = Vec::with_capacity(n);
        let mut tree_slot = vec![NONE; arc_count];
        for u in 0..n {
            let a = real_arcs + u;
            flow[a] = if u < nx { ny as i64 } else { nx as i64 };
            basic[a] = true;
            tree_slot[a] = tree_arcs.len();
            tree_arcs.push(a);
        }
        let block = ((arc_count as f64).sqrt().ceil() as usize).max(10).min(arc_count);
        let mut s = Self {
            cost,
            nx,
            ny,
            real_arcs,
            art_cost,
            flow,
            basic,
            tree_arcs,
            tree_slot,
            parent: vec![NONE; n + 1],
            pred: vec![NONE; n + 1],
            depth: vec![0; n + 1],
            pi: vec![0.0; n + 1],
            adj_start: vec![0; n + 2],
            adj: vec![(0, 0); 2 * n],
            queue: Vec::with_capacity(n + 1),
            next_arc: 0,
            block,
            tol: PRICING_TOL * scale.max(f64::MIN_POSITIVE),
        };
        s.rebuild_tree();
        s
    }

    fn root(&self) -> usize {
        self.nx + self.ny
    }

    fn arc_count(&self) -> usize {
        self.real_arcs + self.nx + self.ny
    }

    fn source(&self, a: usize) -> usize {
        if a < self.real_arcs {
            a / self.ny
        } else {
            let u = a - self.real_arcs;
            if u < self.nx {
                u
            } else {
                self.root()
            }
        }
    }

    fn target(&self, a: usize) -> usize {
        if a < self.real_arcs {
            self.nx + a % self.ny
        } else {
            let u = a - self.real_arcs;
            if u < self.nx {
                self.root()
            } else {
                u
            }
        }
    }

    fn arc_cost(&self, a: usize) -> f64 {
        if a < self.real_arcs {
            self.cost.as_slice()[a]
        } else {
            self.art_cost
        }
    }

    fn reduced_cost(&self, a: usize) -> f64 {
        self.arc_cost(a) + self.pi[self.source(a)] - self.pi[self.target(a)]
    }

    /// Recomputes parent pointers, depths and potentials from the set of
    /// basic arcs by a breadth-first walk from the root.
    fn rebuild_tree(&mut self) {
        let nodes = self.nx + self.ny + 1;
        self.adj_start.iter_mut().for_each(|d| *d = 0);
        for &a in &self.tree_arcs {
            let (s, t) = (self.source(a), self.target(a));
            self.adj_start[s + 1] += 1;
            self.adj_start[t + 1] += 1;
        }
        for k in 0..nodes {
            self.adj_start[k + 1] += self.adj_start[k];
        }
        let mut fill = self.adj_start.clone();
        for idx in 0..self.tree_arcs.len() {
            let a = self.tree_arcs[idx];
            let (s, t) = (self.source(a), self.target(a));
            self.adj[fill[s]] = (t, a);
            fill[s] += 1;
            self.adj[fill[t]] = (s, a);
            fill[t] += 1;
        }
        let root = self.root();
        self.parent[root] = NONE;
        self.pred[root] = NONE;
        self.depth[root] = 0;
        self.pi[root] = 0.0;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let w = self.queue[head];
            head += 1;
            for k in self.adj_start[w]..self.adj_start[w + 1] {
                let (z, a) = self.adj[k];
                if a == self.pred[w] {
                    continue;
                }
                self.parent[z] = w;
                self.pred[z] = a;
                self.depth[z] = self.depth[w] + 1;
                let c = self.arc_cost(a);
                self.pi[z] = if self.source(a) == w { self.pi[w] + c } else { self.pi[w] - c };
                self.queue.push(z);
            }
        }
        debug_assert_eq!(self.queue.len(), nodes, "basis must span all nodes");
    }

    fn find_entering(&mut self, pricing: Pricing) -> Option<usize> {
        let m = self.arc_count();
        match pricing {
            Pricing::Bland => (0..m).find(|&a| !self.basic[a] && self.reduced_cost(a) < -self.tol),
            Pricing::Block => {
                let mut best = NONE;
                let mut best_rc = -self.tol;
                let mut scanned_in_block = 0;
                let mut a = self.next_arc;
                for _ in 0..m {
                    if !self.basic[a] {
                        let rc = self.reduced_cost(a);
                        if rc < best_rc || (rc == best_rc && best != NONE && a < best) {
                            best_rc = rc;
                            best = a;
                        }
                    }
                    a += 1;
                    if a == m {
                        a = 0;
                    }
                    scanned_in_block += 1;
                    if scanned_in_block == self.block {
                        if best != NONE {
                            self.next_arc = a;
                            return Some(best);
                        }
                        scanned_in_block = 0;
                    }
                }
                if best != NONE {
                    self.next_arc = a;
                    Some(best)
                } else {
                    None
                }
            }
        }
    }

    /// Performs one pivot on `entering`; returns whether flow moved.
    fn pivot(&mut self, entering: usize) -> Result<bool> {
        let first = self.source(entering);
        let second = self.target(entering);
        let (mut a, mut b) = (first, second);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        let join = a;

        let mut delta = i64::MAX;
        let mut leave_node = NONE;
        let mut w = first;
        while w != join {
            let arc = self.pred[w];
            // Walking down from the apex to `first`: arcs pointing up are
            // traversed backwards and limit the step.
            if self.source(arc) == w && self.flow[arc] < delta {
                delta = self.flow[arc];
                leave_node = w;
            }
            w = self.parent[w];
        }
        let mut w = second;
        while w != join {
            let arc = self.pred[w];
            if self.target(arc) == w && self.flow[arc] <= delta {
                delta = self.flow[arc];
                leave_node = w;
            }
            w = self.parent[w];
        }
        if leave_node == NONE {
            return Err(Error::SolverFailure {
                pivots: 0,
                reason: "unbounded pivot cycle".into(),
            });
        }

        if delta > 0 {
            self.flow[entering] += delta;
            let mut w = first;
            while w != join {
                let arc = self.pred[w];
                if self.target(arc) == w {
                    self.flow[arc] += delta;
                } else {
                    self.flow[arc] -= delta;
                }
                w = self.parent[w];
            }
            let mut w = second;
            while w != join {
                let arc = self.pred[w];
                if self.source(arc) == w {
                    self.flow[arc] += delta;
                } else {
                    self.flow[arc] -= delta;
                }
                w = self.parent[w];
            }
        }

        let leaving = self.pred[leave_node];
        let slot = self.tree_slot[leaving];
        self.tree_arcs[slot] = entering;
        self.tree_slot[entering] = slot;
        self.tree_slot[leaving] = NONE;
        self.basic[leaving] = false;
        self.basic[entering] = true;
        self.rebuild_tree();
        Ok(delta > 0)
    }

    pub fn run(mut self, max_pivots: usize) -> Result<Outcome> {
        let bland_after = BLAND_PIVOTS_PER_NODE * (self.nx + self.ny);
        let mut pivots = 0;
        let mut degenerate = 0;
        let mut pricing = Pricing::Block;
        while let Some(entering) = self.find_entering(pricing) {
            if pivots >= max_pivots {
                return Err(Error::SolverFailure {
                    pivots,
                    reason: format!(
                        "pivot cap reached ({degenerate} degenerate pivots, pricing {pricing:?})"
                    ),
                });
            }
            if !self.pivot(entering)? {
                degenerate += 1;
            }
            pivots += 1;
            if pivots == bland_after {
                pricing = Pricing::Bland;
            }
        }
        if let Some(a) = (self.real_arcs..self.arc_count()).find(|&a| self.flow[a] != 0) {
            return Err(Error::SolverFailure {
                pivots,
                reason: format!("artificial arc {a} still carries flow {}", self.flow[a]),
            });
        }
        let dual_violation = (0..self.arc_count())
            .filter(|&a| !self.basic[a])
            .map(|a| -self.reduced_cost(a))
            .fold(0.0, |worst, v| if v > worst { v } else { worst });
        self.flow.truncate(self.real_arcs);
        Ok(Outcome {
            flow: self.flow,
            pivots,
            degenerate_pivots: degenerate,
            switched_to_bland: pricing == Pricing::Bland,
            dual_violation,
        })
    }
}

//! Integer max-flow (Dinic) and feasible flows under arc lower bounds.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
}

/// Residual network; edge `2k` is arc `k`, edge `2k + 1` its reverse.
#[derive(Debug, Clone, Default)]
pub struct MaxFlow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        MaxFlow { edges: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds `u -> v` with capacity `cap` and returns its arc index.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let k = self.edges.len();
        self.edges.push(Edge { to: v, cap });
        self.edges.push(Edge { to: u, cap: 0 });
        self.adj[u].push(k);
        self.adj[v].push(k + 1);
        k / 2
    }

    /// Flow currently on arc `a` (the reverse edge's residual capacity).
    pub fn flow(&self, a: usize) -> i64 {
        self.edges[2 * a + 1].cap
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && level[to] == usize::MAX {
                    level[to] = level[u] + 1;
                    q.push_back(to);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn push(&mut self, u: usize, t: usize, limit: i64, level: &[usize], it: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.push(to, t, limit.min(cap), level, it);
                if pushed > 0 {
                    self.edges[e].cap -= pushed;
                    self.edges[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            it[u] += 1;
        }
        0
    }

    /// Augments from `s` to `t` until no path remains; returns the added flow.
    pub fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while let Some(level) = self.levels(s, t) {
            let mut it = vec![0; self.adj.len()];
            loop {
                let f = self.push(s, t, i64::MAX, &level, &mut it);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// Network whose arcs carry `[lower, upper]` bounds; feasibility is decided by
/// the usual reduction to a max-flow between an auxiliary source and sink.
#[derive(Debug, Clone, Default)]
pub struct BoundedNetwork {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl BoundedNetwork {
    pub fn new(nodes: usize) -> Self {
        BoundedNetwork { nodes, arcs: Vec::new() }
    }

    pub fn add_arc(&mut self, u: usize, v: usize, lower: i64, upper: i64) -> usize {
        self.arcs.push((u, v, lower, upper));
        self.arcs.len() - 1
    }

    /// A circulation respecting every bound, as per-arc flows, or `None`.
    pub fn circulation(&self) -> Option<Vec<i64>> {
        if self.arcs.iter().any(|&(_, _, lo, hi)| lo > hi) {
            return None;
        }
        let src = self.nodes;
        let dst = self.nodes + 1;
        let mut mf = MaxFlow::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|&(u, v, lo, hi)| {
                excess[v] += lo;
                excess[u] -= lo;
                mf.add_arc(u, v, hi - lo)
            })
            .collect();
        let mut demand = 0;
        for (u, &e) in excess.iter().enumerate() {
            if e > 0 {
                mf.add_arc(src, u, e);
                demand += e;
            } else if e < 0 {
                mf.add_arc(u, dst, -e);
            }
        }
        if mf.run(src, dst) != demand {
            return None;
        }
        Some(self.arcs.iter().zip(ids).map(|(&(_, _, lo, _), id)| lo + mf.flow(id)).collect())
    }
}

use std::collections::VecDeque;
use std::fmt;

use super::bins::BinSpec;
use super::network::BoundedNetwork;
use crate::constraints::strongly_connected;
use crate::error::{Error, Result};
use crate::kernel::IntDomain;

/// Arc from value node `var` to bin node `bin` with the values of `Dom(x_var)`
/// that fall into the bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledArc {
    pub var: usize,
    pub bin: usize,
    pub label: Vec<i64>,
}

/// Bipartite network: `s -> x_i` carries one unit, `x_i -> c_j` has capacity one
/// when the label is nonempty and `c_j -> t` is bounded by the count domain.
///
/// With a hidden bin, bin index `m` collects every value outside the declared
/// bins and has count bounds `[0, n]`.
#[derive(Debug, Clone)]
pub struct BinGraph {
    n: usize,
    m: usize,
    hidden: bool,
    arcs: Vec<LabeledArc>,
    // Arc indices per value node.
    out: Vec<Vec<usize>>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

/// Integral bounds on every count and every arc flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowBounds {
    /// `(min c_j, max c_j)` for the declared bins.
    pub counts: Vec<(i64, i64)>,
    /// `(min f, max f)` per arc, aligned with `BinGraph::arcs`.
    pub arcs: Vec<(u8, u8)>,
}

pub fn build_graph(domains: &[IntDomain], bins: &BinSpec, count_bounds: &[(i64, i64)], hidden_bin: bool) -> Result<BinGraph> {
    let m = bins.num_bins();
    if count_bounds.len() != m {
        return Err(Error::CountArity { expected: m, got: count_bounds.len() });
    }
    let n = domains.len();
    let mut arcs = Vec::new();
    let mut out = vec![Vec::new(); n];
    for (i, dom) in domains.iter().enumerate() {
        let mut labels: Vec<Vec<i64>> = vec![Vec::new(); m + usize::from(hidden_bin)];
        for v in dom.iter() {
            match bins.bin_of(v) {
                Some(j) => labels[j].push(v),
                None if hidden_bin => labels[m].push(v),
                None => {}
            }
        }
        for (j, label) in labels.into_iter().enumerate() {
            if !label.is_empty() {
                out[i].push(arcs.len());
                arcs.push(LabeledArc { var: i, bin: j, label });
            }
        }
        if out[i].is_empty() {
            return Err(Error::Unrepresentable(i));
        }
    }
    let total = n as i64;
    let mut lo: Vec<i64> = count_bounds.iter().map(|b| b.0.max(0)).collect();
    let mut hi: Vec<i64> = count_bounds.iter().map(|b| b.1.min(total)).collect();
    if hidden_bin {
        lo.push(0);
        hi.push(total);
    }
    Ok(BinGraph { n, m, hidden: hidden_bin, arcs, out, lo, hi })
}

/// Current flow restricted to its free part: the bin of each value node.
#[derive(Debug, Clone)]
struct Assignment {
    bin_of: Vec<usize>,
    load: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Sink,
    Bin(usize),
    Var(usize),
}

impl BinGraph {
    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Declared bins, excluding the hidden one.
    pub fn num_bins(&self) -> usize {
        self.m
    }

    pub fn has_hidden_bin(&self) -> bool {
        self.hidden
    }

    pub fn arcs(&self) -> &[LabeledArc] {
        &self.arcs
    }

    pub fn arc(&self, i: usize, j: usize) -> Option<usize> {
        self.out[i].iter().copied().find(|a| self.arcs[*a].bin == j)
    }

    pub fn label(&self, i: usize, j: usize) -> Option<&[i64]> {
        self.arc(i, j).map(|a| self.arcs[a].label.as_slice())
    }

    fn total_bins(&self) -> usize {
        self.lo.len()
    }

    /// Feasible flow subject to `(var, bin, flow)` fixings, as a bin per value node.
    fn solve(&self, fixed: &[(usize, usize, u8)]) -> Option<Vec<usize>> {
        let mb = self.total_bins();
        if self.lo.iter().zip(&self.hi).any(|(l, h)| l > h) {
            return None;
        }
        let (s, t) = (0, 1);
        let x = |i: usize| 2 + i;
        let c = |j: usize| 2 + self.n + j;
        let mut net = BoundedNetwork::new(2 + self.n + mb);
        for i in 0..self.n {
            net.add_arc(s, x(i), 1, 1);
        }
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|a| {
                let (mut l, mut h) = (0, 1);
                for &(fi, fj, f) in fixed {
                    if fi == a.var && fj == a.bin {
                        l = l.max(i64::from(f));
                        h = h.min(i64::from(f));
                    }
                }
                net.add_arc(x(a.var), c(a.bin), l, h)
            })
            .collect();
        for j in 0..mb {
            net.add_arc(c(j), t, self.lo[j], self.hi[j]);
        }
        net.add_arc(t, s, 0, self.n as i64);
        let flow = net.circulation()?;
        let mut bin_of = vec![usize::MAX; self.n];
        for (a, id) in ids.into_iter().enumerate() {
            if flow[id] == 1 {
                bin_of[self.arcs[a].var] = self.arcs[a].bin;
            }
        }
        Some(bin_of)
    }

    fn assignment(&self) -> Option<Assignment> {
        let bin_of = self.solve(&[])?;
        let mut load = vec![0; self.total_bins()];
        for &b in &bin_of {
            load[b] += 1;
        }
        Some(Assignment { bin_of, load })
    }

    /// True iff the system admits a flow with the given `(var, bin, 0|1)` fixings.
    /// Fixings on missing arcs are only satisfiable with flow 0.
    pub fn feasible(&self, fixed: &[(usize, usize, u8)]) -> bool {
        if fixed.iter().any(|&(i, j, f)| f > 0 && self.arc(i, j).is_none()) {
            return false;
        }
        self.solve(fixed).is_some()
    }

    /// An integral feasible flow: the bin receiving each value node.
    pub fn witness(&self) -> Option<Vec<usize>> {
        self.solve(&[])
    }

    /// Shortest residual path from `from` to `to` avoiding the direct arcs
    /// between bin `j` and the sink; returns the reassignments it induces.
    fn residual_path(&self, asg: &Assignment, j: usize, from: Node, to: Node) -> Option<Vec<(usize, usize)>> {
        let mb = self.total_bins();
        let id = |u: Node| match u {
            Node::Sink => 0,
            Node::Bin(k) => 1 + k,
            Node::Var(i) => 1 + mb + i,
        };
        let mut prev: Vec<Option<Node>> = vec![None; 1 + mb + self.n];
        let mut seen = vec![false; prev.len()];
        seen[id(from)] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let mut next = Vec::new();
            match u {
                Node::Sink => next.extend((0..mb).filter(|&k| k != j && asg.load[k] > self.lo[k]).map(Node::Bin)),
                Node::Bin(k) => {
                    next.extend((0..self.n).filter(|&i| asg.bin_of[i] == k).map(Node::Var));
                    if k != j && asg.load[k] < self.hi[k] {
                        next.push(Node::Sink);
                    }
                }
                Node::Var(i) => {
                    next.extend(self.out[i].iter().map(|a| self.arcs[*a].bin).filter(|b| *b != asg.bin_of[i]).map(Node::Bin))
                }
            }
            for w in next {
                if !seen[id(w)] {
                    seen[id(w)] = true;
                    prev[id(w)] = Some(u);
                    if w == to {
                        let mut moves = Vec::new();
                        let mut cur = w;
                        while let Some(p) = prev[id(cur)] {
                            if let (Node::Var(i), Node::Bin(b)) = (p, cur) {
                                moves.push((i, b));
                            }
                            if p == from {
                                break;
                            }
                            cur = p;
                        }
                        return Some(moves);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn apply(&self, asg: &mut Assignment, moves: &[(usize, usize)]) {
        for &(i, b) in moves {
            asg.load[asg.bin_of[i]] -= 1;
            asg.load[b] += 1;
            asg.bin_of[i] = b;
        }
    }

    fn extreme(&self, asg: &Assignment, j: usize) -> (i64, i64) {
        let mut up = asg.clone();
        while up.load[j] < self.hi[j] {
            match self.residual_path(&up, j, Node::Sink, Node::Bin(j)) {
                Some(moves) => self.apply(&mut up, &moves),
                None => break,
            }
        }
        let mut down = asg.clone();
        while down.load[j] > self.lo[j] {
            match self.residual_path(&down, j, Node::Bin(j), Node::Sink) {
                Some(moves) => self.apply(&mut down, &moves),
                None => break,
            }
        }
        (down.load[j], up.load[j])
    }

    /// `(min c_j, max c_j)` over all feasible flows, or `None` if there are none.
    pub fn count_bounds(&self, j: usize) -> Option<(i64, i64)> {
        let asg = self.assignment()?;
        Some(self.extreme(&asg, j))
    }

    /// `(min f_ij, max f_ij)` by two feasibility checks; `None` when neither
    /// fixing is feasible. A missing arc has flow `(0, 0)` if the system is feasible.
    pub fn arc_flow_bounds(&self, i: usize, j: usize) -> Option<(u8, u8)> {
        let zero = self.feasible(&[(i, j, 0)]);
        let one = self.feasible(&[(i, j, 1)]);
        match (zero, one) {
            (false, false) => None,
            (z, o) => Some((u8::from(!z), u8::from(o))),
        }
    }

    /// All count and arc bounds from one feasible flow.
    ///
    /// Counts are pushed to their extremes by residual augmentation; an arc's
    /// flow can change iff its endpoints share a strongly connected component
    /// of the residual graph.
    pub fn bounds(&self) -> Option<FlowBounds> {
        let asg = self.assignment()?;
        let mb = self.total_bins();
        let counts = (0..self.m).map(|j| self.extreme(&asg, j)).collect();
        // Nodes: value nodes 0..n, bins n..n+mb, sink n+mb.
        let sink = self.n + mb;
        let mut succ = vec![Vec::new(); sink + 1];
        for a in &self.arcs {
            if asg.bin_of[a.var] == a.bin {
                succ[self.n + a.bin].push(a.var);
            } else {
                succ[a.var].push(self.n + a.bin);
            }
        }
        for k in 0..mb {
            if asg.load[k] < self.hi[k] {
                succ[self.n + k].push(sink);
            }
            if asg.load[k] > self.lo[k] {
                succ[sink].push(self.n + k);
            }
        }
        let comp = strongly_connected(&succ);
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                let flips = comp[a.var] == comp[self.n + a.bin];
                match (asg.bin_of[a.var] == a.bin, flips) {
                    (true, false) => (1, 1),
                    (false, false) => (0, 0),
                    _ => (0, 1),
                }
            })
            .collect();
        Some(FlowBounds { counts, arcs })
    }
}

fn set(values: &[i64]) -> String {
    let items: Vec<String> = values.iter().map(i64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Text dump with 1-based node numbers, one arc or bin per line.
impl fmt::Display for BinGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {} bins {} hidden {}", self.n, self.m, self.hidden)?;
        for a in &self.arcs {
            let bin = if a.bin == self.m { "h".to_string() } else { (a.bin + 1).to_string() };
            writeln!(f, "arc x{} c{} {}", a.var + 1, bin, set(&a.label))?;
        }
        for j in 0..self.m {
            writeln!(f, "bound c{} [{},{}]", j + 1, self.lo[j], self.hi[j])?;
        }
        Ok(())
    }
}

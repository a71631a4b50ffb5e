use std::collections::HashMap;

use crate::kernel::{Activation, Inconsistency, PropResult, Propagator, Solver, Store, VarId, Watch};

/// Domain-consistent all-different via maximum matching and strongly connected
/// components of the residual value graph.
pub struct AllDifferent {
    vars: Vec<VarId>,
}

impl AllDifferent {
    pub fn new(vars: Vec<VarId>) -> Self {
        AllDifferent { vars }
    }
}

/// Kuhn's augmenting path matching; returns the matched value index per variable.
fn max_matching(adj: &[Vec<usize>], num_values: usize) -> Vec<Option<usize>> {
    let mut var_of: Vec<Option<usize>> = vec![None; num_values];
    let mut val_of: Vec<Option<usize>> = vec![None; adj.len()];

    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], var_of: &mut [Option<usize>], val_of: &mut [Option<usize>]) -> bool {
        for &v in &adj[i] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if var_of[v].is_none_or(|j| augment(j, adj, seen, var_of, val_of)) {
                var_of[v] = Some(i);
                val_of[i] = Some(v);
                return true;
            }
        }
        false
    }

    for i in 0..adj.len() {
        let mut seen = vec![false; num_values];
        augment(i, adj, &mut seen, &mut var_of, &mut val_of);
    }
    val_of
}

/// Tarjan's algorithm; returns a component id per node.
pub(crate) fn strongly_connected(succ: &[Vec<usize>]) -> Vec<usize> {
    struct Tarjan<'a> {
        succ: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next_index: usize,
        next_comp: usize,
    }
    impl Tarjan<'_> {
        fn visit(&mut self, u: usize) {
            self.index[u] = Some(self.next_index);
            self.low[u] = self.next_index;
            self.next_index += 1;
            self.stack.push(u);
            self.on_stack[u] = true;
            for k in 0..self.succ[u].len() {
                let w = self.succ[u][k];
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[u] = self.low[u].min(self.low[w]);
                    }
                    Some(iw) if self.on_stack[w] => self.low[u] = self.low[u].min(iw),
                    _ => {}
                }
            }
            if Some(self.low[u]) == self.index[u] {
                loop {
                    let w = self.stack.pop().expect("tarjan stack");
                    self.on_stack[w] = false;
                    self.comp[w] = self.next_comp;
                    if w == u {
                        break;
                    }
                }
                self.next_comp += 1;
            }
        }
    }
    let n = succ.len();
    let mut t = Tarjan {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp: vec![usize::MAX; n],
        next_index: 0,
        next_comp: 0,
    };
    for u in 0..n {
        if t.index[u].is_none() {
            t.visit(u);
        }
    }
    t.comp
}

impl Propagator for AllDifferent {
    fn name(&self) -> &'static str {
        "all_different"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        self.vars.iter().map(|x| (*x, Watch::Domain)).collect()
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        let n = self.vars.len();
        let mut values: Vec<i64> = self.vars.iter().flat_map(|x| store.dom(*x).iter()).collect();
        values.sort_unstable();
        values.dedup();
        if values.len() < n {
            return Err(Inconsistency);
        }
        let index: HashMap<i64, usize> = values.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let adj: Vec<Vec<usize>> = self.vars.iter().map(|x| store.dom(*x).iter().map(|v| index[&v]).collect()).collect();
        let matching = max_matching(&adj, values.len());
        if matching.iter().any(Option::is_none) {
            return Err(Inconsistency);
        }
        // Nodes: variables 0..n, values n..n+V, sink n+V.
        let nv = values.len();
        let sink = n + nv;
        let mut succ = vec![Vec::new(); n + nv + 1];
        let mut matched_value = vec![false; nv];
        for (i, row) in adj.iter().enumerate() {
            let m = matching[i].expect("complete matching");
            matched_value[m] = true;
            for &v in row {
                if v == m {
                    succ[n + v].push(i);
                } else {
                    succ[i].push(n + v);
                }
            }
        }
        for (v, &matched) in matched_value.iter().enumerate() {
            if matched {
                succ[sink].push(n + v);
            } else {
                succ[n + v].push(sink);
            }
        }
        let comp = strongly_connected(&succ);
        for (i, row) in adj.iter().enumerate() {
            let m = matching[i].expect("complete matching");
            for &v in row {
                if v != m && comp[i] != comp[n + v] {
                    store.remove(self.vars[i], values[v])?;
                }
            }
        }
        Ok(())
    }
}

/// Pairwise disequality: removes a fixed variable's value from the others.
pub struct PairwiseDifferent {
    vars: Vec<VarId>,
}

impl PairwiseDifferent {
    pub fn new(vars: Vec<VarId>) -> Self {
        PairwiseDifferent { vars }
    }
}

impl Propagator for PairwiseDifferent {
    fn name(&self) -> &'static str {
        "all_different_pairwise"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        self.vars.iter().map(|x| (*x, Watch::Bounds)).collect()
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        let mut done = vec![false; self.vars.len()];
        loop {
            let mut progress = false;
            for (i, &x) in self.vars.iter().enumerate() {
                let Some(v) = store.value(x) else { continue };
                if done[i] {
                    continue;
                }
                done[i] = true;
                progress = true;
                for (j, &y) in self.vars.iter().enumerate() {
                    if j != i {
                        store.remove(y, v)?;
                    }
                }
            }
            if !progress {
                return Ok(());
            }
        }
    }
}

impl Solver {
    pub fn post_all_different(&mut self, vars: &[VarId]) {
        self.post(AllDifferent::new(vars.to_vec()));
    }

    pub fn post_all_different_pairwise(&mut self, vars: &[VarId]) {
        self.post(PairwiseDifferent::new(vars.to_vec()));
    }
}

use std::collections::VecDeque;

use super::domain::IntDomain;
use super::propagator::{Activation, Propagator, Watch};
use super::store::{Store, VarId};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Consistent,
    Failed,
}

#[derive(Clone, Copy)]
struct Watcher {
    prop: usize,
    local: usize,
    watch: Watch,
}

/// Owns the variables and propagators of one problem.
///
/// Propagation runs a FIFO queue of propagator activations; a propagator is
/// queued at most once and accumulates the positions of the variables that
/// woke it until it runs.
pub struct Solver {
    pub(crate) store: Store,
    props: Vec<Box<dyn Propagator>>,
    watchers: Vec<Vec<Watcher>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    pending: Vec<Vec<usize>>,
    initial: Vec<bool>,
    root_failed: bool,
    propagations: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            store: Store::new(),
            props: Vec::new(),
            watchers: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            pending: Vec::new(),
            initial: Vec::new(),
            root_failed: false,
            propagations: 0,
        }
    }

    pub fn new_var(&mut self, domain: IntDomain) -> Result<VarId> {
        let x = self.store.new_var(domain)?;
        self.watchers.push(Vec::new());
        Ok(x)
    }

    pub fn new_range(&mut self, lo: i64, hi: i64) -> Result<VarId> {
        self.new_var(IntDomain::range(lo, hi))
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut Store {
        &mut self.store
    }

    pub fn dom(&self, x: VarId) -> &IntDomain {
        self.store.dom(x)
    }

    pub fn num_propagators(&self) -> usize {
        self.props.len()
    }

    /// Number of propagator executions so far.
    pub fn propagations(&self) -> u64 {
        self.propagations
    }

    pub fn post<P: Propagator + 'static>(&mut self, prop: P) {
        self.post_boxed(Box::new(prop));
    }

    pub fn post_boxed(&mut self, mut prop: Box<dyn Propagator>) {
        let id = self.props.len();
        prop.init(&mut self.store);
        for (local, (x, watch)) in prop.watches().into_iter().enumerate() {
            self.watchers[x.index()].push(Watcher { prop: id, local, watch });
        }
        self.props.push(prop);
        self.queued.push(false);
        self.pending.push(Vec::new());
        self.initial.push(true);
        self.enqueue(id);
    }

    fn enqueue(&mut self, id: usize) {
        if !self.queued[id] {
            self.queued[id] = true;
            self.queue.push_back(id);
        }
    }

    fn dispatch_events(&mut self) {
        for (x, delta) in self.store.take_events() {
            for k in 0..self.watchers[x.index()].len() {
                let w = self.watchers[x.index()][k];
                if w.watch == Watch::Domain || delta.bounds {
                    if !self.pending[w.prop].contains(&w.local) {
                        self.pending[w.prop].push(w.local);
                    }
                    self.enqueue(w.prop);
                }
            }
        }
    }

    /// Runs queued propagators until nothing changes or a domain is wiped out.
    pub fn propagate(&mut self) -> Status {
        if self.root_failed {
            return Status::Failed;
        }
        loop {
            self.dispatch_events();
            let Some(id) = self.queue.pop_front() else {
                return Status::Consistent;
            };
            self.queued[id] = false;
            let triggers = std::mem::take(&mut self.pending[id]);
            let activation = if std::mem::replace(&mut self.initial[id], false) {
                Activation::Initial
            } else {
                Activation::Events(&triggers)
            };
            self.propagations += 1;
            if self.props[id].propagate(&mut self.store, activation).is_err() {
                self.reset_queue();
                if self.store.level() == 0 {
                    self.root_failed = true;
                }
                return Status::Failed;
            }
        }
    }

    fn reset_queue(&mut self) {
        self.store.clear_events();
        for id in self.queue.drain(..) {
            self.queued[id] = false;
            self.pending[id].clear();
        }
        // Propagators that never ran keep their initial flag; the next
        // propagation after backtracking still owes them a full pass.
        for (id, p) in self.pending.iter_mut().enumerate() {
            if !self.queued[id] {
                p.clear();
            }
        }
        for id in 0..self.props.len() {
            if self.initial[id] {
                self.enqueue(id);
            }
        }
    }

    pub fn push_level(&mut self) {
        self.store.push_level();
    }

    pub fn pop_level(&mut self) {
        self.store.pop_level();
        self.reset_queue();
    }

    pub fn pop_to(&mut self, level: usize) {
        self.store.pop_to(level);
        self.reset_queue();
    }

    pub fn level(&self) -> usize {
        self.store.level()
    }

    /// Sum of domain sizes over `vars`.
    pub fn total_size(&self, vars: &[VarId]) -> usize {
        vars.iter().map(|x| self.store.size(*x)).sum()
    }

    /// Marks the problem as infeasible; used when a model detects it at build time.
    pub fn set_infeasible(&mut self) {
        self.root_failed = true;
    }
}

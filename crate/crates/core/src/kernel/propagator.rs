use super::store::{PropResult, Store, VarId};

/// Which domain changes wake a propagator on a given variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Watch {
    /// Any removal.
    Domain,
    /// Only a change of `min` or `max` (including fixing).
    Bounds,
}

/// Why a propagator runs.
#[derive(Debug, Clone, Copy)]
pub enum Activation<'a> {
    /// First run after posting, or a forced full pass.
    Initial,
    /// Positions (into `watches()`) of the variables whose domain changed.
    Events(&'a [usize]),
}

pub trait Propagator: Send {
    fn name(&self) -> &'static str;

    /// Watched variables; an event on `watches()[k]` is reported as trigger `k`.
    fn watches(&self) -> Vec<(VarId, Watch)>;

    /// Called once when posted, before the first propagation.
    fn init(&mut self, _store: &mut Store) {}

    fn propagate(&mut self, store: &mut Store, activation: Activation<'_>) -> PropResult;
}

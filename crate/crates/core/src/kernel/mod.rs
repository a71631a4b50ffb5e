//! A small finite-domain constraint engine: trailed integer domains, a FIFO
//! propagation queue, depth-first search and restart-based branch and bound.

mod domain;
mod propagator;
mod search;
mod solver;
mod store;

pub use domain::{Delta, IntDomain};
pub use propagator::{Activation, Propagator, Watch};
pub use search::{Branching, Optimum, SearchLimits, SearchOutcome, SearchStats, Solution};
pub use solver::{Solver, Status};
pub use store::{Inconsistency, PropResult, Store, StoredBool, VarId};

//! Side-by-side runs of every propagation mode on the same instance.

use serde::Serialize;

use crate::bincounts::Propagation;
use crate::error::Result;
use crate::kernel::{Branching, SearchLimits, SearchOutcome, SearchStats, Solver, Status, VarId};
use crate::par;

use super::random::{generate_random, BinCountsInstance, RandomStudyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Solution,
    Exhausted,
    Timeout,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Solution => "solution",
            Outcome::Exhausted => "exhausted",
            Outcome::Timeout => "timeout",
        }
    }
}

impl From<&SearchOutcome> for Outcome {
    fn from(o: &SearchOutcome) -> Self {
        match o {
            SearchOutcome::Solution(_) => Outcome::Solution,
            SearchOutcome::Exhausted => Outcome::Exhausted,
            SearchOutcome::Timeout => Outcome::Timeout,
        }
    }
}

/// One propagation mode on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRun {
    pub propagation: Propagation,
    /// Domain sizes after the root fixpoint, value variables then counts.
    /// `None` when the root fails.
    pub root_sizes: Option<Vec<usize>>,
    /// Domain sizes at the fixpoint reached once the goal is instantiated.
    pub goal_sizes: Option<Vec<usize>>,
    pub outcome: Outcome,
    pub stats: SearchStats,
}

impl ModeRun {
    pub fn root_total(&self) -> Option<usize> {
        self.root_sizes.as_ref().map(|s| s.iter().sum())
    }

    pub fn goal_total(&self) -> Option<usize> {
        self.goal_sizes.as_ref().map(|s| s.iter().sum())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub instance: String,
    pub goal: usize,
    pub runs: Vec<ModeRun>,
}

impl Comparison {
    pub fn run(&self, p: Propagation) -> Option<&ModeRun> {
        self.runs.iter().find(|r| r.propagation == p)
    }

    /// Whether `p` filters at least as much as the decomposition at the root,
    /// variable by variable. A failed root counts as maximal filtering.
    pub fn dominates_decomposition(&self, p: Propagation) -> bool {
        let (Some(dec), Some(other)) = (self.run(Propagation::Decomposition), self.run(p)) else {
            return false;
        };
        match (&dec.root_sizes, &other.root_sizes) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(d), Some(o)) => d.len() == o.len() && o.iter().zip(d).all(|(a, b)| a <= b),
        }
    }
}

fn sizes(solver: &Solver, vars: &[VarId]) -> Vec<usize> {
    vars.iter().map(|x| solver.dom(*x).size()).collect()
}

fn run_mode(inst: &BinCountsInstance, p: Propagation, branching: Branching, limits: SearchLimits) -> Result<ModeRun> {
    let (mut solver, xs, cs) = inst.build(p)?;
    let all: Vec<VarId> = xs.iter().chain(&cs).copied().collect();
    let root_sizes = (solver.propagate() == Status::Consistent).then(|| sizes(&solver, &all));
    let goal = &xs[..inst.goal.min(xs.len())];
    let (outcome, stats) = solver.solve(goal, branching, limits);
    let goal_sizes = match &outcome {
        SearchOutcome::Solution(sol) => {
            solver.push_level();
            let replay = goal.iter().all(|x| sol.value(*x).is_some_and(|v| solver.store_mut().assign(*x, v).is_ok()));
            let out = (replay && solver.propagate() == Status::Consistent).then(|| sizes(&solver, &all));
            solver.pop_level();
            out
        }
        _ => None,
    };
    Ok(ModeRun { propagation: p, root_sizes, goal_sizes, outcome: Outcome::from(&outcome), stats })
}

/// Runs each mode in `modes` with identical branching and limits.
pub fn compare_filtering(inst: &BinCountsInstance, modes: &[Propagation], branching: Branching, limits: SearchLimits) -> Result<Comparison> {
    let runs = modes.iter().map(|p| run_mode(inst, *p, branching, limits)).collect::<Result<Vec<_>>>()?;
    Ok(Comparison { instance: inst.name.clone(), goal: inst.goal, runs })
}

/// Generates one instance per seed and compares them, spreading instances
/// over `jobs` workers. Results are in seed order.
pub fn run_study(
    base: &RandomStudyConfig,
    seeds: &[u64],
    modes: &[Propagation],
    branching: Branching,
    limits: SearchLimits,
    jobs: Option<usize>,
) -> Result<Vec<Comparison>> {
    par::map(seeds, jobs, |seed| {
        let inst = generate_random(&base.clone().with_seed(*seed))?;
        compare_filtering(&inst, modes, branching, limits)
    })
    .into_iter()
    .collect()
}

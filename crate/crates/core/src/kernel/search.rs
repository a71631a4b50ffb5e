use std::time::{Duration, Instant};

use serde::Serialize;

use super::solver::{Solver, Status};
use super::store::VarId;

/// Variable selection; values are always tried smallest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branching {
    /// Smallest domain first, ties broken by position in the goal list.
    #[default]
    MinDomMinValue,
    /// Goal variables in the order given.
    StaticLexMinValue,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchLimits {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl SearchLimits {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn time(limit: Duration) -> Self {
        SearchLimits { time: Some(limit), nodes: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub failures: u64,
    pub solutions: u64,
    pub time_s: f64,
}

/// Values of every variable at the moment a solution was found; `None` for
/// variables that were not fixed (possible when the goal is a subset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    values: Vec<Option<i64>>,
}

impl Solution {
    pub fn value(&self, x: VarId) -> Option<i64> {
        self.values[x.index()]
    }

    /// Value of a variable the search guaranteed to fix.
    pub fn get(&self, x: VarId) -> i64 {
        self.values[x.index()].expect("variable not fixed in solution")
    }

    pub fn values_of(&self, xs: &[VarId]) -> Vec<i64> {
        xs.iter().map(|x| self.get(*x)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Solution(Solution),
    Exhausted,
    Timeout,
}

impl SearchOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SearchOutcome::Solution(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    /// Best solution found, if any.
    pub best: Option<Solution>,
    pub objective: Option<i64>,
    /// True when the search proved `objective` minimal (or proved infeasibility).
    pub proven: bool,
    pub stats: SearchStats,
}

enum Step {
    Found(Solution),
    Exhausted,
    Timeout,
}

struct Run<'a> {
    goal: &'a [VarId],
    branching: Branching,
    limits: SearchLimits,
    start: Instant,
    stats: SearchStats,
}

impl Run<'_> {
    fn out_of_budget(&self) -> bool {
        self.limits.time.is_some_and(|t| self.start.elapsed() >= t)
            || self.limits.nodes.is_some_and(|n| self.stats.nodes >= n)
    }
}

impl Solver {
    /// Depth-first search with binary `x = v` / `x != v` branching.
    ///
    /// The solver is left at the level it was called from.
    pub fn solve(&mut self, goal: &[VarId], branching: Branching, limits: SearchLimits) -> (SearchOutcome, SearchStats) {
        let mut run = Run { goal, branching, limits, start: Instant::now(), stats: SearchStats::default() };
        let base = self.level();
        let step = self.dfs(&mut run);
        self.pop_to(base);
        run.stats.time_s = run.start.elapsed().as_secs_f64();
        let outcome = match step {
            Step::Found(s) => {
                run.stats.solutions += 1;
                SearchOutcome::Solution(s)
            }
            Step::Exhausted => SearchOutcome::Exhausted,
            Step::Timeout => SearchOutcome::Timeout,
        };
        (outcome, run.stats)
    }

    /// Branch and bound: solve, require `objective < incumbent`, restart from the root.
    pub fn minimize(&mut self, objective: VarId, goal: &[VarId], branching: Branching, limits: SearchLimits) -> Optimum {
        let mut full_goal = goal.to_vec();
        if !full_goal.contains(&objective) {
            full_goal.push(objective);
        }
        let start = Instant::now();
        let base = self.level();
        let mut stats = SearchStats::default();
        let mut best: Option<Solution> = None;
        let mut bound: Option<i64> = None;
        let proven = loop {
            self.push_level();
            if let Some(b) = bound {
                if self.store.set_max(objective, b - 1).is_err() {
                    break true;
                }
            }
            let remaining = SearchLimits {
                time: limits.time.map(|t| t.saturating_sub(start.elapsed())),
                nodes: limits.nodes.map(|n| n.saturating_sub(stats.nodes)),
            };
            let mut run = Run { goal: &full_goal, branching, limits: remaining, start: Instant::now(), stats: SearchStats::default() };
            let step = self.dfs(&mut run);
            self.pop_to(base);
            stats.nodes += run.stats.nodes;
            stats.failures += run.stats.failures;
            match step {
                Step::Found(s) => {
                    stats.solutions += 1;
                    bound = Some(s.get(objective));
                    best = Some(s);
                }
                Step::Exhausted => break true,
                Step::Timeout => break false,
            }
        };
        self.pop_to(base);
        stats.time_s = start.elapsed().as_secs_f64();
        Optimum { objective: bound, best, proven, stats }
    }

    fn select(&self, run: &Run<'_>) -> Option<VarId> {
        let open = run.goal.iter().copied().filter(|x| !self.store.is_fixed(*x));
        match run.branching {
            Branching::StaticLexMinValue => open.into_iter().next(),
            Branching::MinDomMinValue => open.min_by_key(|x| self.store.size(*x)),
        }
    }

    fn capture(&self) -> Solution {
        let s = &self.store;
        Solution { values: (0..s.num_vars()).map(|k| s.value(VarId(k as u32))).collect() }
    }

    fn dfs(&mut self, run: &mut Run<'_>) -> Step {
        if run.out_of_budget() {
            return Step::Timeout;
        }
        run.stats.nodes += 1;
        if self.propagate() == Status::Failed {
            run.stats.failures += 1;
            return Step::Exhausted;
        }
        let Some(x) = self.select(run) else {
            return Step::Found(self.capture());
        };
        let v = self.store.min(x);

        self.push_level();
        let left = match self.store.assign(x, v) {
            Ok(()) => self.dfs(run),
            Err(_) => Step::Exhausted,
        };
        self.pop_level();
        if !matches!(left, Step::Exhausted) {
            return left;
        }

        self.push_level();
        let right = match self.store.remove(x, v) {
            Ok(()) => self.dfs(run),
            Err(_) => Step::Exhausted,
        };
        self.pop_level();
        right
    }
}

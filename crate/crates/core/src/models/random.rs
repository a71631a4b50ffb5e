//! Random `bin_counts` instances for filtering comparisons.
//!
//! Sampling order for a given seed, with `ChaCha8Rng::seed_from_u64(seed)`:
//! for each value variable in turn, `max_values` draws of
//! `gen_range(0..value_limit)` (duplicates collapse); then for each bin in
//! turn, one draw `U_j = gen_range(0..n + 1)` giving `Dom(c_j) = {0..U_j}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bincounts::{BinCountsSpec, Mode, Propagation};
use crate::error::Result;
use crate::flow::BinSpec;
use crate::kernel::{IntDomain, Solver, VarId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomStudyConfig {
    pub vars: usize,
    pub bins: usize,
    pub bin_width: i64,
    /// Values are drawn from `[0, value_limit)`.
    pub value_limit: i64,
    pub max_values: usize,
    /// Fraction of value variables, taken from the front, that form the goal.
    pub fraction: f64,
    pub mode: Mode,
    pub seed: u64,
}

impl Default for RandomStudyConfig {
    fn default() -> Self {
        RandomStudyConfig { vars: 15, bins: 9, bin_width: 5, value_limit: 60, max_values: 10, fraction: 0.0, mode: Mode::Strict, seed: 0 }
    }
}

impl RandomStudyConfig {
    pub const FRACTIONS: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];

    pub fn with_seed(self, seed: u64) -> Self {
        RandomStudyConfig { seed, ..self }
    }

    pub fn with_fraction(self, fraction: f64) -> Self {
        RandomStudyConfig { fraction, ..self }
    }

    /// `floor(n * f)`.
    pub fn goal_len(&self) -> usize {
        ((self.vars as f64) * self.fraction + 1e-9).floor() as usize
    }
}

/// Value domains, count domains and bins of one `bin_counts` constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct BinCountsInstance {
    pub name: String,
    pub domains: Vec<IntDomain>,
    pub count_domains: Vec<IntDomain>,
    pub bins: BinSpec,
    pub mode: Mode,
    /// Number of leading value variables to instantiate.
    pub goal: usize,
}

impl BinCountsInstance {
    /// Three variables over bins `[1,3)` and `[3,5)`, used throughout the docs.
    pub fn example() -> Self {
        BinCountsInstance {
            name: "example".into(),
            domains: vec![IntDomain::from_values([3, 4]), IntDomain::from_values([1, 2, 4]), IntDomain::from_values([2, 3, 4])],
            count_domains: vec![IntDomain::range(1, 3), IntDomain::range(0, 1)],
            bins: BinSpec::new(vec![1, 3, 5]).expect("valid bins"),
            mode: Mode::Strict,
            goal: 3,
        }
    }

    /// A fresh solver holding this constraint alone.
    pub fn build(&self, propagation: Propagation) -> Result<(Solver, Vec<VarId>, Vec<VarId>)> {
        let mut solver = Solver::new();
        let xs = self.domains.iter().map(|d| solver.new_var(d.clone())).collect::<Result<Vec<_>>>()?;
        let cs = self.count_domains.iter().map(|d| solver.new_var(d.clone())).collect::<Result<Vec<_>>>()?;
        solver.post_bin_counts(&BinCountsSpec { xs: xs.clone(), cs: cs.clone(), bins: self.bins.clone(), mode: self.mode, propagation })?;
        Ok((solver, xs, cs))
    }
}

pub fn generate_random(cfg: &RandomStudyConfig) -> Result<BinCountsInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let domains = (0..cfg.vars)
        .map(|_| IntDomain::from_values((0..cfg.max_values).map(|_| rng.gen_range(0..cfg.value_limit)).collect::<Vec<_>>()))
        .collect();
    let count_domains = (0..cfg.bins).map(|_| IntDomain::range(0, rng.gen_range(0..cfg.vars as i64 + 1))).collect();
    Ok(BinCountsInstance {
        name: format!("random-s{}-f{:.1}", cfg.seed, cfg.fraction),
        domains,
        count_domains,
        bins: BinSpec::uniform(0, cfg.bin_width, cfg.bins)?,
        mode: cfg.mode,
        goal: cfg.goal_len(),
    })
}

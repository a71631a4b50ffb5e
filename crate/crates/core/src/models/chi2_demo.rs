//! Random variates whose bin counts must pass a chi-square goodness-of-fit test.
//!
//! `Dom(v_i) = {0..U_i}` with `U_i` drawn by `ChaCha8Rng::seed_from_u64(seed)`
//! as `gen_range(0..value_limit)`, one draw per variable in order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bincounts::{BinCountsSpec, Mode, Propagation};
use crate::error::Result;
use crate::flow::BinSpec;
use crate::kernel::{Branching, SearchLimits, SearchOutcome, SearchStats, Solver, VarId};
use crate::stats::{chi2_critical, pearson_statistic};

#[derive(Debug, Clone, PartialEq)]
pub struct Chi2DemoConfig {
    pub vars: usize,
    pub bin_width: i64,
    pub targets: Vec<i64>,
    pub value_limit: i64,
    pub alpha: f64,
    pub propagation: Propagation,
    pub seed: u64,
}

impl Default for Chi2DemoConfig {
    fn default() -> Self {
        Chi2DemoConfig { vars: 24, bin_width: 5, targets: vec![2, 4, 10, 4, 2, 2], value_limit: 30, alpha: 0.95, propagation: Propagation::Gac, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chi2DemoResult {
    pub values: Vec<i64>,
    pub counts: Vec<i64>,
    pub statistic: f64,
    pub critical: f64,
}

pub struct Chi2DemoModel {
    pub solver: Solver,
    pub values: Vec<VarId>,
    pub counts: Vec<VarId>,
    pub critical: f64,
    targets: Vec<i64>,
}

pub fn build_chi2_demo(cfg: &Chi2DemoConfig) -> Result<Chi2DemoModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bins = BinSpec::uniform(0, cfg.bin_width, cfg.targets.len())?;
    let critical = chi2_critical(cfg.targets.len(), cfg.alpha)?;
    let mut solver = Solver::new();
    let values = (0..cfg.vars).map(|_| solver.new_range(0, rng.gen_range(0..cfg.value_limit))).collect::<Result<Vec<_>>>()?;
    let counts = (0..cfg.targets.len()).map(|_| solver.new_range(0, cfg.vars as i64)).collect::<Result<Vec<_>>>()?;
    solver.post_bin_counts(&BinCountsSpec { xs: values.clone(), cs: counts.clone(), bins, mode: Mode::Strict, propagation: cfg.propagation })?;
    solver.post_chi2_threshold(&counts, &cfg.targets, critical)?;
    Ok(Chi2DemoModel { solver, values, counts, critical, targets: cfg.targets.clone() })
}

impl Chi2DemoModel {
    pub fn solve(&mut self, limits: SearchLimits) -> (SearchOutcome, SearchStats, Option<Chi2DemoResult>) {
        let (out, stats) = self.solver.solve(&self.values, Branching::MinDomMinValue, limits);
        let result = out.solution().map(|sol| {
            let counts = sol.values_of(&self.counts);
            let statistic = pearson_statistic(&counts, &self.targets).map_or(f64::NAN, |r| r.to_f64());
            Chi2DemoResult { values: sol.values_of(&self.values), counts, statistic, critical: self.critical }
        });
        (out, stats, result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bincounts::count_bins;

    #[test]
    fn solutions_pass_the_test() {
        for alpha in [0.95, 0.99] {
            let cfg = Chi2DemoConfig { alpha, ..Chi2DemoConfig::default() };
            let mut model = build_chi2_demo(&cfg).unwrap();
            let (_, _, res) = model.solve(SearchLimits::none());
            let res = res.expect("solution");
            let bins = BinSpec::uniform(0, 5, 6).unwrap();
            assert_eq!(count_bins(&res.values, &bins, Mode::Strict).unwrap(), res.counts);
            assert!(res.statistic <= res.critical);
        }
    }

    #[test]
    fn default_seed_statistic_at_095() {
        let mut model = build_chi2_demo(&Chi2DemoConfig::default()).unwrap();
        let res = model.solve(SearchLimits::none()).2.unwrap();
        assert!((res.statistic - 1.1).abs() < 1e-12);
        assert!((res.critical - 1.145476).abs() < 1e-6);
    }

    #[test]
    fn narrow_domains_can_be_infeasible() {
        let cfg = Chi2DemoConfig { seed: 1, ..Chi2DemoConfig::default() };
        let (out, stats, res) = build_chi2_demo(&cfg).unwrap().solve(SearchLimits::none());
        assert_eq!(out, SearchOutcome::Exhausted);
        assert_eq!(stats.nodes, 1);
        assert!(res.is_none());
    }
}

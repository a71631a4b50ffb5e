use crate::error::Result;
use crate::kernel::{Activation, Inconsistency, PropResult, Propagator, Solver, Store, VarId, Watch};
use crate::stats::{target_scale, THRESHOLD_MARGIN};

#[derive(Debug, Clone, Copy)]
enum Limit {
    Const(i64),
    Var(VarId),
}

/// `sum_k (c_k - t_k)^2 * (L / t_k) <= limit` with `L = lcm(t)`.
///
/// Each count keeps only values whose term, added to the smallest achievable
/// terms of all other counts, stays within the limit.
pub struct ScaledChi2 {
    counts: Vec<VarId>,
    targets: Vec<i64>,
    weights: Vec<i64>,
    limit: Limit,
}

impl ScaledChi2 {
    fn new(counts: Vec<VarId>, targets: Vec<i64>, limit: Limit) -> Result<Self> {
        let scale = target_scale(&targets)?;
        let weights = targets.iter().map(|t| scale / t).collect();
        Ok(ScaledChi2 { counts, targets, weights, limit })
    }

    fn term(&self, k: usize, v: i64) -> i64 {
        let d = v - self.targets[k];
        d * d * self.weights[k]
    }

    fn min_term(&self, store: &Store, k: usize) -> i64 {
        let dom = store.dom(self.counts[k]);
        let t = self.targets[k];
        // The term is convex in v: the best value is the target or its nearest neighbour.
        let best = if dom.contains(t) {
            t
        } else {
            let below = dom.iter().take_while(|v| *v < t).last();
            let above = dom.iter().find(|v| *v > t);
            match (below, above) {
                (Some(b), Some(a)) => {
                    if self.term(k, b) <= self.term(k, a) {
                        b
                    } else {
                        a
                    }
                }
                (Some(b), None) => b,
                (None, Some(a)) => a,
                (None, None) => unreachable!("empty domain in store"),
            }
        };
        self.term(k, best)
    }
}

impl Propagator for ScaledChi2 {
    fn name(&self) -> &'static str {
        "chi2"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        let mut w: Vec<(VarId, Watch)> = self.counts.iter().map(|c| (*c, Watch::Domain)).collect();
        if let Limit::Var(k) = self.limit {
            w.push((k, Watch::Bounds));
        }
        w
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        let mins: Vec<i64> = (0..self.counts.len()).map(|k| self.min_term(store, k)).collect();
        let total: i64 = mins.iter().sum();
        let cap = match self.limit {
            Limit::Const(c) => c,
            Limit::Var(k) => {
                store.set_min(k, total)?;
                store.max(k)
            }
        };
        if total > cap {
            return Err(Inconsistency);
        }
        for (k, &c) in self.counts.iter().enumerate() {
            let slack = cap - (total - mins[k]);
            let targets = self.targets[k];
            let w = self.weights[k];
            store.retain(c, |v| (v - targets) * (v - targets) * w <= slack)?;
        }
        Ok(())
    }
}

/// Largest scaled statistic allowed by a real threshold.
pub fn scaled_threshold(targets: &[i64], threshold: f64) -> Result<i64> {
    let scale = target_scale(targets)? as f64;
    Ok((scale * (threshold + THRESHOLD_MARGIN)).floor() as i64)
}

impl Solver {
    /// Pearson's statistic of `counts` against `targets` at most `threshold`.
    pub fn post_chi2_threshold(&mut self, counts: &[VarId], targets: &[i64], threshold: f64) -> Result<()> {
        let cap = scaled_threshold(targets, threshold)?;
        self.post(ScaledChi2::new(counts.to_vec(), targets.to_vec(), Limit::Const(cap))?);
        Ok(())
    }

    /// Every group's statistic, scaled by `lcm(targets)`, at most `k`.
    /// Returns the scale.
    pub fn post_max_chi2(&mut self, groups: &[Vec<VarId>], targets: &[i64], k: VarId) -> Result<i64> {
        for group in groups {
            self.post(ScaledChi2::new(group.clone(), targets.to_vec(), Limit::Var(k))?);
        }
        target_scale(targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{IntDomain, Status};
    use crate::stats::pearson_statistic;

    #[test]
    fn exact_targets_pass() {
        let mut s = Solver::new();
        let cs: Vec<VarId> = [2, 4, 10].iter().map(|v| s.new_var(IntDomain::from_values([*v])).unwrap()).collect();
        s.post_chi2_threshold(&cs, &[2, 4, 10], 0.0).unwrap();
        assert_eq!(s.propagate(), Status::Consistent);
    }

    #[test]
    fn reported_threshold_example() {
        // Statistic 1.10 against targets (2,4,10,4,2,2).
        let targets = [2, 4, 10, 4, 2, 2];
        let counts = [2, 5, 11, 3, 1, 2];
        let stat = pearson_statistic(&counts, &targets).unwrap().to_f64();
        assert!((stat - 1.1).abs() < 1e-12);
        for (threshold, ok) in [(1.14, true), (0.55, false)] {
            let mut s = Solver::new();
            let cs: Vec<VarId> = counts.iter().map(|v| s.new_var(IntDomain::from_values([*v])).unwrap()).collect();
            s.post_chi2_threshold(&cs, &targets, threshold).unwrap();
            assert_eq!(s.propagate() == Status::Consistent, ok);
        }
    }

    #[test]
    fn scaled_objective_rows() {
        for (counts, scaled) in [([2, 4, 0], 8), ([3, 3, 0], 6), ([2, 2, 2], 0)] {
            let mut s = Solver::new();
            let cs: Vec<VarId> = counts.iter().map(|v| s.new_var(IntDomain::from_values([*v])).unwrap()).collect();
            let k = s.new_range(0, 100).unwrap();
            assert_eq!(s.post_max_chi2(&[cs], &[2, 2, 2], k).unwrap(), 2);
            assert_eq!(s.propagate(), Status::Consistent);
            assert_eq!(s.dom(k).min(), scaled);
        }
    }

    #[test]
    fn prunes_far_counts() {
        let mut s = Solver::new();
        let a = s.new_range(0, 6).unwrap();
        let b = s.new_var(IntDomain::from_values([2])).unwrap();
        s.post_chi2_threshold(&[a, b], &[2, 2], 2.0).unwrap();
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(a).to_vec(), vec![0, 1, 2, 3, 4]);
    }
}

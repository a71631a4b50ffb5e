//! The `bin_counts` constraint: `c_j` is the number of `x_i` in `[b_j, b_{j+1})`.

mod decomposition;
mod gac;

use serde::{Deserialize, Serialize};

pub use gac::{BinCountsGac, BinCountsIncremental};

use crate::error::{Error, Result};
use crate::flow::BinSpec;
use crate::kernel::{IntDomain, Solver, Status, VarId};

/// Treatment of values outside every bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Every value must fall into a bin.
    #[default]
    Strict,
    /// Out-of-range values are allowed and not counted.
    HiddenBin,
}

/// How the constraint is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Propagation {
    /// Global cardinality over single values plus linear sums.
    Decomposition,
    /// Flow-based filter rebuilt on every run.
    #[default]
    Gac,
    /// Flow-based filter that skips arcs using stored booleans.
    GacIncremental,
}

impl Propagation {
    pub const ALL: [Propagation; 3] = [Propagation::Decomposition, Propagation::Gac, Propagation::GacIncremental];

    pub fn label(self) -> &'static str {
        match self {
            Propagation::Decomposition => "dec",
            Propagation::Gac => "gac",
            Propagation::GacIncremental => "gac-inc",
        }
    }
}

impl std::str::FromStr for Propagation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Propagation::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown propagation `{s}` (expected dec, gac or gac-inc)")))
    }
}

/// Per-bin counts of `values`; `None` in strict mode when a value misses every bin.
pub fn count_bins(values: &[i64], bins: &BinSpec, mode: Mode) -> Option<Vec<i64>> {
    let mut counts = vec![0; bins.num_bins()];
    for &v in values {
        match bins.bin_of(v) {
            Some(j) => counts[j] += 1,
            None if mode == Mode::HiddenBin => {}
            None => return None,
        }
    }
    Some(counts)
}

/// Whether a complete assignment satisfies the constraint.
pub fn check(values: &[i64], counts: &[i64], bins: &BinSpec, mode: Mode) -> bool {
    counts.len() == bins.num_bins() && count_bins(values, bins, mode).is_some_and(|c| c == counts)
}

/// A `bin_counts` posting request.
#[derive(Debug, Clone)]
pub struct BinCountsSpec {
    pub xs: Vec<VarId>,
    pub cs: Vec<VarId>,
    pub bins: BinSpec,
    pub mode: Mode,
    pub propagation: Propagation,
}

impl Solver {
    /// Posts `bin_counts(xs; cs)` with the requested propagation.
    pub fn post_bin_counts(&mut self, spec: &BinCountsSpec) -> Result<()> {
        let m = spec.bins.num_bins();
        if spec.cs.len() != m {
            return Err(Error::CountArity { expected: m, got: spec.cs.len() });
        }
        let hidden = spec.mode == Mode::HiddenBin;
        let (xs, cs, bins) = (spec.xs.clone(), spec.cs.clone(), spec.bins.clone());
        match spec.propagation {
            Propagation::Decomposition => {
                decomposition::post(self, &xs, &cs, &bins, hidden);
            }
            Propagation::Gac => self.post(BinCountsGac::new(xs, cs, bins, hidden)),
            Propagation::GacIncremental => self.post(BinCountsIncremental::new(xs, cs, bins, hidden)),
        }
        Ok(())
    }
}

/// Counts of `values` computed by posting the constraint over fixed value
/// variables and free counts, then propagating.
pub fn count_by_propagation(values: &[i64], bins: &BinSpec, mode: Mode, propagation: Propagation) -> Result<Option<Vec<i64>>> {
    let mut solver = Solver::new();
    let n = values.len() as i64;
    let xs = values.iter().map(|v| solver.new_var(IntDomain::from_values([*v]))).collect::<Result<Vec<_>>>()?;
    let cs = (0..bins.num_bins()).map(|_| solver.new_range(0, n)).collect::<Result<Vec<_>>>()?;
    solver.post_bin_counts(&BinCountsSpec { xs, cs: cs.clone(), bins: bins.clone(), mode, propagation })?;
    if solver.propagate() == Status::Failed {
        return Ok(None);
    }
    let counts = cs.iter().map(|c| solver.store().value(*c)).collect::<Option<Vec<_>>>();
    Ok(Some(counts.ok_or_else(|| Error::Invalid("counts not fixed by propagation".into()))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Branching, SearchLimits};

    const VALUES: [i64; 10] = [1, 1, 5, 3, 1, 2, 1, 1, 3, 1];

    fn bins3() -> BinSpec {
        BinSpec::new(vec![1, 3, 4, 6]).unwrap()
    }

    #[test]
    fn counting_example() {
        assert_eq!(count_bins(&VALUES, &bins3(), Mode::Strict), Some(vec![7, 2, 1]));
        assert!(check(&VALUES, &[7, 2, 1], &bins3(), Mode::Strict));
        assert!(!check(&VALUES, &[7, 1, 2], &bins3(), Mode::Strict));
        assert!(check(&[], &[0, 0, 0], &bins3(), Mode::Strict));
    }

    #[test]
    fn out_of_range_values() {
        assert_eq!(count_bins(&[0, 1], &bins3(), Mode::Strict), None);
        assert!(!check(&[0, 1], &[1, 0, 0], &bins3(), Mode::Strict));
        assert!(check(&[0, 1, 6], &[1, 0, 0], &bins3(), Mode::HiddenBin));
    }

    #[test]
    fn propagation_counts_fixed_values() {
        for p in Propagation::ALL {
            assert_eq!(count_by_propagation(&VALUES, &bins3(), Mode::Strict, p).unwrap(), Some(vec![7, 2, 1]), "{p:?}");
            assert_eq!(count_by_propagation(&[0, 1], &bins3(), Mode::Strict, p).unwrap(), None, "{p:?}");
            assert_eq!(count_by_propagation(&[0, 1, 9], &bins3(), Mode::HiddenBin, p).unwrap(), Some(vec![1, 0, 0]), "{p:?}");
        }
    }

    fn example(p: Propagation) -> (Solver, Vec<VarId>, Vec<VarId>) {
        let mut s = Solver::new();
        let xs = vec![
            s.new_var(IntDomain::from_values([3, 4])).unwrap(),
            s.new_var(IntDomain::from_values([1, 2, 4])).unwrap(),
            s.new_var(IntDomain::from_values([2, 3, 4])).unwrap(),
        ];
        let cs = vec![s.new_range(1, 3).unwrap(), s.new_range(0, 1).unwrap()];
        let spec = BinCountsSpec { xs: xs.clone(), cs: cs.clone(), bins: BinSpec::new(vec![1, 3, 5]).unwrap(), mode: Mode::Strict, propagation: p };
        s.post_bin_counts(&spec).unwrap();
        (s, xs, cs)
    }

    fn doms(s: &Solver, vars: &[VarId]) -> Vec<Vec<i64>> {
        vars.iter().map(|x| s.dom(*x).to_vec()).collect()
    }

    #[test]
    fn decomposition_example() {
        let (mut s, xs, cs) = example(Propagation::Decomposition);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(doms(&s, &xs), vec![vec![3, 4], vec![1, 2, 4], vec![2, 3, 4]]);
        assert_eq!(doms(&s, &cs), vec![vec![2, 3], vec![0, 1]]);
    }

    #[test]
    fn gac_example() {
        for p in [Propagation::Gac, Propagation::GacIncremental] {
            let (mut s, xs, cs) = example(p);
            assert_eq!(s.propagate(), Status::Consistent);
            assert_eq!(doms(&s, &xs), vec![vec![3, 4], vec![1, 2], vec![2]]);
            assert_eq!(doms(&s, &cs), vec![vec![2], vec![1]]);
        }
    }

    #[test]
    fn search_finds_example_solution() {
        for p in Propagation::ALL {
            let (mut s, xs, cs) = example(p);
            let goal: Vec<VarId> = xs.iter().chain(&cs).copied().collect();
            let (out, stats) = s.solve(&goal, Branching::MinDomMinValue, SearchLimits::none());
            let sol = out.solution().expect("solution");
            assert_eq!(sol.values_of(&cs), vec![2, 1]);
            let values = sol.values_of(&xs);
            assert!(check(&values, &[2, 1], &BinSpec::new(vec![1, 3, 5]).unwrap(), Mode::Strict));
            assert!(stats.nodes >= 1);
        }
    }

    #[test]
    fn single_variable_decomposition() {
        let mut s = Solver::new();
        let x = s.new_var(IntDomain::from_values([0])).unwrap();
        let c = s.new_range(0, 1).unwrap();
        let spec = BinCountsSpec { xs: vec![x], cs: vec![c], bins: BinSpec::new(vec![0, 1]).unwrap(), mode: Mode::Strict, propagation: Propagation::Decomposition };
        s.post_bin_counts(&spec).unwrap();
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(c).value(), Some(1));
    }

    #[test]
    fn infeasible_count_bound() {
        // x_1 is forced into bin 2 but c_2 may not exceed 0.
        for p in Propagation::ALL {
            let mut s = Solver::new();
            let xs = vec![s.new_var(IntDomain::from_values([4])).unwrap(), s.new_range(1, 4).unwrap(), s.new_range(1, 4).unwrap()];
            let cs = vec![s.new_range(0, 3).unwrap(), s.new_range(0, 0).unwrap()];
            let spec = BinCountsSpec { xs: xs.clone(), cs, bins: BinSpec::new(vec![1, 3, 5]).unwrap(), mode: Mode::Strict, propagation: p };
            s.post_bin_counts(&spec).unwrap();
            let (out, _) = s.solve(&xs, Branching::MinDomMinValue, SearchLimits::none());
            assert_eq!(out, crate::kernel::SearchOutcome::Exhausted, "{p:?}");
        }
    }

    #[test]
    fn parse_labels() {
        for p in Propagation::ALL {
            assert_eq!(p.label().parse::<Propagation>().unwrap(), p);
        }
        assert!("lp".parse::<Propagation>().is_err());
    }
}

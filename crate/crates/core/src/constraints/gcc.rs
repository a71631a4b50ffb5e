use crate::kernel::{Activation, Inconsistency, PropResult, Propagator, Solver, Store, VarId, Watch};

/// `counts[k] = |{i : vars[i] = values[k]}|` with counting filtering.
///
/// Each count is kept within `[#vars fixed to the value, #vars that may take
/// it]`; a saturated count removes its value from the remaining variables and a
/// count whose lower bound needs every candidate assigns them. When every
/// variable's domain lies inside `values` the counts must also sum to the
/// number of variables, which is enforced on bounds.
pub struct GlobalCardinality {
    vars: Vec<VarId>,
    values: Vec<i64>,
    counts: Vec<VarId>,
    sorted: Vec<i64>,
}

impl GlobalCardinality {
    pub fn new(vars: Vec<VarId>, values: Vec<i64>, counts: Vec<VarId>) -> Self {
        assert_eq!(values.len(), counts.len(), "one count variable per value");
        let mut sorted = values.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), values.len(), "gcc values must be distinct");
        GlobalCardinality { vars, values, counts, sorted }
    }

    fn closed(&self, store: &Store) -> bool {
        self.vars.iter().all(|x| store.dom(*x).iter().all(|v| self.sorted.binary_search(&v).is_ok()))
    }

    fn pass(&self, store: &mut Store) -> Result<bool, Inconsistency> {
        let mut changed = false;
        for (k, &v) in self.values.iter().enumerate() {
            let c = self.counts[k];
            let fixed = self.vars.iter().filter(|x| store.value(**x) == Some(v)).count() as i64;
            let possible = self.vars.iter().filter(|x| store.contains(**x, v)).count() as i64;
            let before = store.size(c);
            store.set_min(c, fixed)?;
            store.set_max(c, possible)?;
            changed |= store.size(c) != before;
            if store.max(c) == fixed && possible > fixed {
                for &x in &self.vars {
                    if !store.is_fixed(x) && store.contains(x, v) {
                        store.remove(x, v)?;
                        changed = true;
                    }
                }
            } else if store.min(c) == possible && possible > fixed {
                for &x in &self.vars {
                    if !store.is_fixed(x) && store.contains(x, v) {
                        store.assign(x, v)?;
                        changed = true;
                    }
                }
            }
        }
        if self.closed(store) {
            let n = self.vars.len() as i64;
            let sum_min: i64 = self.counts.iter().map(|c| store.min(*c)).sum();
            let sum_max: i64 = self.counts.iter().map(|c| store.max(*c)).sum();
            if sum_min > n || sum_max < n {
                return Err(Inconsistency);
            }
            for &c in &self.counts {
                let before = store.size(c);
                store.set_max(c, n - (sum_min - store.min(c)))?;
                store.set_min(c, n - (sum_max - store.max(c)))?;
                changed |= store.size(c) != before;
            }
        }
        Ok(changed)
    }
}

impl Propagator for GlobalCardinality {
    fn name(&self) -> &'static str {
        "global_cardinality"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        let xs = self.vars.iter().map(|x| (*x, Watch::Domain));
        xs.chain(self.counts.iter().map(|c| (*c, Watch::Bounds))).collect()
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        while self.pass(store)? {}
        Ok(())
    }
}

impl Solver {
    pub fn post_gcc(&mut self, vars: &[VarId], values: &[i64], counts: &[VarId]) {
        self.post(GlobalCardinality::new(vars.to_vec(), values.to_vec(), counts.to_vec()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{IntDomain, Status};

    #[test]
    fn fixed_vars_fix_counts() {
        let mut s = Solver::new();
        let xs: Vec<VarId> = [1, 1, 2].iter().map(|v| s.new_range(*v, *v).unwrap()).collect();
        let cs: Vec<VarId> = (0..2).map(|_| s.new_range(0, 3).unwrap()).collect();
        s.post_gcc(&xs, &[1, 2], &cs);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!((s.dom(cs[0]).value(), s.dom(cs[1]).value()), (Some(2), Some(1)));
    }

    #[test]
    fn infeasible_fixed_counts_fail() {
        let mut s = Solver::new();
        let xs: Vec<VarId> = (0..3).map(|_| s.new_range(1, 2).unwrap()).collect();
        let cs: Vec<VarId> = (0..2).map(|_| s.new_range(2, 2).unwrap()).collect();
        s.post_gcc(&xs, &[1, 2], &cs);
        assert_eq!(s.propagate(), Status::Failed);
    }

    #[test]
    fn saturated_count_removes_value() {
        let mut s = Solver::new();
        let a = s.new_range(1, 1).unwrap();
        let b = s.new_var(IntDomain::from_values([1, 2, 3])).unwrap();
        let c1 = s.new_range(0, 1).unwrap();
        s.post_gcc(&[a, b], &[1], &[c1]);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(b).to_vec(), vec![2, 3]);
    }
}

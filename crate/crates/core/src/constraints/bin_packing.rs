use crate::kernel::{Activation, Inconsistency, PropResult, Propagator, Solver, Store, VarId, Watch};

/// `loads[j - 1] = sum of weights[i] over items with bins[i] = j`, bins numbered from 1.
///
/// Load-bound filtering only: committed and possible load per bin, the total
/// weight redundancy, and the resulting item exclusions/commitments.
pub struct BinPacking {
    items: Vec<VarId>,
    weights: Vec<i64>,
    loads: Vec<VarId>,
    total: i64,
}

impl BinPacking {
    pub fn new(items: Vec<VarId>, weights: Vec<i64>, loads: Vec<VarId>) -> Self {
        assert_eq!(items.len(), weights.len());
        assert!(weights.iter().all(|w| *w >= 0), "weights must be nonnegative");
        let total = weights.iter().sum();
        BinPacking { items, weights, loads, total }
    }

    fn pass(&self, store: &mut Store) -> Result<bool, Inconsistency> {
        let m = self.loads.len();
        let mut committed = vec![0i64; m];
        let mut possible = vec![0i64; m];
        for (i, &x) in self.items.iter().enumerate() {
            match store.value(x) {
                Some(j) => committed[(j - 1) as usize] += self.weights[i],
                None => {
                    for j in store.dom(x).iter() {
                        possible[(j - 1) as usize] += self.weights[i];
                    }
                }
            }
        }
        let mut changed = false;
        for j in 0..m {
            let l = self.loads[j];
            let before = store.size(l);
            store.set_min(l, committed[j])?;
            store.set_max(l, committed[j] + possible[j])?;
            changed |= store.size(l) != before;
        }
        let sum_min: i64 = self.loads.iter().map(|l| store.min(*l)).sum();
        let sum_max: i64 = self.loads.iter().map(|l| store.max(*l)).sum();
        if sum_min > self.total || sum_max < self.total {
            return Err(Inconsistency);
        }
        for &l in &self.loads {
            let before = store.size(l);
            store.set_max(l, self.total - (sum_min - store.min(l)))?;
            store.set_min(l, self.total - (sum_max - store.max(l)))?;
            changed |= store.size(l) != before;
        }
        for (i, &x) in self.items.iter().enumerate() {
            if store.is_fixed(x) {
                continue;
            }
            let w = self.weights[i];
            for j in store.dom(x).to_vec() {
                let k = (j - 1) as usize;
                if committed[k] + w > store.max(self.loads[k]) {
                    store.remove(x, j)?;
                    changed = true;
                } else if committed[k] + possible[k] - w < store.min(self.loads[k]) {
                    store.assign(x, j)?;
                    changed = true;
                    break;
                }
            }
        }
        Ok(changed)
    }
}

impl Propagator for BinPacking {
    fn name(&self) -> &'static str {
        "bin_packing"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        let xs = self.items.iter().map(|x| (*x, Watch::Domain));
        xs.chain(self.loads.iter().map(|l| (*l, Watch::Bounds))).collect()
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        let m = self.loads.len() as i64;
        for &x in &self.items {
            store.set_min(x, 1)?;
            store.set_max(x, m)?;
        }
        while self.pass(store)? {}
        Ok(())
    }
}

impl Solver {
    pub fn post_bin_packing(&mut self, items: &[VarId], weights: &[i64], loads: &[VarId]) {
        self.post(BinPacking::new(items.to_vec(), weights.to_vec(), loads.to_vec()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Status;

    #[test]
    fn fixed_items_sum_into_load() {
        let mut s = Solver::new();
        let a = s.new_range(1, 1).unwrap();
        let b = s.new_range(1, 1).unwrap();
        let loads: Vec<VarId> = (0..2).map(|_| s.new_range(0, 20).unwrap()).collect();
        s.post_bin_packing(&[a, b], &[3, 4], &loads);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(loads[0]).value(), Some(7));
        assert_eq!(s.dom(loads[1]).value(), Some(0));
    }

    #[test]
    fn total_load_is_conserved() {
        let mut s = Solver::new();
        let items: Vec<VarId> = (0..3).map(|_| s.new_range(1, 2).unwrap()).collect();
        let l1 = s.new_range(0, 100).unwrap();
        let l2 = s.new_range(5, 5).unwrap();
        s.post_bin_packing(&items, &[2, 3, 5], &[l1, l2]);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(l1).to_vec(), vec![5]);
    }

    #[test]
    fn overfull_bin_excludes_item() {
        let mut s = Solver::new();
        let a = s.new_range(1, 1).unwrap();
        let b = s.new_range(1, 2).unwrap();
        let l1 = s.new_range(0, 5).unwrap();
        let l2 = s.new_range(0, 10).unwrap();
        s.post_bin_packing(&[a, b], &[4, 3], &[l1, l2]);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(b).value(), Some(2));
    }
}

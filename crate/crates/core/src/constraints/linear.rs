use crate::kernel::{Activation, PropResult, Propagator, Solver, Store, VarId, Watch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

/// `sum(coef * x) <= rhs` and/or `>= rhs`, filtered on bounds.
pub struct Linear {
    terms: Vec<(i64, VarId)>,
    upper: Option<i64>,
    lower: Option<i64>,
}

impl Linear {
    pub fn new(terms: Vec<(i64, VarId)>, rel: Relation, rhs: i64) -> Self {
        let (lower, upper) = match rel {
            Relation::Eq => (Some(rhs), Some(rhs)),
            Relation::Le => (None, Some(rhs)),
            Relation::Lt => (None, Some(rhs - 1)),
            Relation::Ge => (Some(rhs), None),
            Relation::Gt => (Some(rhs + 1), None),
        };
        let terms = terms.into_iter().filter(|(a, _)| *a != 0).collect();
        Linear { terms, upper, lower }
    }

    fn term_min(store: &Store, a: i64, x: VarId) -> i64 {
        if a > 0 { a * store.min(x) } else { a * store.max(x) }
    }

    fn term_max(store: &Store, a: i64, x: VarId) -> i64 {
        if a > 0 { a * store.max(x) } else { a * store.min(x) }
    }

    /// Restricts `a * x` to `lo..=hi`.
    fn restrict(store: &mut Store, a: i64, x: VarId, lo: i64, hi: i64) -> PropResult {
        if a > 0 {
            store.set_min(x, lo.div_euclid(a) + i64::from(lo.rem_euclid(a) != 0))?;
            store.set_max(x, hi.div_euclid(a))
        } else {
            let b = -a;
            // a*x in [lo, hi]  <=>  x in [-hi/b, -lo/b]
            store.set_min(x, (-hi).div_euclid(b) + i64::from((-hi).rem_euclid(b) != 0))?;
            store.set_max(x, (-lo).div_euclid(b))
        }
    }
}

impl Propagator for Linear {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        self.terms.iter().map(|(_, x)| (*x, Watch::Bounds)).collect()
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        loop {
            let sum_min: i64 = self.terms.iter().map(|&(a, x)| Self::term_min(store, a, x)).sum();
            let sum_max: i64 = self.terms.iter().map(|&(a, x)| Self::term_max(store, a, x)).sum();
            if self.upper.is_some_and(|u| sum_min > u) || self.lower.is_some_and(|l| sum_max < l) {
                return Err(crate::kernel::Inconsistency);
            }
            let mut changed = false;
            for &(a, x) in &self.terms {
                let (tmin, tmax) = (Self::term_min(store, a, x), Self::term_max(store, a, x));
                let hi = self.upper.map_or(tmax, |u| u - (sum_min - tmin));
                let lo = self.lower.map_or(tmin, |l| l - (sum_max - tmax));
                if hi < tmax || lo > tmin {
                    let before = store.size(x);
                    Self::restrict(store, a, x, lo, hi)?;
                    changed |= store.size(x) != before;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

impl Solver {
    pub fn post_linear(&mut self, terms: Vec<(i64, VarId)>, rel: Relation, rhs: i64) {
        self.post(Linear::new(terms, rel, rhs));
    }

    /// `sum(xs) = total`.
    pub fn post_sum(&mut self, xs: &[VarId], rel: Relation, rhs: i64) {
        self.post_linear(xs.iter().map(|x| (1, *x)).collect(), rel, rhs);
    }

    /// `sum(xs) = y`.
    pub fn post_sum_eq_var(&mut self, xs: &[VarId], y: VarId) {
        let mut terms: Vec<(i64, VarId)> = xs.iter().map(|x| (1, *x)).collect();
        terms.push((-1, y));
        self.post_linear(terms, Relation::Eq, 0);
    }

    /// `x < y`.
    pub fn post_less(&mut self, x: VarId, y: VarId) {
        self.post_linear(vec![(1, x), (-1, y)], Relation::Lt, 0);
    }

    /// `x <= y`.
    pub fn post_less_eq(&mut self, x: VarId, y: VarId) {
        self.post_linear(vec![(1, x), (-1, y)], Relation::Le, 0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{IntDomain, Status};

    #[test]
    fn sum_fixes_remaining_term() {
        let mut s = Solver::new();
        let x = s.new_var(IntDomain::from_values([1])).unwrap();
        let y = s.new_range(1, 3).unwrap();
        s.post_linear(vec![(1, x), (1, y)], Relation::Eq, 3);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(y).to_vec(), vec![2]);
    }

    #[test]
    fn coefficient_rounds_down() {
        let mut s = Solver::new();
        let x = s.new_range(0, 5).unwrap();
        s.post_linear(vec![(2, x)], Relation::Le, 3);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(x).to_vec(), vec![0, 1]);
    }

    #[test]
    fn negative_coefficient() {
        let mut s = Solver::new();
        let x = s.new_range(-5, 5).unwrap();
        s.post_linear(vec![(-3, x)], Relation::Ge, 4);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(x).max(), -2);
        s.post_linear(vec![(-3, x)], Relation::Le, 7);
        assert_eq!(s.propagate(), Status::Consistent);
        assert_eq!(s.dom(x).min(), -2);
    }

    #[test]
    fn example_counts_sum_to_n() {
        let mut s = Solver::new();
        let cs: Vec<VarId> = [7, 2, 1].iter().map(|v| s.new_range(*v, *v).unwrap()).collect();
        s.post_sum(&cs, Relation::Eq, 10);
        assert_eq!(s.propagate(), Status::Consistent);
    }

    #[test]
    fn strict_less_on_fixed_values_fails() {
        let mut s = Solver::new();
        let x = s.new_range(2, 2).unwrap();
        let y = s.new_range(2, 2).unwrap();
        s.post_less(x, y);
        assert_eq!(s.propagate(), Status::Failed);
    }
}

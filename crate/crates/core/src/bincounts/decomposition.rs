use crate::constraints::Relation;
use crate::flow::BinSpec;
use crate::kernel::{Solver, VarId};

/// Posts the cardinality-based decomposition and returns the occurrence
/// variables `(value, o_value)`.
///
/// One occurrence variable per value inside the bins that some `x_i` can take,
/// a global cardinality constraint linking them to `xs`, one sum per bin and
/// `sum c_j = n` (`<= n` when out-of-range values are allowed).
pub(crate) fn post(solver: &mut Solver, xs: &[VarId], cs: &[VarId], bins: &BinSpec, hidden: bool) -> Vec<(i64, VarId)> {
    let (lo, hi) = bins.span();
    if !hidden {
        for &x in xs {
            solver.post_linear(vec![(1, x)], Relation::Ge, lo);
            solver.post_linear(vec![(1, x)], Relation::Le, hi);
        }
    }
    let mut values: Vec<i64> = xs.iter().flat_map(|x| solver.dom(*x).iter().filter(|v| (lo..=hi).contains(v)).collect::<Vec<_>>()).collect();
    values.sort_unstable();
    values.dedup();
    let n = xs.len() as i64;
    let occurrences: Vec<VarId> = values.iter().map(|_| solver.new_range(0, n).expect("nonempty range")).collect();
    solver.post_gcc(xs, &values, &occurrences);
    for (j, &c) in cs.iter().enumerate() {
        let (blo, bhi) = bins.interval(j);
        let members: Vec<VarId> = values.iter().zip(&occurrences).filter(|(v, _)| (blo..=bhi).contains(*v)).map(|(_, o)| *o).collect();
        solver.post_sum_eq_var(&members, c);
    }
    let rel = if hidden { Relation::Le } else { Relation::Eq };
    solver.post_sum(cs, rel, n);
    values.into_iter().zip(occurrences).collect()
}

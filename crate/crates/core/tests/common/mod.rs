//! Brute-force oracles and random instance generators shared by the test targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bincounts::bincounts::{count_bins, BinCountsSpec, Mode, Propagation};
use bincounts::flow::BinSpec;
use bincounts::kernel::{IntDomain, Solver, Status, VarId};
use rand::seq::SliceRandom;
use rand::Rng;

/// A `bin_counts` instance small enough to enumerate.
#[derive(Debug, Clone)]
pub struct Small {
    pub domains: Vec<Vec<i64>>,
    /// Interval count domains.
    pub counts: Vec<(i64, i64)>,
    pub bins: BinSpec,
    pub mode: Mode,
}

/// Domains per variable: value domains then count domains.
pub type Domains = Vec<Vec<i64>>;

pub fn random_small<R: Rng>(rng: &mut R, max_n: usize, max_m: usize, max_dom: usize, mode: Mode) -> Small {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let mut b = vec![rng.gen_range(-2..=2)];
    for _ in 0..m {
        let last = *b.last().unwrap();
        b.push(last + rng.gen_range(1..=3));
    }
    let (lo, hi) = (b[0] - 1, b[m] + 1);
    let pool: Vec<i64> = (lo..=hi).collect();
    let domains = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_dom.min(pool.len()));
            let mut d: Vec<i64> = pool.choose_multiple(rng, k).copied().collect();
            d.sort_unstable();
            d
        })
        .collect();
    let counts = (0..m)
        .map(|_| {
            let a = rng.gen_range(0..=n as i64);
            let w = rng.gen_range(0..=4);
            (a.saturating_sub(w / 2).max(0), (a + w - w / 2).min(n as i64))
        })
        .collect();
    Small { domains, counts, bins: BinSpec::new(b).unwrap(), mode }
}

/// Every assignment of the value variables, in lexicographic order.
pub fn assignments(domains: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for d in domains {
        out = out.into_iter().flat_map(|p: Vec<i64>| d.iter().map(move |v| [p.clone(), vec![*v]].concat())).collect();
    }
    out
}

/// All solutions as `(values, counts)`.
pub fn solutions(inst: &Small) -> Vec<(Vec<i64>, Vec<i64>)> {
    assignments(&inst.domains)
        .into_iter()
        .filter_map(|xs| {
            let cs = count_bins(&xs, &inst.bins, inst.mode)?;
            cs.iter().zip(&inst.counts).all(|(c, (lo, hi))| lo <= c && c <= hi).then_some((xs, cs))
        })
        .collect()
}

/// Values of each variable that appear in some solution; `None` without solutions.
pub fn projection(inst: &Small) -> Option<Domains> {
    let sols = solutions(inst);
    if sols.is_empty() {
        return None;
    }
    let n = inst.domains.len();
    let mut sets = vec![BTreeSet::new(); n + inst.counts.len()];
    for (xs, cs) in &sols {
        for (k, v) in xs.iter().chain(cs).enumerate() {
            sets[k].insert(*v);
        }
    }
    Some(sets.into_iter().map(|s| s.into_iter().collect()).collect())
}

pub fn build(inst: &Small, p: Propagation) -> (Solver, Vec<VarId>) {
    let mut s = Solver::new();
    let xs: Vec<VarId> = inst.domains.iter().map(|d| s.new_var(IntDomain::from_values(d.iter().copied())).unwrap()).collect();
    let cs: Vec<VarId> = inst.counts.iter().map(|(lo, hi)| s.new_range(*lo, *hi).unwrap()).collect();
    s.post_bin_counts(&BinCountsSpec { xs: xs.clone(), cs: cs.clone(), bins: inst.bins.clone(), mode: inst.mode, propagation: p }).unwrap();
    (s, xs.into_iter().chain(cs).collect())
}

pub fn domains(s: &Solver, vars: &[VarId]) -> Domains {
    vars.iter().map(|x| s.dom(*x).to_vec()).collect()
}

/// Root fixpoint of one propagation mode; `None` on failure.
pub fn fixpoint(inst: &Small, p: Propagation) -> Option<Domains> {
    let (mut s, vars) = build(inst, p);
    (s.propagate() == Status::Consistent).then(|| domains(&s, &vars))
}

/// Whether `inner` is contained in `outer` variable by variable.
pub fn within(inner: &Domains, outer: &Domains) -> bool {
    inner.len() == outer.len() && inner.iter().zip(outer).all(|(a, b)| a.iter().all(|v| b.contains(v)))
}

/// Outcome of comparing the full and incremental propagators along a random walk.
#[derive(Debug, Default)]
pub struct WalkReport {
    pub states: usize,
    pub mismatches: usize,
}

/// Two solvers receive identical random decisions and backtracks; the fixpoints
/// are compared after every decision.
pub fn incremental_walk<R: Rng>(rng: &mut R, inst: &Small, steps: usize) -> WalkReport {
    let (mut full, vars) = build(inst, Propagation::Gac);
    let (mut inc, _) = build(inst, Propagation::GacIncremental);
    let mut report = WalkReport::default();
    let a = full.propagate();
    let b = inc.propagate();
    report.states += 1;
    if a != b || (a == Status::Consistent && domains(&full, &vars) != domains(&inc, &vars)) {
        report.mismatches += 1;
    }
    if a == Status::Failed {
        return report;
    }
    for _ in 0..steps {
        let open: Vec<VarId> = vars.iter().copied().filter(|x| full.dom(*x).size() > 1).collect();
        let backtrack = open.is_empty() || (full.level() > 0 && rng.gen_bool(0.25));
        if backtrack {
            if full.level() == 0 {
                break;
            }
            let to = rng.gen_range(0..full.level());
            full.pop_to(to);
            inc.pop_to(to);
            continue;
        }
        let x = *open.choose(rng).unwrap();
        let values = full.dom(x).to_vec();
        let v = *values.choose(rng).unwrap();
        full.push_level();
        inc.push_level();
        let kind = rng.gen_range(0..3);
        let apply = |s: &mut Solver| match kind {
            0 => s.store_mut().assign(x, v),
            1 => s.store_mut().remove(x, v),
            _ if rng_free_bound(v, &values) => s.store_mut().set_max(x, v),
            _ => s.store_mut().set_min(x, v),
        };
        let ok_a = apply(&mut full).is_ok();
        let ok_b = apply(&mut inc).is_ok();
        let a = if ok_a { full.propagate() } else { Status::Failed };
        let b = if ok_b { inc.propagate() } else { Status::Failed };
        report.states += 1;
        if a != b || (a == Status::Consistent && domains(&full, &vars) != domains(&inc, &vars)) {
            report.mismatches += 1;
        }
        if a == Status::Failed || b == Status::Failed {
            full.pop_level();
            inc.pop_level();
        }
    }
    report
}

// Bound tightening direction, chosen deterministically from the value.
fn rng_free_bound(v: i64, values: &[i64]) -> bool {
    v - values[0] >= values[values.len() - 1] - v
}

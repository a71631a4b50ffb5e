//! Balanced nurse workload: assign patients to nurse slots so that the largest
//! per-nurse chi-square distance from an ideal acuity profile is minimal.
//!
//! Zone file format: a header `<zone> <slots per nurse>` followed by the patient
//! acuities, whitespace separated, on any number of lines (`#` starts a comment).

use std::path::Path;

use serde::Serialize;

use crate::bincounts::{count_bins, BinCountsSpec, Mode, Propagation};
use crate::error::{Error, Result};
use crate::flow::BinSpec;
use crate::kernel::{Branching, IntDomain, SearchLimits, SearchStats, Solver, VarId};
use crate::stats::{pearson_statistic, target_scale};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnwpZone {
    pub zone: u32,
    pub slots: usize,
    pub acuities: Vec<i64>,
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { file: file.to_string(), line, msg: msg.into() }
}

impl BnwpZone {
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            for t in content.split_whitespace() {
                let v = t.parse::<i64>().map_err(|_| parse_err(file, k + 1, format!("expected an integer, found `{t}`")))?;
                tokens.push((k + 1, v));
            }
        }
        let [(zl, zone), (sl, slots), rest @ ..] = tokens.as_slice() else {
            return Err(parse_err(file, 0, "missing `<zone> <slots>` header"));
        };
        if *zone < 0 {
            return Err(parse_err(file, *zl, "zone id must be nonnegative"));
        }
        if *slots <= 0 {
            return Err(parse_err(file, *sl, "slots per nurse must be positive"));
        }
        if rest.is_empty() {
            return Err(parse_err(file, *sl, "zone has no patients"));
        }
        if let Some((line, a)) = rest.iter().find(|(_, a)| *a < 0) {
            return Err(parse_err(file, *line, format!("negative acuity {a}")));
        }
        Ok(BnwpZone { zone: *zone as u32, slots: *slots as usize, acuities: rest.iter().map(|(_, a)| *a).collect() })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), 0, e.to_string()))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `ceil(P / S)`.
    pub fn nurses(&self) -> usize {
        self.acuities.len().div_ceil(self.slots)
    }

    /// Acuities extended with zero-acuity patients to fill every slot.
    pub fn padded(&self) -> Vec<i64> {
        let mut a = self.acuities.clone();
        a.resize(self.nurses() * self.slots, 0);
        a
    }
}

#[derive(Debug, Clone)]
pub struct BnwpConfig {
    pub bins: BinSpec,
    pub targets: Vec<i64>,
    pub propagation: Propagation,
    pub symmetry_breaking: bool,
    /// Matching-based all-different; pairwise disequalities otherwise.
    pub matching_all_different: bool,
    pub branching: Branching,
}

impl Default for BnwpConfig {
    /// Bins `{0, 30, 60, 100}` with two patients per bin.
    fn default() -> Self {
        BnwpConfig {
            bins: BinSpec::new(vec![0, 30, 60, 100]).expect("valid bins"),
            targets: vec![2, 2, 2],
            propagation: Propagation::Gac,
            symmetry_breaking: true,
            matching_all_different: true,
            branching: Branching::MinDomMinValue,
        }
    }
}

pub struct BnwpModel {
    pub solver: Solver,
    /// `slots[n][s]`: patient (1-based, padded list) in slot `s` of nurse `n`.
    pub slots: Vec<Vec<VarId>>,
    pub acuity: Vec<Vec<VarId>>,
    pub occurrences: Vec<Vec<VarId>>,
    /// Largest per-nurse statistic times `scale`.
    pub k: VarId,
    pub scale: i64,
    targets: Vec<i64>,
    padded: Vec<i64>,
    branching: Branching,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BnwpPlan {
    /// Patients per nurse, 1-based indices into the padded list.
    pub patients: Vec<Vec<i64>>,
    pub acuities: Vec<Vec<i64>>,
    pub occurrences: Vec<Vec<i64>>,
    pub statistics: Vec<f64>,
    /// Objective: the largest per-nurse statistic.
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BnwpResult {
    pub plan: Option<BnwpPlan>,
    pub k_scaled: Option<i64>,
    pub proven: bool,
    pub stats: SearchStats,
}

pub fn build_bnwp(zone: &BnwpZone, cfg: &BnwpConfig) -> Result<BnwpModel> {
    let m = cfg.bins.num_bins();
    if cfg.targets.len() != m {
        return Err(Error::CountArity { expected: m, got: cfg.targets.len() });
    }
    if cfg.targets.iter().sum::<i64>() != zone.slots as i64 {
        return Err(Error::Invalid(format!("targets sum to {} but each nurse has {} slots", cfg.targets.iter().sum::<i64>(), zone.slots)));
    }
    let padded = zone.padded();
    if let Some(a) = padded.iter().find(|a| cfg.bins.bin_of(**a).is_none()) {
        return Err(Error::Invalid(format!("acuity {a} lies outside every bin")));
    }
    let (nurses, s) = (zone.nurses(), zone.slots);
    let patients = padded.len() as i64;
    let scale = target_scale(&cfg.targets)?;
    let worst: i64 = cfg.targets.iter().map(|t| (scale / t) * (t * t).max((s as i64 - t).pow(2))).sum();

    let mut solver = Solver::new();
    let mut slots = Vec::with_capacity(nurses);
    let mut acuity = Vec::with_capacity(nurses);
    let mut occurrences = Vec::with_capacity(nurses);
    let acuity_dom = IntDomain::from_values(padded.iter().copied());
    for _ in 0..nurses {
        slots.push((0..s).map(|_| solver.new_range(1, patients)).collect::<Result<Vec<_>>>()?);
        acuity.push((0..s).map(|_| solver.new_var(acuity_dom.clone())).collect::<Result<Vec<_>>>()?);
        occurrences.push((0..m).map(|_| solver.new_range(0, s as i64)).collect::<Result<Vec<_>>>()?);
    }
    let k = solver.new_range(0, worst)?;
    let all: Vec<VarId> = slots.iter().flatten().copied().collect();
    if cfg.matching_all_different {
        solver.post_all_different(&all);
    } else {
        solver.post_all_different_pairwise(&all);
    }
    for n in 0..nurses {
        for j in 0..s {
            solver.post_element(acuity[n][j], &padded, slots[n][j]);
        }
        solver.post_bin_counts(&BinCountsSpec {
            xs: acuity[n].clone(),
            cs: occurrences[n].clone(),
            bins: cfg.bins.clone(),
            mode: Mode::Strict,
            propagation: cfg.propagation,
        })?;
    }
    solver.post_max_chi2(&occurrences, &cfg.targets, k)?;
    if cfg.symmetry_breaking {
        for n in 0..nurses {
            for j in 0..s - 1 {
                solver.post_less(slots[n][j], slots[n][j + 1]);
            }
            if n + 1 < nurses {
                solver.post_less(slots[n][0], slots[n + 1][0]);
            }
        }
    }
    Ok(BnwpModel { solver, slots, acuity, occurrences, k, scale, targets: cfg.targets.clone(), padded, branching: cfg.branching })
}

impl BnwpModel {
    pub fn optimize(&mut self, limits: SearchLimits) -> BnwpResult {
        let goal: Vec<VarId> = self.slots.iter().flatten().copied().collect();
        let opt = self.solver.minimize(self.k, &goal, self.branching, limits);
        let plan = opt.best.as_ref().map(|sol| {
            let patients: Vec<Vec<i64>> = self.slots.iter().map(|row| sol.values_of(row)).collect();
            let acuities: Vec<Vec<i64>> = patients.iter().map(|row| row.iter().map(|p| self.padded[*p as usize - 1]).collect()).collect();
            let occurrences: Vec<Vec<i64>> = self.occurrences.iter().map(|row| sol.values_of(row)).collect();
            let statistics: Vec<f64> = occurrences
                .iter()
                .map(|o| pearson_statistic(o, &self.targets).map_or(f64::NAN, |r| r.to_f64()))
                .collect();
            let k = sol.get(self.k) as f64 / self.scale as f64;
            BnwpPlan { patients, acuities, occurrences, statistics, k }
        });
        BnwpResult { plan, k_scaled: opt.objective, proven: opt.proven, stats: opt.stats }
    }
}

/// Verifies a plan from scratch: every padded patient exactly once, acuity
/// lookups, per-nurse bin counts and statistics. Returns the largest statistic.
pub fn check_bnwp(zone: &BnwpZone, cfg: &BnwpConfig, patients: &[Vec<i64>]) -> std::result::Result<f64, String> {
    let padded = zone.padded();
    if patients.len() != zone.nurses() || patients.iter().any(|row| row.len() != zone.slots) {
        return Err(format!("plan must be {} nurses by {} slots", zone.nurses(), zone.slots));
    }
    let mut seen = vec![false; padded.len()];
    let mut worst = 0.0f64;
    for row in patients {
        for &p in row {
            if p < 1 || p as usize > padded.len() {
                return Err(format!("patient {p} does not exist"));
            }
            if std::mem::replace(&mut seen[p as usize - 1], true) {
                return Err(format!("patient {p} assigned twice"));
            }
        }
        let acuities: Vec<i64> = row.iter().map(|p| padded[*p as usize - 1]).collect();
        let counts = count_bins(&acuities, &cfg.bins, Mode::Strict).ok_or("acuity outside every bin")?;
        let stat = pearson_statistic(&counts, &cfg.targets).map_err(|e| e.to_string())?.to_f64();
        worst = worst.max(stat);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zone_parsing_and_padding() {
        let z = BnwpZone::parse("# zone 1\n1 6\n59 57 50\n44 42 40 39\n", "z").unwrap();
        assert_eq!(z.zone, 1);
        assert_eq!(z.nurses(), 2);
        assert_eq!(z.padded().len(), 12);
        assert_eq!(&z.padded()[7..], &[0, 0, 0, 0, 0]);
        assert!(matches!(BnwpZone::parse("1 6\n5 x\n", "z"), Err(Error::Parse { line: 2, .. })));
        assert!(BnwpZone::parse("1\n", "z").is_err());
    }

    #[test]
    fn perfect_single_nurse() {
        let z = BnwpZone::parse("1 6\n10 20 40 50 70 80\n", "z").unwrap();
        let mut model = build_bnwp(&z, &BnwpConfig::default()).unwrap();
        let res = model.optimize(SearchLimits::none());
        assert!(res.proven);
        assert_eq!(res.k_scaled, Some(0));
        let plan = res.plan.unwrap();
        assert_eq!(plan.occurrences, vec![vec![2, 2, 2]]);
        assert_eq!(check_bnwp(&z, &BnwpConfig::default(), &plan.patients).unwrap(), 0.0);
    }

    #[test]
    fn checker_rejects_duplicates() {
        let z = BnwpZone::parse("1 2\n10 20 40\n", "z").unwrap();
        let cfg = BnwpConfig { targets: vec![1, 1, 0].into_iter().take(3).collect(), ..BnwpConfig::default() };
        assert!(check_bnwp(&z, &cfg, &[vec![1, 1], vec![3, 4]]).is_err());
    }
}

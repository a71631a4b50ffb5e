//! Balanced academic curriculum with a chi-square bound on the semester load profile.
//!
//! Instance text format (`#` starts a comment):
//!
//! ```text
//! <courses> <semesters> <min courses> <max courses> <min load> <max load>
//! <course id> <credits>          one line per course, ids 1..=courses
//! prereq <a> <b>                 course a must precede course b
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use crate::bincounts::{count_bins, BinCountsSpec, Mode, Propagation};
use crate::error::{Error, Result};
use crate::flow::BinSpec;
use crate::kernel::{Branching, SearchLimits, SearchOutcome, SearchStats, Solver, VarId};
use crate::stats::{chi2_critical, pearson_statistic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BacpInstance {
    pub credits: Vec<i64>,
    /// `(a, b)`, 0-based: course `a` in an earlier semester than course `b`.
    pub prerequisites: Vec<(usize, usize)>,
    pub semesters: usize,
    pub min_courses: i64,
    pub max_courses: i64,
    pub min_load: i64,
    pub max_load: i64,
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { file: file.to_string(), line, msg: msg.into() }
}

fn ints(file: &str, line: usize, tokens: &[&str]) -> Result<Vec<i64>> {
    tokens.iter().map(|t| t.parse::<i64>().map_err(|_| parse_err(file, line, format!("expected an integer, found `{t}`")))).collect()
}

impl BacpInstance {
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let mut header: Option<Vec<i64>> = None;
        let mut credits: Vec<Option<i64>> = Vec::new();
        let mut prerequisites = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match header {
                None => {
                    let h = ints(file, line, &tokens)?;
                    if h.len() != 6 {
                        return Err(parse_err(file, line, "header needs six integers"));
                    }
                    if h[0] <= 0 || h[1] <= 0 {
                        return Err(parse_err(file, line, "course and semester counts must be positive"));
                    }
                    credits = vec![None; h[0] as usize];
                    header = Some(h);
                }
                Some(_) if tokens[0] == "prereq" => {
                    let p = ints(file, line, &tokens[1..])?;
                    if p.len() != 2 {
                        return Err(parse_err(file, line, "prereq needs two course ids"));
                    }
                    let n = credits.len() as i64;
                    if p.iter().any(|c| *c < 1 || *c > n) || p[0] == p[1] {
                        return Err(parse_err(file, line, format!("bad course ids {} {}", p[0], p[1])));
                    }
                    prerequisites.push((p[0] as usize - 1, p[1] as usize - 1));
                }
                Some(_) => {
                    let c = ints(file, line, &tokens)?;
                    if c.len() != 2 {
                        return Err(parse_err(file, line, "course line needs `<id> <credits>`"));
                    }
                    let id = c[0];
                    if id < 1 || id > credits.len() as i64 {
                        return Err(parse_err(file, line, format!("course id {id} out of range")));
                    }
                    if c[1] <= 0 {
                        return Err(parse_err(file, line, "credits must be positive"));
                    }
                    if credits[id as usize - 1].replace(c[1]).is_some() {
                        return Err(parse_err(file, line, format!("course {id} listed twice")));
                    }
                }
            }
        }
        let h = header.ok_or_else(|| parse_err(file, 0, "missing header"))?;
        let last = text.lines().count();
        let credits = credits
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| parse_err(file, last, format!("course {} has no credits", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let inst = BacpInstance {
            credits,
            prerequisites,
            semesters: h[1] as usize,
            min_courses: h[2],
            max_courses: h[3],
            min_load: h[4],
            max_load: h[5],
        };
        inst.validate().map_err(|msg| parse_err(file, last, msg))?;
        Ok(inst)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(&path.display().to_string(), 0, e.to_string()))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.min_courses > self.max_courses || self.min_load > self.max_load {
            return Err("empty course or load range".into());
        }
        // Kahn's algorithm for cycle detection.
        let n = self.credits.len();
        let mut indegree = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &self.prerequisites {
            succ[a].push(b);
            indegree[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|i| indegree[*i] == 0).collect();
        let mut seen = 0;
        while let Some(u) = ready.pop() {
            seen += 1;
            for &v in &succ[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.push(v);
                }
            }
        }
        if seen < n {
            return Err("prerequisites contain a cycle".into());
        }
        Ok(())
    }

    pub fn num_courses(&self) -> usize {
        self.credits.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {} {}\n",
            self.credits.len(),
            self.semesters,
            self.min_courses,
            self.max_courses,
            self.min_load,
            self.max_load
        );
        for (i, w) in self.credits.iter().enumerate() {
            out.push_str(&format!("{} {}\n", i + 1, w));
        }
        for (a, b) in &self.prerequisites {
            out.push_str(&format!("prereq {} {}\n", a + 1, b + 1));
        }
        out
    }

    /// Converts MiniZinc data in the CSPLib style.
    ///
    /// Recognized keys: `n_courses`, `n_periods`, `load_per_period_lb`,
    /// `load_per_period_ub`, `courses_per_period_lb`, `courses_per_period_ub`,
    /// `course_load`, and `prereq` as `[| a, b | ... |]` or a flat
    /// `array2d(.., .., [...])`, where `a` precedes `b`. Lines of the form
    /// `constraint prerequisite(a, b);` mean `a` requires `b`, so `b` precedes `a`.
    pub fn from_dzn(text: &str, file: &str) -> Result<Self> {
        let stripped: String = text.lines().map(|l| l.split('%').next().unwrap_or("")).collect::<Vec<_>>().join("\n");
        let mut scalars = std::collections::HashMap::new();
        let mut course_load: Option<Vec<i64>> = None;
        let mut prereqs: Vec<(i64, i64)> = Vec::new();
        for stmt in stripped.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let numbers = |s: &str| -> Vec<i64> {
                s.split(|c: char| !(c.is_ascii_digit() || c == '-')).filter(|t| !t.is_empty() && *t != "-").filter_map(|t| t.parse().ok()).collect()
            };
            if let Some(rest) = stmt.strip_prefix("constraint") {
                let rest = rest.trim();
                if let Some(args) = rest.strip_prefix("prerequisite") {
                    let p = numbers(args);
                    if p.len() != 2 {
                        return Err(parse_err(file, 0, format!("bad constraint `{stmt}`")));
                    }
                    prereqs.push((p[1], p[0]));
                }
                continue;
            }
            let Some((key, value)) = stmt.split_once('=') else {
                return Err(parse_err(file, 0, format!("cannot read `{stmt}`")));
            };
            let key = key.trim();
            match key {
                "course_load" | "credits" => course_load = Some(numbers(value)),
                "prereq" | "prerequisites" => {
                    let body = value.trim();
                    let flat = match body.rfind('[') {
                        Some(k) if body.starts_with("array2d") => numbers(&body[k..]),
                        _ => numbers(body),
                    };
                    if flat.len() % 2 != 0 {
                        return Err(parse_err(file, 0, "prerequisite list has odd length"));
                    }
                    prereqs.extend(flat.chunks(2).map(|p| (p[0], p[1])));
                }
                _ => {
                    let v = numbers(value);
                    if v.len() == 1 {
                        scalars.insert(key.to_string(), v[0]);
                    }
                }
            }
        }
        let get = |k: &str| scalars.get(k).copied().ok_or_else(|| parse_err(file, 0, format!("missing `{k}`")));
        let credits = course_load.ok_or_else(|| parse_err(file, 0, "missing `course_load`"))?;
        let courses = get("n_courses").unwrap_or(credits.len() as i64);
        if courses as usize != credits.len() {
            return Err(parse_err(file, 0, format!("n_courses is {courses} but {} loads given", credits.len())));
        }
        let mut text = format!(
            "{} {} {} {} {} {}\n",
            courses,
            get("n_periods")?,
            get("courses_per_period_lb")?,
            get("courses_per_period_ub")?,
            get("load_per_period_lb")?,
            get("load_per_period_ub")?
        );
        for (i, w) in credits.iter().enumerate() {
            text.push_str(&format!("{} {}\n", i + 1, w));
        }
        for (a, b) in prereqs {
            text.push_str(&format!("prereq {a} {b}\n"));
        }
        Self::parse(&text, file)
    }
}

/// Load profile targets and search settings.
#[derive(Debug, Clone)]
pub struct BacpConfig {
    pub bins: BinSpec,
    pub targets: Vec<i64>,
    pub alpha: f64,
    pub propagation: Propagation,
    pub symmetry_breaking: bool,
    pub branching: Branching,
}

impl BacpConfig {
    /// Bins `{0, 15, 20, 30, 35, max_load + 1}`, targets `{1, 2, 4, 2, 1}`, `alpha = 0.99`.
    pub fn standard(inst: &BacpInstance) -> Result<Self> {
        Ok(BacpConfig {
            bins: BinSpec::new(vec![0, 15, 20, 30, 35, inst.max_load + 1])?,
            targets: vec![1, 2, 4, 2, 1],
            alpha: 0.99,
            propagation: Propagation::Gac,
            symmetry_breaking: true,
            branching: Branching::MinDomMinValue,
        })
    }

    /// Largest statistic the load profile may have.
    pub fn threshold(&self) -> Result<f64> {
        chi2_critical(self.targets.len(), self.alpha)
    }
}

pub struct BacpModel {
    pub solver: Solver,
    /// Semester of each course, 1-based.
    pub semester: Vec<VarId>,
    pub loads: Vec<VarId>,
    pub courses: Vec<VarId>,
    pub occurrences: Vec<VarId>,
    pub threshold: f64,
    targets: Vec<i64>,
    branching: Branching,
}

/// Schedule read back from a solution, with the derived quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacpSchedule {
    pub semester: Vec<i64>,
    pub loads: Vec<i64>,
    pub courses: Vec<i64>,
    pub occurrences: Vec<i64>,
    pub statistic: f64,
}

/// Courses that can swap semesters in any schedule: equal credits and the
/// same predecessors and successors.
fn interchangeable(inst: &BacpInstance) -> Vec<(usize, usize)> {
    let n = inst.num_courses();
    let mut pred = vec![BTreeSet::new(); n];
    let mut succ = vec![BTreeSet::new(); n];
    for &(a, b) in &inst.prerequisites {
        succ[a].insert(b);
        pred[b].insert(a);
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        // Chain each course to the next equivalent one only.
        if let Some(b) = (a + 1..n).find(|&b| inst.credits[a] == inst.credits[b] && pred[a] == pred[b] && succ[a] == succ[b]) {
            pairs.push((a, b));
        }
    }
    pairs
}

pub fn build_bacp(inst: &BacpInstance, cfg: &BacpConfig) -> Result<BacpModel> {
    let s = inst.semesters;
    if cfg.targets.len() != cfg.bins.num_bins() {
        return Err(Error::CountArity { expected: cfg.bins.num_bins(), got: cfg.targets.len() });
    }
    if cfg.targets.iter().sum::<i64>() != s as i64 {
        return Err(Error::Invalid(format!("targets sum to {} but there are {s} semesters", cfg.targets.iter().sum::<i64>())));
    }
    let threshold = cfg.threshold()?;
    let mut solver = Solver::new();
    let semester = (0..inst.num_courses()).map(|_| solver.new_range(1, s as i64)).collect::<Result<Vec<_>>>()?;
    let loads = (0..s).map(|_| solver.new_range(inst.min_load, inst.max_load)).collect::<Result<Vec<_>>>()?;
    let courses = (0..s).map(|_| solver.new_range(inst.min_courses, inst.max_courses)).collect::<Result<Vec<_>>>()?;
    let occurrences = (0..cfg.bins.num_bins()).map(|_| solver.new_range(0, s as i64)).collect::<Result<Vec<_>>>()?;
    let values: Vec<i64> = (1..=s as i64).collect();
    solver.post_gcc(&semester, &values, &courses);
    solver.post_bin_packing(&semester, &inst.credits, &loads);
    for &(a, b) in &inst.prerequisites {
        solver.post_less(semester[a], semester[b]);
    }
    solver.post_bin_counts(&BinCountsSpec {
        xs: loads.clone(),
        cs: occurrences.clone(),
        bins: cfg.bins.clone(),
        mode: Mode::Strict,
        propagation: cfg.propagation,
    })?;
    solver.post_chi2_threshold(&occurrences, &cfg.targets, threshold)?;
    if cfg.symmetry_breaking {
        for (a, b) in interchangeable(inst) {
            solver.post_less_eq(semester[a], semester[b]);
        }
    }
    Ok(BacpModel { solver, semester, loads, courses, occurrences, threshold, targets: cfg.targets.clone(), branching: cfg.branching })
}

impl BacpModel {
    pub fn solve(&mut self, limits: SearchLimits) -> (SearchOutcome, SearchStats, Option<BacpSchedule>) {
        let goal = self.semester.clone();
        let (outcome, stats) = self.solver.solve(&goal, self.branching, limits);
        let schedule = outcome.solution().map(|sol| {
            let occurrences = sol.values_of(&self.occurrences);
            BacpSchedule {
                semester: sol.values_of(&self.semester),
                loads: sol.values_of(&self.loads),
                courses: sol.values_of(&self.courses),
                statistic: pearson_statistic(&occurrences, &self.targets).map_or(f64::NAN, |r| r.to_f64()),
                occurrences,
            }
        });
        (outcome, stats, schedule)
    }
}

/// Checks a load vector against the load range, the bins and the statistic
/// bound; returns the statistic.
pub fn check_load_profile(inst: &BacpInstance, cfg: &BacpConfig, loads: &[i64]) -> std::result::Result<f64, String> {
    if loads.len() != inst.semesters {
        return Err(format!("{} loads for {} semesters", loads.len(), inst.semesters));
    }
    if let Some(l) = loads.iter().find(|l| **l < inst.min_load || **l > inst.max_load) {
        return Err(format!("load {l} outside [{}, {}]", inst.min_load, inst.max_load));
    }
    let counts = count_bins(loads, &cfg.bins, Mode::Strict).ok_or("a load lies outside every bin")?;
    let stat = pearson_statistic(&counts, &cfg.targets).map_err(|e| e.to_string())?;
    let threshold = cfg.threshold().map_err(|e| e.to_string())?;
    if !stat.within(threshold) {
        return Err(format!("statistic {} exceeds {threshold}", stat.to_f64()));
    }
    Ok(stat.to_f64())
}

/// Recomputes every derived quantity of a semester assignment from scratch and
/// checks all model constraints.
pub fn check_bacp(inst: &BacpInstance, cfg: &BacpConfig, semester: &[i64]) -> std::result::Result<BacpSchedule, String> {
    let s = inst.semesters;
    if semester.len() != inst.num_courses() {
        return Err(format!("{} semesters for {} courses", semester.len(), inst.num_courses()));
    }
    let mut loads = vec![0i64; s];
    let mut courses = vec![0i64; s];
    for (i, &p) in semester.iter().enumerate() {
        if p < 1 || p > s as i64 {
            return Err(format!("course {} in semester {p}", i + 1));
        }
        loads[p as usize - 1] += inst.credits[i];
        courses[p as usize - 1] += 1;
    }
    if let Some((j, c)) = courses.iter().enumerate().find(|(_, c)| **c < inst.min_courses || **c > inst.max_courses) {
        return Err(format!("semester {} has {c} courses", j + 1));
    }
    for &(a, b) in &inst.prerequisites {
        if semester[a] >= semester[b] {
            return Err(format!("course {} must precede course {}", a + 1, b + 1));
        }
    }
    let statistic = check_load_profile(inst, cfg, &loads)?;
    let occurrences = count_bins(&loads, &cfg.bins, Mode::Strict).expect("checked above");
    Ok(BacpSchedule { semester: semester.to_vec(), loads, courses, occurrences, statistic })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "# tiny\n4 2 1 3 1 20\n1 3\n2 3\n3 4\n4 4 # trailing\nprereq 1 3\n";

    #[test]
    fn parses_and_round_trips() {
        let inst = BacpInstance::parse(SMALL, "small").unwrap();
        assert_eq!(inst.credits, vec![3, 3, 4, 4]);
        assert_eq!(inst.prerequisites, vec![(0, 2)]);
        assert_eq!(BacpInstance::parse(&inst.to_text(), "again").unwrap(), inst);
    }

    #[test]
    fn errors_carry_location() {
        let err = BacpInstance::parse("4 2 1 3 1 20\n1 3\n2 x\n", "bad").unwrap_err();
        assert_eq!(err, Error::Parse { file: "bad".into(), line: 3, msg: "expected an integer, found `x`".into() });
        let cyclic = "2 2 1 3 1 20\n1 1\n2 1\nprereq 1 2\nprereq 2 1\n";
        assert!(matches!(BacpInstance::parse(cyclic, "c"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dzn_conversion() {
        let dzn = "n_courses = 3;\nn_periods = 2;\nload_per_period_lb = 1;\nload_per_period_ub = 10;\n\
                   courses_per_period_lb = 1;\ncourses_per_period_ub = 2;\ncourse_load = [2, 3, 4];\n\
                   prereq = [| 1, 2 | 1, 3 |];\nconstraint prerequisite(3, 2); % 2 before 3\n";
        let inst = BacpInstance::from_dzn(dzn, "d").unwrap();
        assert_eq!(inst.credits, vec![2, 3, 4]);
        assert_eq!(inst.prerequisites, vec![(0, 1), (0, 2), (1, 2)]);
        let flat = dzn.replace("[| 1, 2 | 1, 3 |]", "array2d(1..2, 1..2, [1, 2, 1, 3])");
        assert_eq!(BacpInstance::from_dzn(&flat, "d").unwrap(), inst);
    }

    #[test]
    fn uniform_credits_without_prerequisites() {
        let mut text = String::from("10 2 1 10 1 100\n");
        for i in 1..=10 {
            text.push_str(&format!("{i} 5\n"));
        }
        let inst = BacpInstance::parse(&text, "u").unwrap();
        let cfg = BacpConfig {
            bins: BinSpec::new(vec![0, 30, 101]).unwrap(),
            targets: vec![1, 1],
            alpha: 0.5,
            propagation: Propagation::Gac,
            symmetry_breaking: true,
            branching: Branching::MinDomMinValue,
        };
        let mut model = build_bacp(&inst, &cfg).unwrap();
        let (_, _, schedule) = model.solve(SearchLimits::none());
        let schedule = schedule.expect("feasible");
        let checked = check_bacp(&inst, &cfg, &schedule.semester).unwrap();
        assert_eq!(checked.loads, schedule.loads);
        assert_eq!(checked.occurrences, vec![1, 1]);
    }

    #[test]
    fn target_sum_must_match() {
        let inst = BacpInstance::parse(SMALL, "small").unwrap();
        // Two semesters but targets summing to three.
        assert!(BacpConfig::standard(&inst).is_err(), "max load 20 leaves no room for the standard bins");
        let mut cfg = BacpConfig {
            bins: BinSpec::new(vec![0, 10, 21]).unwrap(),
            targets: vec![2, 1],
            alpha: 0.5,
            propagation: Propagation::Gac,
            symmetry_breaking: true,
            branching: Branching::MinDomMinValue,
        };
        assert!(build_bacp(&inst, &cfg).is_err());
        cfg.targets = vec![1, 1];
        assert!(build_bacp(&inst, &cfg).is_ok());
    }

    #[test]
    fn symmetric_courses_are_chained() {
        let inst = BacpInstance::parse(SMALL, "small").unwrap();
        // Courses 1 and 2 differ in successors; 3 and 4 differ in predecessors.
        assert!(interchangeable(&inst).is_empty());
        let free = BacpInstance::parse("3 2 1 3 1 20\n1 3\n2 3\n3 3\n", "f").unwrap();
        assert_eq!(interchangeable(&free), vec![(0, 1), (1, 2)]);
    }
}

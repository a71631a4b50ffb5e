mod args;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Serialize;

use args::{BacpArgs, BincountsArgs, BnwpArgs, Chi2Args, CiArgs, Cli, Command, CompareArgs, Format, OutputArgs};
use bincounts::bincounts::{count_bins, count_by_propagation, Mode};
use bincounts::flow::BinSpec;
use bincounts::kernel::SearchLimits;
use bincounts::models::{
    build_bacp, build_bnwp, build_chi2_demo, check_bacp, check_bnwp, compare_filtering, run_study, study_rows, BacpConfig,
    BacpInstance, BinCountsInstance, BnwpConfig, BnwpZone, Chi2DemoConfig, Outcome, RandomStudyConfig, RunRecord,
};
use bincounts::stats::{ci_solve, MultinomialSample};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Success = 0,
    Exhausted = 1,
    Timeout = 2,
    InputError = 3,
}

impl From<Outcome> for Status {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Solution => Status::Success,
            Outcome::Exhausted => Status::Exhausted,
            Outcome::Timeout => Status::Timeout,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::InputError as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::InputError as u8)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Bincounts(a) => cmd_bincounts(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bacp(a) => cmd_bacp(a),
        Command::Bnwp(a) => cmd_bnwp(a),
        Command::Ci(a) => cmd_ci(a),
        Command::Chi2(a) => cmd_chi2(a),
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| anyhow::anyhow!("bad {what} `{t}`: {e}")))
        .collect()
}

fn limits(seconds: Option<f64>) -> SearchLimits {
    seconds.map_or_else(SearchLimits::none, |s| SearchLimits::time(Duration::from_secs_f64(s)))
}

fn round(x: f64, places: i32) -> f64 {
    let f = 10f64.powi(places);
    (x * f).round() / f
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Renders in the requested format, falling back to `default`.
fn emit<J: Serialize, C: Serialize>(output: &OutputArgs, default: Format, text: impl FnOnce() -> String, json: &J, csv_rows: &[C]) -> Result<()> {
    let body = match output.format.unwrap_or(default) {
        Format::Text => text(),
        Format::Json => to_json(json)?,
        Format::Csv => to_csv(csv_rows)?,
    };
    write_out(output.out.as_deref(), &body)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct CountsReport {
    counts: Vec<i64>,
}

fn cmd_bincounts(a: BincountsArgs) -> Result<Status> {
    let values: Vec<i64> = match (&a.values, &a.input) {
        (Some(v), _) => parse_list(v, "value")?,
        (None, Some(path)) => parse_list(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?, "value")?,
        (None, None) => bail!("give --values or --input"),
    };
    let bins = BinSpec::new(parse_list(&a.bins, "bin boundary")?)?;
    let mode: Mode = a.mode.into();
    let counts = match a.propagation {
        Some(p) => count_by_propagation(&values, &bins, mode, p)?,
        None => count_bins(&values, &bins, mode),
    };
    let Some(counts) = counts else {
        let (lo, hi) = bins.span();
        let bad = values.iter().find(|v| bins.bin_of(**v).is_none()).copied().unwrap_or_default();
        bail!("value {bad} lies outside the bins [{lo}, {}); use --mode hidden to ignore it", hi + 1);
    };
    let report = CountsReport { counts };
    emit(&a.output, Format::Text, || join(&report.counts) + "\n", &report, std::slice::from_ref(&report.counts))?;
    Ok(Status::Success)
}

fn cmd_compare(a: CompareArgs) -> Result<Status> {
    let limits = limits(a.time_limit);
    let branching = a.branching.into();
    let comparisons = if a.example {
        vec![compare_filtering(&BinCountsInstance::example(), &a.modes, branching, limits)?]
    } else {
        let seeds: Vec<u64> = (a.first_seed..a.first_seed + a.seeds).collect();
        let mut all = Vec::new();
        for f in &a.fraction {
            if !(0.0..=1.0).contains(f) {
                bail!("fraction {f} outside [0, 1]");
            }
            let base = RandomStudyConfig { fraction: *f, mode: a.mode.into(), ..RandomStudyConfig::default() };
            all.extend(run_study(&base, &seeds, &a.modes, branching, limits, a.jobs)?);
        }
        all
    };
    let rows: Vec<_> = comparisons
        .iter()
        .flat_map(study_rows)
        .map(|mut r| {
            r.time_s = round(r.time_s, 3);
            r
        })
        .collect();
    let text = || {
        let mut s = String::from("instance goal mode root_size goal_size dominates_dec outcome nodes failures time_s\n");
        for r in &rows {
            let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
            s += &format!(
                "{} {} {} {} {} {} {} {} {} {:.3}\n",
                r.instance, r.goal, r.mode, opt(r.root_size), opt(r.goal_size), r.dominates_dec, r.outcome.label(), r.nodes, r.failures, r.time_s
            );
        }
        s
    };
    emit(&a.output, Format::Csv, text, &comparisons, &rows)?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct BacpReport {
    #[serde(flatten)]
    run: RunRecord,
    threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    loads: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    occurrences: Option<Vec<i64>>,
}

#[derive(Serialize)]
struct SolveRow {
    instance: String,
    mode: String,
    outcome: Outcome,
    nodes: u64,
    failures: u64,
    time_s: f64,
    statistic: Option<f64>,
}

impl SolveRow {
    fn from_record(r: &RunRecord) -> Self {
        SolveRow {
            instance: r.instance.clone(),
            mode: r.mode.clone(),
            outcome: r.outcome,
            nodes: r.nodes,
            failures: r.failures,
            time_s: round(r.time_s, 3),
            statistic: r.statistic.map(|s| round(s, 4)),
        }
    }

    fn text(&self) -> String {
        let stat = self.statistic.map_or("-".to_string(), |s| format!("{s:.4}"));
        format!(
            "instance {}\nmode {}\noutcome {}\nnodes {}\nfailures {}\ntime_s {:.3}\nstatistic {stat}\n",
            self.instance,
            self.mode,
            self.outcome.label(),
            self.nodes,
            self.failures,
            self.time_s
        )
    }
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_bacp(a: BacpArgs) -> Result<Status> {
    let file = a.instance.display().to_string();
    let text = fs::read_to_string(&a.instance).with_context(|| format!("reading {file}"))?;
    let inst = if a.dzn { BacpInstance::from_dzn(&text, &file)? } else { BacpInstance::parse(&text, &file)? };
    let bins = match &a.bins {
        Some(b) => BinSpec::new(parse_list(b, "bin boundary")?)?,
        None => BacpConfig::standard(&inst)?.bins,
    };
    let targets = match &a.targets {
        Some(t) => parse_list(t, "target")?,
        None => vec![1, 2, 4, 2, 1],
    };
    let cfg = BacpConfig {
        bins,
        targets,
        alpha: a.alpha,
        propagation: a.solve.propagation,
        symmetry_breaking: !a.solve.no_symmetry,
        branching: a.solve.branching.into(),
    };
    let mut model = build_bacp(&inst, &cfg)?;
    let (outcome, stats, schedule) = model.solve(limits(a.solve.time_limit));
    let outcome = Outcome::from(&outcome);
    if let Some(s) = &schedule {
        check_bacp(&inst, &cfg, &s.semester).map_err(|e| anyhow::anyhow!("solver returned an invalid schedule: {e}"))?;
    }
    let mut run = RunRecord::new(instance_name(&a.instance), cfg.propagation.label(), outcome, &stats);
    run.solution = schedule.as_ref().map(|s| s.semester.clone());
    run.statistic = schedule.as_ref().map(|s| s.statistic);
    let row = SolveRow::from_record(&run);
    let report = BacpReport {
        run,
        threshold: model.threshold,
        loads: schedule.as_ref().map(|s| s.loads.clone()),
        occurrences: schedule.as_ref().map(|s| s.occurrences.clone()),
    };
    let text = || {
        let mut t = row.text();
        if let (Some(l), Some(o)) = (&report.loads, &report.occurrences) {
            t += &format!("loads {}\noccurrences {}\n", join(l), join(o));
        }
        t
    };
    emit(&a.output, Format::Json, text, &report, std::slice::from_ref(&row))?;
    Ok(outcome.into())
}

#[derive(Serialize)]
struct BnwpReport {
    #[serde(flatten)]
    run: RunRecord,
    proven: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    plan: Option<bincounts::models::BnwpPlan>,
}

fn cmd_bnwp(a: BnwpArgs) -> Result<Status> {
    let zone = BnwpZone::load(&a.zone)?;
    let cfg = BnwpConfig {
        bins: BinSpec::new(parse_list(&a.bins, "bin boundary")?)?,
        targets: parse_list(&a.targets, "target")?,
        propagation: a.solve.propagation,
        symmetry_breaking: !a.solve.no_symmetry,
        matching_all_different: !a.pairwise,
        branching: a.solve.branching.into(),
    };
    let mut model = build_bnwp(&zone, &cfg)?;
    let res = model.optimize(limits(a.solve.time_limit));
    if let Some(plan) = &res.plan {
        let worst = check_bnwp(&zone, &cfg, &plan.patients).map_err(|e| anyhow::anyhow!("solver returned an invalid plan: {e}"))?;
        if worst > plan.k + 1e-9 {
            bail!("plan statistic {worst} exceeds reported objective {}", plan.k);
        }
    }
    let outcome = match (res.proven, res.plan.is_some()) {
        (true, true) => Outcome::Solution,
        (true, false) => Outcome::Exhausted,
        (false, _) => Outcome::Timeout,
    };
    let mut run = RunRecord::new(instance_name(&a.zone), cfg.propagation.label(), outcome, &res.stats);
    run.solution = res.plan.as_ref().map(|p| p.patients.concat());
    run.statistic = res.plan.as_ref().map(|p| p.k);
    let row = SolveRow::from_record(&run);
    let report = BnwpReport { run, proven: res.proven, plan: res.plan };
    let text = || {
        let mut t = row.text() + &format!("proven {}\n", report.proven);
        if let Some(p) = &report.plan {
            for (n, (patients, occ)) in p.patients.iter().zip(&p.occurrences).enumerate() {
                t += &format!("nurse {} patients {} occurrences {} statistic {:.4}\n", n + 1, join(patients), join(occ), p.statistics[n]);
            }
        }
        t
    };
    emit(&a.output, Format::Json, text, &report, std::slice::from_ref(&row))?;
    Ok(outcome.into())
}

#[derive(Serialize)]
struct CiRow {
    category: usize,
    count: u64,
    lower: f64,
    upper: f64,
}

fn cmd_ci(a: CiArgs) -> Result<Status> {
    let sample = match (&a.counts, &a.observations, a.categories) {
        (Some(c), Some(o), _) => MultinomialSample::with_observations(parse_list(o, "observation")?, parse_list(c, "count")?)?,
        (Some(c), None, _) => MultinomialSample::from_counts(parse_list(c, "count")?)?,
        (None, Some(o), Some(k)) => MultinomialSample::from_observations(parse_list(o, "observation")?, k)?,
        _ => bail!("give --counts or --observations with --categories"),
    };
    let intervals = ci_solve(&sample, a.alpha)?;
    let rows: Vec<CiRow> = intervals
        .iter()
        .zip(sample.counts())
        .enumerate()
        .map(|(k, (iv, c))| CiRow { category: k + 1, count: *c, lower: iv.lower, upper: iv.upper })
        .collect();
    let rounded: Vec<CiRow> = rows.iter().map(|r| CiRow { lower: round(r.lower, 4), upper: round(r.upper, 4), ..*r }).collect();
    let text = || {
        let mut s = String::from("category count lower upper\n");
        for r in &rows {
            s += &format!("{} {} {:.4} {:.4}\n", r.category, r.count, r.lower, r.upper);
        }
        s
    };
    emit(&a.output, Format::Text, text, &rows, &rounded)?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct Chi2Report {
    seed: u64,
    alpha: f64,
    outcome: Outcome,
    nodes: u64,
    failures: u64,
    time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<bincounts::models::Chi2DemoResult>,
}

#[derive(Serialize)]
struct Chi2Row {
    seed: u64,
    alpha: f64,
    outcome: Outcome,
    counts: String,
    statistic: Option<f64>,
    critical: Option<f64>,
}

fn cmd_chi2(a: Chi2Args) -> Result<Status> {
    let cfg = Chi2DemoConfig {
        vars: a.vars,
        targets: parse_list(&a.targets, "target")?,
        alpha: a.alpha,
        propagation: a.propagation,
        seed: a.seed,
        ..Chi2DemoConfig::default()
    };
    let mut model = build_chi2_demo(&cfg)?;
    let (outcome, stats, result) = model.solve(limits(a.time_limit));
    let outcome = Outcome::from(&outcome);
    debug_assert_eq!(matches!(outcome, Outcome::Solution), result.is_some());
    let row = Chi2Row {
        seed: a.seed,
        alpha: a.alpha,
        outcome,
        counts: result.as_ref().map_or(String::new(), |r| join(&r.counts)),
        statistic: result.as_ref().map(|r| round(r.statistic, 4)),
        critical: result.as_ref().map(|r| round(r.critical, 4)),
    };
    let report = Chi2Report { seed: a.seed, alpha: a.alpha, outcome, nodes: stats.nodes, failures: stats.failures, time_s: stats.time_s, result };
    let text = || match &report.result {
        Some(r) => format!("counts {}\nstatistic {:.4}\ncritical {:.4}\n", join(&r.counts), r.statistic, r.critical),
        None => format!("outcome {}\n", outcome.label()),
    };
    emit(&a.output, Format::Text, text, &report, std::slice::from_ref(&row))?;
    Ok(outcome.into())
}

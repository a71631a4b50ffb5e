use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bincounts::bincounts::{Mode, Propagation};
use bincounts::kernel::Branching;

#[derive(Debug, Parser)]
#[command(name = "bincounts", version, about = "Bin-counting constraints, chi-square models and multinomial intervals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count values into bins.
    Bincounts(BincountsArgs),
    /// Compare propagation modes on random instances.
    Compare(CompareArgs),
    /// Solve a balanced academic curriculum instance.
    Bacp(BacpArgs),
    /// Minimise the largest per-nurse chi-square statistic of one zone.
    Bnwp(BnwpArgs),
    /// Simultaneous confidence intervals for multinomial proportions.
    Ci(CiArgs),
    /// Random variates whose bin counts pass a chi-square test.
    Chi2(Chi2Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Hidden,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Hidden => Mode::HiddenBin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchingArg {
    Mindom,
    Lex,
}

impl From<BranchingArg> for Branching {
    fn from(b: BranchingArg) -> Self {
        match b {
            BranchingArg::Mindom => Branching::MinDomMinValue,
            BranchingArg::Lex => Branching::StaticLexMinValue,
        }
    }
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("time limit must be positive".into())
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Propagation for bin_counts: dec, gac or gac-inc.
    #[arg(long, default_value = "gac")]
    pub propagation: Propagation,
    #[arg(long, value_enum, default_value = "mindom")]
    pub branching: BranchingArg,
    /// Wall-clock limit in seconds.
    #[arg(long, value_parser = positive_seconds)]
    pub time_limit: Option<f64>,
    /// Disable symmetry-breaking constraints.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Debug, Args)]
pub struct BincountsArgs {
    /// Comma-separated values; an empty string means no values.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub values: Option<String>,
    /// File with whitespace- or comma-separated values.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated, strictly increasing bin boundaries.
    #[arg(long, allow_hyphen_values = true)]
    pub bins: String,
    #[arg(long, value_enum, default_value = "strict")]
    pub mode: ModeArg,
    /// Compute the counts by propagating the constraint with this mode.
    #[arg(long)]
    pub propagation: Option<Propagation>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Number of random instances.
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    /// Goal fractions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.8")]
    pub fraction: Vec<f64>,
    /// Propagation modes to run, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "dec,gac,gac-inc")]
    pub modes: Vec<Propagation>,
    #[arg(long, value_enum, default_value = "lex")]
    pub branching: BranchingArg,
    #[arg(long, value_enum, default_value = "strict")]
    pub mode: ModeArg,
    /// Use the three-variable worked example instead of random instances.
    #[arg(long)]
    pub example: bool,
    /// Per-run wall-clock limit in seconds.
    #[arg(long, value_parser = positive_seconds)]
    pub time_limit: Option<f64>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BacpArgs {
    /// Instance file.
    pub instance: PathBuf,
    /// Read the instance as MiniZinc data.
    #[arg(long)]
    pub dzn: bool,
    /// Significance level of the load-profile test.
    #[arg(long, default_value_t = 0.99)]
    pub alpha: f64,
    /// Comma-separated bin boundaries; defaults to 0,15,20,30,35,max_load+1.
    #[arg(long)]
    pub bins: Option<String>,
    /// Comma-separated target occurrences per bin.
    #[arg(long)]
    pub targets: Option<String>,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BnwpArgs {
    /// Zone file.
    pub zone: PathBuf,
    /// Comma-separated bin boundaries.
    #[arg(long, default_value = "0,30,60,100")]
    pub bins: String,
    /// Comma-separated target occurrences per bin.
    #[arg(long, default_value = "2,2,2")]
    pub targets: String,
    /// Use pairwise disequalities instead of the matching all-different.
    #[arg(long)]
    pub pairwise: bool,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    /// Comma-separated category counts.
    #[arg(long, required_unless_present = "observations")]
    pub counts: Option<String>,
    /// Comma-separated category labels in 1..=k.
    #[arg(long, requires = "categories")]
    pub observations: Option<String>,
    /// Number of categories when reading observations.
    #[arg(long)]
    pub categories: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Chi2Args {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.95)]
    pub alpha: f64,
    #[arg(long, default_value_t = 24)]
    pub vars: usize,
    /// Comma-separated targets for bins of width five starting at zero.
    #[arg(long, default_value = "2,4,10,4,2,2")]
    pub targets: String,
    #[arg(long, default_value = "gac")]
    pub propagation: Propagation,
    #[arg(long, value_parser = positive_seconds)]
    pub time_limit: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

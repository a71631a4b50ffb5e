//! Application models built on `bin_counts` and the chi-square constraint.

mod bacp;
mod bnwp;
mod chi2_demo;
mod compare;
mod random;
mod report;

pub use bacp::{build_bacp, check_bacp, check_load_profile, BacpConfig, BacpInstance, BacpModel, BacpSchedule};
pub use bnwp::{build_bnwp, check_bnwp, BnwpConfig, BnwpModel, BnwpPlan, BnwpResult, BnwpZone};
pub use chi2_demo::{build_chi2_demo, Chi2DemoConfig, Chi2DemoModel, Chi2DemoResult};
pub use compare::{compare_filtering, run_study, Comparison, ModeRun, Outcome};
pub use random::{generate_random, BinCountsInstance, RandomStudyConfig};
pub use report::{study_rows, RunRecord, StudyRow};

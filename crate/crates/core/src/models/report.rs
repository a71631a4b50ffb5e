//! Flat records for JSON and CSV output.

use serde::Serialize;

use crate::kernel::SearchStats;

use super::compare::{Comparison, Outcome};

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub mode: String,
    pub outcome: Outcome,
    pub nodes: u64,
    pub failures: u64,
    pub time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
}

impl RunRecord {
    pub fn new(instance: impl Into<String>, mode: impl Into<String>, outcome: Outcome, stats: &SearchStats) -> Self {
        RunRecord {
            instance: instance.into(),
            mode: mode.into(),
            outcome,
            nodes: stats.nodes,
            failures: stats.failures,
            time_s: stats.time_s,
            solution: None,
            statistic: None,
        }
    }
}

/// One (instance, mode) row of a filtering study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub instance: String,
    pub goal: usize,
    pub mode: String,
    /// Sum of domain sizes after the root fixpoint; empty when the root fails.
    pub root_size: Option<usize>,
    /// Sum of domain sizes once the goal is instantiated.
    pub goal_size: Option<usize>,
    /// Root domains no larger than the decomposition's, variable by variable.
    pub dominates_dec: bool,
    pub outcome: Outcome,
    pub nodes: u64,
    pub failures: u64,
    pub time_s: f64,
}

pub fn study_rows(cmp: &Comparison) -> Vec<StudyRow> {
    cmp.runs
        .iter()
        .map(|r| StudyRow {
            instance: cmp.instance.clone(),
            goal: cmp.goal,
            mode: r.propagation.label().to_string(),
            root_size: r.root_total(),
            goal_size: r.goal_total(),
            dominates_dec: cmp.dominates_decomposition(r.propagation),
            outcome: r.outcome,
            nodes: r.stats.nodes,
            failures: r.stats.failures,
            time_s: r.stats.time_s,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bincounts::Propagation;
    use crate::kernel::{Branching, SearchLimits};
    use crate::models::{compare_filtering, BinCountsInstance};

    #[test]
    fn one_row_per_mode() {
        let cmp = compare_filtering(&BinCountsInstance::example(), &Propagation::ALL, Branching::StaticLexMinValue, SearchLimits::none()).unwrap();
        let rows = study_rows(&cmp);
        assert_eq!(rows.iter().map(|r| r.mode.as_str()).collect::<Vec<_>>(), vec!["dec", "gac", "gac-inc"]);
        assert!(rows.iter().all(|r| r.dominates_dec));
        assert_eq!(rows[0].root_size, Some(12));
    }
}

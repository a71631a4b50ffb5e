//! Simultaneous confidence intervals for multinomial proportions from the
//! score statistic `N (p_hat - p)^2 / (p (1 - p)) = chi2_{k-1}^{-1}(1 - alpha)`.

use serde::Serialize;

use super::chi2::chi2_inverse_cdf;
use crate::bincounts::{count_by_propagation, Mode, Propagation};
use crate::error::{Error, Result};
use crate::flow::BinSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Probability(alpha))
    }
}

/// Both roots of `(N + A) p^2 - (2 N p_hat + A) p + N p_hat^2 = 0` for a known
/// critical value `A`.
pub fn score_roots(n: u64, count: u64, critical: f64) -> Result<Interval> {
    if n == 0 || count > n {
        return Err(Error::Invalid(format!("cell count {count} outside 0..={n}")));
    }
    let nf = n as f64;
    let p_hat = count as f64 / nf;
    let a = nf + critical;
    let b = 2.0 * nf * p_hat + critical;
    let c = nf * p_hat * p_hat;
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * b * b {
        return Err(Error::Invalid(format!("negative discriminant {disc}")));
    }
    let root = disc.max(0.0).sqrt();
    // Larger root directly, smaller one through the product of roots to avoid cancellation.
    // At p_hat = 1 the larger root is exactly 1; rounding would land just below it.
    let upper = if count == n { 1.0 } else { (b + root) / (2.0 * a) };
    let lower = if upper > 0.0 { c / (a * upper) } else { 0.0 };
    Ok(Interval { lower: lower.clamp(0.0, 1.0), upper: upper.clamp(0.0, 1.0) })
}

/// Quesenberry–Hurst interval for one category out of `k`.
pub fn qh_interval(n: u64, count: u64, k: usize, alpha: f64) -> Result<Interval> {
    if k < 2 {
        return Err(Error::Invalid("need at least two categories".into()));
    }
    check_alpha(alpha)?;
    let critical = chi2_inverse_cdf(k as u32 - 1, 1.0 - alpha)?;
    score_roots(n, count, critical)
}

/// Observed categorical data: category labels `1..=k` and/or their histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialSample {
    observations: Option<Vec<i64>>,
    counts: Vec<u64>,
}

impl MultinomialSample {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::Invalid("need at least two categories".into()));
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::Invalid("empty sample".into()));
        }
        Ok(MultinomialSample { observations: None, counts })
    }

    /// Histogram of labels `1..=k` obtained through the bin-counting constraint.
    pub fn from_observations(observations: Vec<i64>, k: usize) -> Result<Self> {
        let counts = histogram(&observations, k)?;
        let mut sample = Self::from_counts(counts)?;
        sample.observations = Some(observations);
        Ok(sample)
    }

    /// Both representations; rejected unless the observations recount to `counts`.
    pub fn with_observations(observations: Vec<i64>, counts: Vec<u64>) -> Result<Self> {
        let recount = histogram(&observations, counts.len())?;
        if recount != counts {
            return Err(Error::Invalid(format!("observations recount to {recount:?}, not {counts:?}")));
        }
        let mut sample = Self::from_counts(counts)?;
        sample.observations = Some(observations);
        Ok(sample)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn observations(&self) -> Option<&[i64]> {
        self.observations.as_deref()
    }

    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn histogram(observations: &[i64], k: usize) -> Result<Vec<u64>> {
    let bins = BinSpec::unit(1, k)?;
    let counts = count_by_propagation(observations, &bins, Mode::Strict, Propagation::Gac)?
        .ok_or_else(|| Error::Invalid(format!("observation outside categories 1..={k}")))?;
    Ok(counts.into_iter().map(|c| c as u64).collect())
}

/// Intervals for every category of the sample.
pub fn ci_solve(sample: &MultinomialSample, alpha: f64) -> Result<Vec<Interval>> {
    let k = sample.counts.len();
    let n = sample.size();
    sample.counts.iter().map(|c| qh_interval(n, *c, k, alpha)).collect()
}

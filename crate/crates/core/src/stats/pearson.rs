use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Comparison slack when an exact statistic meets a floating-point threshold.
pub const THRESHOLD_MARGIN: f64 = 1e-12;

/// Pearson's statistic `sum (c_k - t_k)^2 / t_k`, held exactly as
/// `numerator / denominator` with `denominator = lcm(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalStat {
    numerator: BigInt,
    denominator: BigInt,
}

impl RationalStat {
    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let g = self.numerator.gcd(&self.denominator);
        let (n, d) = if g.is_zero() { (self.numerator.clone(), self.denominator.clone()) } else { (&self.numerator / &g, &self.denominator / &g) };
        n.to_f64().unwrap_or(f64::INFINITY) / d.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `self <= threshold`, with the rational converted only at this comparison.
    pub fn within(&self, threshold: f64) -> bool {
        self.to_f64() <= threshold + THRESHOLD_MARGIN
    }
}

impl fmt::Display for RationalStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Least common multiple of the targets: the denominator that makes every
/// term `(c - t)^2 / t` an integer multiple of `1 / lcm`.
pub fn target_scale(targets: &[i64]) -> Result<i64> {
    if targets.is_empty() || targets.iter().any(|t| *t <= 0) {
        return Err(Error::Invalid(format!("targets must be positive: {targets:?}")));
    }
    Ok(targets.iter().fold(1i64, |acc, t| acc.lcm(t)))
}

pub fn pearson_statistic(counts: &[i64], targets: &[i64]) -> Result<RationalStat> {
    if counts.len() != targets.len() {
        return Err(Error::Invalid(format!("{} counts but {} targets", counts.len(), targets.len())));
    }
    let scale = target_scale(targets)?;
    let numerator = counts
        .iter()
        .zip(targets)
        .map(|(c, t)| {
            let d = BigInt::from(c - t);
            &d * &d * BigInt::from(scale / t)
        })
        .sum();
    Ok(RationalStat { numerator, denominator: BigInt::from(scale) })
}

//! Statistical numerics: incomplete gamma, chi-square quantiles, Pearson's
//! statistic and score-test confidence intervals for multinomial proportions.

mod chi2;
mod gamma;
mod intervals;
mod pearson;

pub use chi2::{chi2_cdf, chi2_inverse_cdf, chi2_sf};
pub use gamma::{gamma_p, gamma_q};
pub use intervals::{ci_solve, qh_interval, score_roots, Interval, MultinomialSample};
pub use pearson::{pearson_statistic, target_scale, RationalStat, THRESHOLD_MARGIN};

/// Critical value of the chi-square goodness-of-fit test over `bins` cells at
/// significance `alpha`: the `1 - alpha` quantile with `bins - 1` degrees of freedom.
pub fn chi2_critical(bins: usize, alpha: f64) -> crate::error::Result<f64> {
    if bins < 2 {
        return Err(crate::error::Error::DegreesOfFreedom);
    }
    chi2_inverse_cdf(bins as u32 - 1, 1.0 - alpha)
}

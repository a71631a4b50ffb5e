use statrs::function::gamma::ln_gamma;

use super::gamma::{gamma_p, gamma_q};
use crate::error::{Error, Result};

/// CDF of the chi-square distribution with `df` degrees of freedom.
pub fn chi2_cdf(df: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma_p(df as f64 / 2.0, x / 2.0)
}

/// Survival function 1 - CDF, computed without cancellation.
pub fn chi2_sf(df: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(df as f64 / 2.0, x / 2.0)
}

fn chi2_pdf(df: u32, x: f64) -> f64 {
    let k = df as f64 / 2.0;
    ((k - 1.0) * x.ln() - x / 2.0 - k * std::f64::consts::LN_2 - ln_gamma(k)).exp()
}

/// Signed distance between the CDF at `x` and `q`, evaluated on whichever tail
/// keeps full relative precision.
fn residual(df: u32, x: f64, q: f64) -> f64 {
    if q <= 0.5 {
        chi2_cdf(df, x) - q
    } else {
        (1.0 - q) - chi2_sf(df, x)
    }
}

/// Quantile function: the `x` with `CDF(df, x) = q`.
///
/// Brackets the root by doubling/halving from the median approximation
/// `df (1 - 2/(9 df))^3`, bisects, then polishes with guarded Newton steps.
pub fn chi2_inverse_cdf(df: u32, q: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::DegreesOfFreedom);
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Probability(q));
    }
    let d = df as f64;
    let median = (d * (1.0 - 2.0 / (9.0 * d)).powi(3)).max(1e-3);
    let (mut lo, mut hi) = (median, median);
    while residual(df, lo, q) > 0.0 {
        lo /= 2.0;
        if lo < 1e-300 {
            break;
        }
    }
    while residual(df, hi, q) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(df, mid, q) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-9 * hi {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let r = residual(df, x, q);
        if r < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let step = r / chi2_pdf(df, x);
        let mut next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs() {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_degrees_closed_form() {
        // CDF for df = 2 is 1 - exp(-x/2), so the 0.9 quantile is -2 ln 0.1.
        let x = chi2_inverse_cdf(2, 0.9).unwrap();
        assert!((x - (-2.0 * 0.1f64.ln())).abs() < 1e-9);
        assert!((x - 4.605170).abs() < 1e-6);
    }

    #[test]
    fn five_degrees_reported_quantiles() {
        let a = chi2_inverse_cdf(5, 0.05).unwrap();
        let b = chi2_inverse_cdf(5, 0.01).unwrap();
        // Reported to two decimals by truncation: 1.14 and 0.55.
        assert_eq!(((a * 100.0).floor(), (b * 100.0).floor()), (114.0, 55.0));
        assert!((a - 1.1455).abs() < 1e-4, "{a}");
        assert!((b - 0.5543).abs() < 1e-4, "{b}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(chi2_inverse_cdf(0, 0.5).is_err());
        assert!(chi2_inverse_cdf(3, 0.0).is_err());
        assert!(chi2_inverse_cdf(3, 1.0).is_err());
        assert!(chi2_inverse_cdf(3, f64::NAN).is_err());
    }

    #[test]
    fn monotone_in_probability() {
        for df in [1, 2, 4, 9, 25] {
            let mut prev = 0.0;
            for k in 1..100 {
                let x = chi2_inverse_cdf(df, k as f64 / 100.0).unwrap();
                assert!(x > prev);
                prev = x;
            }
        }
    }
}

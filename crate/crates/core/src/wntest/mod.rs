//! White-noise decision procedures: the multi-lag `φ_q` test, John's
//! sphericity test on stacked blocks combined by the Simes rule, and the
//! permutation baseline.

mod john;
mod multi_lag;
mod nu4;
mod permutation;
mod report;

pub use john::{john_pvalue, john_simes_test, john_statistic, simes, stack};
pub use multi_lag::multi_lag_test;
pub use nu4::{estimate_nu4, Nu4};
pub use permutation::{permutation_test, MIN_PERMUTATIONS};
pub use report::{Method, SimesReport, TestParams, TestReport};

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{param, Result};

/// `P(Z > z)` for standard normal `Z`.
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// `z` with `P(Z > z) = p`.
pub fn normal_upper_quantile(p: f64) -> f64 {
    let n = Normal::standard();
    -n.inverse_cdf(p)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return param(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_tail_values() {
        assert_eq!(normal_upper_tail(0.0), 0.5);
        assert!((normal_upper_tail(1.0) - 0.15865525393145707).abs() < 1e-14);
        assert!((normal_upper_quantile(0.05) - 1.6448536269514729).abs() < 1e-9);
        for z in [-3.0, -0.5, 0.7, 2.5] {
            assert!((normal_upper_quantile(normal_upper_tail(z)) - z).abs() < 1e-8);
        }
    }
}

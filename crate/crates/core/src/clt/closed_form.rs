use nalgebra::DMatrix;

use crate::error::{param, Result};

/// Limiting covariance of the lag statistics `(L̃_1, …, L̃_q)` in `(n/p)·L̃`
/// units: `1 + 3c(ν4−1)/2` on the diagonal and `c(ν4−1)` off it.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCovMatrix {
    pub q: usize,
    pub c: f64,
    pub entries: DMatrix<f64>,
}

impl JointCovMatrix {
    pub fn diagonal(&self) -> f64 {
        self.entries[(0, 0)]
    }

    /// Common off-diagonal entry, or `None` when `q = 1`.
    pub fn off_diagonal(&self) -> Option<f64> {
        (self.q > 1).then(|| self.entries[(0, 1)])
    }

    /// `1ᵀ Σ 1`, the variance of the sum of the lag statistics.
    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }
}

pub fn joint_lag_cov_matrix(q: usize, c: f64, nu4: f64) -> Result<JointCovMatrix> {
    if q == 0 {
        return param("q must be at least 1");
    }
    if !(c > 0.0) {
        return param(format!("c must be positive, got {c}"));
    }
    let k = c * (nu4 - 1.0);
    let entries = DMatrix::from_fn(q, q, |i, j| if i == j { 1.0 + 1.5 * k } else { k });
    Ok(JointCovMatrix { q, c, entries })
}

/// Null variance of `φ_q`: `s(c) = q + c(ν4−1)(q² + q/2)`.
pub fn s_variance(q: usize, c: f64, nu4: f64) -> f64 {
    let q = q as f64;
    q + c * (nu4 - 1.0) * (q * q + q / 2.0)
}

/// Closed-form limiting covariance of the quadratic lag statistics of orders
/// `r` and `s` on the companion side.
pub fn lag_cov_closed_form(r: usize, s: usize, c: f64, beta_x: f64) -> Result<f64> {
    if r == 0 || s == 0 {
        return param("lag orders must be positive");
    }
    if !(c > 0.0) {
        return param(format!("c must be positive, got {c}"));
    }
    Ok(if r == s {
        (1.0 + 1.5 * c * (beta_x + 2.0)) / (c * c)
    } else {
        (beta_x + 2.0) / c
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(lag_cov_closed_form(2, 2, 1.0, 0.0).unwrap(), 4.0);
        assert_eq!(lag_cov_closed_form(1, 3, 1.0, 0.0).unwrap(), 2.0);
        assert!((lag_cov_closed_form(1, 1, 0.3, -2.0).unwrap() - 1.0 / 0.09).abs() < 1e-12);
        assert!(lag_cov_closed_form(1, 1, 0.0, 0.0).is_err());
        assert!(lag_cov_closed_form(0, 1, 1.0, 0.0).is_err());
    }

    #[test]
    fn joint_matrix_examples() {
        let m = joint_lag_cov_matrix(2, 0.5, 3.0).unwrap();
        assert_eq!(
            m.entries,
            DMatrix::from_row_slice(2, 2, &[2.5, 1.0, 1.0, 2.5])
        );
        let m = joint_lag_cov_matrix(4, 0.7, 1.0).unwrap();
        assert_eq!(m.entries, DMatrix::identity(4, 4));
        assert_eq!(m.off_diagonal(), Some(0.0));
        assert!(joint_lag_cov_matrix(0, 0.5, 3.0).is_err());
    }

    #[test]
    fn s_variance_examples() {
        assert_eq!(s_variance(3, 0.5, 3.0), 13.5);
        assert_eq!(s_variance(5, 0.9, 1.0), 5.0);
        assert!((s_variance(1, 0.4, 4.5) - (1.0 + 1.5 * 0.4 * 3.5)).abs() < 1e-15);
    }

    #[test]
    fn total_matches_s_on_grid() {
        for q in 1..=5 {
            for c in [0.1, 0.5, 1.0, 2.0] {
                for nu4 in [3.0, 4.5] {
                    let m = joint_lag_cov_matrix(q, c, nu4).unwrap();
                    assert!((m.total() - s_variance(q, c, nu4)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn joint_matrix_is_psd() {
        for q in 1..=6 {
            for c in [0.1, 1.0, 3.0] {
                let m = joint_lag_cov_matrix(q, c, 4.5).unwrap();
                let eig = crate::rmt::symmetric_eigenvalues(&m.entries);
                assert!(eig[0] > -1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn total_matches_s(q in 1usize..12, c in 0.01f64..5.0, nu4 in 1.0f64..10.0) {
            let m = joint_lag_cov_matrix(q, c, nu4).unwrap();
            let s = s_variance(q, c, nu4);
            prop_assert!((m.total() - s).abs() <= 1e-12 * s.max(1.0));
            prop_assert_eq!(m.entries.clone(), m.entries.transpose());
        }
    }
}

//! CLT mean and covariance functionals for linear spectral statistics,
//! evaluated by contour quadrature, together with the closed-form lag
//! covariances and the null variance of the multi-lag statistic.

mod closed_form;
mod contour;
mod functionals;
mod polynomial;

pub use closed_form::{joint_lag_cov_matrix, lag_cov_closed_form, s_variance, JointCovMatrix};
pub use contour::{support_bound, ContourNode, Rectangle};
pub use functionals::{clt_cov, clt_mean, eval_a, g_terms, lsd_moment, CltConfig, MomentProfile};
pub use polynomial::{Polynomial, MAX_DEGREE};

//! High-dimensional white-noise testing built on the joint CLT for linear
//! spectral statistics of several dependent sample covariance matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`rmt`]: Chebyshev polynomials, shift and Toeplitz matrices with their
//!   exact spectra, arcsine quadrature, and Stieltjes-transform solvers.
//! - [`clt`]: numerical contour evaluation of the CLT mean and covariance
//!   functionals, plus the closed-form lag covariances.
//! - [`autocov`]: circular lag autocovariances and the statistics
//!   `L̃_τ`, `𝓛_q` and `φ_q`.
//! - [`wntest`]: the multi-lag test, the stacked John test with Simes
//!   combination, and the permutation baseline.
//! - [`datagen`]: seedable generators for the four simulation scenarios.
//! - [`montecarlo`]: size/power tables and distributional validation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autocov;
pub mod clt;
pub mod datagen;
pub mod error;
pub mod montecarlo;
pub mod rmt;
pub mod wntest;

pub use autocov::{SymmetrizedAutocov, TimeSeriesSample};
pub use clt::{CltConfig, JointCovMatrix, MomentProfile, Polynomial};
pub use datagen::{ArScaling, Scenario, ScenarioSpec};
pub use error::{Error, Result};
pub use montecarlo::{MonteCarloConfig, ResultTable};
pub use rmt::{JointSpectralDistribution, SolverConfig, SpectralDistribution, StieltjesPoint};
pub use wntest::{Method, Nu4, SimesReport, TestReport};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

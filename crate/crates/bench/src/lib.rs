//! Fixtures shared by the benchmarks.

use hdwn_core::{Scenario, ScenarioSpec, TimeSeriesSample};

/// Gaussian white-noise sample with a fixed seed.
pub fn white_noise(p: usize, n: usize) -> TimeSeriesSample {
    ScenarioSpec::new(Scenario::GaussianWn, p, n, 0.0, 7)
        .generate()
        .expect("valid spec")
}

//! Monte Carlo harness: empirical size/power tables and distributional
//! checks of the limiting laws.

mod config;
mod size_power;
mod table;
mod validate;

pub use config::{parse_experiments, MonteCarloConfig, EXPERIMENT_SCHEMA};
pub use size_power::{run_experiments, run_size_power};
pub use table::{ResultRow, ResultTable, CSV_HEADER};
pub use validate::{
    finite_population, validate_joint_clt, validate_single_lag_clt, validate_theorem2,
    JointCltCheck, SingleLagCheck, Theorem2Check,
};

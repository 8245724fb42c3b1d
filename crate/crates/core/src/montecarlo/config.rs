use serde::Deserialize;

use crate::datagen::{ArScaling, Scenario, ScenarioSpec};
use crate::error::{param, Error, Result};
use crate::wntest::{Method, MIN_PERMUTATIONS};

/// Version of the experiment file format understood by [`parse_experiments`].
pub const EXPERIMENT_SCHEMA: u32 = 1;

/// One size/power experiment: a scenario template, a test configuration and
/// the replicate count. Replicate `r` uses seed `derive_seed(base_seed, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloConfig {
    /// Data template; its seed is replaced per replicate.
    pub scenario: ScenarioSpec,
    pub q: usize,
    pub alpha: f64,
    pub reps: usize,
    pub methods: Vec<Method>,
    /// Permutations per permutation test.
    pub permutations: usize,
    pub base_seed: u64,
    /// Fourth moment passed to the tests; the scenario's own value when `None`.
    pub nu4: Option<f64>,
    /// Record wall time in the result rows.
    pub timing: bool,
}

impl MonteCarloConfig {
    pub fn new(scenario: ScenarioSpec, q: usize, reps: usize, methods: Vec<Method>) -> Self {
        Self {
            scenario,
            q,
            alpha: 0.05,
            reps,
            methods,
            permutations: 200,
            base_seed: 0,
            nu4: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.reps == 0 {
            return param("reps must be at least 1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return param(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.q == 0 || self.q >= self.scenario.n {
            return param(format!(
                "q = {} must satisfy 1 <= q < n = {}",
                self.q, self.scenario.n
            ));
        }
        if self.methods.is_empty() {
            return param("no test methods requested");
        }
        if self.methods.contains(&Method::Permutation) && self.permutations < MIN_PERMUTATIONS {
            return param(format!("need at least {MIN_PERMUTATIONS} permutations"));
        }
        Ok(())
    }

    pub fn nu4(&self) -> f64 {
        self.nu4.unwrap_or_else(|| self.scenario.scenario.nu4())
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    schema: u32,
    #[serde(default)]
    experiment: Vec<ExperimentEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentEntry {
    scenario: String,
    p: usize,
    n: usize,
    #[serde(default)]
    a: Option<OneOrMany<f64>>,
    q: OneOrMany<usize>,
    #[serde(default = "default_alpha")]
    alpha: f64,
    reps: usize,
    methods: Vec<String>,
    #[serde(default = "default_permutations")]
    permutations: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    ar_scaling: Option<String>,
    #[serde(default)]
    nu4: Option<f64>,
}

fn default_alpha() -> f64 {
    0.05
}

fn default_permutations() -> usize {
    200
}

/// Parses a TOML experiment file into one config per `(entry, a, q)`.
///
/// ```toml
/// schema = 1
///
/// [[experiment]]
/// scenario = "gaussian_wn"
/// p = 50
/// n = 100
/// q = [1, 3]
/// reps = 2000
/// methods = ["phi", "john_simes"]
/// seed = 1
/// ```
pub fn parse_experiments(text: &str) -> Result<Vec<MonteCarloConfig>> {
    let file: ExperimentFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.schema != EXPERIMENT_SCHEMA {
        return Err(Error::Parse(format!(
            "unsupported schema {} (expected {EXPERIMENT_SCHEMA})",
            file.schema
        )));
    }
    if file.experiment.is_empty() {
        return Err(Error::Parse("no [[experiment]] entries".into()));
    }
    let mut out = Vec::new();
    for (i, e) in file.experiment.iter().enumerate() {
        let ctx = |err: Error| Error::Parse(format!("experiment {}: {err}", i + 1));
        let scenario: Scenario = e.scenario.parse().map_err(ctx)?;
        let methods = e
            .methods
            .iter()
            .map(|m| m.parse())
            .collect::<Result<Vec<Method>>>()
            .map_err(ctx)?;
        let ar_scaling = match &e.ar_scaling {
            Some(s) => s.parse().map_err(ctx)?,
            None => ArScaling::default(),
        };
        let a_values = e.a.as_ref().map_or_else(|| vec![0.0], OneOrMany::values);
        for &a in &a_values {
            for &q in &e.q.values() {
                let spec = ScenarioSpec {
                    ar_scaling,
                    ..ScenarioSpec::new(scenario, e.p, e.n, a, 0)
                };
                let cfg = MonteCarloConfig {
                    scenario: spec,
                    q,
                    alpha: e.alpha,
                    reps: e.reps,
                    methods: methods.clone(),
                    permutations: e.permutations,
                    base_seed: e.seed,
                    nu4: e.nu4,
                    timing: false,
                };
                cfg.validate().map_err(ctx)?;
                out.push(cfg);
            }
        }
    }
    Ok(out)
}

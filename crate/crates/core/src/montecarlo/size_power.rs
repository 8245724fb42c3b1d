use std::time::Instant;

use rayon::prelude::*;

use crate::datagen::derive_seed;
use crate::error::{Error, Result};
use crate::montecarlo::{MonteCarloConfig, ResultRow, ResultTable};
use crate::wntest::{john_simes_test, multi_lag_test, permutation_test, Method, Nu4};

fn replicate(cfg: &MonteCarloConfig, r: usize) -> Result<Vec<bool>> {
    let seed = derive_seed(cfg.base_seed, r as u64);
    let wrap = |e: Error| Error::Replicate {
        replicate: r,
        seed,
        source: Box::new(e),
    };
    let x = cfg.scenario.with_seed(seed).generate().map_err(wrap)?;
    let nu4 = Nu4::Known(cfg.nu4());
    cfg.methods
        .iter()
        .map(|m| {
            Ok(match m {
                Method::Phi => multi_lag_test(&x, cfg.q, cfg.alpha, nu4)?.reject,
                Method::JohnSimes => john_simes_test(&x, cfg.q, cfg.alpha, nu4)?.reject,
                Method::Permutation => {
                    permutation_test(
                        &x,
                        cfg.q,
                        cfg.alpha,
                        cfg.permutations,
                        derive_seed(seed, u64::MAX),
                    )?
                    .reject
                }
            })
        })
        .collect::<Result<Vec<bool>>>()
        .map_err(wrap)
}

/// Empirical rejection rates of every requested method. Replicates run in
/// parallel; the table depends only on `cfg`.
pub fn run_size_power(cfg: &MonteCarloConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let start = Instant::now();
    let decisions: Vec<Vec<bool>> = (0..cfg.reps)
        .into_par_iter()
        .map(|r| replicate(cfg, r))
        .collect::<Result<_>>()?;
    let seconds = cfg.timing.then(|| start.elapsed().as_secs_f64());
    let spec = &cfg.scenario;
    let mut table = ResultTable::new();
    for (k, &m) in cfg.methods.iter().enumerate() {
        let rejections = decisions.iter().filter(|d| d[k]).count();
        let mut row =
            ResultRow::from_counts(spec.p, spec.n, spec.a, m, cfg.q, rejections, cfg.reps);
        row.seconds = seconds;
        table.push(row)?;
    }
    Ok(table)
}

/// Runs each config in turn and concatenates the tables.
pub fn run_experiments(cfgs: &[MonteCarloConfig]) -> Result<ResultTable> {
    let mut table = ResultTable::new();
    for cfg in cfgs {
        table.extend(run_size_power(cfg)?)?;
    }
    Ok(table)
}

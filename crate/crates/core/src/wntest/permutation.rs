use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::autocov::{phi_from_gram, TimeSeriesSample};
use crate::error::{param, Result};
use crate::wntest::{check_alpha, normal_upper_quantile, Method, TestParams, TestReport};

/// Smallest accepted number of permutations.
pub const MIN_PERMUTATIONS: usize = 20;

// permuted statistics this close to the observed value count as ties
const TIE_RELATIVE_TOL: f64 = 1e-12;

/// Permutation test of `φ_q`: the observations are shuffled `b` times and
/// `p = (1 + #{φ_perm ≥ φ_obs})/(b + 1)`; the test rejects when `p < α`.
///
/// Permutation `j` draws from stream `j + 1` of a ChaCha8 generator seeded
/// with `seed`, so the result does not depend on the thread count. The Gram
/// matrix is formed once and permuted in place of the data.
pub fn permutation_test(
    x: &TimeSeriesSample,
    q: usize,
    alpha: f64,
    b: usize,
    seed: u64,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    if b < MIN_PERMUTATIONS {
        return param(format!(
            "need at least {MIN_PERMUTATIONS} permutations, got {b}"
        ));
    }
    let (p, n) = (x.p(), x.n());
    if q == 0 || q >= n {
        return param(format!("q = {q} must satisfy 1 <= q < n = {n}"));
    }
    let g = x.gram();
    let observed = phi_from_gram(&g, p, q);
    let tol = TIE_RELATIVE_TOL * observed.abs().max(1.0);
    let exceed: usize = (0..b)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64 + 1);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let gp = DMatrix::from_fn(n, n, |r, c| g[(perm[r], perm[c])]);
            usize::from(phi_from_gram(&gp, p, q) >= observed - tol)
        })
        .sum();
    let p_value = (1 + exceed) as f64 / (b + 1) as f64;
    Ok(TestReport {
        statistic: observed,
        z_score: normal_upper_quantile(p_value),
        p_value,
        reject: p_value < alpha,
        params: TestParams {
            p,
            n,
            q,
            c_n: x.ratio(),
            nu4: None,
            alpha,
            method: Method::Permutation,
        },
    })
}

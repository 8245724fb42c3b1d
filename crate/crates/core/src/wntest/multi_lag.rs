use crate::autocov::{phi_stat, TimeSeriesSample};
use crate::clt::s_variance;
use crate::error::Result;
use crate::wntest::{check_alpha, normal_upper_tail, Method, Nu4, TestParams, TestReport};

/// Multi-lag test: reject when `(φ_q − q/2)/√s(c_n)` exceeds the upper
/// `α` normal quantile.
pub fn multi_lag_test(x: &TimeSeriesSample, q: usize, alpha: f64, nu4: Nu4) -> Result<TestReport> {
    check_alpha(alpha)?;
    let phi = phi_stat(x, q)?;
    let nu4 = nu4.resolve(x)?;
    let c_n = x.ratio();
    let z = (phi - q as f64 / 2.0) / s_variance(q, c_n, nu4).sqrt();
    let p_value = normal_upper_tail(z);
    Ok(TestReport {
        statistic: phi,
        z_score: z,
        p_value,
        reject: p_value < alpha,
        params: TestParams {
            p: x.p(),
            n: x.n(),
            q,
            c_n,
            nu4: Some(nu4),
            alpha,
            method: Method::Phi,
        },
    })
}

use nalgebra::DMatrix;

use crate::autocov::TimeSeriesSample;
use crate::error::{param, Error, Result};
use crate::wntest::{check_alpha, normal_upper_tail, Method, Nu4, SimesReport, TestParams};

/// Rotates the sample by `k` observations, cuts the first `N(q+1)` of them
/// (`N = ⌊n/(q+1)⌋`) into consecutive blocks of `q+1`, and stacks each block
/// into one column of length `p(q+1)`. Leftover observations are dropped.
pub fn stack(x: &TimeSeriesSample, q: usize, k: usize) -> Result<DMatrix<f64>> {
    let (p, n) = (x.p(), x.n());
    let b = q + 1;
    if n < b {
        return param(format!(
            "stacking q+1 = {b} observations needs n >= {b}, got {n}"
        ));
    }
    if k > q {
        return param(format!("rotation index {k} must lie in 0..={q}"));
    }
    let blocks = n / b;
    let d = x.data();
    Ok(DMatrix::from_fn(p * b, blocks, |r, j| {
        let (l, i) = (r / p, r % p);
        d[(i, (j * b + l + k) % n)]
    }))
}

/// John's sphericity statistic for the columns of `y`:
/// `mean((l − l̄)²)/l̄²` over the eigenvalues of `S = YYᵀ/N`.
///
/// Evaluated through `tr S` and `tr S²` on the smaller Gram side, which
/// gives `d·tr(S²)/(tr S)² − 1` with `d` the row count.
pub fn john_statistic(y: &DMatrix<f64>) -> Result<f64> {
    let (d, blocks) = y.shape();
    if blocks < 2 {
        return param(format!(
            "John statistic needs at least 2 columns, got {blocks}"
        ));
    }
    let tr = y.norm_squared();
    if !(tr > 0.0) {
        return Err(Error::DegenerateInput("all-zero stacked sample".into()));
    }
    let g = if blocks < d {
        y.transpose() * y
    } else {
        y * y.transpose()
    };
    Ok(d as f64 * g.norm_squared() / (tr * tr) - 1.0)
}

/// `P_k = 1 − Φ((N·U − p(q+1) − ν4 + 2)/2)`.
pub fn john_pvalue(u: f64, blocks: usize, p: usize, q: usize, nu4: f64) -> f64 {
    let centred = blocks as f64 * u - (p * (q + 1)) as f64 - nu4 + 2.0;
    normal_upper_tail(centred / 2.0)
}

/// Simes rule: reject when the `k`-th smallest p-value (1-based) is at most
/// `kα/m` for some `k`. Ties keep their original order.
pub fn simes(p_values: &[f64], alpha: f64) -> (Vec<f64>, bool) {
    let mut sorted = p_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let reject = sorted
        .iter()
        .enumerate()
        .any(|(k, &p)| p <= (k + 1) as f64 * alpha / m);
    (sorted, reject)
}

/// John's test on each of the `q+1` rotations of the stacked sample,
/// combined by the Simes rule at level `alpha`.
pub fn john_simes_test(
    x: &TimeSeriesSample,
    q: usize,
    alpha: f64,
    nu4: Nu4,
) -> Result<SimesReport> {
    check_alpha(alpha)?;
    let nu4 = nu4.resolve(x)?;
    let blocks = x.n() / (q + 1);
    let mut statistics = Vec::with_capacity(q + 1);
    let mut p_values = Vec::with_capacity(q + 1);
    for k in 0..=q {
        let u = john_statistic(&stack(x, q, k)?)?;
        statistics.push(u);
        p_values.push(john_pvalue(u, blocks, x.p(), q, nu4));
    }
    let (sorted, reject) = simes(&p_values, alpha);
    Ok(SimesReport {
        statistics,
        p_values,
        sorted,
        reject,
        alpha,
        blocks,
        params: TestParams {
            p: x.p(),
            n: x.n(),
            q,
            c_n: x.ratio(),
            nu4: Some(nu4),
            alpha,
            method: Method::JohnSimes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::symmetric_eigenvalues;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar(v: &[f64]) -> TimeSeriesSample {
        TimeSeriesSample::new(DMatrix::from_row_slice(1, v.len(), v)).unwrap()
    }

    fn random(p: usize, n: usize, seed: u64) -> TimeSeriesSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TimeSeriesSample::new(DMatrix::from_fn(p, n, |_, _| rng.random_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn stacking_examples() {
        let x = random(3, 7, 1);
        assert_eq!(stack(&x, 0, 0).unwrap(), x.data().clone());

        let x = scalar(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(
            stack(&x, 1, 0).unwrap(),
            DMatrix::from_column_slice(2, 2, &[1.0, 2.0, 3.0, 4.0])
        );
        assert_eq!(
            stack(&x, 1, 1).unwrap(),
            DMatrix::from_column_slice(2, 2, &[2.0, 3.0, 4.0, 5.0])
        );
        assert!(stack(&scalar(&[1.0, 2.0]), 2, 0).is_err());
    }

    #[test]
    fn stacking_puts_coordinates_within_lags() {
        let x = random(2, 9, 2);
        let y = stack(&x, 2, 1).unwrap();
        assert_eq!(y.shape(), (6, 3));
        // column 1, lag slot 2, coordinate 1 is x_{1·3 + 2 + 1} = column 6
        assert_eq!(y[(2 * 2 + 1, 1)], x.data()[(1, 6)]);
    }

    #[test]
    fn john_statistic_examples() {
        let id = DMatrix::from_fn(3, 3, |i, j| if i == j { 3f64.sqrt() } else { 0.0 });
        assert!(john_statistic(&id).unwrap().abs() < 1e-14);

        // S = diag(2, 0)
        let y = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        assert!((john_statistic(&y).unwrap() - 1.0).abs() < 1e-15);

        assert!(matches!(
            john_statistic(&DMatrix::zeros(2, 4)),
            Err(Error::DegenerateInput(_))
        ));
        assert!(john_statistic(&DMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn john_statistic_matches_eigenvalues() {
        for (d, n) in [(4, 10), (10, 4), (6, 6)] {
            let y = random(d, n, (d * 31 + n) as u64).into_data();
            let s = &y * y.transpose() / n as f64;
            let l = symmetric_eigenvalues(&s);
            let mean = l.iter().sum::<f64>() / d as f64;
            let disp = l.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d as f64;
            assert!((john_statistic(&y).unwrap() - disp / (mean * mean)).abs() < 1e-12);
        }
    }

    #[test]
    fn pvalue_examples() {
        let (p, q, nu4) = (10, 1, 3.0);
        let blocks = 4;
        let u0 = (p as f64 * 2.0 + nu4 - 2.0) / blocks as f64;
        assert!((john_pvalue(u0, blocks, p, q, nu4) - 0.5).abs() < 1e-15);
        let u1 = (p as f64 * 2.0 + nu4) / blocks as f64;
        assert!((john_pvalue(u1, blocks, p, q, nu4) - 0.15865525393145707).abs() < 1e-12);
        let mut last = 1.0;
        for i in 0..100 {
            let v = john_pvalue(i as f64 * 0.2, blocks, p, q, nu4);
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn simes_examples() {
        let (sorted, reject) = simes(&[0.2, 0.01, 0.9], 0.05);
        assert_eq!(sorted, vec![0.01, 0.2, 0.9]);
        assert!(reject);
        assert!(!simes(&[1.0, 1.0, 1.0], 0.05).1);
        // equality counts as rejection
        assert!(simes(&[0.5, 0.025], 0.05).1);
    }

    #[test]
    fn john_simes_is_scale_free() {
        let x = random(5, 40, 3);
        let r = john_simes_test(&x, 2, 0.05, Nu4::Known(3.0)).unwrap();
        assert_eq!(r.p_values.len(), 3);
        assert_eq!(r.blocks, 13);
        let scaled = TimeSeriesSample::new(x.data() * 7.3).unwrap();
        let s = john_simes_test(&scaled, 2, 0.05, Nu4::Known(3.0)).unwrap();
        assert_eq!(r.reject, s.reject);
        for (a, b) in r.statistics.iter().zip(&s.statistics) {
            assert!((a - b).abs() < 1e-12);
        }
        let halved = TimeSeriesSample::new(x.data() * 0.5).unwrap();
        assert_eq!(
            john_simes_test(&halved, 2, 0.05, Nu4::Known(3.0))
                .unwrap()
                .statistics,
            r.statistics
        );
    }

    proptest! {
        #[test]
        fn simes_report_invariants(ps in proptest::collection::vec(0.0f64..=1.0, 1..8), alpha in 0.01f64..0.5) {
            let (sorted, reject) = simes(&ps, alpha);
            let mut a = ps.clone();
            a.sort_by(f64::total_cmp);
            prop_assert_eq!(&sorted, &a);
            let m = ps.len() as f64;
            let want = sorted.iter().enumerate().any(|(k, p)| *p <= (k as f64 + 1.0) * alpha / m);
            prop_assert_eq!(reject, want);
            prop_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn john_scale_invariance(seed in any::<u64>(), scale in 0.01f64..100.0) {
            let y = random(4, 9, seed).into_data();
            let a = john_statistic(&y).unwrap();
            let b = john_statistic(&(&y * scale)).unwrap();
            prop_assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
            prop_assert!(a >= -1e-12);
        }
    }
}

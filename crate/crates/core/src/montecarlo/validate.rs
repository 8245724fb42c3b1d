use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::autocov::lag_stats;
use crate::clt::{
    clt_cov, clt_mean, joint_lag_cov_matrix, lsd_moment, CltConfig, JointCovMatrix, MomentProfile,
    Polynomial,
};
use crate::datagen::{derive_seed, Scenario, ScenarioSpec};
use crate::error::{param, Result};
use crate::rmt::{JointSpectralDistribution, SpectralDistribution};

fn white_noise_for(nu4: f64) -> Result<Scenario> {
    [
        Scenario::GaussianWn,
        Scenario::GammaWn,
        Scenario::RademacherWn,
    ]
    .into_iter()
    .find(|s| s.nu4() == nu4)
    .map_or_else(
        || {
            param(format!(
                "no white-noise generator with nu4 = {nu4} (use 1, 3 or 4.5)"
            ))
        },
        Ok,
    )
}

/// `((n/p) L̃_τ)_{τ=1..q}` for each replicate.
fn scaled_lag_stats(
    p: usize,
    n: usize,
    q: usize,
    reps: usize,
    nu4: f64,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let scenario = white_noise_for(nu4)?;
    let scale = n as f64 / p as f64;
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let x =
                ScenarioSpec::new(scenario, p, n, 0.0, derive_seed(seed, r as u64)).generate()?;
            Ok(lag_stats(&x, q)?.into_iter().map(|l| l * scale).collect())
        })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

/// Empirical covariance of two series with the standard error of each entry
/// estimated from the spread of the centred products.
fn cov_with_se(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (ma, mb) = (mean(a), mean(b));
    let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let n = prods.len() as f64;
    let cov = prods.iter().sum::<f64>() / (n - 1.0);
    let se = (sample_var(&prods) / n).sqrt();
    (cov, se)
}

/// Moments of `(n/p)L̃_1 − p/2` against the single-lag limit
/// `N(1/2, 1 + 3c(ν4−1)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleLagCheck {
    pub emp_mean: f64,
    pub emp_var: f64,
    pub theory_mean: f64,
    pub theory_var: f64,
    pub se_mean: f64,
    pub se_var: f64,
    pub reps: usize,
}

pub fn validate_single_lag_clt(
    p: usize,
    n: usize,
    reps: usize,
    nu4: f64,
    seed: u64,
) -> Result<SingleLagCheck> {
    if reps < 100 {
        return param("single-lag validation needs at least 100 replicates");
    }
    let vals: Vec<f64> = scaled_lag_stats(p, n, 1, reps, nu4, seed)?
        .into_iter()
        .map(|v| v[0] - p as f64 / 2.0)
        .collect();
    let emp_mean = mean(&vals);
    let emp_var = sample_var(&vals);
    let sq: Vec<f64> = vals.iter().map(|v| (v - emp_mean).powi(2)).collect();
    let c = p as f64 / n as f64;
    Ok(SingleLagCheck {
        emp_mean,
        emp_var,
        theory_mean: 0.5,
        theory_var: 1.0 + 1.5 * c * (nu4 - 1.0),
        se_mean: (emp_var / reps as f64).sqrt(),
        se_var: (sample_var(&sq) / reps as f64).sqrt(),
        reps,
    })
}

/// Empirical covariance of `((n/p)L̃_τ)_{τ≤q}` against the joint limit.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCltCheck {
    pub emp_cov: DMatrix<f64>,
    /// Monte Carlo standard error of each entry of `emp_cov`.
    pub se: DMatrix<f64>,
    pub theory_cov: JointCovMatrix,
    pub max_abs_dev: f64,
    /// Largest `|emp − theory| / se` over the entries.
    pub max_se_ratio: f64,
}

pub fn validate_joint_clt(
    p: usize,
    n: usize,
    q: usize,
    reps: usize,
    nu4: f64,
    seed: u64,
) -> Result<JointCltCheck> {
    if q < 2 {
        return param("joint validation needs q >= 2");
    }
    if reps < 1000 {
        return param("joint validation needs at least 1000 replicates");
    }
    let vals = scaled_lag_stats(p, n, q, reps, nu4, seed)?;
    let cols: Vec<Vec<f64>> = (0..q)
        .map(|k| vals.iter().map(|v| v[k]).collect())
        .collect();
    let mut emp_cov = DMatrix::zeros(q, q);
    let mut se = DMatrix::zeros(q, q);
    for i in 0..q {
        for j in i..q {
            let (c, s) = cov_with_se(&cols[i], &cols[j]);
            emp_cov[(i, j)] = c;
            emp_cov[(j, i)] = c;
            se[(i, j)] = s;
            se[(j, i)] = s;
        }
    }
    let theory_cov = joint_lag_cov_matrix(q, p as f64 / n as f64, nu4)?;
    let dev = &emp_cov - &theory_cov.entries;
    let max_abs_dev = dev.abs().max();
    let max_se_ratio = dev
        .iter()
        .zip(se.iter())
        .map(|(d, s)| d.abs() / s)
        .fold(0.0, f64::max);
    Ok(JointCltCheck {
        emp_cov,
        se,
        theory_cov,
        max_abs_dev,
        max_se_ratio,
    })
}

/// Finite-`p` version of a discrete population law: atom counts are
/// `round(w·p)` with the remainder given to the last atom. Returns the
/// diagonal of the population and the law it induces.
pub fn finite_population(
    h: &SpectralDistribution,
    p: usize,
) -> Result<(Vec<f64>, SpectralDistribution)> {
    let atoms = match h {
        SpectralDistribution::Arcsine => {
            return param("finite populations need a point-mass or discrete law")
        }
        h => h.atoms(),
    };
    let mut diag = Vec::with_capacity(p);
    for (k, &(t, w)) in atoms.iter().enumerate() {
        let count = if k + 1 == atoms.len() {
            p - diag.len()
        } else {
            ((w * p as f64).round() as usize).min(p - diag.len())
        };
        diag.extend(std::iter::repeat_n(t, count));
    }
    let law = SpectralDistribution::Discrete(
        atoms
            .iter()
            .map(|&(t, _)| {
                (
                    t,
                    diag.iter().filter(|&&d| d == t).count() as f64 / p as f64,
                )
            })
            .filter(|&(_, w)| w > 0.0)
            .collect(),
    );
    Ok((diag, law))
}

/// Paired linear spectral statistics of `XXᵀ/n` and `QXXᵀQᵀ/n` against the
/// joint CLT.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Check {
    pub emp_cov_12: f64,
    pub se_cov_12: f64,
    pub theory_cov_12: f64,
    /// Empirical means of the two centred statistics.
    pub emp_means: (f64, f64),
    /// Limiting means of the two centred statistics.
    pub theory_means: (f64, f64),
}

fn trace_poly(f: &Polynomial, s: &DMatrix<f64>) -> f64 {
    let mut total = f.coeffs()[0] * s.nrows() as f64;
    let mut power = s.clone();
    for (k, &c) in f.coeffs().iter().enumerate().skip(1) {
        if k > 1 {
            power = &power * s;
        }
        total += c * power.trace();
    }
    total
}

/// Simulates `p(∫f dF_{n1} − ∫f dF^{c_n,δ_1})` and
/// `p(∫f dF_{n2} − ∫f dF^{c_n,H_n})` for Gaussian data, where the second
/// matrix carries the diagonal population `H_n` built from `h2`, and compares
/// their covariance with the numerical CLT value.
pub fn validate_theorem2(
    p: usize,
    n: usize,
    reps: usize,
    h2: &SpectralDistribution,
    f: &Polynomial,
    seed: u64,
    cfg: &CltConfig,
) -> Result<Theorem2Check> {
    if let SpectralDistribution::Discrete(atoms) = h2 {
        if atoms.len() > 8 {
            return param("population law may have at most 8 atoms");
        }
    }
    if f.degree() > 4 {
        return param("test function degree must be at most 4");
    }
    if reps < 2 {
        return param("need at least 2 replicates");
    }
    let (diag, hn) = finite_population(h2, p)?;
    if diag.iter().any(|&t| t < 0.0) {
        return param("population eigenvalues must be nonnegative");
    }
    let root = DVector::from_iterator(p, diag.iter().map(|t| t.sqrt()));
    let c_n = p as f64 / n as f64;
    let identity = SpectralDistribution::PointMass(1.0);
    let centre1 = p as f64 * lsd_moment(f, c_n, &identity, cfg)?;
    let centre2 = p as f64 * lsd_moment(f, c_n, &hn, cfg)?;

    let pairs: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let x = ScenarioSpec::new(Scenario::GaussianWn, p, n, 0.0, derive_seed(seed, r as u64))
                .generate()?;
            let s1 = x.data() * x.data().transpose() / n as f64;
            let s2 = DMatrix::from_fn(p, p, |i, j| root[i] * s1[(i, j)] * root[j]);
            Ok((trace_poly(f, &s1) - centre1, trace_poly(f, &s2) - centre2))
        })
        .collect::<Result<_>>()?;
    let a: Vec<f64> = pairs.iter().map(|v| v.0).collect();
    let b: Vec<f64> = pairs.iter().map(|v| v.1).collect();
    let (emp_cov_12, se_cov_12) = cov_with_se(&a, &b);

    let gaussian = MomentProfile::gaussian();
    let hrs = JointSpectralDistribution::with_identity(&hn)?;
    let theory_cov_12 = clt_cov(f, f, c_n, &hrs, &gaussian, cfg)?;
    let theory_means = (
        clt_mean(f, c_n, &identity, &gaussian, cfg)?,
        clt_mean(f, c_n, &hn, &gaussian, cfg)?,
    );
    Ok(Theorem2Check {
        emp_cov_12,
        se_cov_12,
        theory_cov_12,
        emp_means: (mean(&a), mean(&b)),
        theory_means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_population_rounds_counts() {
        let h = SpectralDistribution::Discrete(vec![(0.5, 0.5), (1.5, 0.5)]);
        let (d, law) = finite_population(&h, 7).unwrap();
        assert_eq!(d.len(), 7);
        assert_eq!(d.iter().filter(|&&t| t == 0.5).count(), 4);
        law.validate().unwrap();
        assert!(finite_population(&SpectralDistribution::Arcsine, 5).is_err());
    }

    #[test]
    fn trace_of_polynomial() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let f = Polynomial::new(vec![1.0, -1.0, 0.5]).unwrap();
        // eigen route: Σ 1 − λ + λ²/2
        let eig = crate::rmt::symmetric_eigenvalues(&s);
        let want: f64 = eig.iter().map(|l| f.eval(*l)).sum();
        assert!((trace_poly(&f, &s) - want).abs() < 1e-12);
    }

    #[test]
    fn theory_fields_do_not_depend_on_reps() {
        let a = validate_single_lag_clt(10, 20, 100, 3.0, 1).unwrap();
        let b = validate_single_lag_clt(10, 20, 150, 3.0, 2).unwrap();
        assert_eq!((a.theory_mean, a.theory_var), (b.theory_mean, b.theory_var));
        assert_eq!(a.theory_var, 1.0 + 1.5 * 0.5 * 2.0);
        assert!(validate_single_lag_clt(10, 20, 99, 3.0, 1).is_err());
        assert!(validate_single_lag_clt(10, 20, 100, 2.0, 1).is_err());
    }

    #[test]
    fn constant_function_has_no_fluctuation() {
        let f = Polynomial::new(vec![2.0]).unwrap();
        let r = validate_theorem2(
            6,
            12,
            5,
            &SpectralDistribution::PointMass(1.0),
            &f,
            0,
            &CltConfig::default(),
        )
        .unwrap();
        assert_eq!(r.emp_cov_12, 0.0);
        assert_eq!(r.emp_means, (0.0, 0.0));
    }

    #[test]
    fn rademacher_lags_are_uncorrelated() {
        let r = validate_joint_clt(20, 40, 2, 1000, 1.0, 4).unwrap();
        assert_eq!(r.theory_cov.off_diagonal(), Some(0.0));
        assert!(r.emp_cov[(0, 1)].abs() < 4.0 * r.se[(0, 1)]);
    }
}

//! Circular lag autocovariances and the statistics built from them.

use nalgebra::DMatrix;

use crate::error::{param, Error, Result};
use crate::rmt::symmetric_eigenvalues;

/// A `p × n` sample whose columns are the observations `x_1, …, x_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesSample {
    data: DMatrix<f64>,
}

impl TimeSeriesSample {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() < 1 || data.ncols() < 2 {
            return param(format!(
                "sample must be p x n with p >= 1 and n >= 2, got {} x {}",
                data.nrows(),
                data.ncols()
            ));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return param(format!("sample contains non-finite entry {v}"));
        }
        Ok(Self { data })
    }

    /// Builds a sample from rows that are observations `x_tᵀ`.
    pub fn from_observations(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::Parse("observations have differing lengths".into()));
        }
        Self::new(DMatrix::from_fn(p, n, |i, t| rows[t][i]))
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<f64> {
        self.data
    }

    pub fn p(&self) -> usize {
        self.data.nrows()
    }

    pub fn n(&self) -> usize {
        self.data.ncols()
    }

    /// `c_n = p/n`.
    pub fn ratio(&self) -> f64 {
        self.p() as f64 / self.n() as f64
    }

    /// Copy with each coordinate's sample mean removed.
    ///
    /// The null theory assumes mean-zero data; centring is a preprocessing
    /// convenience and slightly changes the finite-sample law.
    pub fn centered(&self) -> Self {
        let mut data = self.data.clone();
        for mut row in data.row_iter_mut() {
            let mean = row.mean();
            row.add_scalar_mut(-mean);
        }
        Self { data }
    }

    /// Copy with the coordinates permuted by `perm` (row `i` of the result is
    /// row `perm[i]` of this sample).
    pub fn permute_coordinates(&self, perm: &[usize]) -> Self {
        Self {
            data: self.data.select_rows(perm),
        }
    }

    /// Copy with the observations permuted by `perm`.
    pub fn permute_observations(&self, perm: &[usize]) -> Self {
        Self {
            data: self.data.select_columns(perm),
        }
    }

    /// `n × n` Gram matrix `XᵀX`.
    pub fn gram(&self) -> DMatrix<f64> {
        self.data.transpose() * &self.data
    }
}

/// `M̃_τ = ½(Σ̂_τ + Σ̂_τᵀ)`, symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedAutocov {
    pub lag: usize,
    pub matrix: DMatrix<f64>,
}

fn check_lag(n: usize, tau: usize) -> Result<()> {
    if tau == 0 || tau >= n {
        return param(format!("lag {tau} must satisfy 1 <= lag < n = {n}"));
    }
    Ok(())
}

fn check_q(n: usize, q: usize) -> Result<()> {
    if q == 0 || q >= n {
        return param(format!("q = {q} must satisfy 1 <= q < n = {n}"));
    }
    Ok(())
}

/// `Σ̂_τ = (1/n) Σ_t x_t x_{t−τ}ᵀ` with circular indexing.
pub fn lag_autocov(x: &TimeSeriesSample, tau: usize) -> Result<DMatrix<f64>> {
    let n = x.n();
    check_lag(n, tau)?;
    let data = x.data();
    let lagged = DMatrix::from_fn(x.p(), n, |i, t| data[(i, (t + n - tau) % n)]);
    Ok(data * lagged.transpose() / n as f64)
}

pub fn symmetrize(s: &DMatrix<f64>, tau: usize) -> Result<SymmetrizedAutocov> {
    if !s.is_square() {
        return param(format!(
            "cannot symmetrize a {} x {} matrix",
            s.nrows(),
            s.ncols()
        ));
    }
    Ok(SymmetrizedAutocov {
        lag: tau,
        matrix: (s + s.transpose()) * 0.5,
    })
}

/// `L̃_τ = tr(M̃_τ²)`, the squared Frobenius norm of `M̃_τ`.
pub fn lag_stat(x: &TimeSeriesSample, tau: usize) -> Result<f64> {
    check_lag(x.n(), tau)?;
    if use_gram(x.p(), x.n(), 1) {
        Ok(lag_stat_from_gram(&x.gram(), tau))
    } else {
        let m = symmetrize(&lag_autocov(x, tau)?, tau)?;
        Ok(m.matrix.norm_squared())
    }
}

/// `L̃_τ` as the sum of squared eigenvalues of `M̃_τ`.
pub fn lag_stat_eigen(x: &TimeSeriesSample, tau: usize) -> Result<f64> {
    let m = symmetrize(&lag_autocov(x, tau)?, tau)?;
    Ok(symmetric_eigenvalues(&m.matrix).iter().map(|l| l * l).sum())
}

/// `L̃_τ` from the Gram matrix `G = XᵀX`:
/// `tr(M̃_τ²) = tr(((D_τ + D_τᵀ)G)²) / 4n²`, where `(D_τ + D_τᵀ)G` is `G`
/// with rows rolled by `±τ`.
pub fn lag_stat_from_gram(g: &DMatrix<f64>, tau: usize) -> f64 {
    let n = g.nrows();
    let up = |i: usize| (i + tau) % n;
    let down = |i: usize| (i + n - tau % n) % n;
    let mut total = 0.0;
    for i in 0..n {
        let (iu, id) = (up(i), down(i));
        for j in 0..n {
            let a_ij = g[(iu, j)] + g[(id, j)];
            let a_ji = g[(up(j), i)] + g[(down(j), i)];
            total += a_ij * a_ji;
        }
    }
    total / (4.0 * (n * n) as f64)
}

// Gram path cost p n² + q n² against q p² n on the p side.
fn use_gram(p: usize, n: usize, q: usize) -> bool {
    let (p, n, q) = (p as f64, n as f64, q as f64);
    p * n * n + q * n * n < q * p * p * n
}

/// `(L̃_1, …, L̃_q)`.
pub fn lag_stats(x: &TimeSeriesSample, q: usize) -> Result<Vec<f64>> {
    check_q(x.n(), q)?;
    if use_gram(x.p(), x.n(), q) {
        let g = x.gram();
        Ok((1..=q).map(|tau| lag_stat_from_gram(&g, tau)).collect())
    } else {
        (1..=q)
            .map(|tau| {
                Ok(symmetrize(&lag_autocov(x, tau)?, tau)?
                    .matrix
                    .norm_squared())
            })
            .collect()
    }
}

/// `𝓛_q = Σ_{τ=1}^q L̃_τ`.
pub fn multi_lag_stat(x: &TimeSeriesSample, q: usize) -> Result<f64> {
    Ok(lag_stats(x, q)?.iter().sum())
}

/// `φ_q = (n/p)𝓛_q − qp/2`.
pub fn phi_stat(x: &TimeSeriesSample, q: usize) -> Result<f64> {
    Ok(phi_from_sum(multi_lag_stat(x, q)?, x.p(), x.n(), q))
}

pub(crate) fn phi_from_sum(l: f64, p: usize, n: usize, q: usize) -> f64 {
    n as f64 / p as f64 * l - (q * p) as f64 / 2.0
}

/// `φ_q` from a precomputed Gram matrix.
pub fn phi_from_gram(g: &DMatrix<f64>, p: usize, q: usize) -> f64 {
    let l: f64 = (1..=q).map(|tau| lag_stat_from_gram(g, tau)).sum();
    phi_from_sum(l, p, g.nrows(), q)
}

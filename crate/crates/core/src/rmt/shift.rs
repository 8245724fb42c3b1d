use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{param, Result};

fn check_lag(n: usize, tau: usize) -> Result<()> {
    if n == 0 || tau == 0 || tau >= n {
        return param(format!("lag {tau} must satisfy 1 <= lag < n = {n}"));
    }
    Ok(())
}

/// The circular shift permutation `D_τ = D_1^τ`: ones at `(t, t+τ mod n)`.
///
/// In block form this is `[[0, I_{n−τ}], [I_τ, 0]]`, so `(D_τ x)_t = x_{t+τ}`
/// and `X D_τᵀ Xᵀ = Σ_t x_t x_{t−τ}ᵀ` with circular indexing.
pub fn shift_matrix(n: usize, tau: usize) -> Result<DMatrix<f64>> {
    check_lag(n, tau)?;
    let mut d = DMatrix::zeros(n, n);
    for t in 0..n {
        d[(t, (t + tau) % n)] = 1.0;
    }
    Ok(d)
}

/// Banded Toeplitz matrix `C_{n,τ}`: ½ on the ±τ diagonals, no wrap-around.
pub fn toeplitz_band(n: usize, tau: usize) -> Result<DMatrix<f64>> {
    check_lag(n, tau)?;
    let mut c = DMatrix::zeros(n, n);
    for i in 0..n - tau {
        c[(i, i + tau)] = 0.5;
        c[(i + tau, i)] = 0.5;
    }
    Ok(c)
}

/// Exact spectrum of `½(D_τ + D_τᵀ)`, namely `{cos(2πτt/n) : t = 1..n}` sorted
/// ascending.
pub fn symmetrized_shift_spectrum(n: usize, tau: usize) -> Result<Vec<f64>> {
    check_lag(n, tau)?;
    let mut v: Vec<f64> = (1..=n)
        .map(|t| (2.0 * PI * (tau * t) as f64 / n as f64).cos())
        .collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Ascending eigenvalues of a dense symmetric matrix.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Empirical moment `(1/n) Σ l_t^s` over the eigenvalues of `C_{n,τ}`.
pub fn szego_moment(n: usize, tau: usize, s: u32) -> Result<f64> {
    if s == 0 {
        return param("moment order must be positive");
    }
    let eig = symmetric_eigenvalues(&toeplitz_band(n, tau)?);
    Ok(eig.iter().map(|l| l.powi(s as i32)).sum::<f64>() / n as f64)
}

/// Limit `(1/2π) ∫₀^{2π} cos^s(τλ) dλ` of [`szego_moment`]; independent of τ.
pub fn szego_limit(s: u32) -> f64 {
    if s % 2 == 1 {
        return 0.0;
    }
    // C(s, s/2) / 2^s, accumulated as a product to avoid overflow
    let half = s / 2;
    (1..=half).fold(1.0, |acc, k| acc * (half + k) as f64 / (4.0 * k as f64))
}

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::rmt::SpectralDistribution;

/// Imaginary offset used for Stieltjes inversion in [`lsd_density`].
pub const DENSITY_EPSILON: f64 = 1e-4;

/// Tolerances for the Silverstein fixed-point solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            damping: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return param(format!(
                "solver tolerance must be positive, got {}",
                self.tol
            ));
        }
        if self.max_iter == 0 {
            return param("max_iter must be at least 1");
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return param(format!("damping must lie in (0, 1], got {}", self.damping));
        }
        Ok(())
    }
}

/// Solved Stieltjes transforms at one spectral argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesPoint {
    pub z: Complex64,
    /// Stieltjes transform of the limiting spectral distribution.
    pub m: Complex64,
    /// Companion transform, `m̄ = −(1−c)/z + c·m`.
    pub m_bar: Complex64,
}

/// `z + 1/m̄ − c ∫ t/(1+t m̄) dH(t)`.
pub fn silverstein_residual(
    z: Complex64,
    m_bar: Complex64,
    c: f64,
    h: &SpectralDistribution,
) -> Complex64 {
    let (i1, _) = h.silverstein_terms(m_bar);
    z + 1.0 / m_bar - i1 * c
}

/// `m = (m̄ + (1−c)/z) / c`.
pub fn companion_to_stieltjes(z: Complex64, m_bar: Complex64, c: f64) -> Complex64 {
    (m_bar + (1.0 - c) / z) / c
}

/// `dm̄/dz` at a solved point, from implicit differentiation of the
/// Silverstein equation.
pub fn m_bar_derivative(m_bar: Complex64, c: f64, h: &SpectralDistribution) -> Complex64 {
    let (_, i2) = h.silverstein_terms(m_bar);
    1.0 / (1.0 / (m_bar * m_bar) - i2 * c)
}

/// Solves the Silverstein equation for `m̄` in the upper half plane.
///
/// Damped fixed-point iteration from `m̄ = i`. If that stalls (close to the
/// support with small `Im z`), the solution is continued with Newton steps
/// from a point higher in the half plane down to `z`.
pub fn solve_silverstein(
    z: Complex64,
    c: f64,
    h: &SpectralDistribution,
    cfg: &SolverConfig,
) -> Result<StieltjesPoint> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return param(format!("solver needs Im z > 0, got z = {z}"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return param(format!("ratio c must be positive, got {c}"));
    }
    cfg.validate()?;
    h.validate()?;

    let (m_bar, fp_res) = fixed_point(z, c, h, cfg, Complex64::new(0.0, 1.0));
    let m_bar = if fp_res < cfg.tol {
        m_bar
    } else {
        newton_continuation(z, c, h, cfg)?
    };
    Ok(StieltjesPoint {
        z,
        m: companion_to_stieltjes(z, m_bar, c),
        m_bar,
    })
}

/// [`solve_silverstein`] for any `z` off the real axis, using
/// `m̄(z̄) = conj(m̄(z))` in the lower half plane.
pub fn solve_silverstein_any(
    z: Complex64,
    c: f64,
    h: &SpectralDistribution,
    cfg: &SolverConfig,
) -> Result<StieltjesPoint> {
    if z.im < 0.0 {
        let p = solve_silverstein(z.conj(), c, h, cfg)?;
        Ok(StieltjesPoint {
            z,
            m: p.m.conj(),
            m_bar: p.m_bar.conj(),
        })
    } else {
        solve_silverstein(z, c, h, cfg)
    }
}

fn reflect(m: Complex64) -> Complex64 {
    if m.im <= 0.0 {
        Complex64::new(m.re, m.im.abs().max(f64::MIN_POSITIVE))
    } else {
        m
    }
}

fn fixed_point(
    z: Complex64,
    c: f64,
    h: &SpectralDistribution,
    cfg: &SolverConfig,
    start: Complex64,
) -> (Complex64, f64) {
    let mut m = start;
    let mut res = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let (i1, _) = h.silverstein_terms(m);
        res = (z + 1.0 / m - i1 * c).norm();
        if res < cfg.tol {
            break;
        }
        let next = 1.0 / (-z + i1 * c);
        m = reflect(m * (1.0 - cfg.damping) + next * cfg.damping);
        if !m.is_finite() {
            break;
        }
    }
    (m, res)
}

fn newton(
    z: Complex64,
    c: f64,
    h: &SpectralDistribution,
    cfg: &SolverConfig,
    mut m: Complex64,
    steps: usize,
) -> (Complex64, f64) {
    let mut res = f64::INFINITY;
    for _ in 0..steps {
        let (i1, i2) = h.silverstein_terms(m);
        let r = z + 1.0 / m - i1 * c;
        res = r.norm();
        if res < cfg.tol {
            break;
        }
        let d = -1.0 / (m * m) + i2 * c;
        let mut step = r / d;
        // halve steps that would leave the upper half plane
        let mut next = m - step;
        let mut k = 0;
        while next.im <= 0.0 && k < 60 {
            step *= 0.5;
            next = m - step;
            k += 1;
        }
        m = reflect(next);
        if !m.is_finite() {
            break;
        }
    }
    (m, res)
}

fn newton_continuation(
    z: Complex64,
    c: f64,
    h: &SpectralDistribution,
    cfg: &SolverConfig,
) -> Result<Complex64> {
    let fail = |res: f64| Error::Solver {
        iterations: cfg.max_iter,
        residual: res,
        z: z.to_string(),
    };
    let top = z.im.max(2.0);
    let (mut m, res) = fixed_point(
        Complex64::new(z.re, top),
        c,
        h,
        cfg,
        Complex64::new(0.0, 1.0),
    );
    if res >= cfg.tol {
        return Err(fail(res));
    }
    let mut y = top;
    let mut ratio = 0.5;
    while y > z.im {
        let y_next = (y * ratio).max(z.im);
        let (cand, res) = newton(Complex64::new(z.re, y_next), c, h, cfg, m, 50);
        if res < cfg.tol && cand.im > 0.0 {
            m = cand;
            y = y_next;
            ratio = (ratio * 0.5).max(0.01);
        } else {
            ratio = ratio.sqrt();
            if ratio > 0.999 {
                return Err(fail(res));
            }
        }
    }
    let (m, res) = newton(z, c, h, cfg, m, 50);
    if res < cfg.tol {
        Ok(m)
    } else {
        Err(fail(res))
    }
}

/// Density of the limiting spectral distribution at `x` by Stieltjes
/// inversion, `Im m(x + iε) / π` with `ε = DENSITY_EPSILON`.
pub fn lsd_density(x: f64, c: f64, h: &SpectralDistribution, cfg: &SolverConfig) -> Result<f64> {
    let p = solve_silverstein(Complex64::new(x, DENSITY_EPSILON), c, h, cfg)?;
    Ok(p.m.im / std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn mp_m_bar(z: Complex64, c: f64) -> Complex64 {
        // z m̄² + (z + 1 − c) m̄ + 1 = 0
        let b = z + 1.0 - c;
        let disc = (b * b - 4.0 * z).sqrt();
        let r1 = (-b + disc) / (2.0 * z);
        let r2 = (-b - disc) / (2.0 * z);
        if r1.im > r2.im {
            r1
        } else {
            r2
        }
    }

    fn mp_density(x: f64, c: f64) -> f64 {
        let a = (1.0 - c.sqrt()).powi(2);
        let b = (1.0 + c.sqrt()).powi(2);
        if x <= a || x >= b {
            0.0
        } else {
            ((b - x) * (x - a)).sqrt() / (2.0 * PI * c * x)
        }
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn matches_marchenko_pastur_near_axis() {
        let z = Complex64::new(-1.0, 1e-9);
        let p = solve_silverstein(z, 1.0, &SpectralDistribution::PointMass(1.0), &cfg()).unwrap();
        let want = mp_m_bar(z, 1.0);
        assert!((p.m_bar - want).norm() < 1e-6);
        assert!((p.m - companion_to_stieltjes(z, want, 1.0)).norm() < 1e-6);
    }

    #[test]
    fn residual_and_companion_relation() {
        let hs = [
            SpectralDistribution::PointMass(1.0),
            SpectralDistribution::Discrete(vec![(0.5, 0.5), (1.5, 0.5)]),
            SpectralDistribution::Arcsine,
        ];
        for h in &hs {
            for c in [0.25, 1.0, 2.0] {
                for i in 0..50 {
                    for y in [0.1, 1.0] {
                        let z = Complex64::new(-2.0 + 8.0 * i as f64 / 49.0, y);
                        let p = solve_silverstein(z, c, h, &cfg()).unwrap();
                        assert!(silverstein_residual(z, p.m_bar, c, h).norm() < 1e-10);
                        assert!(p.m_bar.im > 0.0);
                        let back = -(1.0 - c) / z + p.m * c;
                        assert!((back - p.m_bar).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn arcsine_displayed_equation() {
        let c = 0.5;
        let z = Complex64::new(0.0, 2.0);
        let p = solve_silverstein(z, 1.0 / c, &SpectralDistribution::Arcsine, &cfg()).unwrap();
        let m = p.m_bar;
        let rhs = (1.0 / m) * (-1.0 + 1.0 / c - 1.0 / (c * (1.0 - m * m).sqrt()));
        assert!((z - rhs).norm() < 1e-8);
    }

    #[test]
    fn rejects_real_axis() {
        let h = SpectralDistribution::PointMass(1.0);
        assert!(matches!(
            solve_silverstein(Complex64::new(1.0, 0.0), 1.0, &h, &cfg()),
            Err(Error::Parameter(_))
        ));
        assert!(solve_silverstein(Complex64::new(1.0, 1.0), -1.0, &h, &cfg()).is_err());
    }

    #[test]
    fn lower_half_plane_by_conjugation() {
        let h = SpectralDistribution::PointMass(1.0);
        let z = Complex64::new(1.0, -0.5);
        let p = solve_silverstein_any(z, 0.5, &h, &cfg()).unwrap();
        assert!(silverstein_residual(z, p.m_bar, 0.5, &h).norm() < 1e-10);
    }

    #[test]
    fn density_examples() {
        let h = SpectralDistribution::PointMass(1.0);
        assert!(lsd_density(4.5, 1.0, &h, &cfg()).unwrap().abs() < 1e-3);
        let d = lsd_density(1.0, 1.0, &h, &cfg()).unwrap();
        assert!((d - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-3);
        let d = lsd_density(1.0, 0.25, &h, &cfg()).unwrap();
        assert!((d - mp_density(1.0, 0.25)).abs() < 1e-3);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = SpectralDistribution::Discrete(vec![(0.5, 0.5), (1.5, 0.5)]);
        let z = Complex64::new(1.3, 0.7);
        let e = 1e-6;
        let p = solve_silverstein(z, 0.5, &h, &cfg()).unwrap();
        let hi = solve_silverstein(z + e, 0.5, &h, &cfg()).unwrap();
        let lo = solve_silverstein(z - e, 0.5, &h, &cfg()).unwrap();
        let fd = (hi.m_bar - lo.m_bar) / (2.0 * e);
        assert!((m_bar_derivative(p.m_bar, 0.5, &h) - fd).norm() < 1e-5);
    }

    proptest! {
        #[test]
        fn mp_agrees_with_quadratic(x in -2.0f64..6.0, y in 0.05f64..3.0, c in 0.1f64..3.0) {
            let z = Complex64::new(x, y);
            let p = solve_silverstein(z, c, &SpectralDistribution::PointMass(1.0), &cfg()).unwrap();
            prop_assert!((p.m_bar - mp_m_bar(z, c)).norm() < 1e-8);
            prop_assert!(p.m.im > 0.0);
        }
    }
}

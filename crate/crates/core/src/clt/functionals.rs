use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clt::contour::{support_bound, ContourNode, Rectangle};
use crate::clt::Polynomial;
use crate::error::{param, Error, Result};
use crate::rmt::{
    m_bar_derivative, solve_silverstein_any, JointSpectralDistribution, SolverConfig,
    SpectralDistribution,
};

const MEAN_IMAG_TOL: f64 = 1e-8;
const COV_IMAG_TOL: f64 = 1e-6;
const SINGULAR_TOL: f64 = 1e-10;

/// Entry moments of the data: `ν4 = E|x|⁴`, `α_x = |Ex²|²`,
/// `β_x = E|x|⁴ − |Ex²|² − 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentProfile {
    pub nu4: f64,
    pub alpha_x: f64,
    pub beta_x: f64,
}

impl MomentProfile {
    /// Real-valued entries: `α_x = 1`, `β_x = ν4 − 3`.
    pub fn real(nu4: f64) -> Result<Self> {
        Self::new(nu4, 1.0, nu4 - 3.0)
    }

    pub fn gaussian() -> Self {
        Self {
            nu4: 3.0,
            alpha_x: 1.0,
            beta_x: 0.0,
        }
    }

    pub fn new(nu4: f64, alpha_x: f64, beta_x: f64) -> Result<Self> {
        if !(nu4 >= 1.0) {
            return param(format!("nu4 must be at least 1, got {nu4}"));
        }
        if !(0.0..=1.0).contains(&alpha_x) {
            return param(format!("alpha_x must lie in [0, 1], got {alpha_x}"));
        }
        if !(beta_x >= -2.0) {
            return param(format!("beta_x must be at least -2, got {beta_x}"));
        }
        Ok(Self {
            nu4,
            alpha_x,
            beta_x,
        })
    }
}

/// Numerical settings for the contour functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltConfig {
    pub solver: SolverConfig,
    /// Approximate node count per contour.
    pub nodes: usize,
    /// Gauss–Legendre points per panel.
    pub per_panel: usize,
    /// Scale of the outer contour relative to the inner one.
    pub outer_scale: f64,
    /// Evaluate with the ratio `1/c` in place of `c`, as when the statistic
    /// lives on the `n × n` companion matrix.
    pub companion_side: bool,
    /// Explicit inner contour; the default rectangle is used when `None`.
    pub contour: Option<Rectangle>,
}

impl Default for CltConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            nodes: 800,
            per_panel: 16,
            outer_scale: 1.15,
            companion_side: false,
            contour: None,
        }
    }
}

impl CltConfig {
    fn ratio(&self, c: f64) -> Result<f64> {
        if !(c > 0.0) || !c.is_finite() {
            return param(format!("c must be positive, got {c}"));
        }
        Ok(if self.companion_side { 1.0 / c } else { c })
    }

    fn contour_for(&self, c: f64, hs: &[&SpectralDistribution]) -> Result<Rectangle> {
        let mut rect: Option<Rectangle> = None;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for h in hs {
            let (l, u) = support_bound(c, h);
            lo = lo.min(l);
            hi = hi.max(u);
            let r = Rectangle::enclosing(c, h);
            rect = Some(rect.map_or(r, |acc| acc.union(&r)));
        }
        let rect = self.contour.or(rect).expect("at least one population law");
        rect.check_encloses(lo, hi)?;
        Ok(rect)
    }
}

struct Solved {
    node: ContourNode,
    m: Complex64,
    m_bar: Complex64,
    dm_bar: Complex64,
}

fn solve_nodes(
    nodes: &[ContourNode],
    c: f64,
    h: &SpectralDistribution,
    cfg: &SolverConfig,
) -> Result<Vec<Solved>> {
    nodes
        .par_iter()
        .map(|&node| {
            let p = solve_silverstein_any(node.z, c, h, cfg)?;
            let dm_bar = m_bar_derivative(p.m_bar, c, h);
            Ok(Solved {
                node,
                m: p.m,
                m_bar: p.m_bar,
                dm_bar,
            })
        })
        .collect()
}

/// `(g1, g2)` at a solved `m̄`:
/// `g1 = c∫ m̄³t²/(1+tm̄)³ dH`, `g2 = c∫ m̄²t²/(1+tm̄)² dH`.
pub fn g_terms(m_bar: Complex64, c: f64, h: &SpectralDistribution) -> (Complex64, Complex64) {
    let mut g1 = Complex64::new(0.0, 0.0);
    let mut g2 = Complex64::new(0.0, 0.0);
    for (t, w) in h.atoms() {
        let u = m_bar * t / (1.0 + m_bar * t);
        let u2 = u * u;
        g1 += u2 * u * w;
        g2 += u2 * w;
    }
    (g1 * c, g2 * c)
}

/// `a(z1, z2) = c ∬ t1 t2 m̄_r(z1) m̄_s(z2) / ((1+t1 m̄_r(z1))(1+t2 m̄_s(z2))) dH_rs`.
pub fn eval_a(
    z1: Complex64,
    z2: Complex64,
    c: f64,
    hrs: &JointSpectralDistribution,
    cfg: &SolverConfig,
) -> Result<Complex64> {
    let (h1, h2) = hrs.marginals();
    let m1 = solve_silverstein_any(z1, c, h1, cfg)?.m_bar;
    let m2 = solve_silverstein_any(z2, c, h2, cfg)?.m_bar;
    Ok(hrs
        .atoms()
        .iter()
        .map(|&(t1, t2, w)| m1 * t1 / (1.0 + m1 * t1) * (m2 * t2 / (1.0 + m2 * t2)) * w)
        .sum::<Complex64>()
        * c)
}

fn check_imag(value: Complex64, tol: f64, what: &str) -> Result<f64> {
    if value.im.abs() > tol * value.re.abs().max(1.0) {
        return Err(Error::Singularity(format!(
            "{what} has imaginary residue {:.3e}; refine the contour",
            value.im
        )));
    }
    Ok(value.re)
}

/// Limiting mean of `p(∫f dF_n − ∫f dF^{c,H})`:
/// `−(1/2πi)∮ f g1 [α/((1−g2)(1−αg2)) + β/(1−g2)] dz`.
pub fn clt_mean(
    f: &Polynomial,
    c: f64,
    h: &SpectralDistribution,
    mp: &MomentProfile,
    cfg: &CltConfig,
) -> Result<f64> {
    let c = cfg.ratio(c)?;
    h.validate()?;
    if mp.alpha_x == 0.0 && mp.beta_x == 0.0 {
        return Ok(0.0);
    }
    let rect = cfg.contour_for(c, &[h])?;
    let solved = solve_nodes(&rect.nodes(cfg.nodes, cfg.per_panel), c, h, &cfg.solver)?;
    let (alpha, beta) = (mp.alpha_x, mp.beta_x);
    let mut total = Complex64::new(0.0, 0.0);
    for s in &solved {
        let (g1, g2) = g_terms(s.m_bar, c, h);
        let one_g2 = 1.0 - g2;
        let kernel = g1 * (alpha / (one_g2 * (1.0 - g2 * alpha)) + beta / one_g2);
        total += f.eval_c(s.node.z) * kernel * s.node.dz;
    }
    let value = -total / Complex64::new(0.0, 2.0 * PI);
    check_imag(value, MEAN_IMAG_TOL, "mean integral")
}

/// Limiting covariance `Cov(X_{f1}, X_{f2})` for the pair of populations
/// described by `hrs`:
/// `(1/4π²)∮∮ f1(z1) f2(z2) ∂²g/∂z1∂z2 dz1 dz2` with
/// `g = log(1−a) + log(1−αa) − βa`.
///
/// The mixed derivative is taken analytically through `dm̄/dz`, so the
/// quadrature never differences the solver output.
pub fn clt_cov(
    f1: &Polynomial,
    f2: &Polynomial,
    c: f64,
    hrs: &JointSpectralDistribution,
    mp: &MomentProfile,
    cfg: &CltConfig,
) -> Result<f64> {
    let c = cfg.ratio(c)?;
    if !(cfg.outer_scale > 1.0) {
        return param("outer contour scale must exceed 1");
    }
    let (h1, h2) = hrs.marginals();
    let inner = cfg.contour_for(c, &[h1, h2])?;
    let outer = inner.scaled(cfg.outer_scale);
    let s1 = solve_nodes(&inner.nodes(cfg.nodes, cfg.per_panel), c, h1, &cfg.solver)?;
    let s2 = solve_nodes(&outer.nodes(cfg.nodes, cfg.per_panel), c, h2, &cfg.solver)?;

    let atoms = hrs.atoms();
    // per-node factors t m̄/(1+t m̄) and t m̄'/(1+t m̄)²; weights folded into the outer side
    let factors = |s: &Solved, t: f64| {
        let d = 1.0 / (1.0 + s.m_bar * t);
        (s.m_bar * t * d, s.dm_bar * t * d * d)
    };
    let outer_rows: Vec<Vec<(Complex64, Complex64)>> = s2
        .iter()
        .map(|s| {
            atoms
                .iter()
                .map(|&(_, t2, w)| {
                    let (u, du) = factors(s, t2);
                    (u * w, du * w)
                })
                .collect()
        })
        .collect();
    let outer_f: Vec<Complex64> = s2.iter().map(|s| f2.eval_c(s.node.z) * s.node.dz).collect();
    let (alpha, beta) = (mp.alpha_x, mp.beta_x);

    let rows: Vec<Result<Complex64>> = s1
        .par_iter()
        .map(|s| {
            let inner_row: Vec<(Complex64, Complex64)> =
                atoms.iter().map(|&(t1, _, _)| factors(s, t1)).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (row, f2dz) in outer_rows.iter().zip(&outer_f) {
                let mut a = Complex64::new(0.0, 0.0);
                let mut a1 = Complex64::new(0.0, 0.0);
                let mut a2 = Complex64::new(0.0, 0.0);
                let mut a12 = Complex64::new(0.0, 0.0);
                for (&(u1, du1), &(u2, du2)) in inner_row.iter().zip(row) {
                    a += u1 * u2;
                    a1 += du1 * u2;
                    a2 += u1 * du2;
                    a12 += du1 * du2;
                }
                let (a, a1, a2, a12) = (a * c, a1 * c, a2 * c, a12 * c);
                let one_a = 1.0 - a;
                let one_aa = 1.0 - a * alpha;
                if one_a.norm() < SINGULAR_TOL || (alpha != 0.0 && one_aa.norm() < SINGULAR_TOL) {
                    return Err(Error::Singularity(
                        "a(z1, z2) reaches 1 on the contour grid; increase the contour separation"
                            .into(),
                    ));
                }
                let prod = a1 * a2;
                let d2g = -(a12 / one_a + prod / (one_a * one_a))
                    - (a12 / one_aa + prod * alpha / (one_aa * one_aa)) * alpha
                    - a12 * beta;
                acc += d2g * f2dz;
            }
            Ok(acc * f1.eval_c(s.node.z) * s.node.dz)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for r in rows {
        total += r?;
    }
    let value = total / (4.0 * PI * PI);
    check_imag(value, COV_IMAG_TOL, "covariance integral")
}

/// `∫ f dF^{c,H}` for the limiting spectral distribution, via
/// `−(1/2πi)∮ f(z) m(z) dz`. The constant term is added exactly.
pub fn lsd_moment(
    f: &Polynomial,
    c: f64,
    h: &SpectralDistribution,
    cfg: &CltConfig,
) -> Result<f64> {
    let c = cfg.ratio(c)?;
    h.validate()?;
    let constant = f.coeffs()[0];
    let g = f.without_constant();
    if g.degree() == 0 {
        return Ok(constant);
    }
    let rect = cfg.contour_for(c, &[h])?;
    let solved = solve_nodes(&rect.nodes(cfg.nodes, cfg.per_panel), c, h, &cfg.solver)?;
    let total: Complex64 = solved
        .iter()
        .map(|s| g.eval_c(s.node.z) * s.m * s.node.dz)
        .sum();
    let value = -total / Complex64::new(0.0, 2.0 * PI);
    Ok(constant + check_imag(value, MEAN_IMAG_TOL, "moment integral")?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(k: usize) -> Polynomial {
        Polynomial::monomial(k).unwrap()
    }

    #[test]
    fn moment_profile_rules() {
        let m = MomentProfile::real(4.5).unwrap();
        assert_eq!((m.alpha_x, m.beta_x), (1.0, 1.5));
        assert!(MomentProfile::real(0.5).is_err());
        assert!(MomentProfile::new(3.0, 1.5, 0.0).is_err());
        assert!(MomentProfile::new(3.0, 1.0, -2.5).is_err());
    }

    #[test]
    fn lsd_moments_match_known_values() {
        let cfg = CltConfig::default();
        let h = SpectralDistribution::Discrete(vec![(0.5, 0.5), (1.5, 0.5)]);
        for c in [0.3, 1.0, 2.5] {
            let m1 = lsd_moment(&mono(1), c, &h, &cfg).unwrap();
            let m2 = lsd_moment(&mono(2), c, &h, &cfg).unwrap();
            assert!((m1 - 1.0).abs() < 1e-9, "c={c}: {m1}");
            // ∫t² dH + c(∫t dH)²
            assert!((m2 - (1.25 + c)).abs() < 1e-9, "c={c}: {m2}");
        }
        assert_eq!(lsd_moment(&mono(0), 0.5, &h, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn mean_of_square_for_identity() {
        let cfg = CltConfig::default();
        let h = SpectralDistribution::PointMass(1.0);
        for c in [0.5, 1.0] {
            for beta in [0.0, 1.5] {
                let mp = MomentProfile::new(3.0 + beta, 1.0, beta).unwrap();
                let m = clt_mean(&mono(2), c, &h, &mp, &cfg).unwrap();
                assert!(
                    (m - c * (1.0 + beta)).abs() < 1e-8,
                    "c={c} beta={beta}: {m}"
                );
                let m = clt_mean(&mono(1), c, &h, &mp, &cfg).unwrap();
                assert!(m.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn mean_vanishes_for_circular_entries() {
        let mp = MomentProfile::new(2.0, 0.0, 0.0).unwrap();
        let cfg = CltConfig::default();
        for k in 0..=8 {
            assert_eq!(
                clt_mean(&mono(k), 0.5, &SpectralDistribution::Arcsine, &mp, &cfg).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn variance_of_trace() {
        // Var(tr S) for identity population is c(β + 2)
        let cfg = CltConfig::default();
        let hrs =
            JointSpectralDistribution::diagonal(&SpectralDistribution::PointMass(1.0)).unwrap();
        for c in [0.5, 1.0] {
            for beta in [0.0, 1.5] {
                let mp = MomentProfile::new(3.0 + beta, 1.0, beta).unwrap();
                let v = clt_cov(&mono(1), &mono(1), c, &hrs, &mp, &cfg).unwrap();
                assert!(
                    (v - c * (beta + 2.0)).abs() < 1e-8,
                    "c={c} beta={beta}: {v}"
                );
            }
        }
    }

    #[test]
    fn cross_covariance_with_identity() {
        let cfg = CltConfig::default();
        let mp = MomentProfile::gaussian();
        for h in [
            SpectralDistribution::PointMass(1.0),
            SpectralDistribution::Discrete(vec![(0.5, 0.5), (1.5, 0.5)]),
        ] {
            let hrs = JointSpectralDistribution::with_identity(&h).unwrap();
            let v = clt_cov(&mono(1), &mono(1), 0.5, &hrs, &mp, &cfg).unwrap();
            assert!((v - 2.0 * 0.5 * h.mean()).abs() < 1e-6, "{h}: {v}");
        }
    }

    #[test]
    fn chebyshev_pairs_match_closed_form() {
        let cfg = CltConfig {
            companion_side: true,
            ..CltConfig::default()
        };
        for (r, s, c, beta) in [(1, 3, 0.5, 0.0), (3, 3, 1.0, 1.5)] {
            let hrs = JointSpectralDistribution::chebyshev_pair(r, s, 256).unwrap();
            let mp = MomentProfile::real(3.0 + beta).unwrap();
            let v = clt_cov(&mono(2), &mono(2), c, &hrs, &mp, &cfg).unwrap();
            let want = crate::clt::lag_cov_closed_form(r, s, c, beta).unwrap();
            assert!(
                (v - want).abs() < 1e-5,
                "r={r} s={s} c={c} beta={beta}: {v} vs {want}"
            );
        }
    }

    #[test]
    fn a_kernel_examples() {
        let cfg = SolverConfig::default();
        let z1 = Complex64::new(1.0, 1.5);
        let z2 = Complex64::new(-0.3, -1.2);
        let zero = JointSpectralDistribution::from_atoms(vec![(0.0, 0.0, 1.0)]).unwrap();
        assert_eq!(
            eval_a(z1, z2, 0.7, &zero, &cfg).unwrap(),
            Complex64::new(0.0, 0.0)
        );

        let one = JointSpectralDistribution::from_atoms(vec![(1.0, 1.0, 1.0)]).unwrap();
        let a = eval_a(z1, z2, 1.0, &one, &cfg).unwrap();
        let mp_upper = |z: Complex64| {
            let disc = (z * z - 4.0 * z).sqrt();
            let r1 = (-z + disc) / (2.0 * z);
            let r2 = (-z - disc) / (2.0 * z);
            if r1.im > r2.im {
                r1
            } else {
                r2
            }
        };
        let (m1, m2) = (mp_upper(z1), mp_upper(z2.conj()).conj());
        let want = m1 * m2 / ((1.0 + m1) * (1.0 + m2));
        assert!((a - want).norm() < 1e-9);

        let j =
            JointSpectralDistribution::from_atoms(vec![(0.5, 1.0, 0.3), (2.0, 1.5, 0.7)]).unwrap();
        let ab = eval_a(z1, z2, 0.4, &j, &cfg).unwrap();
        let ba = eval_a(z2, z1, 0.4, &j.swapped(), &cfg).unwrap();
        assert!((ab - ba).norm() < 1e-10);
    }

    #[test]
    fn contour_must_enclose_support() {
        let cfg = CltConfig {
            contour: Some(Rectangle {
                x_l: 0.5,
                x_r: 2.0,
                v0: 1.0,
            }),
            ..CltConfig::default()
        };
        let h = SpectralDistribution::PointMass(1.0);
        let err = clt_mean(&mono(2), 0.5, &h, &MomentProfile::gaussian(), &cfg).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
    }
}

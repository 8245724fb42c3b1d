use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{param, Error, Result};
use crate::rmt::{chebyshev_eval, gauss_chebyshev_nodes, ARCSINE_NODES};

const WEIGHT_TOL: f64 = 1e-12;

/// Population spectral law `H`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDistribution {
    /// Dirac mass at a finite value.
    PointMass(f64),
    /// Finitely many `(value, weight)` atoms with weights summing to one.
    Discrete(Vec<(f64, f64)>),
    /// Arcsine law on (−1, 1) with density `1/(π√(1−t²))`.
    Arcsine,
}

impl SpectralDistribution {
    pub fn point_mass(value: f64) -> Result<Self> {
        let h = SpectralDistribution::PointMass(value);
        h.validate()?;
        Ok(h)
    }

    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let h = SpectralDistribution::Discrete(atoms);
        h.validate()?;
        Ok(h)
    }

    pub fn arcsine() -> Self {
        SpectralDistribution::Arcsine
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpectralDistribution::PointMass(v) if !v.is_finite() => {
                param(format!("point mass at non-finite value {v}"))
            }
            SpectralDistribution::Discrete(atoms) => {
                check_atoms(atoms.iter().map(|&(v, w)| (v, w)))
            }
            _ => Ok(()),
        }
    }

    /// Smallest closed interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            SpectralDistribution::PointMass(v) => (*v, *v),
            SpectralDistribution::Discrete(atoms) => atoms
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(v, _)| {
                    (lo.min(v), hi.max(v))
                }),
            SpectralDistribution::Arcsine => (-1.0, 1.0),
        }
    }

    /// Atoms of the law, with the arcsine law replaced by its
    /// `ARCSINE_NODES`-point Gauss–Chebyshev rule.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match self {
            SpectralDistribution::PointMass(v) => vec![(*v, 1.0)],
            SpectralDistribution::Discrete(atoms) => atoms.clone(),
            SpectralDistribution::Arcsine => {
                let w = 1.0 / ARCSINE_NODES as f64;
                gauss_chebyshev_nodes(ARCSINE_NODES)
                    .into_iter()
                    .map(|t| (t, w))
                    .collect()
            }
        }
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms().iter().map(|&(t, w)| w * f(t)).sum()
    }

    pub fn expect_c(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.atoms().iter().map(|&(t, w)| f(t) * w).sum()
    }

    pub fn mean(&self) -> f64 {
        match self {
            SpectralDistribution::PointMass(v) => *v,
            SpectralDistribution::Arcsine => 0.0,
            d => d.expect(|t| t),
        }
    }

    /// `(∫ t/(1+tm) dH, ∫ t²/(1+tm)² dH)`, the two integrals appearing in the
    /// Silverstein equation and in its derivative.
    pub fn silverstein_terms(&self, m: Complex64) -> (Complex64, Complex64) {
        match self {
            SpectralDistribution::PointMass(v) => {
                let d = 1.0 / (1.0 + m * *v);
                (d * *v, d * d * (*v * *v))
            }
            SpectralDistribution::Discrete(atoms) => {
                let mut i1 = Complex64::new(0.0, 0.0);
                let mut i2 = Complex64::new(0.0, 0.0);
                for &(t, w) in atoms {
                    let d = 1.0 / (1.0 + m * t);
                    i1 += d * (w * t);
                    i2 += d * d * (w * t * t);
                }
                (i1, i2)
            }
            SpectralDistribution::Arcsine => arcsine_terms(m),
        }
    }
}

// Taylor coefficients C(2k,k)/4^k, k = 1..
const ARCSINE_SERIES: [f64; 8] = [
    0.5,
    0.375,
    0.3125,
    0.2734375,
    0.24609375,
    0.2255859375,
    0.20947265625,
    0.196380615234375,
];

/// Closed forms on the principal branch of `R = (1−m²)^{−1/2}`:
/// `∫ t/(1+tm) dH = (1−R)/m` and `∫ t²/(1+tm)² dH = (1 − R + m²R³)/m²`.
fn arcsine_terms(m: Complex64) -> (Complex64, Complex64) {
    if m.norm() < 0.05 {
        arcsine_series(m)
    } else {
        arcsine_closed(m)
    }
}

fn arcsine_series(m: Complex64) -> (Complex64, Complex64) {
    let m2 = m * m;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut i1 = Complex64::new(0.0, 0.0);
    let mut i2 = Complex64::new(0.0, 0.0);
    for (k, c) in ARCSINE_SERIES.iter().enumerate() {
        i2 += pow * (c * (2 * k + 1) as f64);
        i1 -= pow * m * *c;
        pow *= m2;
    }
    (i1, i2)
}

fn arcsine_closed(m: Complex64) -> (Complex64, Complex64) {
    let r = 1.0 / (1.0 - m * m).sqrt();
    ((1.0 - r) / m, (1.0 - r + m * m * r * r * r) / (m * m))
}

fn check_atoms(atoms: impl Iterator<Item = (f64, f64)>) -> Result<()> {
    let mut total = 0.0;
    let mut count = 0;
    for (v, w) in atoms {
        if !v.is_finite() || !w.is_finite() {
            return param(format!("non-finite atom ({v}, {w})"));
        }
        if w < 0.0 {
            return param(format!("negative weight {w}"));
        }
        total += w;
        count += 1;
    }
    if count == 0 {
        return param("distribution has no atoms");
    }
    if (total - 1.0).abs() > WEIGHT_TOL {
        return param(format!("weights sum to {total}, not 1"));
    }
    Ok(())
}

impl fmt::Display for SpectralDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralDistribution::PointMass(v) => write!(f, "point {v:?}"),
            SpectralDistribution::Discrete(atoms) => {
                write!(f, "discrete")?;
                for (v, w) in atoms {
                    write!(f, " {v:?} {w:?}")?;
                }
                Ok(())
            }
            SpectralDistribution::Arcsine => write!(f, "arcsine"),
        }
    }
}

impl FromStr for SpectralDistribution {
    type Err = Error;

    /// Parses `point 1.0`, `discrete v1 w1 v2 w2 …` or `arcsine`.
    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let kind = words
            .next()
            .ok_or_else(|| Error::Parse("empty distribution".into()))?;
        let nums = words
            .map(|w| {
                w.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{w:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let h = match kind.to_ascii_lowercase().as_str() {
            "point" => match nums.as_slice() {
                [v] => SpectralDistribution::PointMass(*v),
                _ => return Err(Error::Parse("`point` takes exactly one value".into())),
            },
            "discrete" => {
                if nums.is_empty() || nums.len() % 2 != 0 {
                    return Err(Error::Parse("`discrete` takes value/weight pairs".into()));
                }
                SpectralDistribution::Discrete(nums.chunks(2).map(|p| (p[0], p[1])).collect())
            }
            "arcsine" if nums.is_empty() => SpectralDistribution::Arcsine,
            "arcsine" => return Err(Error::Parse("`arcsine` takes no values".into())),
            other => return Err(Error::Parse(format!("unknown distribution kind {other:?}"))),
        };
        h.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(h)
    }
}

/// Joint law `H_rs` of paired population eigenvalues `(t1, t2)`.
///
/// Stored as weighted atoms together with the two marginal laws used by the
/// Stieltjes solvers. When a marginal is the arcsine law the atoms are the
/// Gauss–Chebyshev discretisation of it.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralDistribution {
    atoms: Vec<(f64, f64, f64)>,
    first: SpectralDistribution,
    second: SpectralDistribution,
}

impl JointSpectralDistribution {
    /// Joint law from explicit atoms; marginals are the discrete laws obtained
    /// by merging equal coordinates.
    pub fn from_atoms(atoms: Vec<(f64, f64, f64)>) -> Result<Self> {
        check_atoms(atoms.iter().map(|&(a, _, w)| (a, w)))?;
        if let Some(&(_, b, _)) = atoms.iter().find(|a| !a.1.is_finite()) {
            return param(format!("non-finite second coordinate {b}"));
        }
        let first = SpectralDistribution::Discrete(merge(atoms.iter().map(|&(a, _, w)| (a, w))));
        let second = SpectralDistribution::Discrete(merge(atoms.iter().map(|&(_, b, w)| (b, w))));
        Ok(Self {
            atoms,
            first,
            second,
        })
    }

    /// Both coordinates equal: the law of `(t, t)` for `t ~ H`.
    pub fn diagonal(h: &SpectralDistribution) -> Result<Self> {
        h.validate()?;
        let atoms = h.atoms().into_iter().map(|(t, w)| (t, t, w)).collect();
        Ok(Self {
            atoms,
            first: h.clone(),
            second: h.clone(),
        })
    }

    /// Law of `(1, t)` for `t ~ H`: an identity population paired with `H`.
    pub fn with_identity(h: &SpectralDistribution) -> Result<Self> {
        h.validate()?;
        let atoms = h.atoms().into_iter().map(|(t, w)| (1.0, t, w)).collect();
        Ok(Self {
            atoms,
            first: SpectralDistribution::PointMass(1.0),
            second: h.clone(),
        })
    }

    /// Law of `(T_r(t), T_s(t))` for arcsine `t`, discretised on `k`
    /// Gauss–Chebyshev nodes. Both marginals are again arcsine.
    pub fn chebyshev_pair(r: usize, s: usize, k: usize) -> Result<Self> {
        if r == 0 || s == 0 || k == 0 {
            return param("Chebyshev orders and node count must be positive");
        }
        let w = 1.0 / k as f64;
        let atoms = gauss_chebyshev_nodes(k)
            .into_iter()
            .map(|t| (chebyshev_eval(r, t), chebyshev_eval(s, t), w))
            .collect();
        Ok(Self {
            atoms,
            first: SpectralDistribution::Arcsine,
            second: SpectralDistribution::Arcsine,
        })
    }

    pub fn atoms(&self) -> &[(f64, f64, f64)] {
        &self.atoms
    }

    pub fn marginals(&self) -> (&SpectralDistribution, &SpectralDistribution) {
        (&self.first, &self.second)
    }

    /// The same law with coordinates exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            atoms: self.atoms.iter().map(|&(a, b, w)| (b, a, w)).collect(),
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    pub fn expect(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(a, b, w)| w * f(a, b)).sum()
    }
}

fn merge(items: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = items.collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (t, w) in v {
        match out.last_mut() {
            Some(last) if last.0 == t => last.1 += w,
            _ => out.push((t, w)),
        }
    }
    out
}

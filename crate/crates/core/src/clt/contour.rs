use num_complex::Complex64;

use crate::error::{param, Result};
use crate::rmt::{gauss_legendre, SpectralDistribution};

/// One quadrature node on a closed contour: the point and its weighted
/// tangent, so that `∮ f dz ≈ Σ f(z_k) dz_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode {
    pub z: Complex64,
    pub dz: Complex64,
}

/// Axis-aligned rectangle `[x_l, x_r] × [−v0, v0]`, positively oriented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x_l: f64,
    pub x_r: f64,
    pub v0: f64,
}

/// Interval known to contain the support of the limiting spectral
/// distribution for ratio `c` and population law `h`.
pub fn support_bound(c: f64, h: &SpectralDistribution) -> (f64, f64) {
    let (lo, hi) = h.support();
    let up = (1.0 + c.sqrt()).powi(2);
    let left = if lo >= 0.0 {
        if c < 1.0 {
            (1.0 - c.sqrt()).powi(2) * lo
        } else {
            0.0
        }
    } else {
        up * lo
    };
    let right = if hi > 0.0 { up * hi } else { 0.0 };
    (left, right)
}

impl Rectangle {
    /// Default contour for `(c, h)`: `x_l = −0.5` when the population is
    /// nonnegative, else 1.2 times the lower bound; `x_r` is 1.2 times the
    /// upper bound; half-height 1.
    pub fn enclosing(c: f64, h: &SpectralDistribution) -> Self {
        let (lo, _) = h.support();
        let (left, right) = support_bound(c, h);
        let x_l = if lo >= 0.0 { -0.5 } else { 1.2 * left };
        let x_r = if right > 0.0 { 1.2 * right } else { 0.5 };
        Self { x_l, x_r, v0: 1.0 }
    }

    /// Smallest rectangle containing both.
    pub fn union(&self, other: &Self) -> Self {
        Self {
            x_l: self.x_l.min(other.x_l),
            x_r: self.x_r.max(other.x_r),
            v0: self.v0.max(other.v0),
        }
    }

    /// The rectangle scaled by `s` about its centre.
    pub fn scaled(&self, s: f64) -> Self {
        let mid = 0.5 * (self.x_l + self.x_r);
        let half = 0.5 * (self.x_r - self.x_l) * s;
        Self {
            x_l: mid - half,
            x_r: mid + half,
            v0: self.v0 * s,
        }
    }

    /// Parameter error unless the interval `[lo, hi]` lies strictly inside.
    pub fn check_encloses(&self, lo: f64, hi: f64) -> Result<()> {
        if !(self.x_l < lo && hi < self.x_r && self.v0 > 0.0) {
            return param(format!(
                "contour [{}, {}] x [-{}, {}] does not enclose the support estimate [{lo}, {hi}]",
                self.x_l, self.x_r, self.v0, self.v0
            ));
        }
        Ok(())
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.x_r - self.x_l) + 4.0 * self.v0
    }

    /// Composite Gauss–Legendre discretisation with about `total` nodes in
    /// panels of `per_panel`, panels spread evenly by arc length.
    pub fn nodes(&self, total: usize, per_panel: usize) -> Vec<ContourNode> {
        let per_panel = per_panel.max(1);
        let panels = (total / per_panel).max(4);
        let (gx, gw) = gauss_legendre(per_panel);
        let (xl, xr, v) = (self.x_l, self.x_r, self.v0);
        let corners = [
            Complex64::new(xl, -v),
            Complex64::new(xr, -v),
            Complex64::new(xr, v),
            Complex64::new(xl, v),
        ];
        let perim = self.perimeter();
        let mut lengths = [xr - xl, 2.0 * v, xr - xl, 2.0 * v];
        let mut counts = lengths.map(|l| ((l / perim * panels as f64).round() as usize).max(1));
        // an even panel count on vertical edges keeps nodes off the real axis
        for k in [1, 3] {
            if counts[k] % 2 == 1 {
                counts[k] += 1;
            }
        }
        let mut out = Vec::with_capacity(counts.iter().sum::<usize>() * per_panel);
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let np = counts[e];
            let step = (b - a) / np as f64;
            lengths[e] = step.norm();
            for p in 0..np {
                let start = a + step * p as f64;
                for (x, w) in gx.iter().zip(&gw) {
                    out.push(ContourNode {
                        z: start + step * (0.5 * (x + 1.0)),
                        dz: step * (0.5 * w),
                    });
                }
            }
        }
        out
    }
}

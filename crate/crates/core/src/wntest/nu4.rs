use std::fmt;
use std::str::FromStr;

use crate::autocov::TimeSeriesSample;
use crate::error::{Error, Result};

/// Fourth moment used to standardise the statistics: a known value or the
/// pooled estimate from the data.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Nu4 {
    Known(f64),
    #[default]
    Auto,
}

impl Nu4 {
    pub fn resolve(self, x: &TimeSeriesSample) -> Result<f64> {
        match self {
            Nu4::Known(v) if v >= 1.0 && v.is_finite() => Ok(v),
            Nu4::Known(v) => Err(Error::Parameter(format!(
                "nu4 must be a finite value >= 1, got {v}"
            ))),
            Nu4::Auto => estimate_nu4(x),
        }
    }
}

impl fmt::Display for Nu4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu4::Known(v) => write!(f, "{v}"),
            Nu4::Auto => f.write_str("auto"),
        }
    }
}

impl FromStr for Nu4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Nu4::Auto);
        }
        s.parse::<f64>()
            .map(Nu4::Known)
            .map_err(|e| Error::Parse(format!("nu4 {s:?}: {e}")))
    }
}

/// Pooled fourth-moment estimate: standardise each coordinate by its sample
/// mean and standard deviation, then average the fourth powers.
pub fn estimate_nu4(x: &TimeSeriesSample) -> Result<f64> {
    let n = x.n() as f64;
    let mut total = 0.0;
    for (i, row) in x.data().row_iter().enumerate() {
        let mean = row.mean();
        let var = row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        if !(var > 0.0) {
            return Err(Error::Estimation(format!(
                "coordinate {i} has zero sample variance"
            )));
        }
        total += row.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / (n * var * var);
    }
    Ok(total / x.p() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn rademacher_pattern_gives_one() {
        let x = TimeSeriesSample::new(DMatrix::from_fn(3, 8, |i, t| {
            if (i + t) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }))
        .unwrap();
        assert!((estimate_nu4(&x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_coordinate_is_an_error() {
        let x = TimeSeriesSample::new(DMatrix::from_fn(
            2,
            5,
            |i, t| if i == 0 { t as f64 } else { 2.0 },
        ))
        .unwrap();
        assert!(matches!(estimate_nu4(&x), Err(Error::Estimation(_))));
        assert!(matches!(Nu4::Auto.resolve(&x), Err(Error::Estimation(_))));
    }

    #[test]
    fn parse_and_resolve() {
        assert_eq!("auto".parse::<Nu4>().unwrap(), Nu4::Auto);
        assert_eq!("4.5".parse::<Nu4>().unwrap(), Nu4::Known(4.5));
        assert!("x".parse::<Nu4>().is_err());
        let x = TimeSeriesSample::new(DMatrix::zeros(2, 4)).unwrap();
        assert_eq!(Nu4::Known(3.0).resolve(&x).unwrap(), 3.0);
        assert!(Nu4::Known(0.5).resolve(&x).is_err());
    }
}

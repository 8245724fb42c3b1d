use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Test procedure tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Phi,
    JohnSimes,
    Permutation,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Phi, Method::JohnSimes, Method::Permutation];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Phi => "phi",
            Method::JohnSimes => "john_simes",
            Method::Permutation => "permutation",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi" => Ok(Method::Phi),
            "john" | "john_simes" => Ok(Method::JohnSimes),
            "perm" | "permutation" => Ok(Method::Permutation),
            other => Err(Error::Parse(format!(
                "unknown method {other:?} (expected phi, john or perm)"
            ))),
        }
    }
}

/// Parameters a test was run with.
#[derive(Debug, Clone, PartialEq)]
pub struct TestParams {
    pub p: usize,
    pub n: usize,
    pub q: usize,
    pub c_n: f64,
    /// Fourth moment used for standardisation; `None` for the permutation test.
    pub nu4: Option<f64>,
    pub alpha: f64,
    pub method: Method,
}

impl TestParams {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("method", self.method.to_string()),
            ("p", self.p.to_string()),
            ("n", self.n.to_string()),
            ("q", self.q.to_string()),
            ("c_n", format!("{:?}", self.c_n)),
            (
                "nu4",
                self.nu4.map_or_else(String::new, |v| format!("{v:?}")),
            ),
            ("alpha", format!("{:?}", self.alpha)),
        ]
    }
}

/// Outcome of a one-sided (upper tail) test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub statistic: f64,
    pub z_score: f64,
    pub p_value: f64,
    pub reject: bool,
    pub params: TestParams,
}

impl TestReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut f = self.params.fields();
        f.extend([
            ("statistic", format!("{:?}", self.statistic)),
            ("z_score", format!("{:?}", self.z_score)),
            ("p_value", format!("{:?}", self.p_value)),
            ("reject", self.reject.to_string()),
        ]);
        f
    }

    /// Flat `key=value` lines.
    pub fn to_kv(&self) -> String {
        kv(&self.fields())
    }

    pub fn csv_header(&self) -> String {
        header(&self.fields())
    }

    pub fn csv_row(&self) -> String {
        row(&self.fields())
    }
}

/// Outcome of the Simes combination of the rotated John tests.
#[derive(Debug, Clone, PartialEq)]
pub struct SimesReport {
    /// John statistics `U^{(k)}`, `k = 0..=q`.
    pub statistics: Vec<f64>,
    /// `P_0, …, P_q` in rotation order.
    pub p_values: Vec<f64>,
    /// Ascending copy of `p_values`.
    pub sorted: Vec<f64>,
    pub reject: bool,
    pub alpha: f64,
    /// Number of stacked blocks `N = ⌊n/(q+1)⌋`.
    pub blocks: usize,
    pub params: TestParams,
}

impl SimesReport {
    /// Smallest Simes-adjusted p-value `min_k (q+1) P_(k) / k`, capped at 1.
    pub fn adjusted_p_value(&self) -> f64 {
        let m = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(k, p)| m * p / (k + 1) as f64)
            .fold(1.0, f64::min)
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(";")
        };
        let mut f = self.params.fields();
        f.extend([
            ("blocks", self.blocks.to_string()),
            ("statistics", join(&self.statistics)),
            ("p_values", join(&self.p_values)),
            ("simes_p_value", format!("{:?}", self.adjusted_p_value())),
            ("reject", self.reject.to_string()),
        ]);
        f
    }

    pub fn to_kv(&self) -> String {
        kv(&self.fields())
    }

    pub fn csv_header(&self) -> String {
        header(&self.fields())
    }

    pub fn csv_row(&self) -> String {
        row(&self.fields())
    }
}

fn kv(fields: &[(&str, String)]) -> String {
    fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

fn header(fields: &[(&str, String)]) -> String {
    fields.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(",")
}

fn row(fields: &[(&str, String)]) -> String {
    fields
        .iter()
        .map(|(_, v)| v.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

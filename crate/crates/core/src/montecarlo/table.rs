use crate::error::{param, Error, Result};
use crate::wntest::Method;

/// Column names of the CSV form of [`ResultTable`].
pub const CSV_HEADER: [&str; 10] = [
    "p",
    "n",
    "c_n",
    "a",
    "method",
    "q",
    "rejection_rate",
    "se",
    "reps",
    "seconds",
];

/// One empirical rejection rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub p: usize,
    pub n: usize,
    pub c_n: f64,
    pub a: f64,
    pub method: Method,
    pub q: usize,
    pub rejection_rate: f64,
    /// Monte Carlo standard error `√(r(1−r)/reps)`.
    pub se: f64,
    pub reps: usize,
    /// Wall time of the run that produced the row, when timing was requested.
    pub seconds: Option<f64>,
}

impl ResultRow {
    pub fn from_counts(
        p: usize,
        n: usize,
        a: f64,
        method: Method,
        q: usize,
        rejections: usize,
        reps: usize,
    ) -> Self {
        let r = rejections as f64 / reps as f64;
        Self {
            p,
            n,
            c_n: p as f64 / n as f64,
            a,
            method,
            q,
            rejection_rate: r,
            se: (r * (1.0 - r) / reps as f64).sqrt(),
            reps,
            seconds: None,
        }
    }

    fn key(&self) -> (usize, usize, u64, Method, usize) {
        (self.p, self.n, self.a.to_bits(), self.method, self.q)
    }
}

/// Rows keyed uniquely by `(p, n, a, method, q)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[ResultRow] {
        &self.rows
    }

    pub fn push(&mut self, row: ResultRow) -> Result<()> {
        if !(0.0..=1.0).contains(&row.rejection_rate) {
            return param(format!(
                "rejection rate {} outside [0, 1]",
                row.rejection_rate
            ));
        }
        if self.rows.iter().any(|r| r.key() == row.key()) {
            return param(format!(
                "duplicate row for p={}, n={}, a={}, method={}, q={}",
                row.p, row.n, row.a, row.method, row.q
            ));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn extend(&mut self, other: ResultTable) -> Result<()> {
        other.rows.into_iter().try_for_each(|r| self.push(r))
    }

    pub fn find(&self, p: usize, n: usize, a: f64, method: Method, q: usize) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.p == p && r.n == n && r.a == a && r.method == method && r.q == q)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("writing to memory");
        for r in &self.rows {
            w.write_record([
                r.p.to_string(),
                r.n.to_string(),
                r.c_n.to_string(),
                r.a.to_string(),
                r.method.to_string(),
                r.q.to_string(),
                r.rejection_rate.to_string(),
                r.se.to_string(),
                r.reps.to_string(),
                r.seconds.map_or_else(String::new, |s| s.to_string()),
            ])
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing memory writer"))
            .expect("CSV output is UTF-8")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rd
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        if header != CSV_HEADER {
            return Err(Error::Parse(format!("unexpected header {header:?}")));
        }
        let mut table = Self::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let num = |i: usize| {
                field(i)
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}: {e}", CSV_HEADER[i])))
            };
            let int = |i: usize| {
                field(i)
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{}: {e}", CSV_HEADER[i])))
            };
            let row = ResultRow {
                p: int(0)?,
                n: int(1)?,
                c_n: num(2)?,
                a: num(3)?,
                method: field(4).parse()?,
                q: int(5)?,
                rejection_rate: num(6)?,
                se: num(7)?,
                reps: int(8)?,
                seconds: if field(9).is_empty() {
                    None
                } else {
                    Some(num(9)?)
                },
            };
            table.push(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(table)
    }
}

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use hdwn_core::{DMatrix, TimeSeriesSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
#[value(rename_all = "snake_case")]
pub enum Layout {
    /// Each row is one observation x_t.
    #[default]
    RowsAreTime,
    /// Each row is one coordinate series.
    RowsAreCoords,
}

#[derive(Debug, Clone)]
pub struct DataFileSpec {
    pub path: PathBuf,
    pub layout: Layout,
    pub delimiter: u8,
    pub has_header: bool,
}

impl DataFileSpec {
    pub fn load(&self) -> Result<TimeSeriesSample> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(self.delimiter)
            .has_headers(self.has_header)
            .trim(csv::Trim::All)
            .from_path(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.with_context(|| format!("reading record {}", i + 1))?;
            let row = record
                .iter()
                .enumerate()
                .map(|(j, field)| {
                    field.parse::<f64>().with_context(|| {
                        format!(
                            "record {}, field {}: {field:?} is not a number",
                            i + 1,
                            j + 1
                        )
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            bail!("{} contains no data", self.path.display());
        }
        let width = rows[0].len();
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            bail!(
                "record {} has {} fields, expected {width}",
                i + 1,
                rows[i].len()
            );
        }
        let sample = match self.layout {
            Layout::RowsAreTime => TimeSeriesSample::from_observations(&rows)?,
            Layout::RowsAreCoords => {
                TimeSeriesSample::new(DMatrix::from_fn(rows.len(), width, |i, t| rows[i][t]))?
            }
        };
        Ok(sample)
    }
}

pub fn parse_delimiter(s: &str) -> std::result::Result<u8, String> {
    match s {
        "tab" | "\\t" => Ok(b'\t'),
        "space" => Ok(b' '),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!(
            "delimiter must be a single ASCII character, 'tab' or 'space', got {s:?}"
        )),
    }
}

/// Writes a sample as CSV in the given layout.
pub fn write_sample(x: &TimeSeriesSample, layout: Layout, delimiter: u8) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    let d = x.data();
    match layout {
        Layout::RowsAreTime => {
            for t in 0..x.n() {
                w.write_record((0..x.p()).map(|i| d[(i, t)].to_string()))?;
            }
        }
        Layout::RowsAreCoords => {
            for i in 0..x.p() {
                w.write_record((0..x.n()).map(|t| d[(i, t)].to_string()))?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

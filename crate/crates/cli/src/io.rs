//! CSV tables and JSON output.
//!
//! Numbers are written as `{:.16e}` (17 significant digits), which reads back
//! to the identical `f64`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use mdepth::Sample;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// A numeric table with a header row, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub data: Vec<f64>,
}

impl Table {
    pub fn new(headers: Vec<String>, data: Vec<f64>) -> CliResult<Self> {
        if headers.is_empty() || !data.len().is_multiple_of(headers.len()) {
            return Err(CliError::Data("table data does not fill whole rows".into()));
        }
        Ok(Table { headers, data })
    }

    pub fn ncols(&self) -> usize {
        self.headers.len()
    }

    pub fn nrows(&self) -> usize {
        self.data.len() / self.ncols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.ncols()..(i + 1) * self.ncols()]
    }

    /// Resolves a column given by 0-based index or header name.
    pub fn column_index(&self, key: &str) -> CliResult<usize> {
        let key = key.trim();
        if let Some(i) = self.headers.iter().position(|h| h == key) {
            return Ok(i);
        }
        match key.parse::<usize>() {
            Ok(i) if i < self.ncols() => Ok(i),
            _ => Err(CliError::Usage(format!("no column `{key}` (columns: {})", self.headers.join(", ")))),
        }
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.nrows()).map(|i| self.row(i)[k]).collect()
    }

    /// Row-major values of the chosen columns.
    pub fn select(&self, cols: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.nrows() * cols.len());
        for i in 0..self.nrows() {
            let row = self.row(i);
            out.extend(cols.iter().map(|&k| row[k]));
        }
        out
    }

    pub fn to_sample(&self) -> CliResult<Sample<f64>> {
        Ok(Sample::from_flat(self.nrows(), self.ncols(), self.data.clone())?)
    }
}

/// Parses CSV text with a header row into a numeric table.
pub fn parse_csv<R: Read>(reader: R, source: &str) -> CliResult<Table> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> =
        rdr.headers().map_err(|e| CliError::Data(format!("{source}: {e}")))?.iter().map(str::to_string).collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(CliError::Data(format!("{source}: missing header row")));
    }
    let mut data = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(format!("{source}: {e}")))?;
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                CliError::Data(format!("{source}: row {}, column `{}`: `{field}` is not a number", i + 2, headers[j]))
            })?;
            data.push(v);
        }
    }
    if data.is_empty() {
        return Err(CliError::Data(format!("{source}: no data rows")));
    }
    Table::new(headers, data)
}

pub fn read_csv(path: &Path) -> CliResult<Table> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(file, &path.display().to_string())
}

pub fn write_csv_to<W: Write>(table: &Table, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.headers)?;
    for i in 0..table.nrows() {
        w.write_record(table.row(i).iter().map(|v| format!("{v:.16e}")))?;
    }
    w.flush()
}

pub fn write_csv(table: &Table, path: &Path) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_csv_to(table, BufWriter::new(file)).map_err(|e| CliError::io(path, e))
}

/// Pretty JSON to `path`, or to stdout when `path` is `None`.
pub fn emit_json<V: Serialize>(value: &V, path: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("outputs serialize");
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

//! Matrix file formats.
//!
//! * CSV: one matrix row per line, comma-separated decimal literals.
//! * JSON: `{"rows": m, "cols": n, "data": [[...], ...]}` in row-major order.
//!
//! Writers emit 17 significant digits so every `f64` survives a round trip.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl MatrixFormat {
    /// Format implied by a `.csv` or `.json` extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(MatrixFormat::Csv),
            "json" => Some(MatrixFormat::Json),
            _ => None,
        }
    }
}

impl std::str::FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "json" => Ok(MatrixFormat::Json),
            other => Err(Error::Parse(format!("unknown matrix format '{other}'"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    data: Vec<Vec<f64>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc {
            rows: self.rows(),
            cols: self.cols(),
            data: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        if doc.data.len() != doc.rows || doc.data.iter().any(|r| r.len() != doc.cols) {
            return Err(serde::de::Error::custom(format!(
                "declared shape {}x{} does not match data",
                doc.rows, doc.cols
            )));
        }
        Matrix::from_rows(&doc.data).map_err(serde::de::Error::custom)
    }
}

pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: '{f}' is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no rows".into()));
    }
    Matrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Matrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn fmt_entry(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(a: &Matrix) -> String {
    let mut out = String::new();
    for row in a.to_rows() {
        let fields: Vec<String> = row.into_iter().map(fmt_entry).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(a: &Matrix) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"rows\": {}, \"cols\": {}, \"data\": [",
        a.rows(),
        a.cols()
    );
    for (i, row) in a.to_rows().into_iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let fields: Vec<String> = row.into_iter().map(fmt_entry).collect();
        let _ = write!(out, "[{}]", fields.join(", "));
    }
    out.push_str("]}\n");
    out
}

pub fn parse(text: &str, format: MatrixFormat) -> Result<Matrix> {
    match format {
        MatrixFormat::Csv => parse_csv(text),
        MatrixFormat::Json => parse_json(text),
    }
}

pub fn render(a: &Matrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Csv => to_csv(a),
        MatrixFormat::Json => to_json(a),
    }
}

fn resolve(path: &Path, format: Option<MatrixFormat>) -> Result<MatrixFormat> {
    format
        .or_else(|| MatrixFormat::from_path(path))
        .ok_or_else(|| {
            Error::Parse(format!(
                "cannot infer matrix format of '{}'; use a .csv/.json extension",
                path.display()
            ))
        })
}

pub fn read_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<Matrix> {
    let format = resolve(path, format)?;
    parse(&std::fs::read_to_string(path)?, format)
}

pub fn write_matrix(path: &Path, a: &Matrix, format: Option<MatrixFormat>) -> Result<()> {
    let format = resolve(path, format)?;
    std::fs::write(path, render(a, format))?;
    Ok(())
}

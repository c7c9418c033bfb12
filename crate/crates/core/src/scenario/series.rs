use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::OutputFormat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// A named table of equal-length numeric columns plus reproducibility metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub name: String,
    pub columns: Vec<Column>,
    pub metadata: Value,
}

impl PlotSeries {
    pub fn new(name: impl Into<String>, metadata: Value) -> Self {
        PlotSeries {
            name: name.into(),
            columns: Vec::new(),
            metadata,
        }
    }

    pub fn with_column(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.columns.push(Column {
            name: name.into(),
            values,
        });
        self
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn validate(&self) -> Result<()> {
        let rows = self.rows();
        for c in &self.columns {
            if c.values.len() != rows {
                return Err(Error::Domain(format!(
                    "series {}: column {} has {} rows, expected {rows}",
                    self.name,
                    c.name,
                    c.values.len()
                )));
            }
            if let Some(v) = c.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Domain(format!(
                    "series {}: column {} holds non-finite value {v}",
                    self.name, c.name
                )));
            }
        }
        Ok(())
    }

    /// Writes `<dir>/<name>.<ext>`; CSV output gets a `<name>.meta.json` sidecar.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<PathBuf> {
        self.validate()?;
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.{}", self.name, format.extension()));
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
                for i in 0..self.rows() {
                    w.write_record(self.columns.iter().map(|c| format_number(c.values[i])))?;
                }
                w.flush()?;
                fs::write(meta_path(&path), to_pretty(&self.metadata)? + "\n")?;
            }
            OutputFormat::Json => {
                fs::write(&path, to_pretty(self)? + "\n")?;
            }
        }
        Ok(path)
    }

    /// Reads a file produced by [`write`](Self::write).
    pub fn read(path: &Path) -> Result<Self> {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Io(format!("bad series path {}", path.display())))?
            .to_string();
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => {
                let mut r = csv::Reader::from_path(path)?;
                let mut columns: Vec<Column> = r
                    .headers()?
                    .iter()
                    .map(|h| Column {
                        name: h.to_string(),
                        values: Vec::new(),
                    })
                    .collect();
                for record in r.records() {
                    let record = record?;
                    for (col, field) in columns.iter_mut().zip(record.iter()) {
                        let v: f64 = field
                            .parse()
                            .map_err(|e| Error::Io(format!("{}: {field}: {e}", path.display())))?;
                        col.values.push(v);
                    }
                }
                let meta = fs::read_to_string(meta_path(path))?;
                let metadata = serde_json::from_str(&meta).map_err(|e| Error::Io(e.to_string()))?;
                Ok(PlotSeries {
                    name,
                    columns,
                    metadata,
                })
            }
            Some("json") => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))
            }
            _ => Err(Error::Io(format!("unknown series format {}", path.display()))),
        }
    }
}

fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    serde_json::Number::from_f64(x)
        .map(|n| n.to_string())
        .unwrap_or_else(|| x.to_string())
}

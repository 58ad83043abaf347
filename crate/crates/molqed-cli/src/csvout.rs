//! CSV artifacts: `# key = value` preamble, header row, then data rows with
//! 12 significant digits. Reruns with the same configuration and seed are
//! byte-identical when the timestamp line is suppressed.

use std::io::Write;
use std::path::Path;

use crate::config::Config;

/// A cell is either a label or a finite number.
pub enum Cell {
    Str(String),
    Num(f64),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

pub struct CsvWriter {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvWriter {
    pub fn new(columns: &[&str]) -> Self {
        CsvWriter {
            header: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> Result<(), String> {
        assert_eq!(cells.len(), self.header.len(), "column count mismatch");
        for (cell, name) in cells.iter().zip(&self.header) {
            if let Cell::Num(v) = cell {
                if !v.is_finite() {
                    return Err(format!("non-finite value in column {name}"));
                }
            }
        }
        self.rows.push(cells);
        Ok(())
    }

    /// Writes preamble + table. The preamble records the scenario name, the
    /// artifact version, and every resolved configuration key.
    pub fn write(
        &self,
        path: &Path,
        scenario: &str,
        cfg: &Config,
        timestamp: bool,
    ) -> std::io::Result<()> {
        let mut out = Vec::new();
        writeln!(out, "# molqed {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(out, "# scenario = {scenario}")?;
        if timestamp {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            writeln!(out, "# generated_unix = {now}")?;
        }
        for (k, v) in cfg.entries() {
            writeln!(out, "# {k} = {v}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Str(s) => s.clone(),
                    Cell::Num(v) => format!("{v:.11e}"),
                })
                .collect();
            writeln!(out, "{}", line.join(","))?;
        }
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, out)
    }
}

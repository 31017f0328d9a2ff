use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ffhk::Error;
use serde::Serialize;

use crate::config::RunConfig;
use crate::{EXIT_CHECK_FAILED, EXIT_NUMERICAL, EXIT_PASS};

/// How `value` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Worst residual over the grid; passes when strictly below.
    Below,
    /// Smallest margin over the grid; passes when strictly above.
    Above,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub grid_size: usize,
    pub skipped: usize,
    pub value: Option<f64>,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
    pub numerical_failure: bool,
    pub error: Option<String>,
    pub wall_time_s: f64,
    pub notes: String,
    pub quadrature_nodes: Option<Vec<usize>>,
}

impl CheckRecord {
    /// Fold per-point outcomes into one record.
    ///
    /// Points with a degenerate period lattice are skipped and counted; the first other error
    /// fails the check.
    pub fn aggregate(
        name: &str,
        outcomes: Vec<ffhk::Result<f64>>,
        comparison: Comparison,
        tolerance: f64,
        wall_time_s: f64,
    ) -> Self {
        let grid_size = outcomes.len();
        let mut skipped = 0;
        let mut value: Option<f64> = None;
        let mut error: Option<Error> = None;
        for o in outcomes {
            match o {
                Ok(v) => {
                    let v = if v.is_nan() { f64::INFINITY } else { v };
                    value = Some(match (value, comparison) {
                        (None, _) => v,
                        (Some(w), Comparison::Below) => w.max(v),
                        (Some(w), Comparison::Above) => w.min(v),
                    });
                }
                Err(Error::DegenerateLattice(_)) => skipped += 1,
                Err(e) => {
                    if error.is_none() {
                        error = Some(e);
                    }
                }
            }
        }
        let within = value.is_none_or(|v| match comparison {
            Comparison::Below => v < tolerance,
            Comparison::Above => v > tolerance,
        });
        let mut notes = String::new();
        if skipped > 0 {
            let _ = write!(notes, "skipped {skipped} of {grid_size} points with a degenerate lattice");
        }
        Self {
            name: name.to_owned(),
            grid_size,
            skipped,
            value,
            comparison,
            tolerance,
            passed: error.is_none() && within,
            numerical_failure: error.as_ref().is_some_and(Error::is_numerical),
            error: error.map(|e| e.to_string()),
            wall_time_s,
            notes,
            quadrature_nodes: None,
        }
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    pub fn with_nodes(mut self, nodes: Vec<usize>) -> Self {
        self.quadrature_nodes = Some(nodes);
        self
    }

    pub fn summary_line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        let op = match self.comparison {
            Comparison::Below => "<",
            Comparison::Above => ">",
        };
        let value = self.value.map_or("n/a".to_owned(), |v| format!("{v:.3e}"));
        let mut line = format!(
            "[{tag}] {:<36} {value} {op} {:.1e}  ({} pts, {:.2} s)",
            self.name, self.tolerance, self.grid_size, self.wall_time_s
        );
        if let Some(e) = &self.error {
            let _ = write!(line, "  error: {e}");
        }
        if !self.notes.is_empty() {
            let _ = write!(line, "  [{}]", self.notes);
        }
        line
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub tol_scale: f64,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub numerical_failure: bool,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(command: &str, config: RunConfig, tol_scale: f64, checks: Vec<CheckRecord>, wall_time_s: f64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            config,
            tol_scale,
            passed: checks.iter().all(|c| c.passed),
            numerical_failure: checks.iter().any(|c| c.numerical_failure),
            checks,
            wall_time_s,
        }
    }

    /// 0 pass, 1 a check failed, 3 a numerical failure.
    pub fn exit_code(&self) -> i32 {
        if self.numerical_failure {
            EXIT_NUMERICAL
        } else if self.passed {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// A CSV table kept as strings so columns can be blank.
#[derive(Debug, Clone)]
pub struct Table {
    pub file_name: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file_name: &'static str, header: &[&str]) -> Self {
        Self { file_name, header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, Box<dyn std::error::Error>> {
        let path = dir.join(self.file_name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(path)
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

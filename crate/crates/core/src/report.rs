//! Suite reports and CSV output with deterministic formatting: fixed
//! row order, fixed float format, `.` decimal separator.

use std::io::Write;
use std::path::Path;

use crate::error::{CoreError, Result};

#[derive(Debug, Clone)]
pub struct CheckEntry {
    pub name: String,
    /// Scale-normalized residual (or defect) for the check.
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub entries: Vec<CheckEntry>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), entries: Vec::new() }
    }

    /// Record a residual-style check: passes iff `value <= threshold`.
    pub fn check(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        let pass = value <= threshold && value.is_finite();
        self.entries.push(CheckEntry { name: name.into(), value, threshold, pass });
    }

    /// Record an exact integer equality as a check.
    pub fn check_eq(&mut self, name: impl Into<String>, got: usize, want: usize) {
        let diff = got.abs_diff(want);
        self.entries.push(CheckEntry {
            name: name.into(),
            value: diff as f64,
            threshold: 0.0,
            pass: diff == 0,
        });
    }

    pub fn overall(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.entries.extend(other.entries);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite: {}\n", self.suite));
        out.push_str(&format!(
            "status: {}\n",
            if self.overall() { "PASS" } else { "FAIL" }
        ));
        out.push_str(&format!("checks: {}\n", self.entries.len()));
        for e in &self.entries {
            out.push_str(&format!(
                "{}  value={}  threshold={}  {}\n",
                e.name,
                fmt_f(e.value),
                fmt_f(e.threshold),
                if e.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

/// Fixed float formatting used for every report and CSV cell.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

/// Write a CSV file: `# `-prefixed comment lines, one header line, then
/// the rows. UTF-8, comma separator, `.` decimal.
pub fn write_csv(
    path: &Path,
    comments: &[String],
    header: &str,
    rows: &[Vec<String>],
) -> Result<()> {
    let mut buf = String::new();
    for line in comments {
        buf.push_str("# ");
        buf.push_str(line);
        buf.push('\n');
    }
    buf.push_str(header);
    buf.push('\n');
    for row in rows {
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    let mut f = std::fs::File::create(path)
        .map_err(|e| CoreError::Usage(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(buf.as_bytes())
        .map_err(|e| CoreError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

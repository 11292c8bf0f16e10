//! CSV output shared by every dataset writer.
//!
//! Floats use 17 significant digits in scientific notation, `.` as decimal
//! separator and `\n` line endings. Files are written to a temporary sibling
//! and renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// In-memory CSV table with a fixed header.
#[derive(Clone, Debug)]
pub struct Table {
    header: Vec<String>,
    body: String,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table { header: columns.iter().map(|c| c.as_ref().to_string()).collect(), body: String::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.header
    }

    /// Appends a row of preformatted cells.
    pub fn push_cells(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.header.len(), "row width differs from header");
        self.body.push_str(&cells.join(","));
        self.body.push('\n');
    }

    /// Appends a row of floats.
    pub fn push(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
        self.push_cells(&cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.body.len() + 64);
        let _ = writeln!(out, "{}", self.header.join(","));
        out.push_str(&self.body);
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.render().as_bytes())
    }
}

/// Writes `bytes` to `path` via a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io { path: path.display().to_string(), source };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

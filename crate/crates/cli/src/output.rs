//! Output files are staged in memory and written once at the end of a
//! command, each through a temporary file renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Comma-separated table with a header row and LF line endings.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { text: format!("{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width differs from header");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    pub fn add(&mut self, relative: impl Into<PathBuf>, contents: String) {
        self.files.push((relative.into(), contents));
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn write_all(&self, out_dir: &Path) -> Result<(), CliError> {
        for (rel, contents) in &self.files {
            let path = out_dir.join(rel);
            let dir = path.parent().unwrap_or(out_dir);
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, contents).map_err(|e| CliError::io(tmp.display(), e))?;
            fs::rename(&tmp, &path).map_err(|e| CliError::io(path.display(), e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["k", "median", "q75"]);
        csv.row(&["2".into(), "25".into(), "40".into()]);
        assert_eq!(csv.into_string(), "k,median,q75\n2,25,40\n");
    }
}

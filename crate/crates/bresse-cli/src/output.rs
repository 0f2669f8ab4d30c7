//! CSV emission with the reproducibility header line.

use crate::config::RunConfig;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A CSV file whose first line pins the config hash and tool version.
pub struct CsvFile {
    inner: std::io::BufWriter<std::fs::File>,
    pub path: PathBuf,
}

impl CsvFile {
    pub fn create(dir: &Path, name: &str, cfg: &RunConfig, columns: &str) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let file = std::fs::File::create(&path)?;
        let mut inner = std::io::BufWriter::new(file);
        writeln!(
            inner,
            "# config_hash={:016x} tool_version={}",
            cfg.hash(),
            TOOL_VERSION
        )?;
        writeln!(inner, "{columns}")?;
        Ok(CsvFile { inner, path })
    }

    pub fn row(&mut self, fields: std::fmt::Arguments<'_>) -> anyhow::Result<()> {
        writeln!(self.inner, "{fields}")?;
        Ok(())
    }

    pub fn comment(&mut self, text: std::fmt::Arguments<'_>) -> anyhow::Result<()> {
        writeln!(self.inner, "# {text}")?;
        Ok(())
    }

    pub fn finish(mut self) -> anyhow::Result<PathBuf> {
        self.inner.flush()?;
        Ok(self.path)
    }
}

/// Fixed-width float formatting so identical runs emit identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:.17e}")
}

/// Compact frequency formatting for filenames (mode_type1_1.5.csv).
pub fn xi_label(xi: f64) -> String {
    let s = format!("{xi}");
    s.replace('-', "m")
}

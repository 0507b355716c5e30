//! Self-describing CSV output: every file opens with a `#`-prefixed manifest
//! (subcommand, parameters, seed, version, timestamp) followed by a column
//! header and comma-separated rows. Floats carry 17 significant digits so
//! outputs are byte-reproducible; only the timestamp line varies across runs.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Clone, Debug, Default)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> RunManifest {
        RunManifest { subcommand: subcommand.to_string(), params: Vec::new(), seed: None }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> RunManifest {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> RunManifest {
        self.seed = Some(seed);
        self
    }

    /// `#`-prefixed header block; the timestamp line is excluded from
    /// byte-identity comparisons.
    pub fn header(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# primewalk v{}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        for (k, v) in &self.params {
            let _ = writeln!(out, "# param: {k}={v}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "# seed: {s}");
        }
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(out, "# timestamp: {ts}");
        out
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter<W: Write> {
    sink: W,
}

impl<W: Write> CsvWriter<W> {
    /// Emit the manifest block and the column header, then stream rows.
    pub fn new(mut sink: W, manifest: &RunManifest, columns: &[&str]) -> Result<CsvWriter<W>> {
        sink.write_all(manifest.header().as_bytes())
            .and_then(|_| writeln!(sink, "{}", columns.join(",")))
            .map_err(|e| Error::Resource(format!("csv write failed: {e}")))?;
        Ok(CsvWriter { sink })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.sink, "{}", fields.join(","))
            .map_err(|e| Error::Resource(format!("csv write failed: {e}")))
    }

    pub fn finish(mut self) -> Result<()> {
        self.sink
            .flush()
            .map_err(|e| Error::Resource(format!("csv flush failed: {e}")))
    }
}

/// Open `path` for writing with the manifest header already emitted.
pub fn csv_file(
    path: &Path,
    manifest: &RunManifest,
    columns: &[&str],
) -> Result<CsvWriter<std::io::BufWriter<std::fs::File>>> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::Resource(format!("cannot create {}: {e}", path.display())))?;
    CsvWriter::new(std::io::BufWriter::new(file), manifest, columns)
}

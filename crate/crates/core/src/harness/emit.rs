//! Report files in line-delimited JSON or CSV.

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::ReportFormat;
use super::sweep::SweepTable;
use crate::composite::IdentityReport;
use crate::error::{Error, Result};

/// CSV column order.
pub const CSV_HEADER: [&str; 13] = [
    "identity", "level", "n", "left_re", "left_im", "right_re", "right_im", "residual", "grid", "seconds", "seed",
    "tolerance", "passed",
];

/// One report as written to disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub identity: String,
    pub level: String,
    pub n: usize,
    pub left_re: f64,
    pub left_im: f64,
    pub right_re: f64,
    pub right_im: f64,
    pub residual: f64,
    pub grid: String,
    pub seconds: f64,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl ReportRecord {
    pub fn new(r: &IdentityReport, seed: u64, timings: bool) -> Self {
        ReportRecord {
            identity: r.identity.clone(),
            level: r.level.to_string(),
            n: r.n,
            left_re: r.left.re,
            left_im: r.left.im,
            right_re: r.right.re,
            right_im: r.right.im,
            residual: r.residual,
            grid: r.grid.clone(),
            seconds: if timings { r.seconds } else { 0.0 },
            seed,
            tolerance: r.tolerance,
            passed: r.passed(),
        }
    }

    pub fn left(&self) -> Complex64 {
        Complex64::new(self.left_re, self.left_im)
    }

    pub fn right(&self) -> Complex64 {
        Complex64::new(self.right_re, self.right_im)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Writes one record per report. With `timings` off the `seconds` field is 0,
/// which makes the output byte-identical across runs of the same configuration.
pub fn write_reports<W: Write>(out: W, reports: &[IdentityReport], format: ReportFormat, seed: u64, timings: bool) -> Result<()> {
    match format {
        ReportFormat::LineJson => {
            let mut out = out;
            for r in reports {
                let line = serde_json::to_string(&ReportRecord::new(r, seed, timings))
                    .map_err(|e| Error::Parse(format!("json: {e}")))?;
                writeln!(out, "{line}")?;
            }
            out.flush()?;
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in reports {
                w.serialize(ReportRecord::new(r, seed, timings)).map_err(csv_err)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes a sweep as one (target, step, grid, residual, flagged) record per row.
pub fn write_sweep<W: Write>(out: W, table: &SweepTable, format: ReportFormat) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        target: &'a str,
        step: usize,
        grid: &'a str,
        residual: f64,
        flagged: bool,
    }
    let rows = table.rows.iter().enumerate().map(|(step, r)| Row {
        target: &table.target,
        step,
        grid: &r.grid,
        residual: r.residual,
        flagged: table.flagged,
    });
    match format {
        ReportFormat::LineJson => {
            let mut out = out;
            for row in rows {
                let line = serde_json::to_string(&row).map_err(|e| Error::Parse(format!("json: {e}")))?;
                writeln!(out, "{line}")?;
            }
            out.flush()?;
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["target", "step", "grid", "residual", "flagged"]).map_err(csv_err)?;
            for row in rows {
                w.serialize(row).map_err(csv_err)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Parses a report file written by [`write_reports`].
pub fn read_reports<R: Read>(input: R, format: ReportFormat) -> Result<Vec<ReportRecord>> {
    match format {
        ReportFormat::LineJson => BufReader::new(input)
            .lines()
            .filter(|l| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true))
            .map(|l| serde_json::from_str(&l?).map_err(|e| Error::Parse(format!("json: {e}"))))
            .collect(),
        ReportFormat::Csv => csv::Reader::from_reader(input)
            .deserialize()
            .map(|r| r.map_err(csv_err))
            .collect(),
    }
}

/// Writes `reports` to `dir/<stem>.<ext>`, creating `dir`, and returns the path.
pub fn emit_report(
    dir: &Path,
    stem: &str,
    reports: &[IdentityReport],
    format: ReportFormat,
    seed: u64,
    timings: bool,
) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::from(e).context(format!("creating {}", dir.display())))?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let file = fs::File::create(&path).map_err(|e| Error::from(e).context(format!("writing {}", path.display())))?;
    write_reports(std::io::BufWriter::new(file), reports, format, seed, timings)?;
    Ok(path)
}

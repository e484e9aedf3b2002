//! File formats for run results.

use std::io::Write;
use std::time::Duration;

use evap_core::{CurveRecord, CurveSummary};
use serde::Serialize;

use crate::config::ConfigEcho;
use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 6] = [
    "slice",
    "time",
    "entropy",
    "p0",
    "mean_occupation",
    "decoupling_distance",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub records: Vec<CurveRecord>,
    pub summary: CurveSummary,
    /// Wall-clock time; reported on stderr, never written into data files.
    pub timing: Duration,
}

#[derive(Serialize)]
struct JsonReport<'a, R: Serialize, S: Serialize> {
    config: &'a ConfigEcho,
    records: &'a [R],
    summary: &'a S,
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Serialize(e.to_string())
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Serialize(e.to_string())
}

/// Writes any serializable row type as CSV with its field names as header.
pub fn write_csv_rows<W: Write, R: Serialize>(out: W, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Serialize(e.to_string()))
}

pub fn write_curve_csv<W: Write>(out: W, records: &[CurveRecord]) -> Result<()> {
    if records.is_empty() {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        return w.flush().map_err(|e| CliError::Serialize(e.to_string()));
    }
    write_csv_rows(out, records)
}

pub fn write_json<W: Write, R: Serialize, S: Serialize>(
    mut out: W,
    config: &ConfigEcho,
    records: &[R],
    summary: &S,
) -> Result<()> {
    let doc = JsonReport {
        config,
        records,
        summary,
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(json_err)?;
    out.write_all(b"\n")
        .map_err(|e| CliError::Serialize(e.to_string()))
}

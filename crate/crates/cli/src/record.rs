//! Output records and the JSON / CSV sinks.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rhaudit_core::report::{ClaimReport, ClaimStatus, Fields, Value};
use rhaudit_core::AuditError;
use serde::{Deserialize, Serialize};

use crate::manifest::{lookup, Kind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Record {
    pub schema_version: u32,
    pub claim_id: String,
    pub paper_eq: String,
    pub inputs: Fields,
    pub lhs: Value,
    pub rhs: Value,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub error_estimate: f64,
    pub status: ClaimStatus,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: Fields,
    #[serde(skip)]
    pub hard: bool,
}

impl Record {
    pub fn from_report(report: ClaimReport, wall_time_ms: u64) -> Self {
        let entry = lookup(&report.claim_id);
        Record {
            schema_version: SCHEMA_VERSION,
            paper_eq: entry.map_or_else(|| "unlisted".to_string(), |e| e.paper_eq.clone()),
            hard: entry.is_some_and(|e| e.kind == Kind::Identity),
            claim_id: report.claim_id,
            inputs: report.inputs,
            lhs: report.lhs,
            rhs: report.rhs,
            abs_residual: report.abs_residual,
            rel_residual: report.rel_residual,
            error_estimate: report.error_estimate,
            status: report.status,
            wall_time_ms,
            details: report.details,
        }
    }

    /// An identity that did not come out CONFIRMED.
    pub fn hard_failure(&self) -> bool {
        self.hard && self.status != ClaimStatus::Confirmed
    }
}

/// Report standing in for a computation that raised an error.
pub fn error_report(claim_id: &str, inputs: Fields, err: &AuditError) -> ClaimReport {
    ClaimReport::compare(claim_id, inputs, Value::Real(f64::NAN), Value::Real(f64::NAN), f64::NAN, 0.0)
        .with_status(ClaimStatus::Inconclusive)
        .with_detail("error", err.to_string())
}

/// Runs `f`, timing it and turning an error into an INCONCLUSIVE record.
pub fn timed(claim_id: &str, inputs: Fields, timing: bool, f: impl FnOnce() -> rhaudit_core::Result<ClaimReport>) -> Record {
    let start = Instant::now();
    let report = f().unwrap_or_else(|e| error_report(claim_id, inputs, &e));
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    Record::from_report(report, ms)
}

/// Like [`timed`] for computations yielding several reports.
pub fn timed_many(
    claim_id: &str,
    inputs: Fields,
    timing: bool,
    f: impl FnOnce() -> rhaudit_core::Result<Vec<ClaimReport>>,
) -> Vec<Record> {
    let start = Instant::now();
    let reports = f().unwrap_or_else(|e| vec![error_report(claim_id, inputs, &e)]);
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    reports.into_iter().map(|r| Record::from_report(r, ms)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const CSV_HEADER: [&str; 12] = [
    "schemaVersion",
    "claimId",
    "paperEq",
    "inputs",
    "lhs",
    "rhs",
    "absResidual",
    "relResidual",
    "errorEstimate",
    "status",
    "wallTimeMs",
    "details",
];

pub fn write_records(records: &[Record], format: Format, out: impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => write_json(records, out),
        Format::Csv => write_csv(records, out),
    }
}

fn write_json(records: &[Record], mut out: impl Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)
}

fn json_string<T: Serialize>(v: &T) -> std::io::Result<String> {
    serde_json::to_string(v).map_err(std::io::Error::other)
}

fn write_csv(records: &[Record], out: impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(std::io::Error::other)?;
    for r in records {
        let row = [
            r.schema_version.to_string(),
            r.claim_id.clone(),
            r.paper_eq.clone(),
            json_string(&r.inputs)?,
            json_string(&r.lhs)?,
            json_string(&r.rhs)?,
            r.abs_residual.to_string(),
            r.rel_residual.to_string(),
            r.error_estimate.to_string(),
            r.status.to_string(),
            r.wall_time_ms.to_string(),
            json_string(&r.details)?,
        ];
        w.write_record(&row).map_err(std::io::Error::other)?;
    }
    w.flush()
}

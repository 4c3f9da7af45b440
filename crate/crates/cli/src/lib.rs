//! Front end for the `rhaudit` identity audits: flag and config handling,
//! the suites behind each subcommand, and JSON / CSV report output.
//!
//! Exit codes: 0 success, 2 a hard identity failed, 3 a claim was VIOLATED
//! under `--strict-claims`, 4 I/O error, 64 invalid configuration.

pub mod config;
pub mod manifest;
pub mod record;
pub mod suites;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;
use rhaudit_core::report::ClaimStatus;
use thiserror::Error;

pub use config::{Cli, CommandKind, RunConfig, Suite};
pub use record::{Format, Record};

pub const EXIT_OK: i32 = 0;
pub const EXIT_HARD_FAILURE: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_CONFIG: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

/// Runs the configured command and returns its records in report order.
pub fn execute(cfg: &RunConfig) -> Vec<Record> {
    match cfg.command {
        CommandKind::Verify => suites::verify(cfg),
        CommandKind::Traces => suites::traces_point(cfg),
        CommandKind::Rhfe => suites::rhfe_point(cfg),
        CommandKind::Gram => suites::gram(cfg),
        CommandKind::Cm => suites::cm(cfg),
        CommandKind::Ledger => suites::ledger(cfg),
    }
}

pub fn exit_code(records: &[Record], strict_claims: bool) -> i32 {
    if records.iter().any(Record::hard_failure) {
        EXIT_HARD_FAILURE
    } else if strict_claims && records.iter().any(|r| r.status == ClaimStatus::Violated) {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    }
}

/// Executes, writes the report and returns the exit code.
pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    let records = execute(cfg);
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            record::write_records(&records, cfg.format, &mut w)?;
            w.flush()?;
        }
        None => record::write_records(&records, cfg.format, std::io::stdout().lock())?,
    }
    let hard = records.iter().filter(|r| r.hard_failure()).count();
    let violated = records.iter().filter(|r| r.status == ClaimStatus::Violated && !r.hard).count();
    eprintln!("{} reports, {hard} hard failures, {violated} violated claims", records.len());
    Ok(exit_code(&records, cfg.strict_claims))
}

/// Entry point taking raw arguments; prints usage or errors to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.resolve().and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rhaudit: {e}");
            e.exit_code()
        }
    }
}

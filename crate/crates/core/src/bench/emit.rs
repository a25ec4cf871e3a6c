//! CSV and JSON result writers.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use super::ResultRecord;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 8] = ["method", "variant", "k", "c", "r", "error_ratio", "seconds", "seed"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Argument(format!("unknown output format '{other}'"))),
        }
    }
}

/// 17 significant digits.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(records: &[ResultRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let into_io = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(into_io)?;
    for r in records {
        w.write_record([
            r.method.clone(),
            r.variant.clone(),
            r.k.to_string(),
            r.c.to_string(),
            r.r.to_string(),
            r.error_ratio.map(float).unwrap_or_default(),
            float(r.seconds),
            r.seed.to_string(),
        ])
        .map_err(into_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[ResultRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(records: &[ResultRecord], format: OutputFormat, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = io::BufWriter::new(File::create(p)?);
            write_to(records, format, file)
        }
        None => write_to(records, format, io::stdout().lock()),
    }
}

fn write_to<W: Write>(records: &[ResultRecord], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(records, out),
        OutputFormat::Json => write_json(records, out),
    }
}

pub fn parse_json(text: &str) -> Result<Vec<ResultRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

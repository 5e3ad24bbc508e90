//! CSV and JSON encodings of a [`SweepTable`].
//!
//! CSV values are written with 17 significant digits, which round-trips
//! every `f64` exactly.

use std::io::{Read, Write};

use crate::error::{CliError, CliResult};
use crate::sweep::{ResultRow, SweepTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::BadInput(format!("unknown format {s:?}; expected csv or json"))),
        }
    }
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec![table.axis.clone()];
    header.extend(table.columns.iter().cloned());
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![format_value(row.axis_value)];
        rec.extend(row.values.iter().map(|&v| format_value(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> CliResult<SweepTable> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers()?.clone();
    let mut names = header.iter().map(String::from);
    let axis = names
        .next()
        .ok_or_else(|| CliError::BadInput("csv: missing header".into()))?;
    let columns: Vec<String> = names.collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut vals = rec.iter().map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::BadInput(format!("csv: {s:?} is not a number")))
        });
        let axis_value = vals
            .next()
            .ok_or_else(|| CliError::BadInput("csv: empty record".into()))??;
        let values = vals.collect::<CliResult<Vec<f64>>>()?;
        if values.len() != columns.len() {
            return Err(CliError::BadInput("csv: record length does not match header".into()));
        }
        rows.push(ResultRow { axis_value, values });
    }
    Ok(SweepTable { axis, columns, rows })
}

pub fn write_json<W: Write>(table: &SweepTable, mut out: W) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, table)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_table<W: Write>(table: &SweepTable, format: Format, out: W) -> CliResult<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_json(table, out),
    }
}

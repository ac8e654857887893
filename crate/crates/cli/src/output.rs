use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    w.flush()
}

/// Writes flat records with a header row taken from the field names.
pub fn write_csv<T: Serialize>(w: &mut dyn Write, rows: &[T]) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()
}

/// JSON gets `json` (an object or array); CSV gets the flat `rows`.
pub fn emit<J, R>(out: Option<&Path>, format: Format, json: &J, rows: &[R]) -> io::Result<()>
where
    J: Serialize + ?Sized,
    R: Serialize,
{
    let mut w = sink(out)?;
    match format {
        Format::Json => write_json(&mut *w, json),
        Format::Csv => write_csv(&mut *w, rows),
    }
}

/// Flat records: a JSON array or CSV rows.
pub fn emit_rows<R: Serialize>(out: Option<&Path>, format: Format, rows: &[R]) -> io::Result<()> {
    emit(out, format, rows, rows)
}

/// A single flat record: a JSON object or one CSV row.
pub fn emit_one<R: Serialize>(out: Option<&Path>, format: Format, row: &R) -> io::Result<()> {
    emit(out, format, row, std::slice::from_ref(row))
}

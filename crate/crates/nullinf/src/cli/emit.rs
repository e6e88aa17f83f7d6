//! CSV and JSON writers.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::table::{format_f64, ResultSet, Table, SCHEMA_VERSION};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// JSON formatter printing every float with 17 significant digits.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json_string(results: &ResultSet) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    results.serialize(&mut ser).map_err(|e| Error::Io(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn from_json_str(text: &str) -> Result<ResultSet> {
    let r: ResultSet = serde_json::from_str(text).map_err(|e| Error::Io(format!("malformed result file: {e}")))?;
    if r.schema_version != SCHEMA_VERSION {
        return Err(Error::Io(format!("schema version {} is not {SCHEMA_VERSION}", r.schema_version)));
    }
    Ok(r)
}

/// A table as CSV with a leading `schema_version` column; header only when empty.
pub fn to_csv_string(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(std::iter::once("schema_version").chain(table.columns.iter().map(String::as_str))).map_err(io_err)?;
    let version = SCHEMA_VERSION.to_string();
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        w.write_record(std::iter::once(&version).chain(&cells)).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Write `results` under `dir`: `<stem>.json`, or `<stem>_<table>.csv` per
/// table plus `<stem>_summary.csv`. Returns the paths in write order.
pub fn emit(results: &ResultSet, format: Format, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    match format {
        Format::Json => Ok(vec![write(dir.join(format!("{stem}.json")), &to_json_string(results)?)?]),
        Format::Csv => {
            let mut out = Vec::with_capacity(results.tables.len() + 1);
            for t in results.tables.iter().chain(std::iter::once(&results.summary_table())) {
                out.push(write(dir.join(format!("{stem}_{}.csv", t.name)), &to_csv_string(t)?)?);
            }
            Ok(out)
        }
    }
}

//! Table serialization. CSV files open with a version comment and a fixed
//! header; JSON is an array of flat objects with the same field names.
//! Floats are written in shortest round-trip form, missing values as an
//! empty CSV field or `null`.

use std::fs;
use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};

pub const VERSION_LINE: &str = concat!("# relengine v", env!("CARGO_PKG_VERSION"));

/// A table row with a fixed column order.
pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
}

pub fn render<R: Row>(rows: &[R], format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            writeln!(buf, "{VERSION_LINE}")?;
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(buf);
            let internal = |e: csv::Error| CliError::Internal(e.to_string());
            writer.write_record(R::HEADER).map_err(internal)?;
            for row in rows {
                writer.serialize(row).map_err(internal)?;
            }
            writer.into_inner().map_err(|e| CliError::Internal(e.to_string()))
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(rows).map_err(|e| CliError::Internal(e.to_string()))?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// Writes to `out`, or to standard output when it is absent or `-`.
pub fn emit(bytes: &[u8], out: Option<&str>) -> CliResult<()> {
    match out {
        None | Some("-") => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)?;
            lock.flush()?;
        }
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Internal(format!("writing `{path}`: {e}")))?,
    }
    Ok(())
}

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

/// Rows of already formatted cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize> {
    version: &'a str,
    config: &'a C,
    result: &'a Value,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes the report; JSON wraps the result with the version and resolved
/// config, CSV carries them on a leading comment line.
pub fn write_report<C: Serialize>(
    out: &mut dyn Write,
    format: Format,
    config: &C,
    result: &Value,
    table: &Table,
) -> Result<()> {
    match format {
        Format::Json => {
            let envelope = Envelope {
                version: VERSION,
                config,
                result,
            };
            serde_json::to_writer_pretty(&mut *out, &envelope)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "# hardy-bap {VERSION} config={}", serde_json::to_string(config)?)?;
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(&table.header)?;
            for row in &table.rows {
                writer.write_record(row)?;
            }
            writer.flush()?;
        }
    }
    Ok(())
}

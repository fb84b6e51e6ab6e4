use std::io::Write;
use std::path::Path;

use super::SimReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = ["ebn0_db", "trials", "ser", "ber", "bler", "pc", "lambda", "seed"];

/// One data row as read back from a report file.
#[derive(Debug, Clone, Copy, PartialEq, serde::Deserialize)]
pub struct CsvRow {
    pub ebn0_db: f64,
    pub trials: u64,
    pub ser: f64,
    pub ber: f64,
    pub bler: f64,
    pub pc: f64,
    pub lambda: f64,
    pub seed: u64,
}

/// Writes `#` metadata lines, the header and one row per point. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_csv<W: Write>(report: &SimReport, mut out: W) -> Result<()> {
    let meta = format!(
        "# rsscma {}\n# scenario={}\n# config_sha256={}\n# ebn0 counts information bits only\n",
        env!("CARGO_PKG_VERSION"),
        report.scenario.as_str(),
        report.config_hash
    );
    out.write_all(meta.as_bytes())
        .map_err(|e| Error::io("<csv output>", e))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for p in &report.points {
        w.write_record([
            p.ebn0_db.to_string(),
            p.trials.to_string(),
            p.ser.to_string(),
            p.ber.to_string(),
            p.bler.to_string(),
            p.pc.to_string(),
            p.lambda.to_string(),
            p.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn emit_csv(report: &SimReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(report, std::io::BufWriter::new(file))
}

/// Reads the data rows of a report, skipping metadata lines.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let headers = r.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!("unexpected CSV header {headers:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

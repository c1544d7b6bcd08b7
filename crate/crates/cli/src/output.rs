use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use loqc::format::significant;

use crate::error::{CliError, CliResult};

/// Digits used for every number written to a CSV file.
pub const CSV_DIGITS: usize = 12;

pub fn num(x: f64) -> String {
    significant(x, CSV_DIGITS)
}

/// Creates `path` and hands a buffered writer to `fill`; any I/O failure maps
/// to the unwritable-output error for that path.
pub fn write_file(path: &Path, fill: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::output(path, e))?;
    let mut out = BufWriter::new(file);
    fill(&mut out).and_then(|_| out.flush()).map_err(|e| CliError::output(path, e))
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    write_file(path, |w| writeln!(w, "{text}"))
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    write_file(path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(header)?;
        for row in rows {
            csv.write_record(row)?;
        }
        csv.flush()
    })
}

/// `report.json` → `report.<suffix>`, next to the report.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_names() {
        assert_eq!(sibling(Path::new("out/run.json"), "outcomes.csv"), PathBuf::from("out/run.outcomes.csv"));
        assert_eq!(sibling(Path::new("run"), "outcomes.csv"), PathBuf::from("run.outcomes.csv"));
    }

    #[test]
    fn numbers_have_twelve_digits() {
        assert_eq!(num(0.25), "0.250000000000");
    }
}

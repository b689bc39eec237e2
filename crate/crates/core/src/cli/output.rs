use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::CliError;

/// Plain decimal with 9 significant digits; zero prints as `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // round once in scientific form so the exponent reflects any carry
    let sci = format!("{x:.8e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("formatted float has an exponent");
    let decimals = (8 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

pub(crate) fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

pub(crate) fn finish(
    path: &Path,
    mut writer: csv::Writer<BufWriter<File>>,
) -> Result<PathBuf, CliError> {
    writer.flush().map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    let mut file = File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

//! File formats: profile documents, survey and official-results CSVs,
//! dataset conversion, and JSON or flat-table reports.

mod convert;
mod profile_doc;
mod report;
mod survey_csv;

use std::io::Write;
use std::path::Path;

pub use convert::*;
pub use profile_doc::*;
pub use report::*;
pub use survey_csv::*;

use crate::error::{Error, Result};

/// Writes `contents` to a temporary file next to `path`, then renames it
/// over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

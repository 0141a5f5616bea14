use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use krausforge::model::{bundled_model, load_model, QuantumSystem};
use tempfile::NamedTempFile;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Bad input data, unreadable or unwritable paths, or numerical domain errors.
    Validation(String),
    /// Checks ran and at least one failed.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant failure: {m}"),
        }
    }
}

impl From<krausforge::Error> for CliError {
    fn from(e: krausforge::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Fails unless `path` can be created or replaced as a regular file.
pub fn check_output(path: &Path) -> CliResult<()> {
    if path.is_dir() {
        return Err(CliError::Validation(format!(
            "output path {} is a directory",
            path.display()
        )));
    }
    let dir = parent_dir(path);
    if !dir.is_dir() {
        return Err(CliError::Validation(format!(
            "output directory {} does not exist",
            dir.display()
        )));
    }
    Ok(())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let io_err =
        |e: std::io::Error| CliError::Validation(format!("writing {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(parent_dir(path)).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Reads and validates a model, or returns the bundled one.
pub fn read_model(path: Option<&Path>) -> CliResult<QuantumSystem> {
    let Some(path) = path else {
        return Ok(bundled_model());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("reading {}: {e}", path.display())))?;
    load_model(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

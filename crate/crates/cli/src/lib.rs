//! Command implementations behind the `motionfi` binary.

pub mod commands;
pub mod config;
pub mod pipeline;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::PipelineConfig;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Infeasible,
    Numeric,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Input,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Infeasible => 3,
            ErrorKind::Numeric => 4,
        }
    }

    fn context(self, path: &Path) -> Self {
        let shown = path.display().to_string();
        if self.message.contains(&shown) {
            return self;
        }
        Self {
            message: format!("{}: {}", path.display(), self.message),
            ..self
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<motionfi::Error> for CliError {
    fn from(e: motionfi::Error) -> Self {
        use motionfi::Error as E;
        let kind = match &e {
            E::Infeasible { .. } => ErrorKind::Infeasible,
            E::DegenerateImpedance | E::DegenerateRange | E::Domain(_) | E::Training(_) => ErrorKind::Numeric,
            _ => ErrorKind::Input,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Files directly inside `dir` whose names end with `suffix`, sorted by name.
pub fn list_files(dir: &Path, suffix: &str, exclude: &[&str]) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::input(e.to_string()))?.path();
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if path.is_file() && name.ends_with(suffix) && !exclude.iter().any(|x| name.ends_with(x)) {
            out.push(path);
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(CliError::input(format!("no *{suffix} files in {}", dir.display())));
    }
    Ok(out)
}

/// File name up to the first dot.
pub fn stem(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    name.split('.').next().unwrap_or_default().to_string()
}

/// Write `value` as JSON to `out`, or to stdout when `out` is `None`.
pub fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    match out {
        Some(p) => Ok(motionfi::io::write_json(p, value)?),
        None => {
            let bytes = motionfi::io::to_json(value)?;
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::input(e.to_string()))
        }
    }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))
}

pub(crate) trait WithPath<T> {
    fn at(self, path: &Path) -> CliResult<T>;
}

impl<T, E: Into<CliError>> WithPath<T> for std::result::Result<T, E> {
    fn at(self, path: &Path) -> CliResult<T> {
        self.map_err(|e| e.into().context(path))
    }
}

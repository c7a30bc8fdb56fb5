use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}:{line}:{column}: invalid JSON: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{}: schema error: {msg}", path.display())]
    Schema { path: PathBuf, msg: String },
    #[error("{}: invalid curve: {msg}", path.display())]
    SpecInvalid { path: PathBuf, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {msg}", path.display())]
    Csv { path: PathBuf, msg: String },
    #[error(transparent)]
    Domain(#[from] bikefront::Error),
}

impl CliError {
    pub fn from_json(path: &Path, e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        match e.classify() {
            Category::Syntax | Category::Eof => CliError::Parse {
                path: path.to_path_buf(),
                line: e.line(),
                column: e.column(),
                msg: e.to_string(),
            },
            Category::Data => CliError::Schema {
                path: path.to_path_buf(),
                msg: e.to_string(),
            },
            Category::Io => CliError::Io {
                path: path.to_path_buf(),
                source: e.into(),
            },
        }
    }

    /// 1 for mathematical failures on valid input, 2 for bad input or I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

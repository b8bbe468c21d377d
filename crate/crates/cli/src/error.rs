use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("certification error: {0}")]
    Certification(submat::Error),
    #[error("{0}")]
    Library(#[from] submat::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Certification(_) | CliError::Library(_) => exit::USAGE,
            CliError::Parse { .. } | CliError::Io { .. } => exit::IO,
        }
    }

    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

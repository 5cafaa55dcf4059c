use std::path::PathBuf;

use wpd_core::ErrorCategory;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wpd_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_RANGE: i32 = 4;
pub const EXIT_IO: i32 = 5;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.category() {
                ErrorCategory::Parse => EXIT_PARSE,
                ErrorCategory::Range => EXIT_RANGE,
                ErrorCategory::Invalid => EXIT_OTHER,
            },
            CliError::Io { .. } => EXIT_IO,
            CliError::Json { .. } => EXIT_PARSE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

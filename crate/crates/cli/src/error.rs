use thiserror::Error;

/// Everything that ends a run with exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed bundle: {0}")]
    Parse(String),

    #[error("invalid bundle: {0}")]
    Invalid(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Library(#[from] coinrt::Error),
}

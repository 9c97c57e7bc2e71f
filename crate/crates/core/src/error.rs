use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid architecture: {0}")]
    InvalidArch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("format error in {path}: {detail}")]
    Format { path: PathBuf, detail: String },

    #[error("count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    #[error("oracle unavailable: dataset {0} carries no oracle difficulty")]
    OracleUnavailable(String),

    #[error("missing score for example id {0}")]
    MissingScore(u64),

    #[error("training diverged: {0}")]
    Diverged(String),

    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("result store: {0}")]
    Store(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier, used in machine-readable CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArch(_) => "invalid_arch",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::OutOfRange { .. } => "out_of_range",
            Error::EmptyDataset(_) => "empty_dataset",
            Error::Format { .. } => "format",
            Error::CountMismatch { .. } => "count_mismatch",
            Error::OracleUnavailable(_) => "oracle_unavailable",
            Error::MissingScore(_) => "missing_score",
            Error::Diverged(_) => "diverged",
            Error::Undefined(_) => "undefined",
            Error::Config(_) => "config",
            Error::Store(_) => "store",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

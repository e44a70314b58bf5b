use std::time::Duration;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] admix_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed constraint file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("time budget of {0:?} exceeded")]
    Budget(Duration),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// 2 for bad input, 3 for refused or abandoned work.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Core(admix_core::Error::SizeCap { .. } | admix_core::Error::Cancelled) => 3,
            Error::Budget(_) => 3,
            _ => 2,
        }
    }
}

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("unknown band `{0}`")]
    UnknownBand(String),
    #[error("band `{0}` is not purchased")]
    BandNotPurchased(String),
    #[error("no purchased bands in scenario")]
    NoPurchasedBands,
    #[error("market has no bands")]
    EmptyMarket,
    #[error("brute-force selection supports at most {max} bands (got {got})")]
    TooManyBands { max: usize, got: usize },
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },
    // The cause is part of the message rather than a `source`, so chained
    // reports do not print it twice.
    #[error("cannot read {path}: {cause}")]
    Io { path: String, cause: std::io::Error },
    #[error("cannot parse {path}: {cause}")]
    Parse {
        path: String,
        cause: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input files or parameters rather than numerics.
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::Numerics(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

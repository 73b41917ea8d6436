use thiserror::Error;

use crate::poly::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic mismatch: expected {expected}, found {found}")]
    CharacteristicMismatch { expected: u64, found: u64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("polynomial mentions column {col} but only columns 1..{n} are allowed")]
    ColumnOutOfRange { col: usize, n: usize },

    #[error("the leading {0} columns are linearly dependent")]
    DependentColumns(usize),

    #[error("the zero functional has no factorization")]
    ZeroFunctional,

    #[error("operation requires a diagonal group")]
    NotDiagonal,

    #[error("{what} is not defined in characteristic {characteristic}")]
    UnsupportedCharacteristic { what: String, characteristic: u64 },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group closure exceeds {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("{what} exceeded the cap of {limit}")]
    CapExceeded { what: &'static str, limit: usize },

    #[error("expected a homogeneous polynomial")]
    NotHomogeneous,

    #[error("expected a nonzero polynomial")]
    ZeroPolynomial,

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Cap exhaustion is reported as "indeterminate", never as a negative answer.
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::GroupTooLarge { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

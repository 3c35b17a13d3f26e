use thiserror::Error;

use crate::hydro::HydroState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A non-finite nodal value appeared during a march. `last_valid` holds
    /// the last state that was fully finite, when one is available.
    #[error("solver blow-up at t = {time}: {detail}")]
    BlowUp {
        time: f64,
        detail: String,
        last_valid: Option<Box<HydroState>>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed snapshot: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_blow_up(&self) -> bool {
        matches!(self, Error::BlowUp { .. })
    }
}

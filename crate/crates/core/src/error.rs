use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("degenerate spectrum (|lambda+ - lambda-| below tolerance); use the matrix-power route c_series")]
    DegenerateSpectrum,

    #[error("channel not invertible at step {step}: c_(L-1) vanishes")]
    SingularStep { step: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("series is empty or too short")]
    EmptySeries,

    #[error("degenerate probes: the two input states coincide")]
    DegenerateProbes,

    #[error("no closed-form boundary for phi = {0}; only phi = 0 and phi = pi have one")]
    UnsupportedPhase(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

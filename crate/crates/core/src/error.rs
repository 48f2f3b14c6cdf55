use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u32),
    #[error("unsupported extension degree {0} (expected 1, 2 or 4)")]
    UnsupportedDegree(usize),
    #[error("precision m = {0} is out of range")]
    BadPrecision(u32),
    #[error("precision exhausted: valuation {val} reached the guard at m = {m}")]
    PrecisionExhausted { val: u32, m: u32 },
    #[error("lattice is not contained in the claimed outer lattice")]
    NotContained,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero element has no Teichmuller lift")]
    ZeroElement,
    #[error("unsupported vertex combination: type {from} to type {to}")]
    UnsupportedNeighbors { from: u8, to: u8 },
    #[error("parameters outside the supported envelope: {0}")]
    Envelope(String),
}

pub type Result<T> = std::result::Result<T, StrataError>;

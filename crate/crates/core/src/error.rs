use core::fmt;

/// Error type shared by every numeric operation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument left the mathematical domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// The intrinsic time fell inside the epsilon ball around the observed
    /// time while the policy forbids it.
    Singularity { s: f64, observed_time: f64 },
    /// The integration produced a NaN or infinite state.
    NonFinite { step: usize },
    /// The metric failed to be symmetric positive definite at an evaluation
    /// point.
    Metric { detail: &'static str },
    /// Inconsistent inputs (mismatched grids, dimensions, ...).
    Invalid { detail: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => {
                write!(f, "domain error: {what} (got {value})")
            }
            Error::Singularity { s, observed_time } => write!(
                f,
                "intrinsic time {s} is inside the epsilon ball around observed time {observed_time}"
            ),
            Error::NonFinite { step } => {
                write!(f, "non-finite state produced at step {step}")
            }
            Error::Metric { detail } => write!(f, "metric error: {detail}"),
            Error::Invalid { detail } => write!(f, "invalid input: {detail}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

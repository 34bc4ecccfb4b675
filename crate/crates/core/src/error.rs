//! Error type shared across the crate.

use std::fmt;

/// Errors produced by constructors, configuration loading, and the few
/// operations with genuine failure modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A value declared as a probability fell outside [0, 1] (or was not finite).
    InvalidProbability { name: String, value: f64 },
    /// A 4-vector could not be accepted as a probability distribution.
    InvalidDistribution(String),
    /// KL divergence was requested against a target with an empty bin.
    TargetHasZeroEntry { index: usize },
    /// An empirical distribution with zero samples was passed where counts are required.
    EmptySample,
    /// A sample or bitstream of length zero was requested.
    ZeroCount,
    /// An optimizer or harness configuration failed validation.
    InvalidConfig(String),
    /// A device configuration document failed to parse or validate.
    DeviceConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidProbability { name, value } => {
                write!(f, "{name} = {value} is not a probability in [0, 1]")
            }
            Error::InvalidDistribution(reason) => write!(f, "invalid distribution: {reason}"),
            Error::TargetHasZeroEntry { index } => {
                write!(f, "target distribution has a zero entry at outcome {index}; KL divergence against it is undefined")
            }
            Error::EmptySample => write!(f, "empirical distribution holds no samples"),
            Error::ZeroCount => write!(f, "requested count must be at least 1"),
            Error::InvalidConfig(reason) => write!(f, "invalid configuration: {reason}"),
            Error::DeviceConfig(reason) => write!(f, "device configuration error: {reason}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { name: name.to_string(), value })
    }
}

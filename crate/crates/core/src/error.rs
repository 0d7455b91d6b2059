use thiserror::Error;

/// Errors raised by the numeric kernels, the comparison routines and the
/// frequentist baselines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The arguments are valid but the requested backend cannot evaluate them.
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// A numeric procedure broke down (degenerate recurrence, non-convergence).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A size guard was tripped before running an unbounded computation.
    #[error("{name} = {value} exceeds the supported limit of {limit}")]
    TooLarge {
        name: &'static str,
        value: u64,
        limit: u64,
    },

    /// A stateful object was used after it stopped accepting input.
    #[error("state error: {0}")]
    State(String),

    /// No configuration satisfies the requested constraints below the cap.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Randomized parameter generation gave up.
    #[error("generation error: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

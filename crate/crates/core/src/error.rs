use thiserror::Error;

/// Errors raised by the counting and evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The pivot passed to a derivative-chain step is not an exponent of the signomial.
    #[error("pivot exponent {0} is not an exponent of the signomial")]
    PivotNotFound(f64),

    /// A sign could not be certified within the available evaluation precision.
    #[error("tolerance failure: {0}")]
    Tolerance(String),

    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An integer result does not fit the output type.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A series parameter makes the bounding series divergent.
    #[error("divergent tail sum: exponent {exponent} is not > 1")]
    Divergence { exponent: String },

    /// An input value is outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A finite generator ran out before the requested precision was reached.
    #[error("precision unavailable: {0}")]
    PrecisionUnavailable(String),

    /// Enclosure refinement hit the configured budget without resolving an ambiguity.
    #[error("precision exhausted: could not certify below eps budget {budget}")]
    PrecisionExhausted { budget: String },

    /// A sequence was queried past its declared horizon.
    #[error("horizon exhausted: index {index} not below horizon {horizon}")]
    HorizonExhausted { index: usize, horizon: usize },

    /// Not enough partial quotients are available for the request.
    #[error("insufficient quotients: need {needed}, have {available}")]
    InsufficientQuotients { needed: usize, available: usize },

    /// A level union failed its disjointness or gap verification.
    #[error("inadmissible M: {0}")]
    InadmissibleM(String),

    /// A refinement step could not populate every parent interval.
    #[error("refinement failed: {0}")]
    RefinementFailed(String),

    /// An intermediate integer exceeded the IRRATEX_MAX_BITS cap.
    #[error("bit budget exceeded: needed about {needed} bits, cap is {cap}")]
    BitBudgetExceeded { needed: u64, cap: u64 },

    /// Arithmetic overflow in a fixed-width quantity (gap-sequence exponents).
    #[error("overflow: {0}")]
    Overflow(String),

    /// Malformed textual input (CLI descriptors, CSV rows).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

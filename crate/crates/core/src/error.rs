use alloc::string::String;

/// Errors raised by the analysis core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter or input failed validation before any computation.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Input contains a NaN or infinity.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// Input is shorter than the analysis requires.
    #[error("{what} has length {len}, at least {min} required")]
    TooShort {
        what: &'static str,
        len: usize,
        min: usize,
    },

    /// A scale exceeds the cap derived from the input length.
    #[error("scale {scale} exceeds the limit {limit} (a quarter of the input length)")]
    ScaleTooLarge { scale: usize, limit: usize },

    /// A zero segment fluctuation makes a non-positive moment undefined.
    #[error("degenerate segment at scale {scale}: zero fluctuation with q = {q}")]
    DegenerateSegment { scale: f64, q: f64 },

    /// A fluctuation value that must be logged is zero, negative or NaN.
    #[error("non-positive fluctuation F_q(n) = {value} at scale {scale}, q = {q}")]
    NonPositiveFluctuation { scale: usize, q: f64, value: f64 },

    /// Index outside the domain on which a quantity is defined.
    #[error("index {index} outside the defined range [{first}, {last}]")]
    OutOfDomain {
        index: usize,
        first: usize,
        last: usize,
    },

    /// Two grids that must be aligned are not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    /// True for failures caused by the data itself rather than by the request.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSegment { .. } | Error::NonPositiveFluctuation { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::Invalid(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Step-size control could not meet the requested local tolerance.
    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("adaptive quadrature did not converge: {0}")]
    Quadrature(String),

    /// The miss function does not change sign across the search interval.
    #[error(
        "bracket failure for k = {k}: theta(1) - k*pi_p is {miss_lower:e} at lambda = {lower} \
         and {miss_upper:e} at lambda = {upper}"
    )]
    Bracket {
        k: usize,
        lower: f64,
        upper: f64,
        miss_lower: f64,
        miss_upper: f64,
    },

    #[error("miss function not monotone near lambda = {lambda}")]
    NonMonotone { lambda: f64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    /// True for errors caused by bad input rather than by a numerical breakdown.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::InvalidConfig(_) | Error::Format(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

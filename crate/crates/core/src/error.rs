use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a special function.
    #[error("{function}: argument {argument} outside the supported domain")]
    Domain {
        function: &'static str,
        argument: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Adaptive quadrature could not meet its tolerance.
    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimated error {error:e} > tolerance {tolerance:e}"
    )]
    Convergence {
        lower: f64,
        upper: f64,
        error: f64,
        tolerance: f64,
    },

    /// The power search could not bracket the requested outage level.
    #[error(
        "target outage {target:e} not bracketed in [{lower_db}, {upper_db}] dB: P_out = {p_lower:e} at the lower edge, {p_upper:e} at the upper edge"
    )]
    BracketNotFound {
        target: f64,
        lower_db: f64,
        upper_db: f64,
        p_lower: f64,
        p_upper: f64,
    },
}

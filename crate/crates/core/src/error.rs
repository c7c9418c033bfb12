use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its documented invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters are finite but the derived quantity overflowed.
    #[error("parameter range error: {0}")]
    ParameterRange(String),

    /// Real-axis evaluation came within the guard distance of a pole.
    #[error("evaluation at dk = {dk} is within {distance:e} of pole {pole}")]
    PoleProximity { dk: f64, pole: String, distance: f64 },

    /// Adaptive quadrature exhausted its budget before reaching the tolerance.
    #[error("quadrature did not converge: best estimate {best} with error {error_estimate:e} (tolerance {tolerance:e})")]
    Accuracy {
        best: f64,
        error_estimate: f64,
        tolerance: f64,
    },

    /// The residue oracle refuses integrands beyond its multiplicity guard.
    #[error("residue oracle unavailable: {0}")]
    OracleUnavailable(String),

    /// The spectrum to normalize has zero norm.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// Two independent routes to the same probability disagree.
    #[error("consistency violation: direct sum {direct} vs closed form {closed} (|diff| = {diff:e})")]
    Consistency { direct: f64, closed: f64, diff: f64 },

    /// The protocol can never succeed (one of the transitions is decoupled).
    #[error("feedback never terminates: {0}")]
    NonTerminating(String),

    #[error("quasi-mode search failed: {0}")]
    Search(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ParameterRange(_)
                | Error::PoleProximity { .. }
                | Error::Accuracy { .. }
                | Error::OracleUnavailable(_)
                | Error::DegenerateSpectrum(_)
                | Error::Consistency { .. }
                | Error::NonTerminating(_)
                | Error::Search(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

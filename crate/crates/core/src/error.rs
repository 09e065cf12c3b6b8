use thiserror::Error;

/// Errors raised by the solver and the verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {found} values, grid expects {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value at site {site}")]
    NonFinite { site: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("parameter `{name}` out of range: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("operation requires a {0}-dimensional grid")]
    Dimension(usize),

    #[error("edge mass fraction {fraction:.3e} exceeds {limit:.1e}")]
    EdgeMass { fraction: f64, limit: f64 },

    #[error("zero field has no direction")]
    ZeroField,

    #[error("malformed quadruple ({r}, {big_r}, {a}, {big_a}): need r < R and a < A")]
    MalformedQuadruple { r: f64, big_r: f64, a: f64, big_a: f64 },

    #[error("field is not symmetric-decreasing along the site order (site {site})")]
    NotSymmetric { site: usize },

    #[error("inadmissible regime: {0}")]
    Regime(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_param(ok: bool, name: &'static str, reason: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter { name, reason: reason() })
    }
}

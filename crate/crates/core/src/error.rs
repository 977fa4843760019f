use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("alpha out of range: alpha = {alpha} with d = {dimension}; valid window is {window}")]
    AlphaOutOfRange {
        alpha: f64,
        dimension: u32,
        window: String,
    },

    #[error("unsupported dimension d = {0}; expected 1, 2 or 3")]
    Dimension(u32),

    #[error("non-integrable tail: moment of order {moment} diverges (decay exponent {decay}, dimension {dimension})")]
    NonIntegrableTail {
        moment: u32,
        decay: f64,
        dimension: u32,
    },

    #[error("tail too heavy to certify: truncation radius would exceed {limit:e}")]
    TailNotCertifiable { limit: f64 },

    #[error("non-finite integrand value {value} at node {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("moment does not converge: {0}")]
    MomentDiverges(String),

    #[error("entropy undefined on window: {0}")]
    EntropyUndefined(String),

    #[error("criterion undefined: {0}")]
    CriterionUndefined(String),

    #[error("no threshold in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoThreshold {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("not converged after {iterations} iterations (last gap {gap:e})")]
    NotConverged { iterations: usize, gap: f64 },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("tail dominance: {0}")]
    TailDominance(String),

    #[error("inadmissible perturbation: {0}")]
    Inadmissible(String),

    #[error("missing derivative information: {0}")]
    NoDerivative(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}

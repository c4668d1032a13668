use thiserror::Error;

/// Errors raised by the simulation kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("magnetic field must be non-zero")]
    ZeroField,

    #[error("invalid grid: {0}")]
    BadGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("grid under-resolves the state: {0}")]
    UnderResolved(String),

    #[error("sampled state has norm {norm:.6e} before renormalization (tolerance 1e-3); grid truncates or under-samples it")]
    TruncatedState { norm: f64 },

    #[error("superposition needs at least one component with non-zero weight")]
    EmptySuperposition,

    #[error("Chebyshev order cap {cap} reached with |alpha_M| = {tail:.3e}")]
    OrderCapExceeded { cap: usize, tail: f64 },

    #[error("boundary leak at step {step} (t = {t:.6}): edge amplitude ratio {ratio:.3e} exceeds {limit:.1e}")]
    BoundaryLeak {
        step: usize,
        t: f64,
        ratio: f64,
        limit: f64,
    },

    #[error("norm drift at step {step} (t = {t:.6}): |norm - 1| = {drift:.3e} exceeds {limit:.1e}")]
    NormDrift {
        step: usize,
        t: f64,
        drift: f64,
        limit: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for the run-time health aborts of an evolution (as opposed to bad input).
    pub fn is_numerical_health(&self) -> bool {
        matches!(
            self,
            Error::NonFinite(_)
                | Error::BoundaryLeak { .. }
                | Error::NormDrift { .. }
                | Error::OrderCapExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

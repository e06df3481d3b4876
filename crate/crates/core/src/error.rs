use thiserror::Error;

/// Errors raised by samplers, analytic routines and the Monte Carlo engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dice length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sampler stalled after {attempts} attempts without acceptance ({context})")]
    SamplerStall { attempts: u64, context: String },

    #[error(
        "covariance is not positive definite: leading minor of order {order} has pivot {pivot:e}"
    )]
    NotPositiveDefinite { order: usize, pivot: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero margin on pair {pair}: n must be odd to rule out ties")]
    ParityViolation { pair: usize },

    #[error("tournament on {vertices} vertices exceeds the exhaustive search limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },

    #[error("tie between dice {first} and {second}")]
    Tie { first: usize, second: usize },

    #[error("singular covariance at rho = {rho}")]
    Singular { rho: f64 },

    #[error("acceptance rate {observed:e} below floor {floor:e} after {probe} probe trials")]
    AcceptanceTooLow {
        observed: f64,
        floor: f64,
        probe: u64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

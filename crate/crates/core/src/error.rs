use thiserror::Error;

/// Errors raised anywhere in the pricing pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("basis cannot dominate the gain at {point:?} (gain {gain})")]
    BasisInsufficient { point: Vec<f64>, gain: f64 },

    #[error("cutting plane hit the cut limit ({cuts}) with violation {violation:e}")]
    MaxCutsExceeded { cuts: usize, violation: f64 },

    #[error("invalid resolvent kernel: {0}")]
    InvalidKernel(String),

    #[error("root not bracketed: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    RootNotBracketed { f_lo: f64, f_hi: f64 },

    #[error("no boundary root on the section at t = {t}")]
    NoRoot { t: f64 },

    #[error("simplex internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

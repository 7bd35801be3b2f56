use thiserror::Error;

use crate::algebra::Signature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported signature Cl({p},{q}); only Cl(0,1) and Cl(3,0) are available")]
    UnsupportedSignature { p: u8, q: u8 },

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },

    #[error("grade {grade} out of range for {signature} (max {max})")]
    GradeOutOfRange {
        grade: usize,
        max: usize,
        signature: Signature,
    },

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("operation `{op}` is not defined for {signature}")]
    Unsupported { op: &'static str, signature: Signature },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("frame {index} has no central neighbours (series of {len} frames)")]
    BoundaryFrame { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical blow-up: norm drift {drift:e} at step {step}")]
    NumericalBlowup { drift: f64, step: usize },

    #[error("seed {index} lies outside the grid")]
    SeedOutsideGrid { index: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

//! Error type shared by every module of the engine.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bilinear form is degenerate")]
    SingularForm,

    #[error("input is not a 2-cocycle (max residual {residual})")]
    NonCocycleInput { residual: String },

    #[error("basis element {index} is not central")]
    NonCentralElement { index: usize },

    #[error("defect {{F_X, F_Y}} - F_[X,Y] is not constant for basis pair ({i}, {j})")]
    NonConstantDefect { i: usize, j: usize },

    #[error("characteristic form is not well defined at the probe point: {0}")]
    WellDefinednessWitness(String),

    #[error("state left the finite double range at step {step}")]
    NonFinite { step: usize },

    #[error("gauge loop is not periodic (endpoint residual {residual:e})")]
    NonPeriodic { residual: f64 },

    #[error("holonomies differ by {residual:e}; loops are not in the same fiber")]
    FiberMismatch { residual: f64 },

    #[error("representation mismatch: {0}")]
    Representation(String),

    #[error("loops are defined over different Lie algebras")]
    MismatchedAlgebra,

    #[error("sample requested at t = {t} which is not a grid node")]
    OffGrid { t: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

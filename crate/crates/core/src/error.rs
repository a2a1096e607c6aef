//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors surfaced by state construction, matrix checks, and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes prevent the requested matrix operation.
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    /// The operation requires a specific matrix dimension.
    #[error("expected a {expected}x{expected} matrix, got {got}x{got2}", got2 = .got)]
    WrongDimension { expected: usize, got: usize },

    /// A matrix that must be Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian (max |M - M†| entry = {0:.3e})")]
    NotHermitian(f64),

    /// A density matrix whose trace must be one is off by the given amount.
    #[error("trace differs from one by {0:.3e}")]
    TraceNotOne(f64),

    /// The matrix fails a density-matrix requirement (PSD, trace, Hermiticity).
    #[error("not a valid density matrix: {0}")]
    NotDensityMatrix(String),

    /// A state vector that must be normalized is not.
    #[error("state vector is not normalized (|1 - ⟨ψ|ψ⟩| = {0:.3e})")]
    NotNormalized(f64),

    /// Collective operators are only built for small ensembles.
    #[error("ensemble of {0} atoms exceeds the supported maximum of {1}")]
    EnsembleTooLarge(usize, usize),

    /// Superposition constants violate a normalization constraint.
    #[error("invalid superposition constants: {0}")]
    InvalidParams(String),

    /// The mean spin vector has a y-component, so the single-angle x-z
    /// rotation does not apply.
    #[error("mean spin vector leaves the x-z plane (⟨Jy⟩ = {0:.3e})")]
    MeanSpinOutOfPlane(f64),

    /// The mean spin vector vanishes; the rotated frame is undefined.
    #[error("mean spin vector is degenerate (norm below tolerance)")]
    DegenerateMeanSpin,

    /// A scalar argument lies outside the valid domain of the formula.
    #[error("argument outside valid domain: {0}")]
    DomainError(String),

    /// A sweep or CLI configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A quantity name does not match any report column.
    #[error("unknown quantity `{0}`")]
    UnknownQuantity(String),

    /// Reading or writing a data file failed.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    /// A data file does not match the expected schema.
    #[error("malformed data file: {0}")]
    MalformedFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The inputs violate a documented precondition.
    Precondition,
    /// The computation itself broke down (non-convergence, overflow).
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input")]
    Empty,

    #[error("lambda = {lambda} is numerically in the spectrum (condition estimate {condition:e})")]
    SingularResolvent { lambda: num_complex::Complex64, condition: f64 },
    #[error("matrix exponential overflow: |tA| = {norm:e} exceeds cap {cap:e}")]
    Overflow { norm: f64, cap: f64 },
    #[error("eigenvalue iteration did not converge")]
    ConvergenceFailure,
    #[error("an eigenvalue lies within {distance:e} of the contour")]
    ContourTooClose { distance: f64 },
    #[error("the disk around {center} of radius {radius} contains {count} eigenvalues, expected exactly one")]
    NotIsolated { center: num_complex::Complex64, radius: f64, count: usize },
    #[error("eigenvalue near {lambda} is not algebraically simple")]
    NotSimple { lambda: num_complex::Complex64 },
    #[error("no eigenvalue within tolerance of {lambda}")]
    NotAnEigenvalue { lambda: num_complex::Complex64 },

    #[error("value has imaginary part {imag:e} beyond tolerance")]
    NotReal { imag: f64 },
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("lambda = {lambda} lies in the spectrum of the perturbed operator (1 - <phi, R w> = {defect:e})")]
    PerturbedSpectrum { lambda: num_complex::Complex64, defect: f64 },
    #[error("vector is not an eigenvector for {lambda} (residual {residual:e})")]
    NotAnEigenvector { lambda: num_complex::Complex64, residual: f64 },
    #[error("<phi, v> + lambda0 = {value} lies in the spectrum of A")]
    SpectralCollision { value: num_complex::Complex64 },
    #[error("semigroup is not eventually strongly positive")]
    NotEventuallyStronglyPositive,
    #[error("pairing <phi, v> = {value:e} is not positive")]
    ZeroPairing { value: f64 },

    #[error("Neumann series diverges: |B R(lambda, A)| = {q} >= 1")]
    SeriesDiverges { q: f64 },
    #[error("perturbation norm {norm:e} is not below the admissible bound {bound:e}")]
    NormTooLarge { norm: f64, bound: f64 },
    #[error("lambda1 = {lambda1} does not exceed the spectral bound {bound}")]
    SpectralBoundViolation { lambda1: f64, bound: f64 },
    #[error("eigenvalue collision along the curve at s = {s} (gap {gap:e})")]
    EigenvalueCollision { s: f64, gap: f64 },

    #[error("parameters must be positive: {0}")]
    NonPositiveParameters(String),
    #[error("unsupported grid size {n}: {reason}")]
    BadGridSize { n: usize, reason: &'static str },
    #[error("epsilon = {epsilon} is outside (0, 1)")]
    EpsilonOutOfRange { epsilon: f64 },
    #[error("dimension {d} is below the minimum {min}")]
    DimensionTooSmall { d: usize, min: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Overflow { .. } | Error::ConvergenceFailure => ErrorClass::Numerical,
            _ => ErrorClass::Precondition,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NonFinite { .. } => "NonFinite",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Empty => "Empty",
            Error::SingularResolvent { .. } => "SingularResolvent",
            Error::Overflow { .. } => "Overflow",
            Error::ConvergenceFailure => "ConvergenceFailure",
            Error::ContourTooClose { .. } => "ContourTooClose",
            Error::NotIsolated { .. } => "NotIsolated",
            Error::NotSimple { .. } => "NotSimple",
            Error::NotAnEigenvalue { .. } => "NotAnEigenvalue",
            Error::NotReal { .. } => "NotReal",
            Error::NotDiagonal => "NotDiagonal",
            Error::NotSymmetric => "NotSymmetric",
            Error::PerturbedSpectrum { .. } => "PerturbedSpectrum",
            Error::NotAnEigenvector { .. } => "NotAnEigenvector",
            Error::SpectralCollision { .. } => "SpectralCollision",
            Error::NotEventuallyStronglyPositive => "NotEventuallyStronglyPositive",
            Error::ZeroPairing { .. } => "ZeroPairing",
            Error::SeriesDiverges { .. } => "SeriesDiverges",
            Error::NormTooLarge { .. } => "NormTooLarge",
            Error::SpectralBoundViolation { .. } => "SpectralBoundViolation",
            Error::EigenvalueCollision { .. } => "EigenvalueCollision",
            Error::NonPositiveParameters(_) => "NonPositiveParameters",
            Error::BadGridSize { .. } => "BadGridSize",
            Error::EpsilonOutOfRange { .. } => "EpsilonOutOfRange",
            Error::DimensionTooSmall { .. } => "DimensionTooSmall",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::Parse(_) => "ParseError",
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

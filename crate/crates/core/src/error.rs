use thiserror::Error;

/// The first property an operator set failed while being validated as a
/// measurement. Indices refer to positions in the input sequence.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetViolation {
    #[error("operator set is empty")]
    Empty,
    #[error("operator {0} is not a square matrix of the set dimension")]
    BadShape(usize),
    #[error("duplicate outcome label {0:?}")]
    DuplicateLabel(String),
    #[error("operator {0} is not Hermitian")]
    NotHermitian(usize),
    #[error("operator {0} is not positive semi-definite (min eigenvalue {1:e})")]
    NotPsd(usize, f64),
    #[error("operator {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("operators {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("operators do not resolve the identity (residual {residual:e})")]
    IncompleteResolution { residual: f64 },
}

impl SetViolation {
    /// Stable machine-readable name of the violated property.
    pub fn kind(&self) -> &'static str {
        match self {
            SetViolation::Empty => "Empty",
            SetViolation::BadShape(_) => "BadShape",
            SetViolation::DuplicateLabel(_) => "DuplicateLabel",
            SetViolation::NotHermitian(_) => "NotHermitian",
            SetViolation::NotPsd(..) => "NotPsd",
            SetViolation::NotIdempotent(_) => "NotIdempotent",
            SetViolation::NotOrthogonal(..) => "NotOrthogonal",
            SetViolation::IncompleteResolution { .. } => "IncompleteResolution",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("iterative decomposition did not converge")]
    ConvergenceFailure,
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("invalid measurement: {0}")]
    Validation(#[from] SetViolation),
    #[error("unknown outcome label {0:?}")]
    UnknownLabel(String),
    #[error("outcome {label:?} has zero probability ({probability:e})")]
    ZeroProbabilityOutcome { label: String, probability: f64 },
    #[error("states are parallel (|overlap| = {overlap})")]
    ParallelStates { overlap: f64 },
    #[error("parameter a = {a} is infeasible (maximum {max})")]
    InfeasibleParameter { a: f64, max: f64 },
    #[error("dilation check {identity} failed with residual {residual:e}")]
    DilationVerificationFailure { identity: &'static str, residual: f64 },
    #[error("orthonormal completion degenerated")]
    CompletionFailure,
}

impl Error {
    /// Stable machine-readable variant name, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NonFinite => "NonFinite",
            Error::NotHermitian => "NotHermitian",
            Error::NotPsd { .. } => "NotPsd",
            Error::ConvergenceFailure => "ConvergenceFailure",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::NotDensity(_) => "NotDensity",
            Error::Validation(v) => v.kind(),
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::ZeroProbabilityOutcome { .. } => "ZeroProbabilityOutcome",
            Error::ParallelStates { .. } => "ParallelStates",
            Error::InfeasibleParameter { .. } => "InfeasibleParameter",
            Error::DilationVerificationFailure { .. } => "DilationVerificationFailure",
            Error::CompletionFailure => "CompletionFailure",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

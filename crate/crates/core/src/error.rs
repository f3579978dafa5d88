use thiserror::Error;

/// Errors raised by operator algebra, divergences, Bayesian updates and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {re} + {im}i)")]
    InvalidTrace { re: f64, im: f64 },

    #[error(
        "negative power {exponent} of a singular operator (min eigenvalue {min_eigenvalue:e})"
    )]
    SingularPower { exponent: f64, min_eigenvalue: f64 },

    #[error("logarithm of a singular operator (min eigenvalue {min_eigenvalue:e})")]
    SingularLog { min_eigenvalue: f64 },

    #[error("dimension {dim} exceeds the configured limit {max_dim}")]
    DimensionOverflow { dim: usize, max_dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("POVM has no elements")]
    EmptyPovm,

    #[error("POVM element {index} is not positive (min eigenvalue {min_eigenvalue:e})")]
    PovmNotPositive { index: usize, min_eigenvalue: f64 },

    #[error("POVM elements do not sum to the identity (max deviation {deviation:e})")]
    NotComplete { deviation: f64 },

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("negative probability {value:e} for parameter {theta}, outcome {outcome}")]
    NegativeProbability {
        theta: usize,
        outcome: usize,
        value: f64,
    },

    #[error("outcome {outcome} has zero marginal probability under the prior")]
    ZeroMarginal { outcome: usize },

    #[error("state {index} is rank deficient where a negative power or logarithm is required")]
    SingularState { index: usize },

    #[error("alpha-mixture normalizer is not positive ({value:e})")]
    NonPositiveNormalizer { value: f64 },

    #[error("non-finite alpha {0}")]
    InvalidAlpha(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(
        "optimizer stopped after {iterations} iterations with gradient norm {gradient_norm:e}"
    )]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("at parameter {theta}, outcome {outcome}: {source}")]
    AtTerm {
        theta: usize,
        outcome: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("at outcome {outcome}: {source}")]
    AtOutcome {
        outcome: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("verification failed: {check} (alpha = {alpha}, estimator = {estimator}, outcome = {outcome}): {detail}")]
    VerificationFailure {
        check: String,
        alpha: f64,
        estimator: String,
        outcome: String,
        detail: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("cannot read {}: {source}", path.display())]
    ReadFile {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("relaxation parameter omega = {0} outside (0, 2)")]
    OmegaOutOfRange(f64),
    #[error("tau = {tau} must exceed dt/2 = {half_dt}")]
    TauTooSmall { tau: f64, half_dt: f64 },
    #[error("non-positive density {rho} at site {site}")]
    ZeroDensity { site: usize, rho: f64 },
    #[error("logistic solution is singular near t = {t_sing}")]
    SingularTime { t_sing: f64 },
    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("value {0} outside [-1, 1]")]
    OutOfRange(f64),
    #[error("ground amplitude is zero, ratio decoding undefined")]
    GroundAmplitudeZero,
    #[error("root isolation found {found} of {expected} eigenvalues")]
    ConvergenceFailure { found: usize, expected: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
    #[error("completed square not closed: residual {0}")]
    DiscriminantNotClosed(f64),
    #[error("adaptive quadrature did not reach tolerance (error estimate {0})")]
    QuadratureFailure(f64),
    #[error("coefficient C vanishes at x = {0}")]
    SingularCoefficient(f64),
    #[error("qubit index {index} out of range for {nqubits} qubits")]
    IndexOutOfRange { index: usize, nqubits: usize },
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical library layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MocError {
    #[error("L/h = {ratio} is not an integer")]
    NonIntegerRatio { ratio: f64 },
    #[error("grid has M = {m} intervals, need at least 4")]
    DegenerateGrid { m: usize },
    #[error("invalid grid parameter: {0}")]
    InvalidGrid(String),
    #[error("soliton frequency must lie in (0, 1), got {0}")]
    InvalidOmega(f64),
    #[error("leapfrog step needs the previous time level")]
    MissingHistory,
    #[error("error max-norm {norm:e} exceeded the blowup threshold at t = {time}")]
    ErrorBlowup { time: f64, norm: f64 },
    #[error("state does not conform to the grid: {0}")]
    Shape(String),
    #[error("operation not supported for scheme {0}")]
    UnsupportedScheme(String),
    #[error("dense eigensolve capped at M = {cap}, got M = {m}")]
    GridTooLarge { m: usize, cap: usize },
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("perturbative formula used outside its validity band: {0}")]
    ValidityViolation(String),
    #[error("(rho, lambda) is not an eigenpair: relative residual {0:e}")]
    NotAnEigenpair(f64),
    #[error("alpha range [{lo}, {hi}] leaves the real-beta window [sqrt(2), 3/2]")]
    RangeError { lo: f64, hi: f64 },
    #[error("averaging stencil [{lo}, {hi}] does not fit in {len} bins")]
    StencilOverflow { lo: i64, hi: i64, len: usize },
    #[error("norm series contains a non-positive value")]
    NonPositiveNorm,
    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("samples are not spaced by consecutive multiples of L")]
    IrregularSampling,
    #[error("degenerate least-squares fit: {0}")]
    DegenerateFit(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
}

pub type Result<T> = std::result::Result<T, MocError>;

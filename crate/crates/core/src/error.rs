use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("tau must lie in the upper half plane, got {tau}")]
    InvalidTau { tau: Complex64 },

    #[error("invalid truncation settings: {0}")]
    InvalidTruncation(String),

    /// The series hit `max_terms` before reaching its tail target. The partial
    /// value and its error estimate are still carried along.
    #[error("series did not converge after {terms} terms (value {value}, estimated error {estimate:e})")]
    TruncationNotConverged {
        value: Complex64,
        estimate: f64,
        terms: usize,
    },

    #[error("z = {z} lies within {distance:e} of the pole {pole}")]
    PoleProximity {
        z: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid function index ({i},{j}); (0,0) is not a function index")]
    InvalidIndex { i: u8, j: u8 },

    #[error("closed-form Laurent coefficients are only available for s <= 2, got s = {s}")]
    UnsupportedOrder { s: usize },

    #[error("contour radius {radius:e} is not below the nearest pole distance {pole_distance:e}")]
    RadiusTooLarge { radius: f64, pole_distance: f64 },

    #[error("({a},{b}) is not a pair of relatively prime positive integers")]
    NotCoprime { a: u64, b: u64 },

    #[error("case {case} is not admissible for (a,b) = ({a},{b}): both parity sums are even")]
    NotAdmissible { case: String, a: u64, b: u64 },

    #[error("classical identity {case_id} requires {requirement}, got (a,b) = ({a},{b})")]
    ParityViolation {
        case_id: u8,
        requirement: &'static str,
        a: u64,
        b: u64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

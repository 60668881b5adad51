use thiserror::Error;

/// Errors shared by every analysis layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("integrand is not numerically integrable over the requested range: {0}")]
    NonIntegrable(String),

    #[error("function with index {index} admits no asymptotic inverse (need index > 0)")]
    NotInvertible { index: f64 },

    #[error("tail window of {window} entries does not fit a prefix of length {len}")]
    WindowTooLarge { window: usize, len: usize },

    #[error("requested prefix {requested} exceeds stored prefix of length {len}")]
    PrefixExceeded { requested: usize, len: usize },

    #[error("counting query at {lambda:e} is below the prefix floor {floor:e}")]
    PrefixExhausted { lambda: f64, floor: f64 },

    #[error("counting function is bounded; cannot invert it into a divergent sequence")]
    NotDivergent,

    #[error("need at least {need} samples for windowed limits, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("weight functions are not asymptotically equal: |g1/g2 - 1| = {deviation:.4} at t = {at:e}")]
    NotAsymptoticallyEqual { deviation: f64, at: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("q-number overflow before reaching lambda_max (x = {x})")]
    Overflow { x: u64 },

    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("entries must be strictly ascending (violated at line {line})")]
    NotAscending { line: usize },

    #[error("input contains no usable entries")]
    EmptyInput,

    #[error("operation requires a {expected} sequence, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("sequence values are not sorted as required: {0}")]
    NotSorted(String),

    #[error("bad spec string `{spec}`: {message}")]
    BadSpec { spec: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn bad_spec(spec: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::BadSpec {
            spec: spec.into(),
            message: msg.into(),
        }
    }
}

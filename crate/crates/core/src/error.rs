use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} = {value} (limit {limit})")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    Index { index: usize, num_qubits: usize },

    /// A Walsh coefficient of the calibration is too close to zero for the
    /// matching correlator to be recovered.
    #[error("degenerate calibration: c_{label} = {value:e} (t = {label}, index {t}, tolerance {tolerance:e})")]
    DegenerateCalibration {
        t: usize,
        label: String,
        value: f64,
        tolerance: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

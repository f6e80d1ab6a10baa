use thiserror::Error;

use crate::automaton::SweepReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group model mismatch: {0} vs {1}")]
    ModelMismatch(String, String),

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("unsupported window: {0}")]
    UnsupportedWindow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("certificate violation: {0}")]
    CertificateViolation(String),

    #[error("configuration is not in the domain: {0}")]
    Domain(String),

    #[error("{module}: budget exceeded: {message}")]
    Budget { module: &'static str, message: String },

    #[error("cellular_automaton: sweep budget exceeded after {} of {} rules", .0.scanned, .0.total)]
    SweepBudget(Box<SweepReport>),

    #[error("element {0} is outside the approximation support")]
    Support(String),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("containment failed: {0}")]
    Containment(String),

    #[error("tail bound violated at gamma = {gamma}, d = {d}")]
    TailBound { gamma: String, d: u64 },

    #[error("line {line}: {message} (expected {expected})")]
    Parse {
        line: usize,
        message: String,
        expected: &'static str,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>, expected: &'static str) -> Self {
        Error::Parse {
            line,
            message: message.into(),
            expected,
        }
    }

    pub(crate) fn budget(module: &'static str, message: impl Into<String>) -> Self {
        Error::Budget {
            module,
            message: message.into(),
        }
    }
}

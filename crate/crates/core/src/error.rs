use thiserror::Error;

use crate::ops::Family;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator family mismatch: {left} vs {right}")]
    FamilyMismatch { left: Family, right: Family },
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("index {index} out of range for {family} operator on {modes} modes")]
    IndexOutOfRange {
        family: Family,
        index: usize,
        modes: usize,
    },
    #[error("operator is not anti-hermitian: {0}")]
    NotAntiHermitian(String),
    #[error("operator is not hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("Lie closure exceeded the dimension cap of {0}")]
    ClosureCap(usize),
    #[error("operator lies outside the enveloping algebra of the basis: {0}")]
    OutsideEnvelope(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("oracle cap exceeded: {modes} modes > {cap}")]
    OracleCap { modes: usize, cap: usize },
    #[error("state is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("designated CSA is not maximal abelian: {0}")]
    CsaNotMaximal(String),
    #[error("constraint violated at level {level}: {detail}")]
    Constraint { level: usize, detail: String },
    #[error("Bogoliubov constraints violated: {}", .0.join(", "))]
    Bogoliubov(Vec<String>),
    #[error("Löwdin projector denominator vanishes: {0}")]
    DegenerateSpectrum(String),
    #[error("optimizer failed: {0}")]
    Optimizer(String),
    #[error("no single-qubit operator on qubit {0} commutes with the Hamiltonian")]
    NoCommutingQubitOperator(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse grouping used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Constraint,
    OracleCap,
    Other,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse { .. } | Error::Json(_) => ErrorCategory::Parse,
            Error::Constraint { .. }
            | Error::Bogoliubov(_)
            | Error::NotHermitian(_)
            | Error::NotAntiHermitian(_)
            | Error::DegenerateSpectrum(_) => ErrorCategory::Constraint,
            Error::OracleCap { .. } => ErrorCategory::OracleCap,
            _ => ErrorCategory::Other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

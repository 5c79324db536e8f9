//! Crate-wide error type.
//!
//! Errors fall into three groups that the CLI maps onto distinct exit codes:
//! usage errors (bad input), verification failures (a claim checked false),
//! and internal inconsistencies (two routes to the same quantity disagree --
//! always a bug signal, never a property of the input).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Series/rank combination outside the supported tables.
    #[error("invalid root system spec: {0}")]
    InvalidSpec(String),

    /// Weyl group order exceeds the enumeration cap; carries the classical
    /// order so callers can opt in explicitly.
    #[error("Weyl group order {order} exceeds enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },

    /// Element is not a member of the distinguished subset `𝔚_p`.
    #[error("element {0} is not in the subset frak W_p")]
    NotInFrakWp(usize),

    /// Two independent formulas for the same quantity disagree.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// The chain search exhausted all branches. This would contradict the
    /// symmetric-chain existence guarantee, so it is a bug signal.
    #[error("no symmetric chain decomposition found for {0}")]
    DecompositionNotFound(String),

    /// No dominance-minimal (or -maximal) root exists in a graded piece.
    #[error("no extremal root found: {0}")]
    NoExtremalRoot(String),

    /// The clearing product left a zeta factor with negative exponent.
    #[error("zeta denominators not cleared: {0}")]
    NotCleared(String),

    /// An exact polynomial division left a remainder.
    #[error("division not exact: {0}")]
    DivisionNotExact(String),

    /// The two characterizations of the residue index set disagree.
    #[error("index set mismatch: {0}")]
    IndexSetMismatch(String),

    #[error("zeta pole at s = 1")]
    PoleAtOne,

    #[error("gamma pole at nonpositive integer {0}")]
    PoleAtNonpositiveInteger(f64),

    #[error("completed zeta pole at s = 0 or s = 1")]
    PoleAtZeroOrOne,

    /// Evaluation point too close to a denominator zero; caller must perturb.
    #[error("evaluation point within {dist:e} of a pole at {at}")]
    NearPole { at: String, dist: f64 },

    /// The line restriction failed to be real after phase correction.
    #[error("line function not real at t = {t}: imaginary residual {imag:e}")]
    NotRealOnLine { t: f64, imag: f64 },

    /// Contour could not be nudged away from a nearby zero.
    #[error("zero within {0:e} of the counting contour after 3 nudges")]
    ContourTooClose(f64),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code contract: 1 = a verified claim failed numerically,
    /// 2 = usage error, 3 = internal inconsistency (software bug signal).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_) | Error::Usage(_) | Error::CapExceeded { .. } => 2,
            Error::InternalInconsistency(_)
            | Error::DecompositionNotFound(_)
            | Error::NoExtremalRoot(_)
            | Error::NotCleared(_)
            | Error::DivisionNotExact(_)
            | Error::IndexSetMismatch(_)
            | Error::NotRealOnLine { .. }
            | Error::NotInFrakWp(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

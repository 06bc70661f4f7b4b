//! Crate-wide error type.

use std::fmt;

/// Errors produced by the library.
///
/// Ambiguity errors (`AmbiguousFloor`, `AmbiguousCompare`, `PrecisionExhausted`)
/// signal that adaptive precision escalation hit its cap without resolving a
/// floor, sign or partial quotient; for floor/compare this usually means the
/// input is exactly an integer (or two inputs are exactly equal) in a form the
/// expression tree cannot certify.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    AmbiguousFloor { bits: u32 },
    AmbiguousCompare { bits: u32 },
    PrecisionExhausted { bits: u32 },
    RationalInput,
    WindowTooLarge { len: u64, cap: u64 },
    RangeTooLarge { hi: u64, cap: u64 },
    HypothesisViolated(String),
    TooManyFactorizations { cap: u64 },
    MismatchedCounts { d: u64, direct: u64, dual: u64 },
    InequalityViolated { t: f64, err: f64, majorant: f64 },
    Parse(String),
    InvalidParam(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AmbiguousFloor { bits } => {
                write!(f, "floor still ambiguous at {bits} bits (possibly an exact integer)")
            }
            Error::AmbiguousCompare { bits } => {
                write!(f, "comparison still ambiguous at {bits} bits (possibly equal values)")
            }
            Error::PrecisionExhausted { bits } => {
                write!(f, "precision cap of {bits} bits exhausted")
            }
            Error::RationalInput => write!(f, "operation requires an irrational input"),
            Error::WindowTooLarge { len, cap } => {
                write!(f, "sieve window of {len} elements exceeds cap {cap}")
            }
            Error::RangeTooLarge { hi, cap } => {
                write!(f, "range end {hi} exceeds cap {cap}")
            }
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::TooManyFactorizations { cap } => {
                write!(f, "factorization enumeration exceeded {cap} nodes")
            }
            Error::MismatchedCounts { d, direct, dual } => {
                write!(f, "slice counts disagree at d={d}: direct={direct}, dual={dual}")
            }
            Error::InequalityViolated { t, err, majorant } => {
                write!(f, "majorant inequality violated at t={t}: error {err} > majorant {majorant}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

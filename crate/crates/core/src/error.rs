use thiserror::Error;

use crate::exact_scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight h = {0} is below 1/2")]
    WeightBelowHalf(String),
    #[error("operands live on different weights")]
    WeightMismatch,
    #[error("band {degree} does not vanish at n = {k} (lowering band must be zero below its reach)")]
    GuardViolation { degree: i64, k: u64 },
    #[error("band {degree} has a pole at n = {n} inside its domain")]
    PoleInDomain { degree: i64, n: u64 },
    #[error("generator index {k} exceeds the cap {cap}")]
    CapExceeded { k: i64, cap: i64 },
    #[error("monotonicity of band {degree} undecided below n = {needed}; enlarge the scan")]
    MonotonicityUndecided { degree: i64, needed: u64 },
    #[error("q_R is undefined at h = 1/2")]
    QrUndefined,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

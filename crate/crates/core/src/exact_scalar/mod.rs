//! Exact scalars and canonical rational functions in the level variable `n`.

mod gaussian;
mod poly;
mod ratfunc;

pub use gaussian::{fmt_rational, GaussianRational};
pub use poly::Poly;
pub use ratfunc::{rf_arith, ArithKind, DecayOrder, Limit, RatFunc};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("zero denominator polynomial")]
    ZeroDenominator,
    #[error("pole at n = {0}")]
    Pole(i64),
}

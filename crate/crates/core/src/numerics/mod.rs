//! Exact arithmetic: rationals, real quadratic numbers, integer matrices and
//! Hirzebruch-Jung continued fractions.
//!
//! Nothing in this crate touches floating point except the explicitly
//! approximate renderings (`to_f64`), which are never used for decisions.

mod hj;
mod matrix;
mod quad;

pub use hj::{hj_expand, hj_value};
pub use matrix::{IntMatrix, RatMatrix};
pub use quad::QuadNumber;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Arbitrary precision integer.
pub type Integer = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("incompatible quadratic fields: sqrt({0}) and sqrt({1})")]
    IncompatibleField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not invertible")]
    Singular,
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
}

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
